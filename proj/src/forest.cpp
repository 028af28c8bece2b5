#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "fbnet/classify.hpp"
#include "fbnet/errors.hpp"
#include "fbnet/rng.hpp"

namespace fbnet {

namespace {

double gini(double n1, double n) {
    if (n <= 0.0) return 0.0;
    const double p1 = n1 / n;
    const double p0 = 1.0 - p1;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct TreeBuilder {
    const FeatureMatrix& X;
    std::span<const int> y;
    std::size_t mtry;
    Rng& rng;
    RandomForest::Tree tree;

    // Builds the subtree over `samples` (indices into X rows, with bootstrap
    // repetitions) and returns its node index.
    std::int32_t build(std::vector<std::size_t> samples) {
        const double n = static_cast<double>(samples.size());
        double n1 = 0.0;
        for (std::size_t s : samples) n1 += y[s];
        const double node_gini = gini(n1, n);

        const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[node_id].p1 = n1 / n;
        if (node_gini <= 0.0 || samples.size() < 2) return node_id;  // pure

        // Feature order: random permutation; best split among the first mtry
        // features that admit one, extending past mtry only if none did.
        std::vector<std::size_t> feature_order(X.cols());
        std::iota(feature_order.begin(), feature_order.end(), 0);
        rng.shuffle(feature_order);

        std::int32_t best_feature = -1;
        double best_threshold = 0.0, best_score = node_gini - 1e-12;
        std::vector<std::pair<double, int>> column(samples.size());
        std::size_t tried = 0;
        for (std::size_t f : feature_order) {
            if (tried >= mtry && best_feature >= 0) break;
            ++tried;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                column[i] = {X.at(samples[i], f), y[samples[i]]};
            }
            std::sort(column.begin(), column.end());
            double left_n = 0.0, left_1 = 0.0;
            for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                left_n += 1.0;
                left_1 += column[i].second;
                if (column[i].first == column[i + 1].first) continue;
                const double right_n = n - left_n;
                const double score =
                    (left_n * gini(left_1, left_n) + right_n * gini(n1 - left_1, right_n)) / n;
                if (score < best_score - 1e-12) {
                    best_score = score;
                    best_feature = static_cast<std::int32_t>(f);
                    best_threshold = 0.5 * (column[i].first + column[i + 1].first);
                }
            }
        }
        if (best_feature < 0) return node_id;  // nothing splits (identical rows)

        std::vector<std::size_t> left, right;
        for (std::size_t s : samples) {
            (X.at(s, best_feature) < best_threshold ? left : right).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();
        tree.nodes[node_id].feature = best_feature;
        tree.nodes[node_id].threshold = best_threshold;
        const std::int32_t l = build(std::move(left));
        tree.nodes[node_id].left = l;
        const std::int32_t r = build(std::move(right));
        tree.nodes[node_id].right = r;
        return node_id;
    }
};

}  // namespace

RandomForest RandomForest::train(const FeatureMatrix& X, std::span<const int> y,
                                 std::span<const std::size_t> train_rows, const ForestParams& params) {
    if (train_rows.empty()) throw DataError("train_forest: empty training set");
    bool has0 = false, has1 = false;
    for (std::size_t r : train_rows) {
        if (y[r] == 0) has0 = true;
        else if (y[r] == 1) has1 = true;
    }
    if (!has0 || !has1) throw DataError("train_forest: need at least two examples per class");

    RandomForest forest;
    forest.n_features = X.cols();
    const std::size_t mtry = params.features_per_split > 0
                                 ? params.features_per_split
                                 : static_cast<std::size_t>(
                                       std::ceil(std::sqrt(static_cast<double>(X.cols()))));
    forest.trees.resize(params.trees);
    for (std::size_t t = 0; t < params.trees; ++t) {
        Rng rng(Rng::mix(params.seed, t));
        std::vector<std::size_t> bootstrap(train_rows.size());
        for (auto& s : bootstrap) s = train_rows[rng.next_below(train_rows.size())];
        TreeBuilder builder{X, y, mtry, rng, {}};
        builder.build(std::move(bootstrap));
        forest.trees[t] = std::move(builder.tree);
    }
    return forest;
}

std::vector<double> RandomForest::predict_proba(const FeatureMatrix& X) const {
    if (X.cols() != n_features) throw DataError("predict: feature count mismatch");
    std::vector<double> proba(X.rows(), 0.0);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        double acc = 0.0;
        for (const Tree& tree : trees) {
            std::int32_t node = 0;
            while (tree.nodes[node].feature >= 0) {
                node = X.at(r, tree.nodes[node].feature) < tree.nodes[node].threshold
                           ? tree.nodes[node].left
                           : tree.nodes[node].right;
            }
            acc += tree.nodes[node].p1;
        }
        proba[r] = acc / static_cast<double>(trees.size());
    }
    return proba;
}

void RandomForest::save_json(const std::string& path) const {
    nlohmann::json j;
    j["type"] = "random_forest";
    j["n_features"] = n_features;
    nlohmann::json jtrees = nlohmann::json::array();
    for (const Tree& tree : trees) {
        nlohmann::json jn = nlohmann::json::array();
        for (const Node& n : tree.nodes) {
            jn.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}, {"p", n.p1}});
        }
        jtrees.push_back({{"nodes", std::move(jn)}});
    }
    j["trees"] = std::move(jtrees);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump();
}

RandomForest RandomForest::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || j.value("type", "") != "random_forest") {
        throw DataError(path + ": not a forest model file");
    }
    RandomForest forest;
    forest.n_features = j.at("n_features").get<std::size_t>();
    for (const auto& jt : j.at("trees")) {
        Tree tree;
        for (const auto& jn : jt.at("nodes")) {
            Node n;
            n.feature = jn.at("f").get<std::int32_t>();
            n.threshold = jn.at("t").get<double>();
            n.left = jn.at("l").get<std::int32_t>();
            n.right = jn.at("r").get<std::int32_t>();
            n.p1 = jn.at("p").get<double>();
            tree.nodes.push_back(n);
        }
        forest.trees.push_back(std::move(tree));
    }
    return forest;
}

}  // namespace fbnet
