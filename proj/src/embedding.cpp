#include "fbnet/embedding.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fbnet/errors.hpp"
#include "fbnet/log.hpp"
#include "fbnet/rng.hpp"
#include "fbnet/simd.hpp"

namespace fbnet {

namespace {

bool connected(const UndirectedGraph& g, NodeId u, NodeId v) {
    auto nb = g.neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

}  // namespace

std::vector<std::vector<NodeId>> biased_walks(const FollowGraph& graph,
                                              const Node2VecParams& params,
                                              const std::vector<bool>* node_mask) {
    if (graph.node_count() == 0) throw DataError("biased_walks: empty graph");
    const UndirectedGraph g = undirected_projection(graph, node_mask);

    std::vector<NodeId> starts;
    for (NodeId v = 0; v < g.n; ++v) {
        if (node_mask == nullptr || (*node_mask)[v]) starts.push_back(v);
    }

    std::vector<std::vector<NodeId>> walks;
    walks.reserve(starts.size() * params.walks_per_node);
    std::vector<double> cumulative;

    for (std::size_t w = 0; w < params.walks_per_node; ++w) {
        for (NodeId start : starts) {
            Rng rng(Rng::mix(params.seed, w * g.n + start));
            std::vector<NodeId> walk{start};
            walk.reserve(params.walk_length);
            while (walk.size() < params.walk_length) {
                const NodeId cur = walk.back();
                auto nbrs = g.neighbors(cur);
                auto ws = g.weights(cur);
                if (nbrs.empty()) break;  // stuck at a neighbor-less node

                cumulative.resize(nbrs.size());
                double total = 0.0;
                if (walk.size() == 1) {
                    // First step: first-order, edge weights only.
                    for (std::size_t k = 0; k < nbrs.size(); ++k) {
                        total += ws[k];
                        cumulative[k] = total;
                    }
                } else {
                    const NodeId prev = walk[walk.size() - 2];
                    for (std::size_t k = 0; k < nbrs.size(); ++k) {
                        double alpha;
                        if (nbrs[k] == prev) alpha = 1.0 / params.p;
                        else if (connected(g, prev, nbrs[k])) alpha = 1.0;
                        else alpha = 1.0 / params.q;
                        total += ws[k] * alpha;
                        cumulative[k] = total;
                    }
                }
                // Transition mass must normalize to a distribution.
                assert(total > 0.0);
                const double r = rng.next_double() * total;
                const std::size_t pick =
                    std::lower_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin();
                walk.push_back(nbrs[std::min(pick, nbrs.size() - 1)]);
            }
            walks.push_back(std::move(walk));
        }
    }
    return walks;
}

EmbeddingTable train_embeddings(const std::vector<std::vector<NodeId>>& walks,
                                const Node2VecParams& params) {
    if (walks.empty()) throw DataError("train_embeddings: no walks");
    const std::size_t dim = params.dim;

    // Vocabulary: nodes by first appearance, frequencies for the noise
    // distribution.
    EmbeddingTable table;
    table.dim = dim;
    std::vector<double> freq;
    for (const auto& walk : walks) {
        for (NodeId v : walk) {
            auto [it, fresh] = table.index.emplace(v, table.nodes.size());
            if (fresh) {
                table.nodes.push_back(v);
                freq.push_back(0.0);
            }
            freq[it->second] += 1.0;
        }
    }
    const std::size_t vocab = table.nodes.size();

    // Input vectors start at zero (nodes that never train stay zero); context
    // vectors carry the random initialization.
    table.vectors.assign(vocab * dim, 0.0f);
    std::vector<float> context(vocab * dim);
    Rng init_rng(Rng::mix(params.seed, 0x1717));
    for (auto& x : context) {
        x = static_cast<float>((init_rng.next_double() - 0.5) / static_cast<double>(dim));
    }

    // Noise distribution: unigram^0.75 cumulative table.
    std::vector<double> noise_cdf(vocab);
    double noise_total = 0.0;
    for (std::size_t i = 0; i < vocab; ++i) {
        noise_total += std::pow(freq[i], 0.75);
        noise_cdf[i] = noise_total;
    }

    // Total center/context pairs per epoch, for the linear lr decay.
    std::size_t pairs_per_epoch = 0;
    for (const auto& walk : walks) {
        for (std::size_t i = 0; i < walk.size(); ++i) {
            const std::size_t lo = i > params.window ? i - params.window : 0;
            const std::size_t hi = std::min(walk.size() - 1, i + params.window);
            pairs_per_epoch += hi - lo;  // excludes the center itself
        }
    }
    if (pairs_per_epoch == 0) return table;  // nothing to learn (e.g. single node)
    const double total_pairs = static_cast<double>(pairs_per_epoch * params.epochs);

    Rng noise_rng(Rng::mix(params.seed, 0xace1));
    std::vector<float> center_grad(dim);
    auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };

    double prev_loss = 0.0;
    std::size_t processed = 0;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        double loss = 0.0;
        for (const auto& walk : walks) {
            for (std::size_t i = 0; i < walk.size(); ++i) {
                const std::size_t center = table.index[walk[i]];
                float* in = table.vectors.data() + center * dim;
                const std::size_t lo = i > params.window ? i - params.window : 0;
                const std::size_t hi = std::min(walk.size() - 1, i + params.window);
                for (std::size_t j = lo; j <= hi; ++j) {
                    if (j == i) continue;
                    const double lr = params.learning_rate *
                                      std::max(1e-4, 1.0 - static_cast<double>(processed) / total_pairs);
                    ++processed;
                    std::fill(center_grad.begin(), center_grad.end(), 0.0f);

                    // Positive pair, then negatives_per_positive noise draws.
                    for (std::size_t s = 0; s <= params.negatives_per_positive; ++s) {
                        std::size_t target;
                        double label;
                        if (s == 0) {
                            target = table.index[walk[j]];
                            label = 1.0;
                        } else {
                            const double r = noise_rng.next_double() * noise_total;
                            target = std::lower_bound(noise_cdf.begin(), noise_cdf.end(), r) -
                                     noise_cdf.begin();
                            target = std::min(target, vocab - 1);
                            label = 0.0;
                        }
                        float* out = context.data() + target * dim;
                        const double score = simd::dotf(in, out, dim);
                        const double pred = sigmoid(score);
                        loss += label > 0.5 ? -std::log(std::max(pred, 1e-12))
                                            : -std::log(std::max(1.0 - pred, 1e-12));
                        const float g = static_cast<float>((label - pred) * lr);
                        simd::axpyf(g, out, center_grad.data(), dim);
                        simd::axpyf(g, in, out, dim);
                    }
                    simd::axpyf(1.0f, center_grad.data(), in, dim);
                }
            }
        }
        if (epoch > 0 && prev_loss > 0.0 && (prev_loss - loss) / prev_loss < 0.001) {
            break;  // converged
        }
        prev_loss = loss;
    }
    return table;
}

FeatureMatrix EmbeddingTable::to_features(std::span<const NodeId> users) const {
    FeatureMatrix m;
    m.family = "embedding";
    m.users.assign(users.begin(), users.end());
    for (std::size_t d = 0; d < dim; ++d) m.columns.push_back("v" + std::to_string(d));
    m.values.reserve(users.size() * dim);
    for (NodeId u : users) {
        if (contains(u)) {
            auto row = of(u);
            m.values.insert(m.values.end(), row.begin(), row.end());
        } else {
            m.values.insert(m.values.end(), dim, 0.0);
        }
    }
    return m;
}

void save_embeddings_csv(const EmbeddingTable& table, const std::vector<std::string>& node_ids,
                         const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << "node_id";
    for (std::size_t d = 0; d < table.dim; ++d) out << ",v" << d;
    out << "\n";
    char buf[48];
    for (std::size_t i = 0; i < table.nodes.size(); ++i) {
        out << node_ids[table.nodes[i]];
        for (std::size_t d = 0; d < table.dim; ++d) {
            std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(table.vectors[i * table.dim + d]));
            out << ',' << buf;
        }
        out << "\n";
    }
}

EmbeddingTable load_embeddings_csv(const std::string& path,
                                   const std::unordered_map<std::string, NodeId>& id_index) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty embeddings file");
    std::size_t dim = 0;
    for (char c : line) {
        if (c == ',') ++dim;
    }
    EmbeddingTable table;
    table.dim = dim;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t pos = line.find(',');
        if (pos == std::string::npos) throw DataError(path + ":" + std::to_string(line_no) + ": malformed row");
        const std::string id = line.substr(0, pos);
        auto it = id_index.find(id);
        if (it == id_index.end()) throw DataError(path + ":" + std::to_string(line_no) + ": unknown node id " + id);
        table.index[it->second] = table.nodes.size();
        table.nodes.push_back(it->second);
        for (std::size_t d = 0; d < dim; ++d) {
            const std::size_t next = line.find(',', pos + 1);
            table.vectors.push_back(std::strtof(line.c_str() + pos + 1, nullptr));
            pos = next;
        }
    }
    return table;
}

}  // namespace fbnet
