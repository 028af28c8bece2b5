#include <algorithm>
#include <set>

#include "fbnet/classify.hpp"
#include "fbnet/errors.hpp"
#include "fbnet/log.hpp"
#include "fbnet/rng.hpp"

namespace fbnet {

Splits make_splits(std::span<const NodeId> users, const LabelStore& labels,
                   const Partition* partition, SplitMode mode, const SplitConfig& config) {
    Splits s;
    s.mode = mode;
    Rng rng(config.seed);

    // Unlabeled rows stay outside both train and test.
    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (labels.find(users[i]) == nullptr) continue;
        (labels.is_follow_back(users[i]) ? positives : negatives).push_back(i);
    }

    std::set<std::size_t> test_rows;
    if (mode == SplitMode::random) {
        const std::size_t k = config.random_test_per_class;
        if (positives.size() < k) {
            throw DataError("make_splits: insufficient positives (" + std::to_string(positives.size()) +
                            " < " + std::to_string(k) + ")");
        }
        if (negatives.size() < k) {
            throw DataError("make_splits: insufficient negatives (" + std::to_string(negatives.size()) +
                            " < " + std::to_string(k) + ")");
        }
        rng.shuffle(positives);
        rng.shuffle(negatives);
        for (std::size_t i = 0; i < k; ++i) {
            test_rows.insert(positives[i]);
            test_rows.insert(negatives[i]);
        }
    } else {
        if (partition == nullptr) throw DataError("make_splits: stratified mode requires a partition");
        // Rows per community, split by class.
        std::vector<std::vector<std::size_t>> pos_of(partition->communities.size()),
            neg_of(partition->communities.size());
        for (std::size_t i = 0; i < users.size(); ++i) {
            const NodeId u = users[i];
            if (u >= partition->assignment.size()) continue;
            if (labels.find(u) == nullptr) continue;
            const std::int32_t c = partition->assignment[u];
            (labels.is_follow_back(u) ? pos_of[c] : neg_of[c]).push_back(i);
        }
        for (const CommunityStats& cs : partition->communities) {
            auto& pos = pos_of[cs.community_id];
            auto& neg = neg_of[cs.community_id];
            const std::size_t k = std::min({config.stratified_per_class, pos.size(), neg.size()});
            if (k == 0) {
                log::warn("stratified split: community " + cs.label +
                          " lacks both classes, mini-set skipped");
                continue;
            }
            if (k < config.stratified_per_class) {
                log::info("stratified split: community " + cs.label + " mini-set shrunk to " +
                          std::to_string(k) + "+" + std::to_string(k));
            }
            rng.shuffle(pos);
            rng.shuffle(neg);
            MiniSet mini;
            mini.name = cs.label;
            for (std::size_t i = 0; i < k; ++i) {
                mini.rows.push_back(pos[i]);
                mini.rows.push_back(neg[i]);
                test_rows.insert(pos[i]);
                test_rows.insert(neg[i]);
            }
            s.mini_sets.push_back(std::move(mini));
        }
        if (s.mini_sets.empty()) throw DataError("make_splits: no community produced a mini-set");
    }

    s.test.assign(test_rows.begin(), test_rows.end());
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (labels.find(users[i]) != nullptr && !test_rows.count(i)) s.train.push_back(i);
    }
    return s;
}

namespace {

SetScore score_set(const std::string& name, const std::vector<double>& proba,
                   std::span<const int> y, const std::vector<std::size_t>& rows, double threshold) {
    SetScore score;
    score.name = name;
    score.size = rows.size();
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t r : rows) {
        const bool pred = proba[r] >= threshold;
        const bool truth = y[r] == 1;
        if (truth) ++score.positives;
        if (pred && truth) ++tp;
        else if (pred && !truth) ++fp;
        else if (!pred && truth) ++fn;
    }
    if (tp + fp > 0) score.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (score.positives > 0) {
        score.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
        score.warning = "no positives in test set; recall undefined";
        log::warn(name + ": " + score.warning);
    }
    if (score.precision && score.recall) {
        const double p = *score.precision, r = *score.recall;
        score.f1 = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    } else if (score.recall && *score.recall == 0.0) {
        score.f1 = 0.0;  // no predicted positives, no recalled positives
    }
    return score;
}

}  // namespace

EvalReport evaluate(const Classifier& model, const FeatureMatrix& X, std::span<const int> y,
                    const Splits& splits, double threshold) {
    EvalReport report;
    report.split_name = splits.mode == SplitMode::random ? "Random" : "Stratified";
    const std::vector<double> proba = model.predict_proba(X);
    report.overall = score_set("overall", proba, y, splits.test, threshold);
    if (splits.mode == SplitMode::stratified) {
        double sp = 0.0, sr = 0.0, sf = 0.0;
        std::size_t np = 0, nr = 0, nf = 0;
        for (const MiniSet& mini : splits.mini_sets) {
            SetScore s = score_set(mini.name, proba, y, mini.rows, threshold);
            if (s.precision) {
                sp += *s.precision;
                ++np;
            }
            if (s.recall) {
                sr += *s.recall;
                ++nr;
            }
            if (s.f1) {
                sf += *s.f1;
                ++nf;
            }
            report.mini_sets.push_back(std::move(s));
        }
        if (np > 0) report.mean_precision = sp / static_cast<double>(np);
        if (nr > 0) report.mean_recall = sr / static_cast<double>(nr);
        if (nf > 0) report.mean_f1 = sf / static_cast<double>(nf);
    }
    return report;
}

}  // namespace fbnet
