#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbnet/community.hpp"
#include "fbnet/corpus.hpp"
#include "fbnet/features.hpp"

namespace fbnet {

// Binary classifier interface: probability of the positive (follow-back)
// class per row of X.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual std::vector<double> predict_proba(const FeatureMatrix& X) const = 0;
};

// --- random forest ------------------------------------------------------------

struct ForestParams {
    std::size_t trees = 100;
    std::size_t features_per_split = 0;  // 0 = ceil(sqrt(n_columns))
    std::uint64_t seed = 42;
};

// Bagging ensemble of CART trees: Gini impurity, per-split feature
// subsampling, trees grown to purity. Deterministic per seed.
class RandomForest final : public Classifier {
public:
    struct Node {
        std::int32_t feature = -1;  // -1: leaf
        double threshold = 0.0;
        std::int32_t left = -1, right = -1;
        double p1 = 0.0;  // leaf probability of class 1
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    static RandomForest train(const FeatureMatrix& X, std::span<const int> y,
                              std::span<const std::size_t> train_rows, const ForestParams& params);

    std::vector<double> predict_proba(const FeatureMatrix& X) const override;

    void save_json(const std::string& path) const;
    static RandomForest load_json(const std::string& path);

    std::vector<Tree> trees;
    std::size_t n_features = 0;
};

// --- graph convolutional network -----------------------------------------------

struct GcnParams {
    std::size_t hidden = 64;
    std::size_t epochs = 2500;
    double learning_rate = 0.01;
    std::uint64_t seed = 42;
    bool relu_hidden = true;  // false: linear first layer
};

// Two-layer GCN over the symmetric-normalized adjacency with self-loops,
// softmax cross-entropy on labeled nodes, full-batch gradient descent.
// X rows must align with graph nodes 0..n-1.
class Gcn final : public Classifier {
public:
    struct Weights {
        std::vector<double> w1;  // f_in x hidden, row-major
        std::vector<double> b1;  // hidden
        std::vector<double> w2;  // hidden x 2
        std::vector<double> b2;  // 2
    };

    // y[i] in {0,1}, or -1 for unlabeled nodes. loss_history (optional)
    // receives the per-epoch training loss.
    static Gcn train(const FollowGraph& graph, const FeatureMatrix& X, std::span<const int> y,
                     const GcnParams& params, std::vector<double>* loss_history = nullptr);

    // Initialized but untrained model (weights drawn from the seed); used by
    // the numeric tests.
    static Gcn init(const FollowGraph& graph, const FeatureMatrix& X, const GcnParams& params);

    std::vector<double> predict_proba(const FeatureMatrix& X) const override;

    double loss(const FeatureMatrix& X, std::span<const int> y) const;
    Weights gradients(const FeatureMatrix& X, std::span<const int> y) const;
    void apply_gradients(const Weights& grads, double lr);

    void save(const std::string& path) const;  // flat binary + JSON header
    static Gcn load(const std::string& path, const FollowGraph& graph);

    Weights weights;
    std::size_t n_nodes = 0, f_in = 0, hidden = 0;
    bool relu_hidden = true;

    // Normalized adjacency (CSR, includes self-loops).
    std::vector<std::size_t> adj_off;
    std::vector<NodeId> adj_nbr;
    std::vector<double> adj_w;

private:
    std::vector<double> forward_logits(const FeatureMatrix& X) const;
};

// --- splits and evaluation -----------------------------------------------------

enum class SplitMode { random, stratified };

struct SplitConfig {
    std::size_t random_test_per_class = 500;
    std::size_t stratified_per_class = 25;
    std::uint64_t seed = 42;
};

struct MiniSet {
    std::string name;
    std::vector<std::size_t> rows;
};

struct Splits {
    SplitMode mode = SplitMode::random;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::vector<MiniSet> mini_sets;  // stratified only
};

// users[i] is the node behind row i; y is taken from the label store
// (followed_back). Stratified mode requires a partition and builds one
// mini-set per community (including None), 25+25 or the available minimum.
Splits make_splits(std::span<const NodeId> users, const LabelStore& labels,
                   const Partition* partition, SplitMode mode, const SplitConfig& config);

struct SetScore {
    std::string name;
    std::size_t size = 0;
    std::size_t positives = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::string warning;
};

struct EvalReport {
    std::string split_name;  // "Random" or "Stratified"
    SetScore overall;
    std::vector<SetScore> mini_sets;
    std::optional<double> mean_precision, mean_recall, mean_f1;
};

EvalReport evaluate(const Classifier& model, const FeatureMatrix& X, std::span<const int> y,
                    const Splits& splits, double threshold = 0.5);

}  // namespace fbnet
