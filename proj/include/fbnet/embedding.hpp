#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "fbnet/features.hpp"
#include "fbnet/graph.hpp"

namespace fbnet {

// node2vec hyper-parameters; dim / walk_length / walks_per_node / window /
// p / q default to the tuned values used throughout the reports.
struct Node2VecParams {
    std::size_t dim = 256;
    std::size_t walk_length = 40;
    std::size_t walks_per_node = 5;
    std::size_t window = 5;
    double p = 1.0;
    double q = 0.5;
    std::size_t negatives_per_positive = 5;
    std::size_t epochs = 5;
    double learning_rate = 0.025;
    std::uint64_t seed = 42;
};

// Second-order biased walks over the weighted undirected projection
// (edge weight x 1/p when returning, x1 at distance 1, x 1/q at distance 2).
// Each (node, walk) pair has its own derived RNG stream, so results do not
// depend on scheduling. A node with no neighbors yields walks of length 1.
std::vector<std::vector<NodeId>> biased_walks(const FollowGraph& graph,
                                              const Node2VecParams& params,
                                              const std::vector<bool>* node_mask = nullptr);

struct EmbeddingTable {
    std::size_t dim = 0;
    std::vector<NodeId> nodes;
    std::vector<float> vectors;  // row-major, aligned with nodes
    std::unordered_map<NodeId, std::size_t> index;

    std::span<const float> of(NodeId u) const {
        return {vectors.data() + index.at(u) * dim, dim};
    }
    bool contains(NodeId u) const { return index.count(u) > 0; }

    FeatureMatrix to_features(std::span<const NodeId> users) const;
};

// Skip-gram with negative sampling (unigram^0.75 noise distribution) over the
// walks. Training stops after params.epochs or when the epoch loss improves
// by less than 0.1%. Nodes that never appear in a (center, context) pair keep
// their zero initialization. Bitwise deterministic for a fixed seed.
EmbeddingTable train_embeddings(const std::vector<std::vector<NodeId>>& walks,
                                const Node2VecParams& params);

void save_embeddings_csv(const EmbeddingTable& table, const std::vector<std::string>& node_ids,
                         const std::string& path);
EmbeddingTable load_embeddings_csv(const std::string& path,
                                   const std::unordered_map<std::string, NodeId>& id_index);

}  // namespace fbnet
