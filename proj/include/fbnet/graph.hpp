#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fbnet/account.hpp"

namespace fbnet {

// Directed follow relation in CSR form, immutable after construction.
// src -> dst means src follows dst, so out-neighbors are followings and
// in-neighbors are followers. Neighbor lists are sorted; no self-loops or
// duplicate edges survive construction.
class FollowGraph {
public:
    FollowGraph() = default;

    // Duplicate edges are dropped silently (counts reported via the optional
    // out-params); self-loop rows are likewise dropped.
    static FollowGraph from_edges(NodeId node_count,
                                  std::vector<std::pair<NodeId, NodeId>> edges,
                                  std::size_t* dropped_duplicates = nullptr,
                                  std::size_t* dropped_self_loops = nullptr);

    std::size_t node_count() const { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
    std::size_t edge_count() const { return out_targets_.size(); }

    std::span<const NodeId> followings(NodeId u) const {
        return {out_targets_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
    }
    std::span<const NodeId> followers(NodeId u) const {
        return {in_sources_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
    }

    std::size_t out_degree(NodeId u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
    std::size_t in_degree(NodeId u) const { return in_offsets_[u + 1] - in_offsets_[u]; }

    bool has_edge(NodeId src, NodeId dst) const;

    // Visits every edge (src, dst) in ascending (src, dst) order.
    template <typename Fn>
    void for_each_edge(Fn&& fn) const {
        for (NodeId u = 0; u < node_count(); ++u) {
            for (NodeId v : followings(u)) fn(u, v);
        }
    }

private:
    std::vector<std::size_t> out_offsets_{0};
    std::vector<NodeId> out_targets_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<NodeId> in_sources_;
};

// Fraction of directed edges whose reverse edge also exists.
// Throws DataError on an empty edge set.
double edge_reciprocity(const FollowGraph& graph);

// Jaccard coefficient of a user's followings and followers. Isolated nodes
// are defined as 0.
double user_reciprocity(const FollowGraph& graph, NodeId user);

// Weighted undirected projection used by community detection, node2vec and
// the undirected centralities: a mutual pair contributes one edge of weight 2,
// a one-way pair one edge of weight 1. Neighbor lists are sorted. Nodes can be
// masked out (mask[v] == false drops v and its edges) so external stubs can be
// excluded.
struct UndirectedGraph {
    std::size_t n = 0;
    std::vector<std::size_t> offsets{0};
    std::vector<NodeId> nbr;
    std::vector<double> weight;
    std::vector<double> loop;    // self-loop mass per node (used by aggregation)
    std::vector<double> degree;  // weighted degree incl. loop
    double total_weight = 0.0;   // sum of degrees == 2m

    std::span<const NodeId> neighbors(NodeId u) const {
        return {nbr.data() + offsets[u], offsets[u + 1] - offsets[u]};
    }
    std::span<const double> weights(NodeId u) const {
        return {weight.data() + offsets[u], offsets[u + 1] - offsets[u]};
    }
};

UndirectedGraph undirected_projection(const FollowGraph& graph,
                                      const std::vector<bool>* node_mask = nullptr,
                                      bool weighted = true);

}  // namespace fbnet
