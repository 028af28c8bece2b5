#include "fbnet/graph.hpp"

#include <algorithm>

#include "fbnet/errors.hpp"

namespace fbnet {

FollowGraph FollowGraph::from_edges(NodeId node_count,
                                    std::vector<std::pair<NodeId, NodeId>> edges,
                                    std::size_t* dropped_duplicates,
                                    std::size_t* dropped_self_loops) {
    std::size_t loops = 0;
    std::erase_if(edges, [&](const auto& e) {
        if (e.first == e.second) {
            ++loops;
            return true;
        }
        return false;
    });
    std::sort(edges.begin(), edges.end());
    const std::size_t before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (dropped_duplicates) *dropped_duplicates = before - edges.size();
    if (dropped_self_loops) *dropped_self_loops = loops;

    FollowGraph g;
    g.out_offsets_.assign(node_count + 1, 0);
    g.in_offsets_.assign(node_count + 1, 0);
    for (const auto& [src, dst] : edges) {
        ++g.out_offsets_[src + 1];
        ++g.in_offsets_[dst + 1];
    }
    for (NodeId u = 0; u < node_count; ++u) {
        g.out_offsets_[u + 1] += g.out_offsets_[u];
        g.in_offsets_[u + 1] += g.in_offsets_[u];
    }
    g.out_targets_.resize(edges.size());
    g.in_sources_.resize(edges.size());
    std::vector<std::size_t> out_pos(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    std::vector<std::size_t> in_pos(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (const auto& [src, dst] : edges) {
        g.out_targets_[out_pos[src]++] = dst;
        g.in_sources_[in_pos[dst]++] = src;
    }
    // Edges arrive sorted by (src, dst) so followings lists are sorted; the
    // followers lists need a per-node sort.
    for (NodeId u = 0; u < node_count; ++u) {
        std::sort(g.in_sources_.begin() + g.in_offsets_[u], g.in_sources_.begin() + g.in_offsets_[u + 1]);
    }
    return g;
}

bool FollowGraph::has_edge(NodeId src, NodeId dst) const {
    auto nb = followings(src);
    return std::binary_search(nb.begin(), nb.end(), dst);
}

double edge_reciprocity(const FollowGraph& graph) {
    if (graph.edge_count() == 0) throw DataError("edge_reciprocity undefined on empty graph");
    std::size_t mutual = 0;
    graph.for_each_edge([&](NodeId u, NodeId v) {
        if (graph.has_edge(v, u)) ++mutual;
    });
    return static_cast<double>(mutual) / static_cast<double>(graph.edge_count());
}

double user_reciprocity(const FollowGraph& graph, NodeId user) {
    if (user >= graph.node_count()) throw DataError("user_reciprocity: unknown node");
    auto out = graph.followings(user);
    auto in = graph.followers(user);
    if (out.empty() && in.empty()) return 0.0;
    // Both spans are sorted: count the intersection with a merge walk.
    std::size_t both = 0, i = 0, j = 0;
    while (i < out.size() && j < in.size()) {
        if (out[i] < in[j]) {
            ++i;
        } else if (in[j] < out[i]) {
            ++j;
        } else {
            ++both;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = out.size() + in.size() - both;
    return static_cast<double>(both) / static_cast<double>(uni);
}

UndirectedGraph undirected_projection(const FollowGraph& graph,
                                      const std::vector<bool>* node_mask,
                                      bool weighted) {
    const NodeId n = static_cast<NodeId>(graph.node_count());
    auto keep = [&](NodeId v) { return node_mask == nullptr || (*node_mask)[v]; };

    // Collect each unordered pair once (u < v), weight 2 if mutual else 1.
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::vector<double> w;
    graph.for_each_edge([&](NodeId u, NodeId v) {
        if (!keep(u) || !keep(v)) return;
        const bool back = graph.has_edge(v, u);
        if (back && u > v) return;  // mutual pair: count once from the lower id
        pairs.emplace_back(std::min(u, v), std::max(u, v));
        w.push_back(weighted && back ? 2.0 : 1.0);
    });

    UndirectedGraph g;
    g.n = n;
    g.offsets.assign(n + 1, 0);
    for (const auto& [u, v] : pairs) {
        ++g.offsets[u + 1];
        ++g.offsets[v + 1];
    }
    for (NodeId u = 0; u < n; ++u) g.offsets[u + 1] += g.offsets[u];
    g.nbr.resize(pairs.size() * 2);
    g.weight.resize(pairs.size() * 2);
    std::vector<std::size_t> pos(g.offsets.begin(), g.offsets.end() - 1);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [u, v] = pairs[k];
        g.nbr[pos[u]] = v;
        g.weight[pos[u]++] = w[k];
        g.nbr[pos[v]] = u;
        g.weight[pos[v]++] = w[k];
    }
    for (NodeId u = 0; u < n; ++u) {
        // In-place sort of the (nbr, weight) slice by neighbor id.
        std::vector<std::pair<NodeId, double>> slice;
        slice.reserve(g.offsets[u + 1] - g.offsets[u]);
        for (std::size_t k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
            slice.emplace_back(g.nbr[k], g.weight[k]);
        }
        std::sort(slice.begin(), slice.end());
        for (std::size_t k = 0; k < slice.size(); ++k) {
            g.nbr[g.offsets[u] + k] = slice[k].first;
            g.weight[g.offsets[u] + k] = slice[k].second;
        }
    }
    g.loop.assign(n, 0.0);
    g.degree.assign(n, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        double d = 0.0;
        for (std::size_t k = g.offsets[u]; k < g.offsets[u + 1]; ++k) d += g.weight[k];
        g.degree[u] = d;
        g.total_weight += d;
    }
    return g;
}

}  // namespace fbnet
