#include "fbnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "fbnet/errors.hpp"
#include "fbnet/log.hpp"
#include "fbnet/rng.hpp"

namespace fbnet {

namespace {

// One Louvain level: greedy local moves on g, starting from singletons.
// Returns the node -> community map (community ids dense, by ascending first
// occurrence) and whether any node moved at all.
struct LevelResult {
    std::vector<std::int32_t> community;
    std::size_t n_communities = 0;
    bool improved = false;
};

LevelResult local_moves(const UndirectedGraph& g, Rng& rng) {
    const std::size_t n = g.n;
    const double two_m = g.total_weight;
    LevelResult res;
    res.community.resize(n);
    std::iota(res.community.begin(), res.community.end(), 0);

    std::vector<double> tot(g.degree);  // sum of degrees per community

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    // Scratch: weight from the current node to each neighboring community.
    std::vector<double> w_to(n, 0.0);
    std::vector<std::int32_t> touched;

    bool any_move = false;
    bool moved = two_m > 0.0;
    int pass = 0;
    while (moved && pass < 128) {
        moved = false;
        ++pass;
        for (std::size_t idx = 0; idx < n; ++idx) {
            const NodeId v = static_cast<NodeId>(order[idx]);
            const std::int32_t own = res.community[v];

            touched.clear();
            auto nbrs = g.neighbors(v);
            auto ws = g.weights(v);
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
                const std::int32_t c = res.community[nbrs[k]];
                if (w_to[c] == 0.0) touched.push_back(c);
                w_to[c] += ws[k];
            }

            // Remove v, then pick the community maximizing
            //   w_vc - k_v * tot_c / (2m)
            // (candidates include v's own community after removal; an empty
            // community scores 0). Candidates are scanned in ascending id and
            // only a strict improvement replaces the incumbent, so the lowest
            // community id wins ties.
            tot[own] -= g.degree[v];
            double best_gain = 0.0;
            std::int32_t best = own;
            std::sort(touched.begin(), touched.end());
            for (std::int32_t c : touched) {
                const double gain = w_to[c] - g.degree[v] * tot[c] / two_m;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            tot[best] += g.degree[v];
            if (best != own) {
                res.community[v] = best;
                moved = true;
                any_move = true;
            }
            for (std::int32_t c : touched) w_to[c] = 0.0;
        }
    }

    // Renumber communities densely by ascending old id.
    std::vector<bool> present(n, false);
    for (std::size_t v = 0; v < n; ++v) present[res.community[v]] = true;
    std::vector<std::int32_t> remap(n, -1);
    std::int32_t next = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (present[c]) remap[c] = next++;
    }
    for (std::size_t v = 0; v < n; ++v) res.community[v] = remap[res.community[v]];
    res.n_communities = static_cast<std::size_t>(next);
    res.improved = any_move;
    return res;
}

// Collapse communities into supernodes. Self-loop mass of a supernode is the
// full ordered-pair mass inside it (2 * intra edge weight + member loops), so
// modularity is invariant under aggregation.
UndirectedGraph aggregate(const UndirectedGraph& g, const std::vector<std::int32_t>& community,
                          std::size_t n_communities) {
    std::vector<std::map<NodeId, double>> adj(n_communities);
    std::vector<double> loop(n_communities, 0.0);
    for (NodeId u = 0; u < g.n; ++u) {
        const std::int32_t cu = community[u];
        loop[cu] += g.loop[u];
        auto nbrs = g.neighbors(u);
        auto ws = g.weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const NodeId v = nbrs[k];
            const std::int32_t cv = community[v];
            if (cu == cv) {
                loop[cu] += ws[k];  // each intra edge visited from both ends
            } else if (cu < cv) {
                adj[cu][static_cast<NodeId>(cv)] += ws[k];
            }
        }
    }

    UndirectedGraph out;
    out.n = n_communities;
    out.offsets.assign(n_communities + 1, 0);
    for (std::size_t c = 0; c < n_communities; ++c) {
        for ([[maybe_unused]] const auto& kv : adj[c]) {
            ++out.offsets[c + 1];
            ++out.offsets[kv.first + 1];
        }
    }
    for (std::size_t c = 0; c < n_communities; ++c) out.offsets[c + 1] += out.offsets[c];
    out.nbr.resize(out.offsets.back());
    out.weight.resize(out.offsets.back());
    std::vector<std::size_t> pos(out.offsets.begin(), out.offsets.end() - 1);
    for (std::size_t c = 0; c < n_communities; ++c) {
        for (const auto& [other, w] : adj[c]) {
            out.nbr[pos[c]] = other;
            out.weight[pos[c]++] = w;
            out.nbr[pos[other]] = static_cast<NodeId>(c);
            out.weight[pos[other]++] = w;
        }
    }
    out.loop = std::move(loop);
    out.degree.assign(n_communities, 0.0);
    for (std::size_t c = 0; c < n_communities; ++c) {
        double d = out.loop[c];
        for (std::size_t k = out.offsets[c]; k < out.offsets[c + 1]; ++k) d += out.weight[k];
        out.degree[c] = d;
        out.total_weight += d;
    }
    return out;
}

}  // namespace

std::vector<std::vector<NodeId>> Partition::members() const {
    std::vector<std::vector<NodeId>> m(communities.size());
    for (NodeId v = 0; v < assignment.size(); ++v) m[assignment[v]].push_back(v);
    return m;
}

double modularity(const UndirectedGraph& g, const std::vector<std::int32_t>& assignment) {
    if (g.n == 0) throw DataError("modularity undefined on empty graph");
    if (assignment.size() != g.n) throw DataError("modularity: assignment does not cover graph nodes");
    std::int32_t max_c = 0;
    for (std::int32_t c : assignment) {
        if (c < 0) throw DataError("modularity: node missing from partition");
        max_c = std::max(max_c, c);
    }
    const double two_m = g.total_weight;
    if (two_m <= 0.0) throw DataError("modularity undefined on graph without edges");
    std::vector<double> in(max_c + 1, 0.0), tot(max_c + 1, 0.0);
    for (NodeId u = 0; u < g.n; ++u) {
        const std::int32_t cu = assignment[u];
        tot[cu] += g.degree[u];
        in[cu] += g.loop[u];
        auto nbrs = g.neighbors(u);
        auto ws = g.weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            if (assignment[nbrs[k]] == cu) in[cu] += ws[k];
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) {
        q += in[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
    }
    return q;
}

double modularity(const Corpus& corpus, const Partition& partition) {
    const auto mask = corpus.core_mask();
    UndirectedGraph g = undirected_projection(corpus.graph, &mask);
    std::vector<std::int32_t> assignment(g.n, -1);
    if (partition.assignment.size() < corpus.core_count()) {
        throw DataError("modularity: partition does not cover in-corpus nodes");
    }
    for (NodeId v = 0; v < corpus.core_count(); ++v) assignment[v] = partition.assignment[v];
    // Stub nodes are masked out of the projection; give them a throwaway
    // community so the assignment covers the vector.
    for (NodeId v = static_cast<NodeId>(corpus.core_count()); v < g.n; ++v) assignment[v] = 0;
    return modularity(g, assignment);
}

Partition detect_communities(const Corpus& corpus, std::size_t min_size, std::uint64_t seed) {
    if (corpus.core_count() == 0) throw DataError("detect_communities: empty graph");
    if (min_size < 1) throw DataError("detect_communities: min_size must be >= 1");

    const auto mask = corpus.core_mask();
    UndirectedGraph level_graph = undirected_projection(corpus.graph, &mask);
    const std::size_t n_core = corpus.core_count();

    // Stub columns exist in the projection but have no edges (masked); they
    // are dropped from the working graph by restricting to core nodes.
    // undirected_projection already emits no edges touching them.

    std::vector<std::int32_t> node_to_comm(level_graph.n);
    std::iota(node_to_comm.begin(), node_to_comm.end(), 0);

    Rng rng(seed);
    for (std::size_t level = 0; level < 64; ++level) {
        LevelResult lr = local_moves(level_graph, rng);
        for (auto& c : node_to_comm) c = lr.community[c];
        if (!lr.improved || lr.n_communities == level_graph.n) break;
        level_graph = aggregate(level_graph, lr.community, lr.n_communities);
    }

    // Densify over core nodes only.
    std::unordered_map<std::int32_t, std::int32_t> dense;
    std::vector<std::int32_t> core_comm(n_core);
    for (NodeId v = 0; v < n_core; ++v) {
        auto [it, fresh] = dense.emplace(node_to_comm[v], static_cast<std::int32_t>(dense.size()));
        core_comm[v] = it->second;
        (void)fresh;
    }

    std::vector<std::size_t> sizes(dense.size(), 0);
    for (auto c : core_comm) ++sizes[c];

    // Order kept communities by decreasing size (ties: smaller first-member
    // index first) and funnel the rest into "none".
    std::vector<std::int32_t> first_member(dense.size(), -1);
    for (NodeId v = 0; v < n_core; ++v) {
        if (first_member[core_comm[v]] < 0) first_member[core_comm[v]] = static_cast<std::int32_t>(v);
    }
    std::vector<std::int32_t> kept;
    std::size_t none_members = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] >= min_size) {
            kept.push_back(static_cast<std::int32_t>(c));
        } else {
            none_members += sizes[c];
        }
    }
    std::sort(kept.begin(), kept.end(), [&](std::int32_t a, std::int32_t b) {
        if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
        return first_member[a] < first_member[b];
    });

    std::vector<std::int32_t> final_id(sizes.size(), -1);
    for (std::size_t i = 0; i < kept.size(); ++i) final_id[kept[i]] = static_cast<std::int32_t>(i);

    Partition p;
    p.none_id = none_members > 0 ? static_cast<std::int32_t>(kept.size()) : -1;
    p.assignment.resize(n_core);
    for (NodeId v = 0; v < n_core; ++v) {
        const std::int32_t f = final_id[core_comm[v]];
        p.assignment[v] = f >= 0 ? f : p.none_id;
    }
    const std::size_t n_comms = kept.size() + (none_members > 0 ? 1 : 0);
    p.communities.resize(n_comms);
    for (std::size_t c = 0; c < n_comms; ++c) {
        p.communities[c].community_id = static_cast<std::int32_t>(c);
        p.communities[c].label = "C" + std::to_string(c);
    }
    if (p.none_id >= 0) p.communities[p.none_id].label = "None";
    for (auto c : p.assignment) ++p.communities[c].size;
    return p;
}

std::map<std::int32_t, double> follow_back_ratio(const Partition& partition, const LabelStore& labels) {
    std::map<std::int32_t, double> fb;
    std::map<std::int32_t, std::size_t> size;
    for (NodeId v = 0; v < partition.assignment.size(); ++v) {
        const std::int32_t c = partition.assignment[v];
        ++size[c];
        if (labels.is_follow_back(v)) fb[c] += 1.0;
    }
    std::map<std::int32_t, double> out;
    for (const auto& [c, n] : size) {
        out[c] = n == 0 ? 0.0 : fb[c] / static_cast<double>(n);
    }
    return out;
}

void enrich_partition_stats(Partition& partition, const Corpus& corpus) {
    const auto ratios = follow_back_ratio(partition, corpus.labels);
    for (auto& cs : partition.communities) {
        auto it = ratios.find(cs.community_id);
        cs.follow_back_ratio = it == ratios.end() ? 0.0 : it->second;
    }

    // Automation: DNFB followers over follow-back members.
    std::vector<std::size_t> fb(partition.communities.size(), 0), dnfb(partition.communities.size(), 0);
    for (NodeId v = 0; v < partition.assignment.size(); ++v) {
        const LabelRecord* r = corpus.labels.find(v);
        if (r == nullptr || !r->followed_back) continue;
        const std::int32_t c = partition.assignment[v];
        ++fb[c];
        if (r->followed_dnfb && *r->followed_dnfb) ++dnfb[c];
    }
    for (auto& cs : partition.communities) {
        cs.automated_ratio = fb[cs.community_id] == 0
                                 ? 0.0
                                 : static_cast<double>(dnfb[cs.community_id]) / static_cast<double>(fb[cs.community_id]);
    }

    // Edge reciprocity of each induced member subgraph.
    for (auto& cs : partition.communities) {
        std::size_t edges = 0, mutual = 0;
        for (NodeId u = 0; u < partition.assignment.size(); ++u) {
            if (partition.assignment[u] != cs.community_id) continue;
            for (NodeId v : corpus.graph.followings(u)) {
                if (v >= partition.assignment.size()) continue;  // stub
                if (partition.assignment[v] != cs.community_id) continue;
                ++edges;
                if (corpus.graph.has_edge(v, u)) ++mutual;
            }
        }
        cs.edge_reciprocity = edges == 0 ? 0.0 : static_cast<double>(mutual) / static_cast<double>(edges);
    }
}

std::vector<CommunityProfile> community_profile(const Partition& partition,
                                                const Corpus& corpus,
                                                std::size_t k) {
    if (k < 1) throw DataError("community_profile: k must be >= 1");
    const std::size_t n_comms = partition.communities.size();
    // entity -> set of distinct member users, tracked per community.
    std::vector<std::unordered_map<std::string, std::unordered_set<NodeId>>> tags(n_comms), rts(n_comms);

    for (const Tweet& t : corpus.tweets.all()) {
        if (t.user >= partition.assignment.size()) continue;
        const std::int32_t c = partition.assignment[t.user];
        for (const std::string& h : t.hashtags) tags[c][h].insert(t.user);
        if (t.is_retweet && t.retweeted_user_id) rts[c][*t.retweeted_user_id].insert(t.user);
    }

    auto top_k = [&](const std::unordered_map<std::string, std::unordered_set<NodeId>>& m) {
        std::vector<RankedEntity> v;
        v.reserve(m.size());
        for (const auto& [entity, users] : m) v.push_back({entity, users.size()});
        std::sort(v.begin(), v.end(), [](const RankedEntity& a, const RankedEntity& b) {
            if (a.user_count != b.user_count) return a.user_count > b.user_count;
            return a.entity < b.entity;
        });
        if (v.size() > k) v.resize(k);
        return v;
    };

    std::vector<CommunityProfile> out(n_comms);
    for (std::size_t c = 0; c < n_comms; ++c) {
        out[c].community_id = static_cast<std::int32_t>(c);
        out[c].top_hashtags = top_k(tags[c]);
        out[c].top_retweeted_users = top_k(rts[c]);
    }
    return out;
}

double normalized_mutual_information(const std::vector<std::int32_t>& a,
                                     const std::vector<std::int32_t>& b) {
    if (a.size() != b.size() || a.empty()) throw DataError("nmi: assignments must be same non-zero length");
    const double n = static_cast<double>(a.size());
    std::map<std::int32_t, std::size_t> ca, cb;
    std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++joint[{a[i], b[i]}];
    }
    auto entropy = [&](const std::map<std::int32_t, std::size_t>& c) {
        double h = 0.0;
        for (const auto& [_, cnt] : c) {
            const double p = cnt / n;
            h -= p * std::log(p);
        }
        return h;
    };
    const double ha = entropy(ca), hb = entropy(cb);
    double mi = 0.0;
    for (const auto& [key, cnt] : joint) {
        const double pxy = cnt / n;
        const double px = ca[key.first] / n;
        const double py = cb[key.second] / n;
        mi += pxy * std::log(pxy / (px * py));
    }
    const double denom = 0.5 * (ha + hb);
    if (denom <= 0.0) return 1.0;  // both single-cluster
    return mi / denom;
}

}  // namespace fbnet
