#include "fbnet/coordination.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

#include "fbnet/errors.hpp"

namespace fbnet {

std::vector<Engagement> extract_engagements(const Corpus& corpus,
                                            std::span<const NodeId> members,
                                            EngagementKinds kinds) {
    std::vector<bool> member_of(corpus.node_count(), false);
    for (NodeId u : members) member_of[u] = true;
    std::vector<Engagement> out;
    for (const Tweet& t : corpus.tweets.all()) {
        if (!member_of[t.user]) continue;
        const bool counted = t.is_retweet ||
                             (kinds == EngagementKinds::retweets_and_quotes && t.is_quote);
        if (!counted) continue;
        std::string key;
        if (t.retweeted_user_id) {
            key = "rt|" + *t.retweeted_user_id + "|" + t.text;
        } else {
            key = "q|" + t.text;
        }
        out.push_back({t.user, std::move(key)});
    }
    return out;
}

UserVectorSet build_user_vectors(const std::vector<Engagement>& engagements) {
    UserVectorSet set;
    if (engagements.empty()) return set;

    // Dense term and user indexing in first-appearance order keeps the
    // output deterministic for identical input order.
    std::unordered_map<std::string, std::uint32_t> term_index;
    std::vector<NodeId> users;
    std::unordered_map<NodeId, std::uint32_t> user_index;
    for (const Engagement& e : engagements) {
        if (term_index.emplace(e.tweet_key, static_cast<std::uint32_t>(term_index.size())).second) {
            set.terms.push_back(e.tweet_key);
        }
        if (user_index.emplace(e.user, static_cast<std::uint32_t>(user_index.size())).second) {
            users.push_back(e.user);
        }
    }

    // tf counts and document frequencies.
    std::vector<std::map<std::uint32_t, double>> tf(users.size());
    for (const Engagement& e : engagements) {
        tf[user_index[e.user]][term_index[e.tweet_key]] += 1.0;
    }
    std::vector<std::size_t> df(set.terms.size(), 0);
    for (const auto& row : tf) {
        for (const auto& [term, _] : row) ++df[term];
    }
    const double n_users = static_cast<double>(users.size());

    for (std::size_t i = 0; i < users.size(); ++i) {
        UserVector v;
        v.user = users[i];
        for (const auto& [term, count] : tf[i]) {
            const double idf = std::log(n_users / static_cast<double>(df[term]));
            const double w = count * idf;
            if (w > 0.0) v.weights.emplace_back(term, w);
        }
        if (!v.weights.empty()) set.vectors.push_back(std::move(v));
    }
    // Deterministic node order for downstream pairwise loops.
    std::sort(set.vectors.begin(), set.vectors.end(),
              [](const UserVector& a, const UserVector& b) { return a.user < b.user; });
    return set;
}

double cosine_similarity(const UserVector& a, const UserVector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [_, w] : a.weights) na += w * w;
    for (const auto& [_, w] : b.weights) nb += w * w;
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.weights.size() && j < b.weights.size()) {
        if (a.weights[i].first < b.weights[j].first) {
            ++i;
        } else if (b.weights[j].first < a.weights[i].first) {
            ++j;
        } else {
            dot += a.weights[i].second * b.weights[j].second;
            ++i;
            ++j;
        }
    }
    const double c = dot / std::sqrt(na * nb);
    return std::clamp(c, 0.0, 1.0);
}

SimilarityNetwork similarity_network(const UserVectorSet& vectors, double floor) {
    if (floor < 0.0 || floor > 1.0) throw DataError("similarity_network: floor must be in [0,1]");
    SimilarityNetwork net;
    net.nodes.reserve(vectors.vectors.size());
    for (const UserVector& v : vectors.vectors) net.nodes.push_back(v.user);
    for (std::size_t i = 0; i < vectors.vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.vectors.size(); ++j) {
            const double c = cosine_similarity(vectors.vectors[i], vectors.vectors[j]);
            if (c >= floor) {
                net.edges.push_back({vectors.vectors[i].user, vectors.vectors[j].user, c});
            }
        }
    }
    return net;
}

CoordinationCurve threshold_sweep(const SimilarityNetwork& network,
                                  std::size_t community_size,
                                  std::span<const double> thresholds,
                                  std::int32_t community_id) {
    if (network.nodes.empty()) throw DataError("threshold_sweep: empty node set");
    for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
        if (!(thresholds[i] < thresholds[i + 1])) {
            throw DataError("threshold_sweep: thresholds must be strictly increasing");
        }
    }
    if (!thresholds.empty() && (thresholds.front() < 0.0 || thresholds.back() > 1.0)) {
        throw DataError("threshold_sweep: thresholds must lie in [0,1]");
    }

    std::unordered_map<NodeId, std::uint32_t> index;
    for (std::uint32_t i = 0; i < network.nodes.size(); ++i) index[network.nodes[i]] = i;

    CoordinationCurve curve;
    curve.community_id = community_id;
    double prev_ratio = 1.0;
    for (double t : thresholds) {
        // Union-find over edges surviving the threshold.
        std::vector<std::uint32_t> parent(network.nodes.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        for (const SimilarityEdge& e : network.edges) {
            if (e.weight < t) continue;
            const std::uint32_t a = find(index[e.u]);
            const std::uint32_t b = find(index[e.v]);
            if (a != b) parent[a] = b;
        }
        std::unordered_map<std::uint32_t, std::size_t> comp_size;
        std::unordered_map<std::uint32_t, NodeId> comp_min;
        for (std::uint32_t i = 0; i < network.nodes.size(); ++i) {
            const std::uint32_t root = find(i);
            ++comp_size[root];
            auto it = comp_min.find(root);
            if (it == comp_min.end() || network.nodes[i] < it->second) comp_min[root] = network.nodes[i];
        }
        // Giant component; ties resolved toward the smallest minimum node id.
        std::size_t best_size = 0;
        NodeId best_min = 0;
        for (const auto& [root, size] : comp_size) {
            const NodeId mn = comp_min[root];
            if (size > best_size || (size == best_size && mn < best_min)) {
                best_size = size;
                best_min = mn;
            }
        }
        const double ratio = community_size == 0
                                 ? 0.0
                                 : static_cast<double>(best_size) / static_cast<double>(community_size);
        if (!curve.points.empty() && ratio > prev_ratio + 1e-12) {
            throw DataError("threshold_sweep: ratio increased with threshold (internal invariant)");
        }
        prev_ratio = ratio;
        curve.points.emplace_back(t, ratio);
    }
    return curve;
}

std::vector<double> default_threshold_grid(double step) {
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double t = k * step;
        if (t > 1.0 + 1e-12) break;
        grid.push_back(std::min(t, 1.0));
    }
    return grid;
}

}  // namespace fbnet
