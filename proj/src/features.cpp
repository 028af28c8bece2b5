#include "fbnet/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>

#include "fbnet/errors.hpp"
#include "fbnet/simd.hpp"

namespace fbnet {

namespace {

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return simd::sum(v.data(), v.size()) / static_cast<double>(v.size());
}

// Population standard deviation; degenerate inputs yield 0.
double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

// --- profile -----------------------------------------------------------------

const std::vector<std::string>& profile_columns() {
    static const std::vector<std::string> cols = {
        "age_years",   "statuses_count",     "followers_count",     "followings_count", "likes_count",
        "name_length", "screen_name_length", "description_length",  "has_location",     "has_url"};
    return cols;
}

std::vector<double> profile_vector(const Account& account, UnixTime pivot) {
    if (pivot <= account.created_at) throw DataError("profile_vector: pivot must be after created_at");
    return {
        years_between(account.created_at, pivot),
        static_cast<double>(account.statuses_count),
        static_cast<double>(account.followers_count),
        static_cast<double>(account.followings_count),
        static_cast<double>(account.likes_count),
        static_cast<double>(account.name.size()),
        static_cast<double>(account.screen_name.size()),
        static_cast<double>(account.description.size()),
        account.location.empty() ? 0.0 : 1.0,
        account.url.empty() ? 0.0 : 1.0,
    };
}

// --- tweets --------------------------------------------------------------------

const std::vector<std::string>& tweet_columns() {
    static const std::vector<std::string> cols = {
        "time_since_last_tweet_h", "n_multi_mention_tweets", "mean_inter_tweet_gap_h",
        "n_duplicate_texts",       "n_retweets",             "pct_retweets",
        "n_replies",               "pct_replies",            "n_quotes",
        "pct_quotes",              "mean_hashtags",          "sd_hashtags",
        "mean_mentions",           "sd_mentions",            "mean_likes_received",
        "sd_likes_received",       "missing_timeline"};
    return cols;
}

std::vector<double> tweet_vector(const Corpus& corpus, NodeId user, UnixTime follow_time) {
    const auto& ids = corpus.tweets.of(user);
    std::vector<double> v(tweet_columns().size(), 0.0);
    if (ids.empty()) {
        v.back() = 1.0;  // missing_timeline
        return v;
    }
    const double n = static_cast<double>(ids.size());

    UnixTime last = 0;
    std::vector<UnixTime> times;
    std::vector<double> hashtags, mentions, likes;
    std::map<std::string, std::size_t> text_count;
    double multi_mention = 0.0, retweets = 0.0, replies = 0.0, quotes = 0.0;
    for (std::uint32_t ti : ids) {
        const Tweet& t = corpus.tweets[ti];
        last = std::max(last, t.created_at);
        times.push_back(t.created_at);
        hashtags.push_back(static_cast<double>(t.hashtags.size()));
        mentions.push_back(static_cast<double>(t.mentions.size()));
        likes.push_back(static_cast<double>(t.like_count));
        ++text_count[t.text];
        if (t.mentions.size() >= 2) multi_mention += 1.0;
        if (t.is_retweet) retweets += 1.0;
        if (t.is_reply) replies += 1.0;
        if (t.is_quote) quotes += 1.0;
    }
    std::sort(times.begin(), times.end());
    double gap_sum = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        gap_sum += static_cast<double>(times[i] - times[i - 1]) / 3600.0;
    }
    // Duplicates: each group of identical texts of size >= 2 contributes its
    // full size (a pair counts 2).
    double duplicates = 0.0;
    for (const auto& [_, count] : text_count) {
        if (count >= 2) duplicates += static_cast<double>(count);
    }

    v[0] = std::max(0.0, static_cast<double>(follow_time - last) / 3600.0);
    v[1] = multi_mention;
    v[2] = times.size() < 2 ? 0.0 : gap_sum / static_cast<double>(times.size() - 1);
    v[3] = duplicates;
    v[4] = retweets;
    v[5] = retweets / n;
    v[6] = replies;
    v[7] = replies / n;
    v[8] = quotes;
    v[9] = quotes / n;
    v[10] = mean_of(hashtags);
    v[11] = sd_of(hashtags);
    v[12] = mean_of(mentions);
    v[13] = sd_of(mentions);
    v[14] = mean_of(likes);
    v[15] = sd_of(likes);
    v[16] = 0.0;
    return v;
}

std::vector<double> text_embedding(const Corpus& corpus, NodeId user, std::size_t dim) {
    if (dim < 8) throw DataError("text_embedding: dim must be >= 8");
    std::vector<double> v(dim, 0.0);
    const auto& ids = corpus.tweets.of(user);
    for (std::uint32_t ti : ids) {
        const std::string& text = corpus.tweets[ti].text;
        std::string token;
        auto flush = [&] {
            if (token.empty()) return;
            const std::uint64_t h = fnv1a(token);
            const double sign = (h >> 63) ? 1.0 : -1.0;
            v[h % dim] += sign;
            token.clear();
        };
        for (unsigned char c : text) {
            if (std::isalnum(c) || c == '#' || c == '@' || c == '_') {
                token.push_back(static_cast<char>(std::tolower(c)));
            } else {
                flush();
            }
        }
        flush();
    }
    const double norm = std::sqrt(simd::sumsq(v.data(), v.size()));
    if (norm > 0.0) simd::scale(1.0 / norm, v.data(), v.size());
    return v;
}

// --- ego -----------------------------------------------------------------------

const std::vector<std::string>& ego_columns() {
    static const std::vector<std::string> cols = {"reciprocal_to_followers", "reciprocal_to_followings",
                                                  "jaccard_reciprocity"};
    return cols;
}

std::vector<double> ego_vector(const FollowGraph& graph, NodeId user) {
    if (user >= graph.node_count()) throw DataError("ego_vector: unknown node");
    auto out = graph.followings(user);
    auto in = graph.followers(user);
    std::size_t both = 0, i = 0, j = 0;
    while (i < out.size() && j < in.size()) {
        if (out[i] < in[j]) ++i;
        else if (in[j] < out[i]) ++j;
        else { ++both; ++i; ++j; }
    }
    return {
        safe_ratio(static_cast<double>(both), static_cast<double>(in.size())),
        safe_ratio(static_cast<double>(both), static_cast<double>(out.size())),
        user_reciprocity(graph, user),
    };
}

// --- family builders -------------------------------------------------------------

namespace {

FeatureMatrix build_rows(const std::string& family, std::span<const NodeId> users,
                         const std::vector<std::string>& columns,
                         const std::function<std::vector<double>(NodeId)>& fn) {
    FeatureMatrix m;
    m.family = family;
    m.users.assign(users.begin(), users.end());
    m.columns = columns;
    m.values.reserve(users.size() * columns.size());
    for (NodeId u : users) {
        const std::vector<double> row = fn(u);
        m.values.insert(m.values.end(), row.begin(), row.end());
    }
    return m;
}

}  // namespace

FeatureMatrix profile_features(const Corpus& corpus, std::span<const NodeId> users, UnixTime pivot) {
    return build_rows("profile", users, profile_columns(),
                      [&](NodeId u) { return profile_vector(corpus.accounts[u], pivot); });
}

FeatureMatrix tweet_features(const Corpus& corpus, std::span<const NodeId> users,
                             UnixTime follow_time, std::size_t text_dim) {
    std::vector<std::string> cols = tweet_columns();
    for (std::size_t d = 0; d < text_dim; ++d) cols.push_back("txt" + std::to_string(d));
    return build_rows("tweets", users, cols, [&](NodeId u) {
        std::vector<double> row = tweet_vector(corpus, u, follow_time);
        if (text_dim > 0) {
            const std::vector<double> emb = text_embedding(corpus, u, text_dim);
            row.insert(row.end(), emb.begin(), emb.end());
        }
        return row;
    });
}

FeatureMatrix ego_features(const Corpus& corpus, std::span<const NodeId> users) {
    return build_rows("ego", users, ego_columns(),
                      [&](NodeId u) { return ego_vector(corpus.graph, u); });
}

// --- network features ----------------------------------------------------------

namespace {

struct NetworkTables {
    std::vector<double> in_deg, out_deg, closeness, betweenness, eccentricity;
    std::vector<double> reciprocity, clustering, pagerank, hub, authority;
    std::vector<double> in_clique, in_giant;
    std::size_t n = 0;
};

// Unweighted undirected neighbor lists (projection of the core subgraph).
std::vector<std::vector<NodeId>> undirected_lists(const FollowGraph& g) {
    const auto n = g.node_count();
    std::vector<std::vector<NodeId>> und(n);
    g.for_each_edge([&](NodeId u, NodeId v) {
        und[u].push_back(v);
        und[v].push_back(u);
    });
    for (auto& list : und) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return und;
}

// Single-source BFS: fills dist (-1 unreachable); returns reach count.
std::size_t bfs(const std::vector<std::vector<NodeId>>& und, NodeId s, std::vector<int>& dist) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<NodeId> queue{s};
    dist[s] = 0;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : und[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                ++reached;
                queue.push_back(v);
            }
        }
    }
    return reached;
}

// Brandes betweenness on the undirected projection, each unordered pair
// counted once.
std::vector<double> brandes_betweenness(const std::vector<std::vector<NodeId>>& und) {
    const std::size_t n = und.size();
    std::vector<double> bc(n, 0.0);
    std::vector<int> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<NodeId>> pred(n);
    std::vector<NodeId> order;
    order.reserve(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : pred) p.clear();
        order.clear();
        std::deque<NodeId> queue{s};
        dist[s] = 0;
        sigma[s] = 1.0;
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            order.push_back(u);
            for (NodeId v : und[u]) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if (dist[v] == dist[u] + 1) {
                    sigma[v] += sigma[u];
                    pred[v].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            for (NodeId u : pred[w]) {
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) bc[w] += delta[w];
        }
    }
    for (double& b : bc) b *= 0.5;
    return bc;
}

std::vector<double> pagerank_scores(const FollowGraph& g, double damping, double tol) {
    const std::size_t n = g.node_count();
    std::vector<double> pr(n, 1.0 / static_cast<double>(n)), next(n);
    for (int iter = 0; iter < 1000; ++iter) {
        double dangling = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            if (g.out_degree(u) == 0) dangling += pr[u];
        }
        const double base = (1.0 - damping) / static_cast<double>(n) +
                            damping * dangling / static_cast<double>(n);
        std::fill(next.begin(), next.end(), base);
        for (NodeId u = 0; u < n; ++u) {
            const auto deg = g.out_degree(u);
            if (deg == 0) continue;
            const double share = damping * pr[u] / static_cast<double>(deg);
            for (NodeId v : g.followings(u)) next[v] += share;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff += std::abs(next[i] - pr[i]);
        pr.swap(next);
        if (diff < tol) break;
    }
    return pr;
}

void hits_scores(const FollowGraph& g, std::vector<double>& hub, std::vector<double>& authority) {
    const std::size_t n = g.node_count();
    hub.assign(n, 1.0 / static_cast<double>(n));
    authority.assign(n, 1.0 / static_cast<double>(n));
    if (g.edge_count() == 0) return;
    std::vector<double> new_hub(n), new_auth(n);
    for (int iter = 0; iter < 1000; ++iter) {
        std::fill(new_auth.begin(), new_auth.end(), 0.0);
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v : g.followings(u)) new_auth[v] += hub[u];
        }
        double s = simd::sum(new_auth.data(), n);
        if (s > 0.0) simd::scale(1.0 / s, new_auth.data(), n);
        std::fill(new_hub.begin(), new_hub.end(), 0.0);
        for (NodeId u = 0; u < n; ++u) {
            double acc = 0.0;
            for (NodeId v : g.followings(u)) acc += new_auth[v];
            new_hub[u] = acc;
        }
        s = simd::sum(new_hub.data(), n);
        if (s > 0.0) simd::scale(1.0 / s, new_hub.data(), n);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff += std::abs(new_hub[i] - hub[i]) + std::abs(new_auth[i] - authority[i]);
        }
        hub = new_hub;
        authority = new_auth;
        if (diff < 1e-12) break;
    }
}

NetworkTables compute_network_tables(const FollowGraph& g) {
    NetworkTables t;
    const std::size_t n = g.node_count();
    t.n = n;
    t.in_deg.resize(n);
    t.out_deg.resize(n);
    for (NodeId u = 0; u < n; ++u) {
        t.in_deg[u] = static_cast<double>(g.in_degree(u));
        t.out_deg[u] = static_cast<double>(g.out_degree(u));
    }

    const auto und = undirected_lists(g);

    // Closeness and eccentricity inside each (weakly) connected component.
    t.closeness.assign(n, 0.0);
    t.eccentricity.assign(n, 0.0);
    std::vector<int> dist(n);
    for (NodeId u = 0; u < n; ++u) {
        if (und[u].empty()) continue;  // isolated: closeness 0, eccentricity 0
        const std::size_t reached = bfs(und, u, dist);
        double sum_d = 0.0;
        int ecc = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (dist[v] > 0) {
                sum_d += dist[v];
                ecc = std::max(ecc, dist[v]);
            }
        }
        t.closeness[u] = sum_d > 0.0 ? static_cast<double>(reached - 1) / sum_d : 0.0;
        t.eccentricity[u] = static_cast<double>(ecc);
    }

    t.betweenness = brandes_betweenness(und);

    t.reciprocity.resize(n);
    for (NodeId u = 0; u < n; ++u) t.reciprocity[u] = user_reciprocity(g, u);

    // Clustering on the undirected projection.
    t.clustering.assign(n, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        const auto& nb = und[u];
        if (nb.size() < 2) continue;
        std::size_t links = 0;
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                if (std::binary_search(und[nb[i]].begin(), und[nb[i]].end(), nb[j])) ++links;
            }
        }
        t.clustering[u] = 2.0 * static_cast<double>(links) /
                          (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
    }

    t.pagerank = pagerank_scores(g, 0.85, 1e-10);
    hits_scores(g, t.hub, t.authority);

    // Mutual 3-clique membership.
    t.in_clique.assign(n, 0.0);
    std::vector<std::vector<NodeId>> mutual_nb(n);
    g.for_each_edge([&](NodeId u, NodeId v) {
        if (u < v && g.has_edge(v, u)) {
            mutual_nb[u].push_back(v);
            mutual_nb[v].push_back(u);
        }
    });
    for (auto& list : mutual_nb) std::sort(list.begin(), list.end());
    for (NodeId u = 0; u < n; ++u) {
        if (t.in_clique[u] > 0.0) continue;
        const auto& nb = mutual_nb[u];
        for (std::size_t i = 0; i < nb.size() && t.in_clique[u] == 0.0; ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                if (std::binary_search(mutual_nb[nb[i]].begin(), mutual_nb[nb[i]].end(), nb[j])) {
                    t.in_clique[u] = 1.0;
                    t.in_clique[nb[i]] = 1.0;
                    t.in_clique[nb[j]] = 1.0;
                    break;
                }
            }
        }
    }

    // Giant weakly-connected component (ties: smallest minimum node id).
    t.in_giant.assign(n, 0.0);
    std::vector<int> comp(n, -1);
    int n_comp = 0;
    std::vector<std::size_t> comp_size;
    std::vector<NodeId> comp_min;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        const int c = n_comp++;
        comp_size.push_back(0);
        comp_min.push_back(s);
        std::deque<NodeId> queue{s};
        comp[s] = c;
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            ++comp_size[c];
            for (NodeId v : und[u]) {
                if (comp[v] < 0) {
                    comp[v] = c;
                    queue.push_back(v);
                }
            }
        }
    }
    int giant = 0;
    for (int c = 1; c < n_comp; ++c) {
        if (comp_size[c] > comp_size[giant] ||
            (comp_size[c] == comp_size[giant] && comp_min[c] < comp_min[giant])) {
            giant = c;
        }
    }
    for (NodeId u = 0; u < n; ++u) t.in_giant[u] = comp[u] == giant ? 1.0 : 0.0;
    return t;
}

}  // namespace

FeatureMatrix network_features(const Corpus& corpus, std::span<const NodeId> users) {
    const std::size_t n_core = corpus.core_count();
    if (n_core == 0) throw DataError("network_features: empty graph");
    for (NodeId u : users) {
        if (u >= n_core) throw DataError("network_features: external node requested");
    }

    // Induced in-corpus subgraph (stubs dropped).
    std::vector<std::pair<NodeId, NodeId>> edges;
    corpus.graph.for_each_edge([&](NodeId u, NodeId v) {
        if (u < n_core && v < n_core) edges.emplace_back(u, v);
    });
    const FollowGraph sub = FollowGraph::from_edges(static_cast<NodeId>(n_core), std::move(edges));
    const NetworkTables t = compute_network_tables(sub);
    const double n1 = static_cast<double>(n_core > 1 ? n_core - 1 : 1);

    FeatureMatrix m;
    m.family = "network";
    m.users.assign(users.begin(), users.end());
    m.columns = {"in_degree",      "out_degree",        "degree_centrality_in", "degree_centrality_out",
                 "closeness_centrality", "betweenness_centrality", "eccentricity", "node_reciprocity",
                 "clustering_coefficient", "pagerank",  "hub_score",            "authority_score",
                 "in_clique",      "in_giant_component"};
    m.values.reserve(m.users.size() * m.columns.size());
    for (NodeId u : users) {
        m.values.insert(m.values.end(),
                        {t.in_deg[u], t.out_deg[u], t.in_deg[u] / n1, t.out_deg[u] / n1,
                         t.closeness[u], t.betweenness[u], t.eccentricity[u], t.reciprocity[u],
                         t.clustering[u], t.pagerank[u], t.hub[u], t.authority[u],
                         t.in_clique[u], t.in_giant[u]});
    }
    return m;
}

FeatureMatrix assemble(const std::vector<const FeatureMatrix*>& blocks,
                       std::span<const std::size_t> train_rows) {
    if (blocks.empty()) throw DataError("assemble: no feature blocks");
    for (const FeatureMatrix* b : blocks) {
        if (b->users != blocks[0]->users) throw DataError("assemble: user ordering mismatch between blocks");
    }
    FeatureMatrix m;
    m.family = "combined";
    m.users = blocks[0]->users;
    for (const FeatureMatrix* b : blocks) {
        for (const std::string& c : b->columns) m.columns.push_back(b->family + "." + c);
    }
    const std::size_t rows = m.users.size(), cols = m.columns.size();
    m.values.resize(rows * cols);
    std::size_t col_base = 0;
    for (const FeatureMatrix* b : blocks) {
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < b->cols(); ++c) {
                m.values[r * cols + col_base + c] = b->at(r, c);
            }
        }
        col_base += b->cols();
    }

    // z-score with training statistics only.
    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (std::size_t r : train_rows) sum += m.at(r, c);
        const double mu = train_rows.empty() ? 0.0 : sum / static_cast<double>(train_rows.size());
        double ss = 0.0;
        for (std::size_t r : train_rows) ss += (m.at(r, c) - mu) * (m.at(r, c) - mu);
        const double sd = train_rows.size() > 1
                              ? std::sqrt(ss / static_cast<double>(train_rows.size() - 1))
                              : 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            double v = m.at(r, c) - mu;
            if (sd > 1e-12) v /= sd;
            m.at(r, c) = v;
        }
    }
    // No NaN/inf may survive assembly.
    for (double v : m.values) {
        if (!std::isfinite(v)) throw DataError("assemble: non-finite feature value");
    }
    return m;
}

}  // namespace fbnet
