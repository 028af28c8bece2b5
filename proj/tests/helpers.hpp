#pragma once

// Shared builders for in-memory test corpora.

#include <string>
#include <utility>
#include <vector>

#include "fbnet/corpus.hpp"
#include "fbnet/timeutil.hpp"

namespace fbnet::testing {

inline UnixTime default_pivot() { return parse_iso8601("2021-11-12T00:00:00Z"); }

// n accounts "u0".."u<n-1>" plus the given directed edges. Edge endpoints
// >= n create external stubs (ids "x<k>").
inline Corpus make_corpus(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                          std::size_t n_stubs = 0) {
    Corpus c;
    const UnixTime created = parse_iso8601("2019-01-01T00:00:00Z");
    for (std::size_t i = 0; i < n; ++i) {
        Account a;
        a.id = "u" + std::to_string(i);
        a.screen_name = "user" + std::to_string(i);
        a.name = "User " + std::to_string(i);
        a.created_at = created;
        c.id_index.emplace(a.id, static_cast<NodeId>(i));
        c.node_ids.push_back(a.id);
        c.accounts.push_back(std::move(a));
    }
    for (std::size_t k = 0; k < n_stubs; ++k) {
        std::string id = "x" + std::to_string(k);
        c.id_index.emplace(id, static_cast<NodeId>(c.node_ids.size()));
        c.node_ids.push_back(std::move(id));
    }
    c.graph = FollowGraph::from_edges(static_cast<NodeId>(c.node_ids.size()), edges);
    c.tweets.reset(c.node_count());
    c.labels.reset(c.node_count());
    return c;
}

// Convenience: adds both directions for each listed pair.
inline std::vector<std::pair<NodeId, NodeId>> mutual(std::vector<std::pair<NodeId, NodeId>> pairs) {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (auto [u, v] : pairs) {
        out.emplace_back(u, v);
        out.emplace_back(v, u);
    }
    return out;
}

inline Tweet make_tweet(NodeId user, const std::string& id, const std::string& text,
                        std::vector<std::string> hashtags = {},
                        std::vector<std::string> mentions = {}) {
    Tweet t;
    t.id = id;
    t.user = user;
    t.created_at = parse_iso8601("2021-01-01T00:00:00Z");
    t.text = text;
    t.hashtags = std::move(hashtags);
    t.mentions = std::move(mentions);
    return t;
}

inline void add_fb_label(Corpus& c, NodeId user, bool followed_back,
                         std::optional<std::int64_t> response_s = std::nullopt,
                         std::optional<bool> dnfb = std::nullopt) {
    LabelRecord r;
    r.user = user;
    r.followed_back = followed_back;
    r.response_time_s = response_s;
    r.followed_dnfb = dnfb;
    c.labels.add(std::move(r));
}

}  // namespace fbnet::testing
