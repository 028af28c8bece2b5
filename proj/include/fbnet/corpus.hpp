#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fbnet/account.hpp"
#include "fbnet/graph.hpp"

namespace fbnet {

// All tweets of a corpus plus a per-node index. Order within a node follows
// file order.
class TweetStore {
public:
    void reset(std::size_t node_count) {
        tweets_.clear();
        by_node_.assign(node_count, {});
    }
    void add(Tweet t) {
        by_node_[t.user].push_back(static_cast<std::uint32_t>(tweets_.size()));
        tweets_.push_back(std::move(t));
    }
    const std::vector<Tweet>& all() const { return tweets_; }
    const std::vector<std::uint32_t>& of(NodeId u) const { return by_node_[u]; }
    std::size_t size() const { return tweets_.size(); }
    const Tweet& operator[](std::size_t i) const { return tweets_[i]; }

private:
    std::vector<Tweet> tweets_;
    std::vector<std::vector<std::uint32_t>> by_node_;
};

// Label records keyed by node; at most one record per account.
class LabelStore {
public:
    void reset(std::size_t node_count) {
        records_.clear();
        index_.assign(node_count, kNone);
    }
    void add(LabelRecord r);
    const LabelRecord* find(NodeId u) const {
        return index_[u] == kNone ? nullptr : &records_[index_[u]];
    }
    bool is_follow_back(NodeId u) const {
        const LabelRecord* r = find(u);
        return r != nullptr && r->followed_back;
    }
    const std::vector<LabelRecord>& all() const { return records_; }
    std::size_t size() const { return records_.size(); }

private:
    static constexpr std::uint32_t kNone = 0xffffffffu;
    std::vector<LabelRecord> records_;
    std::vector<std::uint32_t> index_;
};

// A loaded dataset: account table, follow graph, tweet store, label store.
// Nodes [0, core_count) are in-corpus accounts; [core_count, node_count) are
// external stubs referenced only by edges. Immutable after loading.
struct Corpus {
    std::vector<Account> accounts;  // core accounts, file order
    std::vector<std::string> node_ids;
    std::unordered_map<std::string, NodeId> id_index;
    FollowGraph graph;
    TweetStore tweets;
    LabelStore labels;

    std::size_t core_count() const { return accounts.size(); }
    std::size_t node_count() const { return node_ids.size(); }
    bool is_external(NodeId u) const { return u >= accounts.size(); }

    NodeId node_of(const std::string& id) const;
    std::optional<NodeId> try_node_of(const std::string& id) const;

    // Mask selecting in-corpus (non-stub) nodes.
    std::vector<bool> core_mask() const;

    // screen_name (case-folded) -> node, built lazily by callers that need it.
    std::unordered_map<std::string, NodeId> screen_name_index() const;
};

// Loads the corpus files described in the README data formats. tweets_path /
// labels_path may be empty strings for corpora without those files.
// Malformed lines raise DataError naming the file and line number.
Corpus load_corpus(const std::string& accounts_path,
                   const std::string& edges_path,
                   const std::string& tweets_path = "",
                   const std::string& labels_path = "");

// Writes accounts.jsonl / edges.csv / tweets.jsonl / labels.jsonl in canonical
// form under dir. load_corpus(save_corpus(c)) round-trips byte-identically.
void save_corpus(const Corpus& corpus, const std::string& dir);

}  // namespace fbnet
