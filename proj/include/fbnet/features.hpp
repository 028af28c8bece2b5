#pragma once

#include <span>
#include <string>
#include <vector>

#include "fbnet/corpus.hpp"
#include "fbnet/timeutil.hpp"

namespace fbnet {

// Dense per-account feature block. Rows align with `users`; values are
// row-major. family is one of profile | tweets | ego | network | embedding |
// combined.
struct FeatureMatrix {
    std::string family;
    std::vector<NodeId> users;
    std::vector<std::string> columns;
    std::vector<double> values;

    std::size_t rows() const { return users.size(); }
    std::size_t cols() const { return columns.size(); }
    double& at(std::size_t r, std::size_t c) { return values[r * columns.size() + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * columns.size() + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * columns.size(), columns.size()};
    }
};

// --- single-account vectors -------------------------------------------------

// age_years, statuses_count, followers_count, followings_count, likes_count,
// name_length, screen_name_length, description_length, has_location, has_url.
std::vector<double> profile_vector(const Account& account, UnixTime pivot);
const std::vector<std::string>& profile_columns();

// 16 timeline statistics plus a missing_timeline flag; an empty timeline
// yields all zeros with the flag set.
std::vector<double> tweet_vector(const Corpus& corpus, NodeId user, UnixTime follow_time);
const std::vector<std::string>& tweet_columns();

// Signed feature hashing of lowercased word unigrams over all stored tweets,
// L2-normalized; zero vector for empty timelines. dim >= 8.
std::vector<double> text_embedding(const Corpus& corpus, NodeId user, std::size_t dim);

// reciprocal_to_followers, reciprocal_to_followings, jaccard_reciprocity
// (the latter is exactly user_reciprocity). Computed on the full graph,
// external stubs included.
std::vector<double> ego_vector(const FollowGraph& graph, NodeId user);
const std::vector<std::string>& ego_columns();

// --- family builders ----------------------------------------------------------

FeatureMatrix profile_features(const Corpus& corpus, std::span<const NodeId> users, UnixTime pivot);

// tweet_vector columns plus `text_dim` hashed-content columns (txt0..).
// text_dim = 0 drops the content block.
FeatureMatrix tweet_features(const Corpus& corpus, std::span<const NodeId> users,
                             UnixTime follow_time, std::size_t text_dim);

FeatureMatrix ego_features(const Corpus& corpus, std::span<const NodeId> users);

// Whole-network features over the in-corpus induced directed graph:
// in/out degree and degree centralities, closeness, betweenness, eccentricity
// (undirected projection), node reciprocity, clustering coefficient, pagerank,
// hub/authority scores (directed, damping 0.85), mutual-triangle membership,
// giant-component membership.
FeatureMatrix network_features(const Corpus& corpus, std::span<const NodeId> users);

// Column-wise concatenation followed by per-column z-scoring with statistics
// from the given training rows only. Columns that are constant on the
// training rows are centered but not scaled. Inputs must share the same user
// ordering.
FeatureMatrix assemble(const std::vector<const FeatureMatrix*>& blocks,
                       std::span<const std::size_t> train_rows);

}  // namespace fbnet
