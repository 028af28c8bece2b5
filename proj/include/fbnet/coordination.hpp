#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fbnet/corpus.hpp"

namespace fbnet {

// One engagement event: a user promoting some tweet. The tweet key is opaque;
// extract_engagements derives it from (retweeted user, text) since platform
// exports don't carry the target tweet id.
struct Engagement {
    NodeId user = 0;
    std::string tweet_key;
};

enum class EngagementKinds {
    retweets,
    retweets_and_quotes,  // default
};

std::vector<Engagement> extract_engagements(const Corpus& corpus,
                                            std::span<const NodeId> members,
                                            EngagementKinds kinds = EngagementKinds::retweets_and_quotes);

// TF-IDF user vectors over engaged-tweet terms. tf = engagement count of the
// user with the tweet, idf = ln(N_users / df). Users whose vector is all-zero
// (no engagements, or only terms engaged by everyone) are omitted.
struct UserVector {
    NodeId user = 0;
    std::vector<std::pair<std::uint32_t, double>> weights;  // (term index, weight), sorted
};

struct UserVectorSet {
    std::vector<std::string> terms;  // term index -> tweet key
    std::vector<UserVector> vectors;
};

UserVectorSet build_user_vectors(const std::vector<Engagement>& engagements);

// Pairwise cosine similarity graph over user vectors; pairs below `floor` are
// not materialized. Cosine of non-negative vectors lies in [0, 1].
struct SimilarityEdge {
    NodeId u = 0, v = 0;
    double weight = 0.0;
};

struct SimilarityNetwork {
    std::vector<NodeId> nodes;  // users present in the vector set
    std::vector<SimilarityEdge> edges;
};

SimilarityNetwork similarity_network(const UserVectorSet& vectors, double floor);

double cosine_similarity(const UserVector& a, const UserVector& b);

// Giant-component membership ratio per similarity threshold. The denominator
// is the full community size (network nodes may be fewer when members had no
// engagements). Ratios are non-increasing in the threshold.
struct CoordinationCurve {
    std::int32_t community_id = 0;
    std::vector<std::pair<double, double>> points;  // (threshold, gc_member_ratio)
};

CoordinationCurve threshold_sweep(const SimilarityNetwork& network,
                                  std::size_t community_size,
                                  std::span<const double> thresholds,
                                  std::int32_t community_id = 0);

std::vector<double> default_threshold_grid(double step = 0.05);

}  // namespace fbnet
