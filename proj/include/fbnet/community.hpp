#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbnet/corpus.hpp"
#include "fbnet/graph.hpp"

namespace fbnet {

struct CommunityStats {
    int community_id = 0;
    std::size_t size = 0;
    double follow_back_ratio = 0.0;
    double automated_ratio = 0.0;
    double edge_reciprocity = 0.0;  // induced subgraph; 0 when it has no edges
    std::string label;              // default "C<k>", "None" for the merged remainder
};

// Community assignment over in-corpus nodes. Ids are dense integers starting
// at 0, assigned in decreasing community size; the reserved "none" community
// (members of groups smaller than min_size) always has the highest id when
// present.
struct Partition {
    std::vector<std::int32_t> assignment;  // per core node, always valid
    std::vector<CommunityStats> communities;
    std::int32_t none_id = -1;  // -1 when every node landed in a kept community

    std::size_t community_count() const { return communities.size(); }
    std::vector<std::vector<NodeId>> members() const;
};

// Louvain modularity optimization over the weighted undirected projection of
// the follow graph (mutual edge weight 2, one-way weight 1; external stubs
// excluded). Communities smaller than min_size are merged into the reserved
// "none" community. Deterministic for a fixed seed.
Partition detect_communities(const Corpus& corpus, std::size_t min_size, std::uint64_t seed);

// Newman modularity Q of the partition on the same weighted projection used
// by detect_communities. Throws if the graph is empty or a node is missing
// from the partition.
double modularity(const Corpus& corpus, const Partition& partition);

// Q over an explicit undirected graph and assignment (assignment[v] < 0 means
// node v is not covered, which is an error).
double modularity(const UndirectedGraph& g, const std::vector<std::int32_t>& assignment);

// Per-community fraction of members labeled followed_back; unlabeled members
// count as not-followed-back.
std::map<std::int32_t, double> follow_back_ratio(const Partition& partition, const LabelStore& labels);

// Fills follow_back_ratio / automated_ratio / edge_reciprocity on the
// partition's CommunityStats from the corpus.
void enrich_partition_stats(Partition& partition, const Corpus& corpus);

struct RankedEntity {
    std::string entity;       // hashtag text or retweeted user id
    std::size_t user_count = 0;  // distinct member accounts using it
};

struct CommunityProfile {
    std::int32_t community_id = 0;
    std::vector<RankedEntity> top_hashtags;
    std::vector<RankedEntity> top_retweeted_users;
};

// Top-k hashtags and retweeted users per community. Popularity is the number
// of distinct member accounts using the entity, not raw occurrences; ties
// break lexicographically on the entity string.
std::vector<CommunityProfile> community_profile(const Partition& partition,
                                                const Corpus& corpus,
                                                std::size_t k);

// Normalized mutual information (arithmetic-mean normalization) between two
// assignments over the same node set. Returns 1.0 when both are identical
// single-cluster partitions.
double normalized_mutual_information(const std::vector<std::int32_t>& a,
                                     const std::vector<std::int32_t>& b);

}  // namespace fbnet
