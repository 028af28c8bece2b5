#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fbnet/community.hpp"
#include "fbnet/corpus.hpp"
#include "fbnet/stats.hpp"
#include "fbnet/timeutil.hpp"

namespace fbnet {

// Per-account behavioral measures. A row exists for every labeled in-corpus
// account; optional fields are absent when the underlying data is (no
// response logged, no stored tweets).
struct MeasureRow {
    NodeId user = 0;
    bool followed_back = false;
    double age_years = 0.0;
    std::optional<double> response_time_hours;
    double followers = 0.0;
    double followings = 0.0;
    double statuses = 0.0;
    double likes = 0.0;
    double followers_per_age = 0.0;
    double followings_per_age = 0.0;
    double statuses_per_age = 0.0;
    double likes_per_age = 0.0;
    double reciprocity = 0.0;
    std::optional<double> retweet_ratio;
    std::optional<double> engagements_received;
};

enum class GroupStat { mean, median };

struct MeasureDef {
    std::string name;
    GroupStat stat;
    std::optional<double> (*value)(const MeasureRow&);
};

// The fixed catalog of 13 measures in report order.
const std::vector<MeasureDef>& measure_catalog();

// pivot must be strictly later than every in-corpus creation date.
std::vector<MeasureRow> compute_measures(const Corpus& corpus, UnixTime pivot);

struct MeasureComparison {
    std::string measure;
    GroupStat stat = GroupStat::median;
    std::optional<double> group_stat_fb;
    std::optional<double> group_stat_other;
    std::optional<double> diff;
    std::string test;  // "welch", "wilcoxon" or "none"
    std::optional<double> statistic;
    std::optional<double> p;
    std::string note;  // non-empty when a test could not run
};

struct ComparisonReport {
    std::size_t n_follow_back = 0;
    std::size_t n_other = 0;
    std::vector<MeasureComparison> measures;
};

// Follow-back vs other comparison across the measure catalog. Mean-type
// measures use Welch's t-test, median-type measures the Wilcoxon rank-sum
// test (normal approximation). Throws if either group is empty.
ComparisonReport binary_comparison(const std::vector<MeasureRow>& rows);

struct CommunityCorrelation {
    std::string measure;
    std::optional<stats::Correlation> corr;
    std::string error;                      // set when pearson failed, names the measure
    std::size_t n_communities = 0;          // communities that contributed points
    std::vector<std::int32_t> dropped;      // communities lacking the measure
};

// Pearson correlation between per-community follow-back ratios and the
// per-community mean/median of each measure. The reserved None community and
// any ids in `exclude` are left out; fb_only restricts the aggregated members
// to follow-back accounts. Communities with no value for a measure are
// dropped (and recorded). Fewer than 3 communities after exclusion is an
// error.
std::vector<CommunityCorrelation> community_correlation(const std::vector<MeasureRow>& rows,
                                                        const Partition& partition,
                                                        const std::set<std::int32_t>& exclude,
                                                        bool fb_only);

}  // namespace fbnet
