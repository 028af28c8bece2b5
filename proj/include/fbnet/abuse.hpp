#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fbnet/community.hpp"
#include "fbnet/corpus.hpp"

namespace fbnet {

// A follow train is a non-reply tweet listing at least min_handles distinct
// profile handles (case-folded). Pure function of (is_reply, mentions).
bool is_follow_train(const Tweet& tweet, std::size_t min_handles = 5);

struct TrainStats {
    NodeId user = 0;
    std::size_t conducts = 0;  // trains authored (retweets of trains excluded)
    std::size_t rides = 0;     // times mentioned in stored train tweets
};

struct TrainReport {
    std::vector<TrainStats> per_user;  // one entry per in-corpus account
    std::map<std::int32_t, double> mean_rides;
    std::map<std::int32_t, double> mean_conducts;
    std::size_t total_trains = 0;
};

TrainReport train_stats(const Corpus& corpus, const Partition& partition,
                        std::size_t min_handles = 5);

// Per community: accounts that re-followed the DNFB honeypots over accounts
// that followed back at all. Absent when the community has no follow-back
// members.
std::map<std::int32_t, std::optional<double>> automation_ratio(const Partition& partition,
                                                               const LabelStore& labels);

struct SuspensionStats {
    std::size_t total_accounts = 0;
    std::size_t suspended_total = 0;
    std::size_t deleted_total = 0;

    std::size_t fb_accounts = 0;
    std::size_t fb_suspended = 0;
    std::size_t automated_fb_accounts = 0;
    std::size_t automated_fb_suspended = 0;
    // Members of a kept community that did not follow back.
    std::size_t community_non_fb_accounts = 0;
    std::size_t community_non_fb_suspended = 0;
    // Baseline: accounts outside every kept community that did not follow back.
    std::size_t baseline_accounts = 0;
    std::size_t baseline_suspended = 0;

    std::optional<double> fb_rate;
    std::optional<double> baseline_rate;
    std::optional<double> relative_rate;  // fb_rate / baseline_rate
};

SuspensionStats suspension_stats(const Corpus& corpus, const Partition& partition);

}  // namespace fbnet
