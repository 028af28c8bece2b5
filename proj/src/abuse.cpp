#include "fbnet/abuse.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>

namespace fbnet {

namespace {

std::string fold(const std::string& s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::set<std::string> distinct_handles(const Tweet& t) {
    std::set<std::string> handles;
    for (const std::string& m : t.mentions) handles.insert(fold(m));
    return handles;
}

}  // namespace

bool is_follow_train(const Tweet& tweet, std::size_t min_handles) {
    if (tweet.is_reply) return false;
    return distinct_handles(tweet).size() >= min_handles;
}

TrainReport train_stats(const Corpus& corpus, const Partition& partition, std::size_t min_handles) {
    TrainReport report;
    report.per_user.resize(corpus.core_count());
    for (NodeId u = 0; u < corpus.core_count(); ++u) report.per_user[u].user = u;

    const auto handle_index = corpus.screen_name_index();
    for (const Tweet& t : corpus.tweets.all()) {
        if (t.is_retweet) continue;  // reposting a train is not conducting one
        if (!is_follow_train(t, min_handles)) continue;
        ++report.total_trains;
        ++report.per_user[t.user].conducts;
        for (const std::string& h : distinct_handles(t)) {
            auto it = handle_index.find(h);
            if (it != handle_index.end()) ++report.per_user[it->second].rides;
        }
    }

    std::map<std::int32_t, std::size_t> size;
    std::map<std::int32_t, double> rides, conducts;
    for (NodeId u = 0; u < partition.assignment.size(); ++u) {
        const std::int32_t c = partition.assignment[u];
        ++size[c];
        rides[c] += static_cast<double>(report.per_user[u].rides);
        conducts[c] += static_cast<double>(report.per_user[u].conducts);
    }
    for (const auto& [c, n] : size) {
        report.mean_rides[c] = rides[c] / static_cast<double>(n);
        report.mean_conducts[c] = conducts[c] / static_cast<double>(n);
    }
    return report;
}

std::map<std::int32_t, std::optional<double>> automation_ratio(const Partition& partition,
                                                               const LabelStore& labels) {
    std::map<std::int32_t, std::size_t> fb, dnfb;
    for (const auto& cs : partition.communities) {
        fb[cs.community_id] = 0;
        dnfb[cs.community_id] = 0;
    }
    for (NodeId u = 0; u < partition.assignment.size(); ++u) {
        const LabelRecord* r = labels.find(u);
        if (r == nullptr || !r->followed_back) continue;
        const std::int32_t c = partition.assignment[u];
        ++fb[c];
        if (r->followed_dnfb && *r->followed_dnfb) ++dnfb[c];
    }
    std::map<std::int32_t, std::optional<double>> out;
    for (const auto& [c, n] : fb) {
        if (n == 0) {
            out[c] = std::nullopt;
        } else {
            out[c] = static_cast<double>(dnfb[c]) / static_cast<double>(n);
        }
    }
    return out;
}

SuspensionStats suspension_stats(const Corpus& corpus, const Partition& partition) {
    SuspensionStats s;
    s.total_accounts = corpus.core_count();
    for (NodeId u = 0; u < corpus.core_count(); ++u) {
        const Account& a = corpus.accounts[u];
        if (a.suspended) ++s.suspended_total;
        if (a.deleted) ++s.deleted_total;

        const LabelRecord* r = corpus.labels.find(u);
        const bool fb = r != nullptr && r->followed_back;
        const bool automated = fb && r->followed_dnfb && *r->followed_dnfb;
        const bool in_kept_community = u < partition.assignment.size() &&
                                       partition.assignment[u] != partition.none_id;
        if (fb) {
            ++s.fb_accounts;
            if (a.suspended) ++s.fb_suspended;
            if (automated) {
                ++s.automated_fb_accounts;
                if (a.suspended) ++s.automated_fb_suspended;
            }
        } else if (in_kept_community) {
            ++s.community_non_fb_accounts;
            if (a.suspended) ++s.community_non_fb_suspended;
        } else {
            ++s.baseline_accounts;
            if (a.suspended) ++s.baseline_suspended;
        }
    }
    if (s.fb_accounts > 0) {
        s.fb_rate = static_cast<double>(s.fb_suspended) / static_cast<double>(s.fb_accounts);
    }
    if (s.baseline_accounts > 0) {
        s.baseline_rate = static_cast<double>(s.baseline_suspended) / static_cast<double>(s.baseline_accounts);
    }
    if (s.fb_rate && s.baseline_rate && *s.baseline_rate > 0.0) {
        s.relative_rate = *s.fb_rate / *s.baseline_rate;
    }
    return s;
}

}  // namespace fbnet
