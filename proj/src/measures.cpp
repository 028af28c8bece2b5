#include "fbnet/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fbnet/errors.hpp"
#include "fbnet/log.hpp"

namespace fbnet {

namespace {

std::optional<double> opt(double v) { return v; }

}  // namespace

const std::vector<MeasureDef>& measure_catalog() {
    static const std::vector<MeasureDef> defs = {
        {"response_time_hours", GroupStat::median, [](const MeasureRow& r) { return r.response_time_hours; }},
        {"age_years", GroupStat::median, [](const MeasureRow& r) { return opt(r.age_years); }},
        {"followers", GroupStat::median, [](const MeasureRow& r) { return opt(r.followers); }},
        {"followings", GroupStat::median, [](const MeasureRow& r) { return opt(r.followings); }},
        {"followers_per_age", GroupStat::median, [](const MeasureRow& r) { return opt(r.followers_per_age); }},
        {"followings_per_age", GroupStat::median, [](const MeasureRow& r) { return opt(r.followings_per_age); }},
        {"reciprocity", GroupStat::mean, [](const MeasureRow& r) { return opt(r.reciprocity); }},
        {"statuses", GroupStat::median, [](const MeasureRow& r) { return opt(r.statuses); }},
        {"likes", GroupStat::median, [](const MeasureRow& r) { return opt(r.likes); }},
        {"statuses_per_age", GroupStat::median, [](const MeasureRow& r) { return opt(r.statuses_per_age); }},
        {"likes_per_age", GroupStat::median, [](const MeasureRow& r) { return opt(r.likes_per_age); }},
        {"retweet_ratio", GroupStat::mean, [](const MeasureRow& r) { return r.retweet_ratio; }},
        {"engagements_received", GroupStat::median, [](const MeasureRow& r) { return r.engagements_received; }},
    };
    return defs;
}

std::vector<MeasureRow> compute_measures(const Corpus& corpus, UnixTime pivot) {
    for (const Account& a : corpus.accounts) {
        if (a.created_at >= pivot) {
            throw DataError("compute_measures: pivot must be strictly after every creation date (account " +
                            a.id + ")");
        }
    }
    std::vector<MeasureRow> rows;
    rows.reserve(corpus.labels.size());
    // Ascending node id keeps aggregate summation order fixed.
    for (NodeId u = 0; u < corpus.core_count(); ++u) {
        const LabelRecord* label = corpus.labels.find(u);
        if (label == nullptr) continue;
        const Account& a = corpus.accounts[u];
        MeasureRow r;
        r.user = u;
        r.followed_back = label->followed_back;
        r.age_years = years_between(a.created_at, pivot);
        if (label->response_time_s) {
            r.response_time_hours = static_cast<double>(*label->response_time_s) / 3600.0;
        }
        r.followers = static_cast<double>(a.followers_count);
        r.followings = static_cast<double>(a.followings_count);
        r.statuses = static_cast<double>(a.statuses_count);
        r.likes = static_cast<double>(a.likes_count);
        r.followers_per_age = r.followers / r.age_years;
        r.followings_per_age = r.followings / r.age_years;
        r.statuses_per_age = r.statuses / r.age_years;
        r.likes_per_age = r.likes / r.age_years;
        r.reciprocity = user_reciprocity(corpus.graph, u);

        const auto& tweet_ids = corpus.tweets.of(u);
        if (!tweet_ids.empty()) {
            std::size_t retweets = 0;
            double engagements = 0.0;
            for (std::uint32_t ti : tweet_ids) {
                const Tweet& t = corpus.tweets[ti];
                if (t.is_retweet) ++retweets;
                engagements += static_cast<double>(t.like_count + t.retweet_count);
            }
            r.retweet_ratio = static_cast<double>(retweets) / static_cast<double>(tweet_ids.size());
            r.engagements_received = engagements;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

double group_stat(GroupStat stat, std::span<const double> values) {
    return stat == GroupStat::mean ? stats::mean(values) : stats::median(values);
}

}  // namespace

ComparisonReport binary_comparison(const std::vector<MeasureRow>& rows) {
    ComparisonReport report;
    for (const MeasureRow& r : rows) {
        if (r.followed_back) ++report.n_follow_back;
        else ++report.n_other;
    }
    if (report.n_follow_back == 0 || report.n_other == 0) {
        throw DataError("binary_comparison: both groups must be non-empty");
    }

    for (const MeasureDef& def : measure_catalog()) {
        MeasureComparison cmp;
        cmp.measure = def.name;
        cmp.stat = def.stat;
        std::vector<double> fb, other;
        for (const MeasureRow& r : rows) {
            const auto v = def.value(r);
            if (!v) continue;
            (r.followed_back ? fb : other).push_back(*v);
        }
        if (!fb.empty()) cmp.group_stat_fb = group_stat(def.stat, fb);
        if (!other.empty()) cmp.group_stat_other = group_stat(def.stat, other);
        if (cmp.group_stat_fb && cmp.group_stat_other) {
            cmp.diff = *cmp.group_stat_fb - *cmp.group_stat_other;
            try {
                if (def.stat == GroupStat::mean) {
                    cmp.test = "welch";
                    const auto res = stats::welch_t_test(fb, other);
                    cmp.statistic = res.statistic;
                    cmp.p = res.p;
                } else {
                    cmp.test = "wilcoxon";
                    const auto res = stats::wilcoxon_rank_sum(fb, other);
                    cmp.statistic = res.statistic;
                    cmp.p = res.p;
                }
            } catch (const DataError& e) {
                cmp.note = e.what();
            }
        } else {
            cmp.test = "none";
            cmp.note = "one group has no observations for this measure";
        }
        report.measures.push_back(std::move(cmp));
    }
    return report;
}

std::vector<CommunityCorrelation> community_correlation(const std::vector<MeasureRow>& rows,
                                                        const Partition& partition,
                                                        const std::set<std::int32_t>& exclude,
                                                        bool fb_only) {
    // Follow-back ratio per community over full membership.
    std::map<std::int32_t, std::size_t> comm_size;
    std::map<std::int32_t, std::size_t> comm_fb;
    for (NodeId v = 0; v < partition.assignment.size(); ++v) {
        ++comm_size[partition.assignment[v]];
    }
    std::map<std::int32_t, std::vector<const MeasureRow*>> comm_rows;
    for (const MeasureRow& r : rows) {
        const std::int32_t c = partition.assignment[r.user];
        if (r.followed_back) ++comm_fb[c];
        comm_rows[c].push_back(&r);
    }

    std::vector<std::int32_t> candidates;
    for (const auto& [c, _] : comm_size) {
        if (c == partition.none_id) continue;
        if (exclude.count(c)) continue;
        candidates.push_back(c);
    }
    if (candidates.size() < 3) {
        throw DataError("community_correlation: need >= 3 communities after exclusion, have " +
                        std::to_string(candidates.size()));
    }

    std::vector<CommunityCorrelation> out;
    for (const MeasureDef& def : measure_catalog()) {
        CommunityCorrelation cc;
        cc.measure = def.name;
        std::vector<double> x;  // measure stat per community
        std::vector<double> y;  // follow-back ratio per community
        for (std::int32_t c : candidates) {
            std::vector<double> values;
            for (const MeasureRow* r : comm_rows[c]) {
                if (fb_only && !r->followed_back) continue;
                const auto v = def.value(*r);
                if (v) values.push_back(*v);
            }
            if (values.empty()) {
                cc.dropped.push_back(c);
                continue;
            }
            x.push_back(group_stat(def.stat, values));
            y.push_back(static_cast<double>(comm_fb[c]) / static_cast<double>(comm_size[c]));
        }
        if (!cc.dropped.empty()) {
            log::info("community_correlation: measure '" + def.name + "' dropped " +
                      std::to_string(cc.dropped.size()) + " communities without observations");
        }
        cc.n_communities = x.size();
        try {
            if (x.size() < 3) throw DataError("fewer than 3 communities with observations");
            cc.corr = stats::pearson(x, y);
        } catch (const DataError& e) {
            cc.error = std::string(e.what()) + " (measure=" + def.name + ")";
        }
        out.push_back(std::move(cc));
    }
    return out;
}

}  // namespace fbnet
