#include "fbnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "fbnet/errors.hpp"
#include "fbnet/rng.hpp"

namespace fbnet {

namespace {

using nlohmann::json;

constexpr double kGlobalResponseMedianHours = 7.6;

// Follow-back delay model: a fast (likely scripted) component plus a heavy
// lognormal tail, calibrated so that globally ~10% of responses land within
// 5 minutes, ~22-23% within an hour and the median sits at 7.6 h.
double draw_delay_s(Rng& rng, double median_scale) {
    double minutes;
    if (rng.next_bool(0.10)) {
        minutes = rng.next_lognormal(2.5, 0.5);
    } else {
        minutes = rng.next_lognormal(620.6, 2.2026);
    }
    minutes = std::min(minutes * median_scale, 229.0 * 24.0 * 60.0);
    return std::max(10.0, minutes * 60.0);
}

std::string node_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "u%06zu", i);
    return buf;
}

struct MemberLayout {
    std::size_t offset = 0;
    std::size_t size = 0;
    std::size_t n_fb = 0;        // planted follow-back slots at the front
    std::size_t n_peripheral = 0;  // promoted one-way slots at the back
    std::size_t core() const { return size - n_peripheral; }
};

void validate_spec(const CommunitySpec& s) {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (s.size < 2) throw ConfigError("spec '" + s.label + "': size must be >= 2");
    if (!in01(s.follow_back_ratio) || !in01(s.automation_ratio) || !in01(s.intra_mutual_prob) ||
        !in01(s.inter_edge_prob) || !in01(s.retweet_ratio_mean) || !in01(s.peripheral_fraction) ||
        !in01(s.peripheral_in_prob)) {
        throw ConfigError("spec '" + s.label + "': ratios must lie in [0,1]");
    }
    if (s.intra_mutual_prob <= s.inter_edge_prob) {
        throw ConfigError("spec '" + s.label + "': intra_mutual_prob must exceed inter_edge_prob");
    }
    if (s.follow_back_ratio + s.peripheral_fraction > 1.0 + 1e-9) {
        throw ConfigError("spec '" + s.label + "': peripheral fraction overlaps follow-back members");
    }
    if (s.coordination_pattern != "none" && s.coordination_pattern != "weak-broad" &&
        s.coordination_pattern != "strong-narrow") {
        throw ConfigError("spec '" + s.label + "': unknown coordination_pattern");
    }
    if (s.response_time_median_hours <= 0.0 || s.age_median_years <= 0.0) {
        throw ConfigError("spec '" + s.label + "': medians must be positive");
    }
}

}  // namespace

SynthCorpus generate(const std::vector<CommunitySpec>& specs, const SynthOptions& options,
                     UnixTime pivot, std::uint64_t seed) {
    for (const CommunitySpec& s : specs) validate_spec(s);
    std::size_t members_total = 0;
    for (const CommunitySpec& s : specs) members_total += s.size;
    if (members_total + options.background_accounts < 2) {
        throw ConfigError("generate: need at least 2 accounts");
    }

    SynthCorpus out;
    out.specs = specs;
    out.pivot = pivot;
    Corpus& corpus = out.corpus;

    std::vector<MemberLayout> layout(specs.size());
    {
        std::size_t offset = 0;
        for (std::size_t c = 0; c < specs.size(); ++c) {
            layout[c].offset = offset;
            layout[c].size = specs[c].size;
            layout[c].n_peripheral =
                static_cast<std::size_t>(std::llround(specs[c].peripheral_fraction * specs[c].size));
            layout[c].n_fb =
                static_cast<std::size_t>(std::llround(specs[c].follow_back_ratio * specs[c].size));
            layout[c].n_fb = std::min(layout[c].n_fb, layout[c].core());
            offset += specs[c].size;
        }
    }
    const std::size_t n_core = members_total + options.background_accounts;

    out.planted.assign(n_core, {});
    out.planted_assignment.assign(n_core, -1);

    Rng rng(seed);

    // --- latent dispositions -------------------------------------------------
    for (std::size_t c = 0; c < specs.size(); ++c) {
        const MemberLayout& lay = layout[c];
        const double scale = specs[c].response_time_median_hours / kGlobalResponseMedianHours;
        for (std::size_t k = 0; k < lay.size; ++k) {
            const std::size_t u = lay.offset + k;
            PlantedAccount& p = out.planted[u];
            p.block = static_cast<std::int32_t>(c);
            out.planted_assignment[u] = static_cast<std::int32_t>(c);
            const bool fb_slot = k < lay.n_fb;
            p.follow_back = rng.next_bool(fb_slot ? options.member_follow_back_prob
                                                  : options.background_follow_back_prob);
            p.automated = p.follow_back && rng.next_bool(fb_slot ? specs[c].automation_ratio : 0.1);
            p.unsolicited = p.follow_back && rng.next_bool(options.unsolicited_prob);
            p.delay_s = draw_delay_s(rng, scale);
            p.dnfb_delay_s = std::max(60.0, rng.next_lognormal(8.0 * 3600.0, 1.5));
        }
    }
    for (std::size_t u = members_total; u < n_core; ++u) {
        PlantedAccount& p = out.planted[u];
        p.block = -1;
        p.follow_back = rng.next_bool(options.background_follow_back_prob);
        p.automated = p.follow_back && rng.next_bool(0.1);
        p.unsolicited = false;
        p.delay_s = draw_delay_s(rng, 1.0);
        p.dnfb_delay_s = std::max(60.0, rng.next_lognormal(8.0 * 3600.0, 1.5));
    }

    // --- edges ------------------------------------------------------------------
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::size_t> mutual_degree(n_core, 0);

    for (std::size_t c = 0; c < specs.size(); ++c) {
        const MemberLayout& lay = layout[c];
        const std::size_t core = lay.core();
        for (std::size_t i = 0; i < core; ++i) {
            for (std::size_t j = i + 1; j < core; ++j) {
                if (rng.next_bool(specs[c].intra_mutual_prob)) {
                    const NodeId u = static_cast<NodeId>(lay.offset + i);
                    const NodeId v = static_cast<NodeId>(lay.offset + j);
                    edges.emplace_back(u, v);
                    edges.emplace_back(v, u);
                    ++mutual_degree[u];
                    ++mutual_degree[v];
                }
            }
        }
        // Promoted peripheral accounts: one-way follows from the core.
        for (std::size_t i = 0; i < core; ++i) {
            for (std::size_t k = core; k < lay.size; ++k) {
                if (rng.next_bool(specs[c].peripheral_in_prob)) {
                    edges.emplace_back(static_cast<NodeId>(lay.offset + i),
                                       static_cast<NodeId>(lay.offset + k));
                }
            }
        }
    }

    // Sparse one-way inter-community follows.
    for (std::size_t c = 0; c < specs.size(); ++c) {
        const MemberLayout& lay = layout[c];
        const std::size_t outside = members_total - lay.size;
        if (outside == 0) continue;
        for (std::size_t k = 0; k < lay.core(); ++k) {
            const NodeId u = static_cast<NodeId>(lay.offset + k);
            const std::uint64_t n_out = rng.next_poisson(specs[c].inter_edge_prob * outside);
            for (std::uint64_t e = 0; e < n_out; ++e) {
                std::size_t t = rng.next_below(outside);
                if (t >= lay.offset) t += lay.size;  // skip own community
                edges.emplace_back(u, static_cast<NodeId>(t));
            }
        }
    }

    // Celebrity stubs (one-way out) and background fans (one-way in), scaled
    // by the member's mutual degree so Jaccard reciprocity lands near the
    // configured ratios.
    std::unordered_map<std::size_t, NodeId> celeb_node;
    std::vector<std::string> stub_ids;
    auto celeb = [&](std::size_t k) {
        auto it = celeb_node.find(k);
        if (it != celeb_node.end()) return it->second;
        const NodeId node = static_cast<NodeId>(n_core + stub_ids.size());
        char buf[16];
        std::snprintf(buf, sizeof(buf), "x%05zu", k);
        stub_ids.push_back(buf);
        celeb_node.emplace(k, node);
        return node;
    };
    constexpr std::size_t kCelebPool = 4000;

    for (std::size_t c = 0; c < specs.size(); ++c) {
        const MemberLayout& lay = layout[c];
        for (std::size_t k = 0; k < lay.core(); ++k) {
            const NodeId u = static_cast<NodeId>(lay.offset + k);
            const bool fb_slot = k < lay.n_fb;
            const double m = static_cast<double>(mutual_degree[u]);
            const double out_ratio =
                (fb_slot ? options.oneway_out_ratio_fb : options.oneway_out_ratio_other) *
                rng.next_lognormal(1.0, 0.3);
            const double fan_ratio =
                (fb_slot ? options.fan_in_ratio_fb : options.fan_in_ratio_other) *
                rng.next_lognormal(1.0, 0.3);

            const std::size_t n_out = static_cast<std::size_t>(std::llround(m * out_ratio));
            std::set<std::size_t> picked;
            while (picked.size() < std::min(n_out, kCelebPool / 2)) {
                picked.insert(rng.next_below(kCelebPool));
            }
            for (std::size_t cel : picked) edges.emplace_back(u, celeb(cel));

            if (options.background_accounts > 0) {
                const std::size_t n_fans = static_cast<std::size_t>(std::llround(m * fan_ratio));
                std::set<std::size_t> fans;
                while (fans.size() < std::min(n_fans, options.background_accounts)) {
                    fans.insert(members_total + rng.next_below(options.background_accounts));
                }
                for (std::size_t f : fans) edges.emplace_back(static_cast<NodeId>(f), u);
            }
        }
    }
    for (std::size_t u = members_total; u < n_core; ++u) {
        const std::size_t n_out = 2 + rng.next_below(6);
        std::set<std::size_t> picked;
        while (picked.size() < n_out) picked.insert(rng.next_below(kCelebPool));
        for (std::size_t cel : picked) edges.emplace_back(static_cast<NodeId>(u), celeb(cel));
    }

    // --- accounts ------------------------------------------------------------------
    // Degrees feed the profile counts, so build the graph first.
    const std::size_t n_nodes = n_core + stub_ids.size();
    corpus.graph = FollowGraph::from_edges(static_cast<NodeId>(n_nodes), std::move(edges));

    corpus.accounts.resize(n_core);
    corpus.node_ids.resize(n_nodes);
    for (std::size_t u = 0; u < n_core; ++u) corpus.node_ids[u] = node_name(u);
    for (std::size_t s = 0; s < stub_ids.size(); ++s) corpus.node_ids[n_core + s] = stub_ids[s];
    for (std::size_t u = 0; u < n_nodes; ++u) {
        corpus.id_index.emplace(corpus.node_ids[u], static_cast<NodeId>(u));
    }

    auto community_of = [&](std::size_t u) -> const CommunitySpec* {
        const std::int32_t b = out.planted[u].block;
        return b < 0 ? nullptr : &specs[b];
    };

    for (std::size_t u = 0; u < n_core; ++u) {
        const CommunitySpec* spec = community_of(u);
        const bool member = spec != nullptr;
        const bool fb_styled = member ? (u - layout[out.planted[u].block].offset <
                                         layout[out.planted[u].block].n_fb)
                                      : (options.background_fb_styled && out.planted[u].follow_back);

        Account& a = corpus.accounts[u];
        a.id = corpus.node_ids[u];
        a.screen_name = (fb_styled ? "fb_" : "acc_") + std::to_string(u);
        a.name = "Account " + std::to_string(u);
        if (rng.next_bool(0.35)) a.description = "profile " + std::to_string(rng.next_below(100000));
        if (rng.next_bool(0.3)) a.location = "loc" + std::to_string(rng.next_below(500));
        if (rng.next_bool(0.2)) a.url = "https://example.org/" + std::to_string(u);

        const double age_median = member ? spec->age_median_years : 3.5;
        const double age_mult = fb_styled ? options.age_mult_fb : options.age_mult_other;
        const double age = std::max(0.02, rng.next_lognormal(age_median * age_mult, 0.45));
        a.created_at = pivot - static_cast<UnixTime>(age * kSecondsPerYear);

        const double total_median = member ? (fb_styled ? options.fb_profile_total_median
                                                        : options.other_profile_total_median)
                                           : (fb_styled ? options.fb_profile_total_median
                                                        : options.background_profile_total_median);
        const double total = rng.next_lognormal(total_median, 0.55);
        double ratio;
        if (fb_styled) {
            ratio = rng.next_bool(options.fb_ratio_band_prob) ? rng.next_range(0.95, 1.0)
                                                              : std::min(3.0, rng.next_lognormal(0.9, 0.25));
        } else if (member) {
            ratio = rng.next_lognormal(1.0, 0.3);
        } else {
            ratio = rng.next_lognormal(0.55, 0.6);
        }
        a.followings_count = std::max<std::int64_t>(corpus.graph.out_degree(static_cast<NodeId>(u)),
                                                    static_cast<std::int64_t>(std::llround(total)));
        a.followers_count = std::max<std::int64_t>(corpus.graph.in_degree(static_cast<NodeId>(u)),
                                                   static_cast<std::int64_t>(std::llround(total * ratio)));
        a.statuses_count = static_cast<std::int64_t>(rng.next_lognormal(fb_styled ? 5500.0 : 6100.0, 0.9));
        a.likes_count = static_cast<std::int64_t>(rng.next_lognormal(fb_styled ? 10400.0 : 7600.0, 1.0));

        const PlantedAccount& p = out.planted[u];
        double susp_rate;
        if (p.follow_back) {
            susp_rate = p.automated ? options.suspension_rate_auto_fb : options.suspension_rate_fb;
        } else if (member) {
            susp_rate = options.suspension_rate_member;
        } else {
            susp_rate = options.suspension_rate_background;
        }
        a.suspended = rng.next_bool(susp_rate);
        a.deleted = rng.next_bool(options.deletion_rate);
    }

    // --- tweets -------------------------------------------------------------------
    corpus.tweets.reset(n_nodes);
    if (options.tweets_max > 0) {
        std::size_t tweet_serial = 0;
        for (std::size_t c = 0; c < specs.size(); ++c) {
            const CommunitySpec& spec = specs[c];
            const MemberLayout& lay = layout[c];
            const std::size_t subgroup =
                spec.coordination_pattern == "strong-narrow"
                    ? std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(0.10 * lay.size)))
                    : 0;
            const double mention_mean = spec.train_conducts_mean > 0.0
                                            ? spec.train_rides_mean / spec.train_conducts_mean
                                            : 0.0;
            const bool reply_heavy = spec.retweet_ratio_mean < 0.25;

            for (std::size_t k = 0; k < lay.size; ++k) {
                const NodeId u = static_cast<NodeId>(lay.offset + k);
                const bool fb_slot = k < lay.n_fb;
                const bool in_subgroup = subgroup > 0 && k >= lay.core() - std::min(subgroup, lay.core()) &&
                                         k < lay.core();

                std::size_t n = options.tweets_min +
                                rng.next_below(options.tweets_max - options.tweets_min + 1);
                if (in_subgroup) n = std::max<std::size_t>(n, 75);

                const double rt_share = std::clamp(
                    spec.retweet_ratio_mean * (fb_slot ? 0.92 : 1.06) * rng.next_lognormal(1.0, 0.18),
                    0.0, 0.9);
                std::size_t n_rt = static_cast<std::size_t>(std::llround(rt_share * n));
                if (in_subgroup) n_rt = 61;  // 15 shared targets x4 plus one private pick
                n_rt = std::max<std::size_t>(n_rt, 1);
                const std::size_t n_reply = static_cast<std::size_t>(
                    std::llround((reply_heavy ? 0.45 : 0.10) * n));
                // Quotes carry unique engagement targets, which would dilute
                // the subgroup's cosine similarity.
                std::size_t n_quote =
                    in_subgroup ? 0 : static_cast<std::size_t>(std::llround(0.04 * n));
                // Low-variance draw keeps small-community conduct means on
                // the spec target.
                std::size_t n_train = 0;
                if (spec.train_conducts_mean > 0.0) {
                    n_train = static_cast<std::size_t>(std::floor(spec.train_conducts_mean));
                    if (rng.next_bool(spec.train_conducts_mean - std::floor(spec.train_conducts_mean))) {
                        ++n_train;
                    }
                }
                while (n_rt + n_reply + n_quote + n_train > n) ++n;

                const double engagement_rate =
                    spec.engagement_median * (fb_slot ? options.engagement_mult_fb
                                                      : options.engagement_mult_other) *
                    rng.next_lognormal(1.0, 0.5) / static_cast<double>(n);

                // Chronological spread over the year before the pivot.
                std::vector<UnixTime> times(n);
                for (auto& t : times) {
                    t = pivot - 3600 - static_cast<UnixTime>(rng.next_below(365 * 86400 - 7200));
                }
                std::sort(times.begin(), times.end());

                // Weak-broad members spread moderate engagement over a
                // medium-popularity pool: enough shared mass for weak pairwise
                // similarity, never idf-zero.
                std::vector<std::size_t> broad_targets;
                if (spec.coordination_pattern == "weak-broad" && !in_subgroup) {
                    const std::size_t distinct = 10 + rng.next_below(5);
                    std::set<std::size_t> picks;
                    while (picks.size() < distinct) picks.insert(rng.next_below(30));
                    broad_targets.assign(picks.begin(), picks.end());
                }

                std::size_t shared_emitted = 0;
                std::size_t rt_emitted = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    Tweet t;
                    t.id = "t" + std::to_string(tweet_serial++);
                    t.user = u;
                    t.created_at = times[i];
                    t.like_count = static_cast<std::int64_t>(rng.next_poisson(0.7 * engagement_rate));
                    t.retweet_count = static_cast<std::int64_t>(rng.next_poisson(0.3 * engagement_rate));

                    if (i < n_rt) {
                        t.is_retweet = true;
                        if (in_subgroup && shared_emitted < 60) {
                            // 15 shared targets engaged 4x each: the tight
                            // coordination clique.
                            const std::size_t target = shared_emitted % 15;
                            t.retweeted_user_id = "src_" + spec.label + "_" + std::to_string(target);
                            t.text = "shared post " + spec.label + " " + std::to_string(target);
                            ++shared_emitted;
                        } else if (in_subgroup && shared_emitted == 60) {
                            t.retweeted_user_id = "priv_" + spec.label + "_" + std::to_string(k);
                            t.text = "private pick " + std::to_string(u);
                            ++shared_emitted;
                        } else if (!broad_targets.empty() && rt_emitted >= 2) {
                            // Cycle the member's pool picks so each carries
                            // tf of roughly 2-3.
                            const std::size_t target =
                                broad_targets[(rt_emitted - 2) % broad_targets.size()];
                            t.retweeted_user_id = "pop_" + spec.label + "_" + std::to_string(target);
                            t.text = "popular post " + spec.label + " " + std::to_string(target);
                        } else if (rng.next_bool(0.05)) {
                            // Occasional community-popular pick outside the
                            // weak-broad pattern.
                            const std::size_t target = rng.next_below(20);
                            t.retweeted_user_id = "pop_" + spec.label + "_" + std::to_string(target);
                            t.text = "popular post " + spec.label + " " + std::to_string(target);
                        } else {
                            const std::size_t target = rng.next_below(2000000);
                            t.retweeted_user_id = "lone_" + std::to_string(target);
                            t.text = "post " + std::to_string(target);
                        }
                        ++rt_emitted;
                    } else if (i < n_rt + n_reply) {
                        t.is_reply = true;
                        t.text = "reply " + std::to_string(rng.next_below(1000000));
                        t.mentions.push_back("acc_" + std::to_string(lay.offset + rng.next_below(lay.size)));
                    } else if (i < n_rt + n_reply + n_quote) {
                        t.is_quote = true;
                        const std::size_t target = rng.next_below(2000000);
                        t.retweeted_user_id = "lone_" + std::to_string(target);
                        t.text = "quote of post " + std::to_string(target);
                    } else if (i < n_rt + n_reply + n_quote + n_train) {
                        // Follow train: >= 5 distinct handles, a calibrated
                        // share of them community members.
                        std::size_t member_mentions =
                            static_cast<std::size_t>(std::floor(mention_mean)) +
                            (rng.next_bool(mention_mean - std::floor(mention_mean)) ? 1 : 0);
                        member_mentions = std::min(member_mentions, lay.size - 1);
                        const std::size_t total_handles = std::max<std::size_t>(5, member_mentions);
                        std::set<std::size_t> targets;
                        while (targets.size() < member_mentions) {
                            const std::size_t other = lay.offset + rng.next_below(lay.size);
                            if (other != u) targets.insert(other);
                        }
                        t.text = "follow train " + std::to_string(rng.next_below(100000));
                        for (std::size_t m : targets) {
                            t.mentions.push_back(corpus.accounts[m].screen_name);
                        }
                        for (std::size_t e = member_mentions; e < total_handles; ++e) {
                            t.mentions.push_back("Ext_" + std::to_string(rng.next_below(1000000)));
                        }
                        t.hashtags.push_back("#train_" + spec.label);
                    } else {
                        t.text = "post " + std::to_string(rng.next_below(10000000)) + " from " +
                                 std::to_string(u);
                        const std::size_t n_tags = rng.next_below(3);
                        for (std::size_t g = 0; g < n_tags; ++g) {
                            std::size_t tag = 12;
                            while (tag >= 12) {
                                tag = static_cast<std::size_t>(
                                    std::floor(std::pow(rng.next_double(), 1.7) * 12.0));
                            }
                            t.hashtags.push_back("#" + spec.label + "_t" + std::to_string(tag));
                        }
                        if (fb_slot && rng.next_bool(0.3)) t.hashtags.push_back("#followback");
                    }
                    corpus.tweets.add(std::move(t));
                }
            }
        }
    }

    // --- labels ---------------------------------------------------------------------
    corpus.labels.reset(n_nodes);
    for (std::size_t u = 0; u < n_core; ++u) {
        const PlantedAccount& p = out.planted[u];
        LabelRecord r;
        r.user = static_cast<NodeId>(u);
        r.followed_back = p.follow_back;
        r.unsolicited = p.follow_back && p.unsolicited;
        if (p.follow_back && !r.unsolicited) {
            const std::int64_t observed =
                static_cast<std::int64_t>(std::ceil(p.delay_s / 300.0)) * 300;
            r.response_time_s = observed;
        }
        if (p.follow_back) r.followed_dnfb = p.automated;
        corpus.labels.add(std::move(r));
    }

    return out;
}

// --- persistence -----------------------------------------------------------------

void save_synth(const SynthCorpus& synth, const std::string& dir) {
    save_corpus(synth.corpus, dir);
    json j;
    j["pivot"] = format_iso8601(synth.pivot);
    json jc = json::array();
    for (const CommunitySpec& s : synth.specs) {
        jc.push_back({{"label", s.label},
                      {"size", s.size},
                      {"follow_back_ratio", s.follow_back_ratio},
                      {"automation_ratio", s.automation_ratio},
                      {"intra_mutual_prob", s.intra_mutual_prob},
                      {"inter_edge_prob", s.inter_edge_prob},
                      {"response_time_median_hours", s.response_time_median_hours},
                      {"age_median_years", s.age_median_years},
                      {"engagement_median", s.engagement_median},
                      {"retweet_ratio_mean", s.retweet_ratio_mean},
                      {"train_rides_mean", s.train_rides_mean},
                      {"train_conducts_mean", s.train_conducts_mean},
                      {"coordination_pattern", s.coordination_pattern},
                      {"peripheral_fraction", s.peripheral_fraction},
                      {"peripheral_in_prob", s.peripheral_in_prob}});
    }
    j["communities"] = std::move(jc);
    json ja = json::array();
    for (std::size_t u = 0; u < synth.planted.size(); ++u) {
        const PlantedAccount& p = synth.planted[u];
        ja.push_back({{"id", synth.corpus.node_ids[u]},
                      {"block", p.block},
                      {"follow_back", p.follow_back},
                      {"automated", p.automated},
                      {"unsolicited", p.unsolicited},
                      {"delay_s", p.delay_s},
                      {"dnfb_delay_s", p.dnfb_delay_s}});
    }
    j["accounts"] = std::move(ja);
    std::ofstream out(dir + "/planted.json", std::ios::binary);
    if (!out) throw DataError("cannot write " + dir + "/planted.json");
    out << j.dump();
}

SynthCorpus load_synth(const std::string& dir) {
    SynthCorpus synth;
    synth.corpus = load_corpus(dir + "/accounts.jsonl", dir + "/edges.csv", dir + "/tweets.jsonl",
                               dir + "/labels.jsonl");
    std::ifstream in(dir + "/planted.json");
    if (!in) throw DataError("cannot open " + dir + "/planted.json");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError(dir + "/planted.json: malformed JSON");
    synth.pivot = parse_iso8601(j.at("pivot").get<std::string>());
    for (const auto& jc : j.at("communities")) {
        CommunitySpec s;
        s.label = jc.at("label").get<std::string>();
        s.size = jc.at("size").get<std::size_t>();
        s.follow_back_ratio = jc.at("follow_back_ratio").get<double>();
        s.automation_ratio = jc.at("automation_ratio").get<double>();
        s.intra_mutual_prob = jc.at("intra_mutual_prob").get<double>();
        s.inter_edge_prob = jc.at("inter_edge_prob").get<double>();
        s.response_time_median_hours = jc.at("response_time_median_hours").get<double>();
        s.age_median_years = jc.at("age_median_years").get<double>();
        s.engagement_median = jc.at("engagement_median").get<double>();
        s.retweet_ratio_mean = jc.at("retweet_ratio_mean").get<double>();
        s.train_rides_mean = jc.at("train_rides_mean").get<double>();
        s.train_conducts_mean = jc.at("train_conducts_mean").get<double>();
        s.coordination_pattern = jc.at("coordination_pattern").get<std::string>();
        s.peripheral_fraction = jc.at("peripheral_fraction").get<double>();
        s.peripheral_in_prob = jc.at("peripheral_in_prob").get<double>();
        synth.specs.push_back(std::move(s));
    }
    synth.planted.resize(synth.corpus.core_count());
    synth.planted_assignment.assign(synth.corpus.core_count(), -1);
    for (const auto& jp : j.at("accounts")) {
        const NodeId u = synth.corpus.node_of(jp.at("id").get<std::string>());
        PlantedAccount& p = synth.planted[u];
        p.block = jp.at("block").get<std::int32_t>();
        p.follow_back = jp.at("follow_back").get<bool>();
        p.automated = jp.at("automated").get<bool>();
        p.unsolicited = jp.at("unsolicited").get<bool>();
        p.delay_s = jp.at("delay_s").get<double>();
        p.dnfb_delay_s = jp.at("dnfb_delay_s").get<double>();
        synth.planted_assignment[u] = p.block;
    }
    return synth;
}

void save_specs_json(const std::vector<CommunitySpec>& specs, const SynthOptions& o,
                     const std::string& path) {
    json j;
    j["options"] = {{"background_accounts", o.background_accounts},
                    {"member_follow_back_prob", o.member_follow_back_prob},
                    {"background_follow_back_prob", o.background_follow_back_prob},
                    {"background_fb_styled", o.background_fb_styled},
                    {"tweets_min", o.tweets_min},
                    {"tweets_max", o.tweets_max},
                    {"fb_profile_total_median", o.fb_profile_total_median},
                    {"other_profile_total_median", o.other_profile_total_median},
                    {"background_profile_total_median", o.background_profile_total_median},
                    {"fb_ratio_band_prob", o.fb_ratio_band_prob},
                    {"fan_in_ratio_fb", o.fan_in_ratio_fb},
                    {"fan_in_ratio_other", o.fan_in_ratio_other},
                    {"oneway_out_ratio_fb", o.oneway_out_ratio_fb},
                    {"oneway_out_ratio_other", o.oneway_out_ratio_other},
                    {"age_mult_fb", o.age_mult_fb},
                    {"age_mult_other", o.age_mult_other},
                    {"engagement_mult_fb", o.engagement_mult_fb},
                    {"engagement_mult_other", o.engagement_mult_other},
                    {"suspension_rate_auto_fb", o.suspension_rate_auto_fb},
                    {"suspension_rate_fb", o.suspension_rate_fb},
                    {"suspension_rate_member", o.suspension_rate_member},
                    {"suspension_rate_background", o.suspension_rate_background},
                    {"deletion_rate", o.deletion_rate},
                    {"unsolicited_prob", o.unsolicited_prob}};
    json jc = json::array();
    for (const CommunitySpec& s : specs) {
        jc.push_back({{"label", s.label},
                      {"size", s.size},
                      {"follow_back_ratio", s.follow_back_ratio},
                      {"automation_ratio", s.automation_ratio},
                      {"intra_mutual_prob", s.intra_mutual_prob},
                      {"inter_edge_prob", s.inter_edge_prob},
                      {"response_time_median_hours", s.response_time_median_hours},
                      {"age_median_years", s.age_median_years},
                      {"engagement_median", s.engagement_median},
                      {"retweet_ratio_mean", s.retweet_ratio_mean},
                      {"train_rides_mean", s.train_rides_mean},
                      {"train_conducts_mean", s.train_conducts_mean},
                      {"coordination_pattern", s.coordination_pattern},
                      {"peripheral_fraction", s.peripheral_fraction},
                      {"peripheral_in_prob", s.peripheral_in_prob}});
    }
    j["communities"] = std::move(jc);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << "\n";
}

std::pair<std::vector<CommunitySpec>, SynthOptions> load_specs_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError(path + ": malformed spec JSON");
    SynthOptions o;
    if (j.contains("options")) {
        const json& jo = j["options"];
        auto get = [&](const char* key, auto& field) {
            if (jo.contains(key)) field = jo.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("background_accounts", o.background_accounts);
        get("member_follow_back_prob", o.member_follow_back_prob);
        get("background_follow_back_prob", o.background_follow_back_prob);
        get("background_fb_styled", o.background_fb_styled);
        get("tweets_min", o.tweets_min);
        get("tweets_max", o.tweets_max);
        get("fb_profile_total_median", o.fb_profile_total_median);
        get("other_profile_total_median", o.other_profile_total_median);
        get("background_profile_total_median", o.background_profile_total_median);
        get("fb_ratio_band_prob", o.fb_ratio_band_prob);
        get("fan_in_ratio_fb", o.fan_in_ratio_fb);
        get("fan_in_ratio_other", o.fan_in_ratio_other);
        get("oneway_out_ratio_fb", o.oneway_out_ratio_fb);
        get("oneway_out_ratio_other", o.oneway_out_ratio_other);
        get("age_mult_fb", o.age_mult_fb);
        get("age_mult_other", o.age_mult_other);
        get("engagement_mult_fb", o.engagement_mult_fb);
        get("engagement_mult_other", o.engagement_mult_other);
        get("suspension_rate_auto_fb", o.suspension_rate_auto_fb);
        get("suspension_rate_fb", o.suspension_rate_fb);
        get("suspension_rate_member", o.suspension_rate_member);
        get("suspension_rate_background", o.suspension_rate_background);
        get("deletion_rate", o.deletion_rate);
        get("unsolicited_prob", o.unsolicited_prob);
    }
    std::vector<CommunitySpec> specs;
    for (const auto& jc : j.at("communities")) {
        CommunitySpec s;
        s.label = jc.at("label").get<std::string>();
        s.size = jc.at("size").get<std::size_t>();
        s.follow_back_ratio = jc.at("follow_back_ratio").get<double>();
        auto get = [&](const char* key, auto& field) {
            if (jc.contains(key)) field = jc.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("automation_ratio", s.automation_ratio);
        get("intra_mutual_prob", s.intra_mutual_prob);
        get("inter_edge_prob", s.inter_edge_prob);
        get("response_time_median_hours", s.response_time_median_hours);
        get("age_median_years", s.age_median_years);
        get("engagement_median", s.engagement_median);
        get("retweet_ratio_mean", s.retweet_ratio_mean);
        get("train_rides_mean", s.train_rides_mean);
        get("train_conducts_mean", s.train_conducts_mean);
        get("coordination_pattern", s.coordination_pattern);
        get("peripheral_fraction", s.peripheral_fraction);
        get("peripheral_in_prob", s.peripheral_in_prob);
        specs.push_back(std::move(s));
    }
    return {specs, o};
}

namespace {

CommunitySpec make_spec(const std::string& label, std::size_t size, double fbr, double autr,
                        double p_m, double resp_h, double age_y, double eng, double rt,
                        double rides, double conducts, const std::string& pattern) {
    CommunitySpec s;
    s.label = label;
    s.size = size;
    s.follow_back_ratio = fbr;
    s.automation_ratio = autr;
    s.intra_mutual_prob = p_m;
    s.inter_edge_prob = 0.0015;
    s.response_time_median_hours = resp_h;
    s.age_median_years = age_y;
    s.engagement_median = eng;
    s.retweet_ratio_mean = rt;
    s.train_rides_mean = rides;
    s.train_conducts_mean = conducts;
    s.coordination_pattern = pattern;
    return s;
}

std::vector<CommunitySpec> twelve_communities() {
    std::vector<CommunitySpec> specs = {
        make_spec("jp", 430, 0.62, 0.40, 0.18, 7, 1.8, 400, 0.40, 0.0, 0.0, "weak-broad"),
        make_spec("tr", 380, 0.45, 0.55, 0.16, 8, 2.6, 320, 0.44, 5.5, 0.8, "weak-broad"),
        make_spec("ir", 340, 0.60, 0.25, 0.18, 5, 1.6, 300, 0.16, 0.0, 0.0, "strong-narrow"),
        make_spec("us", 300, 0.40, 0.35, 0.18, 5, 3.3, 290, 0.45, 4.0, 0.5, "weak-broad"),
        make_spec("id", 265, 0.50, 0.60, 0.20, 6, 2.2, 330, 0.42, 5.5, 1.0, "none"),
        make_spec("es", 235, 0.55, 0.40, 0.22, 7, 2.0, 300, 0.40, 2.2, 0.46, "strong-narrow"),
        make_spec("pk", 205, 0.42, 0.71, 0.24, 4, 2.4, 300, 0.43, 13.0, 1.5, "strong-narrow"),
        make_spec("ru", 180, 0.38, 0.69, 0.26, 9, 2.8, 280, 0.46, 0.0, 0.0, "weak-broad"),
        make_spec("usfr", 160, 0.14, 0.46, 0.28, 10, 4.5, 200, 0.42, 0.25, 0.5, "strong-narrow"),
        make_spec("gr", 145, 0.13, 0.24, 0.30, 11, 4.8, 180, 0.44, 0.0, 0.0, "weak-broad"),
        make_spec("kr", 135, 0.11, 0.02, 0.32, 6, 2.1, 430, 0.50, 0.0, 0.0, "none"),
        make_spec("th", 133, 0.10, 0.28, 0.30, 7, 2.3, 340, 0.45, 0.0, 0.0, "strong-narrow"),
    };
    // Thai-style periphery: promoted accounts with inbound-only links.
    specs.back().peripheral_fraction = 0.20;
    specs.back().peripheral_in_prob = 0.94;
    return specs;
}

}  // namespace

std::pair<std::vector<CommunitySpec>, SynthOptions> preset_specs(const std::string& name) {
    if (name == "default") {
        return {twelve_communities(), SynthOptions{}};
    }
    if (name == "honeypot") {
        // Doubled community sizes give the snowball phase realistic follower
        // pools; the large background pool sets the random-sample base rate.
        std::vector<CommunitySpec> specs = twelve_communities();
        for (CommunitySpec& s : specs) {
            s.response_time_median_hours = kGlobalResponseMedianHours;
            s.size *= 2;
        }
        SynthOptions o;
        o.background_accounts = 97600;
        o.tweets_min = 0;
        o.tweets_max = 0;
        o.fan_in_ratio_fb = 0.30;
        o.fan_in_ratio_other = 0.14;
        return {specs, o};
    }
    if (name == "separable") {
        std::vector<CommunitySpec> specs = {
            make_spec("sa", 300, 0.60, 0.5, 0.20, 7, 2.0, 420, 0.40, 0, 0, "none"),
            make_spec("sb", 280, 0.55, 0.5, 0.20, 7, 2.2, 400, 0.40, 0, 0, "none"),
            make_spec("sc", 260, 0.50, 0.5, 0.22, 7, 2.4, 380, 0.40, 0, 0, "none"),
            make_spec("sd", 240, 0.45, 0.5, 0.22, 7, 2.6, 360, 0.42, 0, 0, "none"),
            make_spec("se", 220, 0.40, 0.5, 0.24, 7, 2.8, 340, 0.42, 0, 0, "none"),
            make_spec("sf", 200, 0.35, 0.5, 0.24, 7, 3.0, 320, 0.42, 0, 0, "none"),
            make_spec("sg", 200, 0.30, 0.5, 0.26, 7, 3.2, 300, 0.44, 0, 0, "none"),
            make_spec("sh", 180, 0.60, 0.5, 0.26, 7, 2.0, 420, 0.44, 0, 0, "none"),
            make_spec("si", 180, 0.45, 0.5, 0.28, 7, 2.6, 360, 0.44, 0, 0, "none"),
            make_spec("sj", 170, 0.35, 0.5, 0.28, 7, 3.0, 320, 0.46, 0, 0, "none"),
            make_spec("sk", 160, 0.50, 0.5, 0.30, 7, 2.4, 380, 0.46, 0, 0, "none"),
            make_spec("sl", 160, 0.25, 0.5, 0.30, 7, 3.4, 280, 0.46, 0, 0, "none"),
        };
        SynthOptions o;
        o.background_accounts = 200;
        o.member_follow_back_prob = 1.0;
        o.background_follow_back_prob = 0.5;
        o.background_fb_styled = true;
        o.age_mult_fb = 0.7;
        o.age_mult_other = 1.8;
        o.other_profile_total_median = 600.0;
        o.engagement_mult_fb = 1.6;
        o.engagement_mult_other = 0.6;
        o.unsolicited_prob = 0.0;
        return {specs, o};
    }
    throw ConfigError("unknown preset '" + name + "' (expected default, honeypot or separable)");
}

}  // namespace fbnet
