#include "fbnet/honeypot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "fbnet/errors.hpp"
#include "fbnet/rng.hpp"

namespace fbnet {

Strategy strategy_from_string(const std::string& s) {
    if (s == "random") return Strategy::random_sample;
    if (s == "snowball") return Strategy::snowball;
    if (s == "ratio_filter" || s == "ratio-filter") return Strategy::ratio_filter;
    if (s == "dnfb_pass" || s == "dnfb") return Strategy::dnfb_pass;
    throw ConfigError("unknown honeypot strategy '" + s + "'");
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::random_sample: return "random";
        case Strategy::snowball: return "snowball";
        case Strategy::ratio_filter: return "ratio_filter";
        case Strategy::dnfb_pass: return "dnfb_pass";
    }
    return "?";
}

const PhaseStats* HoneypotResult::phase(const std::string& name) const {
    for (const PhaseStats& p : phases) {
        if (p.phase == name) return &p;
    }
    return nullptr;
}

namespace {

struct Sim {
    const SynthCorpus& synth;
    const HoneypotConfig& config;
    HoneypotResult result;
    std::size_t follow_counter = 0;
    std::vector<bool> followed;  // per core node, any regular phase

    explicit Sim(const SynthCorpus& s, const HoneypotConfig& c)
        : synth(s), config(c), followed(s.corpus.core_count(), false) {}

    // Follows are spaced so each honeypot stays exactly at its daily cap.
    std::int64_t next_time() {
        const std::int64_t spacing =
            static_cast<std::int64_t>(86400.0 / static_cast<double>(config.daily_limit));
        const std::int64_t t =
            static_cast<std::int64_t>(follow_counter / config.honeypots) * spacing;
        return t;
    }

    void run_phase(const std::string& phase, const std::vector<NodeId>& targets) {
        PhaseStats stats;
        stats.phase = phase;
        for (NodeId target : targets) {
            FollowEvent ev;
            ev.time_s = next_time();
            ev.honeypot = static_cast<int>(follow_counter % config.honeypots);
            ++follow_counter;
            ev.target = target;
            ev.phase = phase;
            followed[target] = true;
            const PlantedAccount& p = synth.planted[target];
            if (p.follow_back) {
                ev.followed_back = true;
                ev.observed_response_s =
                    static_cast<std::int64_t>(std::ceil(p.delay_s / config.poll_interval_s)) *
                    config.poll_interval_s;
                ++stats.responses;
            }
            ++stats.follows;
            result.log.push_back(std::move(ev));
        }
        stats.rate = stats.follows == 0
                         ? 0.0
                         : static_cast<double>(stats.responses) / static_cast<double>(stats.follows);
        result.phases.push_back(std::move(stats));
    }

    std::vector<NodeId> positives() const {
        std::vector<NodeId> out;
        for (const FollowEvent& ev : result.log) {
            if (ev.followed_back && ev.phase != "dnfb") out.push_back(ev.target);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

std::vector<NodeId> sample_without_replacement(std::vector<NodeId> pool, std::size_t k, Rng& rng) {
    rng.shuffle(pool);
    if (pool.size() > k) pool.resize(k);
    return pool;
}

}  // namespace

HoneypotResult honeypot_protocol(const SynthCorpus& synth, Strategy strategy, std::size_t budget,
                                 const HoneypotConfig& config, std::uint64_t seed) {
    if (budget < 1) throw ConfigError("honeypot_protocol: budget must be >= 1");
    const Corpus& corpus = synth.corpus;
    Rng rng(seed);
    Sim sim(synth, config);

    auto all_core = [&] {
        std::vector<NodeId> pool(corpus.core_count());
        for (NodeId u = 0; u < pool.size(); ++u) pool[u] = u;
        return pool;
    };

    auto run_random = [&](std::size_t n, const char* phase) {
        sim.run_phase(phase, sample_without_replacement(all_core(), n, rng));
    };

    auto run_snowball = [&](std::size_t n) {
        // Seeds: follow-back accounts discovered in the random phase.
        std::vector<NodeId> pos = sim.positives();
        if (pos.empty()) throw DataError("honeypot_protocol: no positives discovered for snowball");
        const std::vector<NodeId> seeds =
            sample_without_replacement(pos, config.snowball_seeds, rng);
        std::set<NodeId> pool_set;
        for (NodeId s : seeds) {
            for (NodeId f : corpus.graph.followers(s)) {
                if (f >= corpus.core_count()) continue;  // stubs have no profiles
                if (sim.followed[f]) continue;
                pool_set.insert(f);
            }
        }
        std::vector<NodeId> pool(pool_set.begin(), pool_set.end());
        sim.run_phase("snowball", sample_without_replacement(std::move(pool), n, rng));
    };

    switch (strategy) {
        case Strategy::random_sample:
            run_random(budget, "random");
            break;
        case Strategy::snowball:
            run_random(config.seed_phase_budget, "random");
            run_snowball(budget);
            break;
        case Strategy::ratio_filter: {
            std::vector<NodeId> pool;
            for (NodeId u = 0; u < corpus.core_count(); ++u) {
                const Account& a = corpus.accounts[u];
                if (a.followings_count <= 0) continue;
                const double r = static_cast<double>(a.followers_count) /
                                 static_cast<double>(a.followings_count);
                if (r >= config.ratio_band_lo && r <= config.ratio_band_hi) pool.push_back(u);
            }
            sim.run_phase("ratio_filter", sample_without_replacement(std::move(pool), budget, rng));
            break;
        }
        case Strategy::dnfb_pass: {
            run_random(config.seed_phase_budget, "random");
            run_snowball(config.snowball_budget);
            std::vector<NodeId> pos = sim.positives();
            if (pos.size() > budget) pos.resize(budget);
            PhaseStats stats;
            stats.phase = "dnfb";
            for (NodeId target : pos) {
                FollowEvent ev;
                ev.time_s = sim.next_time();
                ev.honeypot = static_cast<int>(sim.follow_counter % config.honeypots);
                ++sim.follow_counter;
                ev.target = target;
                ev.phase = "dnfb";
                const PlantedAccount& p = synth.planted[target];
                if (p.automated) {
                    ev.followed_back = true;
                    ev.observed_response_s =
                        static_cast<std::int64_t>(std::ceil(p.dnfb_delay_s / config.poll_interval_s)) *
                        config.poll_interval_s;
                    ++stats.responses;
                }
                ++stats.follows;
                sim.result.log.push_back(std::move(ev));
            }
            stats.rate = stats.follows == 0 ? 0.0
                                            : static_cast<double>(stats.responses) /
                                                  static_cast<double>(stats.follows);
            sim.result.phases.push_back(std::move(stats));
            break;
        }
    }

    // Unsolicited follow-back accounts show up on their own; they carry no
    // response time.
    for (NodeId u = 0; u < corpus.core_count(); ++u) {
        if (!synth.planted[u].unsolicited || sim.followed[u]) continue;
        FollowEvent ev;
        ev.time_s = sim.next_time();
        ev.honeypot = 0;
        ev.target = u;
        ev.phase = "unsolicited";
        ev.followed_back = true;
        sim.result.log.push_back(std::move(ev));
    }

    // Derived labels plus response-time quantiles.
    HoneypotResult& result = sim.result;
    std::vector<bool> labeled(corpus.core_count(), false);
    std::size_t within_1h = 0, within_5m = 0;
    std::vector<std::optional<bool>> dnfb_flag(corpus.core_count());
    for (const FollowEvent& ev : result.log) {
        if (ev.phase == "dnfb") dnfb_flag[ev.target] = ev.followed_back;
    }
    for (const FollowEvent& ev : result.log) {
        if (ev.phase == "dnfb") continue;
        if (labeled[ev.target]) continue;
        labeled[ev.target] = true;
        LabelRecord r;
        r.user = ev.target;
        r.followed_back = ev.followed_back;
        r.unsolicited = ev.phase == "unsolicited";
        if (ev.followed_back && !r.unsolicited) {
            r.response_time_s = ev.observed_response_s;
            ++result.responses_total;
            if (ev.observed_response_s <= 3600) ++within_1h;
            if (ev.observed_response_s <= 300) ++within_5m;
        }
        if (r.followed_back) r.followed_dnfb = dnfb_flag[ev.target];
        result.labels.push_back(std::move(r));
    }
    if (result.responses_total > 0) {
        result.frac_within_1h = static_cast<double>(within_1h) / result.responses_total;
        result.frac_within_5min = static_cast<double>(within_5m) / result.responses_total;
    }
    return result;
}

void save_follow_log_csv(const HoneypotResult& result, const std::vector<std::string>& node_ids,
                         const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << "time_s,honeypot,target,phase,followed_back,observed_response_s\n";
    for (const FollowEvent& ev : result.log) {
        out << ev.time_s << ',' << ev.honeypot << ',' << node_ids[ev.target] << ',' << ev.phase << ','
            << (ev.followed_back ? 1 : 0) << ',' << ev.observed_response_s << "\n";
    }
}

}  // namespace fbnet
