#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbnet/synth.hpp"

namespace fbnet {

enum class Strategy { random_sample, snowball, ratio_filter, dnfb_pass };

Strategy strategy_from_string(const std::string& s);
const char* strategy_name(Strategy s);

struct HoneypotConfig {
    std::size_t honeypots = 5;
    std::int64_t poll_interval_s = 300;   // followers checked every 5 minutes
    std::size_t daily_limit = 400;        // per-honeypot follow budget per day
    std::size_t seed_phase_budget = 4246; // random discovery before snowball
    std::size_t snowball_seeds = 15;
    std::size_t snowball_budget = 3577;   // used by the full dnfb protocol
    double ratio_band_lo = 0.95;
    double ratio_band_hi = 1.0;
};

struct FollowEvent {
    std::int64_t time_s = 0;   // when the follow was issued
    int honeypot = 0;
    NodeId target = 0;
    std::string phase;         // random | snowball | ratio_filter | dnfb | unsolicited
    bool followed_back = false;
    std::int64_t observed_response_s = -1;  // multiple of the poll interval
};

struct PhaseStats {
    std::string phase;
    std::size_t follows = 0;
    std::size_t responses = 0;
    double rate = 0.0;
};

struct HoneypotResult {
    std::vector<FollowEvent> log;
    std::vector<LabelRecord> labels;
    std::vector<PhaseStats> phases;
    // Over observed response times of regular phases (not DNFB).
    std::size_t responses_total = 0;
    double frac_within_1h = 0.0;
    double frac_within_5min = 0.0;

    const PhaseStats* phase(const std::string& name) const;
};

// Discrete-event simulation of the honeypot protocol against a synthetic
// corpus's latent dispositions. Honeypots issue follows round-robin at the
// 400/day/account pace; responses are observed at poll-interval granularity.
// budget caps the strategy's own phase (snowball and dnfb runs execute their
// discovery pre-phases at the configured budgets first).
HoneypotResult honeypot_protocol(const SynthCorpus& synth, Strategy strategy, std::size_t budget,
                                 const HoneypotConfig& config, std::uint64_t seed);

void save_follow_log_csv(const HoneypotResult& result, const std::vector<std::string>& node_ids,
                         const std::string& path);

}  // namespace fbnet
