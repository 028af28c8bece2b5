#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbnet/corpus.hpp"
#include "fbnet/timeutil.hpp"

namespace fbnet {

// Recipe for one planted community. Calibration targets are medians/means of
// the generated populations; the planted structure must be detectable
// (intra_mutual_prob > inter_edge_prob).
struct CommunitySpec {
    std::string label;
    std::size_t size = 0;
    double follow_back_ratio = 0.0;
    double automation_ratio = 0.0;
    double intra_mutual_prob = 0.0;
    double inter_edge_prob = 0.0;
    double response_time_median_hours = 7.6;
    double age_median_years = 2.5;
    double engagement_median = 200.0;
    double retweet_ratio_mean = 0.4;
    double train_rides_mean = 0.0;
    double train_conducts_mean = 0.0;
    std::string coordination_pattern = "none";  // weak-broad | strong-narrow | none
    // Promoted accounts that receive one-way follows from the core but follow
    // nobody themselves (drawn from the non-follow-back members).
    double peripheral_fraction = 0.0;
    double peripheral_in_prob = 0.0;
};

// Generator-wide knobs. The presets below pin these for the three standard
// corpora (default analysis corpus, honeypot calibration corpus, separable
// classification corpus).
struct SynthOptions {
    std::size_t background_accounts = 150;
    double member_follow_back_prob = 0.98;   // disposition of planted FB members
    double background_follow_back_prob = 0.01;  // coincidental reciprocation
    bool background_fb_styled = false;       // give background positives FB-style profiles

    // Tweet volume per member; max = 0 disables tweet generation entirely.
    std::size_t tweets_min = 40;
    std::size_t tweets_max = 120;

    // Profile count medians (external audience, beyond in-corpus degrees).
    double fb_profile_total_median = 3400.0;
    double other_profile_total_median = 780.0;
    double background_profile_total_median = 600.0;
    double fb_ratio_band_prob = 0.58;  // P(follower/friend ratio lands in [0.95, 1])

    // One-way noise relative to a member's mutual degree: inbound background
    // fans and outbound celebrity follows. Fans keep background accounts
    // attached to communities, so they stay zero outside the honeypot preset
    // (the default corpus wants background in the None group).
    double fan_in_ratio_fb = 0.0;
    double fan_in_ratio_other = 0.0;
    double oneway_out_ratio_fb = 0.04;
    double oneway_out_ratio_other = 1.05;

    // Age multipliers on the community median.
    double age_mult_fb = 0.8;
    double age_mult_other = 1.5;
    // Engagement multipliers on the community median.
    double engagement_mult_fb = 1.35;
    double engagement_mult_other = 0.75;

    double suspension_rate_auto_fb = 0.074;
    double suspension_rate_fb = 0.0614;  // non-automated follow-back accounts
    double suspension_rate_member = 0.049;
    double suspension_rate_background = 0.043;
    double deletion_rate = 0.063;
    double unsolicited_prob = 0.02;
};

// Latent per-account ground truth, the oracle for the honeypot simulation and
// the pipeline tests.
struct PlantedAccount {
    std::int32_t block = -1;  // spec index, -1 for background
    bool follow_back = false;  // would reciprocate a follow
    bool automated = false;    // would also re-follow a DNFB profile
    bool unsolicited = false;  // follows honeypots without being followed
    double delay_s = 0.0;      // latent follow-back delay
    double dnfb_delay_s = 0.0;
};

struct SynthCorpus {
    Corpus corpus;
    std::vector<CommunitySpec> specs;
    std::vector<PlantedAccount> planted;             // per core node
    std::vector<std::int32_t> planted_assignment;    // block per core node (-1 = background)
    UnixTime pivot = 0;
};

SynthCorpus generate(const std::vector<CommunitySpec>& specs, const SynthOptions& options,
                     UnixTime pivot, std::uint64_t seed);

// Corpus files plus planted.json under dir.
void save_synth(const SynthCorpus& synth, const std::string& dir);
SynthCorpus load_synth(const std::string& dir);

// Spec/options file round-trip ({"options": {...}, "communities": [...]}).
void save_specs_json(const std::vector<CommunitySpec>& specs, const SynthOptions& options,
                     const std::string& path);
std::pair<std::vector<CommunitySpec>, SynthOptions> load_specs_json(const std::string& path);

// Presets. "default": 12 communities spanning follow-back ratios 0.10-0.62
// (~3k accounts). "honeypot": same communities inside a large background pool,
// response medians pinned for quantile calibration. "separable": clean labels
// and strong feature gaps for classifier sanity checks.
std::pair<std::vector<CommunitySpec>, SynthOptions> preset_specs(const std::string& name);

}  // namespace fbnet
