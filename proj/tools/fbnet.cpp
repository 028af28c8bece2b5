// Command-line front end: corpus analysis stages, the synthetic-corpus
// generator and the honeypot-protocol simulator.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 stage failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbnet/errors.hpp"
#include "fbnet/honeypot.hpp"
#include "fbnet/log.hpp"
#include "fbnet/pipeline.hpp"
#include "fbnet/synth.hpp"

namespace {

using namespace fbnet;

struct CommonFlags {
    std::string config_path;
    std::string accounts, edges, tweets, labels, out_dir, pivot;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "pipeline config file (INI-style)");
        cmd->add_option("--accounts", accounts, "accounts.jsonl path");
        cmd->add_option("--edges", edges, "edges.csv path");
        cmd->add_option("--tweets", tweets, "tweets.jsonl path");
        cmd->add_option("--labels", labels, "labels.jsonl path");
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--pivot", pivot, "pivot date (ISO-8601, e.g. 2021-11-12T00:00:00Z)");
    }

    PipelineConfig resolve() const {
        PipelineConfig config;
        if (!config_path.empty()) config = PipelineConfig::from_file(config_path);
        if (!accounts.empty()) config.accounts_path = accounts;
        if (!edges.empty()) config.edges_path = edges;
        if (!tweets.empty()) config.tweets_path = tweets;
        if (!labels.empty()) config.labels_path = labels;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!pivot.empty()) config.pivot = pivot;
        return config;
    }
};

// Points the corpus paths at a directory produced by `synth`.
void corpus_dir_defaults(PipelineConfig& config, const std::string& dir) {
    if (dir.empty()) return;
    config.accounts_path = dir + "/accounts.jsonl";
    config.edges_path = dir + "/edges.csv";
    if (std::filesystem::exists(dir + "/tweets.jsonl")) config.tweets_path = dir + "/tweets.jsonl";
    if (std::filesystem::exists(dir + "/labels.jsonl")) config.labels_path = dir + "/labels.jsonl";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"follow-back account analysis toolkit"};
    app.require_subcommand(1);

    CommonFlags flags;

    // Per-stage extra flags.
    std::string corpus_dir;
    std::size_t min_size = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string exclude_csv;
    bool fb_only = false;
    double floor_v = -1.0, step_v = -1.0;
    std::size_t min_handles = 0;
    std::string families_csv;
    std::size_t embed_dim = 0;
    std::string model, split, stages_csv, report_format = "markdown", summary_path;
    std::string synth_spec, synth_preset = "default", synth_out = "synth_corpus";
    std::string hp_strategy = "random", hp_dir;
    std::size_t hp_budget = 4246;

    auto add_common = [&](CLI::App* cmd) {
        flags.attach(cmd);
        cmd->add_option("--corpus-dir", corpus_dir, "directory holding a generated corpus");
        return cmd;
    };
    auto seed_opt = [&](CLI::App* cmd) {
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { seed = s; seed_set = true; }, "random seed");
    };

    CLI::App* c_ingest = add_common(app.add_subcommand("ingest", "load and validate a corpus"));
    (void)c_ingest;
    CLI::App* c_comm = add_common(app.add_subcommand("communities", "detect follow-back communities"));
    c_comm->add_option("--min-size", min_size, "minimum community size (default 100)");
    seed_opt(c_comm);
    CLI::App* c_char = add_common(app.add_subcommand("characterize", "compute account measures and comparisons"));
    c_char->add_option("--exclude-communities", exclude_csv, "community labels to exclude from correlations");
    c_char->add_flag("--fb-only", fb_only, "aggregate only follow-back members per community");
    CLI::App* c_coord = add_common(app.add_subcommand("coordination", "TF-IDF similarity coordination curves"));
    c_coord->add_option("--floor", floor_v, "minimum cosine similarity kept (default 0)");
    c_coord->add_option("--step", step_v, "threshold grid step (default 0.05)");
    CLI::App* c_abuse = add_common(app.add_subcommand("abuse", "follow trains, automation, suspensions"));
    c_abuse->add_option("--min-handles", min_handles, "handles needed to call a tweet a train (default 5)");
    CLI::App* c_feat = add_common(app.add_subcommand("features", "build per-account feature matrices"));
    c_feat->add_option("--families", families_csv, "comma list: profile,tweets,ego,network,embedding");
    c_feat->add_option("--embed-dim", embed_dim, "hashed text embedding width (default 256)");
    CLI::App* c_embed = add_common(app.add_subcommand("embed", "train node2vec embeddings"));
    seed_opt(c_embed);
    CLI::App* c_train = add_common(app.add_subcommand("train", "train a classifier"));
    c_train->add_option("--model", model, "forest | gcn");
    c_train->add_option("--split", split, "random | stratified");
    c_train->add_option("--families", families_csv, "feature families for the model");
    seed_opt(c_train);
    CLI::App* c_eval = add_common(app.add_subcommand("evaluate", "score the trained model"));
    c_eval->add_option("--model", model, "forest | gcn");
    c_eval->add_option("--families", families_csv, "feature families for the model");
    CLI::App* c_run = add_common(app.add_subcommand("run", "run the full pipeline"));
    c_run->add_option("--stages", stages_csv, "comma list of stages (default: all)");
    c_run->add_option("--model", model, "forest | gcn");
    c_run->add_option("--split", split, "random | stratified");
    c_run->add_option("--families", families_csv, "feature families for the model");
    seed_opt(c_run);

    CLI::App* c_synth = app.add_subcommand("synth", "generate a calibrated synthetic corpus");
    c_synth->add_option("--spec", synth_spec, "community spec JSON (overrides --preset)");
    c_synth->add_option("--preset", synth_preset, "default | honeypot | separable");
    c_synth->add_option("--out", synth_out, "output directory")->required();
    seed_opt(c_synth);

    CLI::App* c_hp = app.add_subcommand("honeypot-sim", "simulate the honeypot protocol");
    c_hp->add_option("--corpus-dir", hp_dir, "directory with a generated corpus (needs planted.json)")
        ->required();
    c_hp->add_option("--strategy", hp_strategy, "random | snowball | ratio_filter | dnfb_pass");
    c_hp->add_option("--budget", hp_budget, "follows to issue in the strategy phase");
    c_hp->add_option("--out-dir", flags.out_dir, "output directory");
    seed_opt(c_hp);

    CLI::App* c_report = app.add_subcommand("report", "render summary.json");
    c_report->add_option("--summary", summary_path, "summary.json path")->required();
    c_report->add_option("--format", report_format, "json | csv | markdown");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig config = flags.resolve();
        if (!corpus_dir.empty()) corpus_dir_defaults(config, corpus_dir);
        if (min_size > 0) config.min_size = min_size;
        if (!exclude_csv.empty()) config.set("characterize", "exclude_communities", exclude_csv);
        if (fb_only) config.fb_only = true;
        if (floor_v >= 0.0) config.coordination_floor = floor_v;
        if (step_v > 0.0) config.coordination_step = step_v;
        if (min_handles > 0) config.min_handles = min_handles;
        if (!families_csv.empty()) config.set("features", "families", families_csv);
        if (embed_dim > 0) config.text_dim = embed_dim;
        if (!model.empty()) config.model = model;
        if (!split.empty()) config.split = split;
        if (seed_set) {
            config.community_seed = seed;
            config.split_seed = seed;
            config.node2vec.seed = seed;
        }

        if (app.got_subcommand(c_synth)) {
            auto [specs, options] = synth_spec.empty() ? preset_specs(synth_preset)
                                                       : load_specs_json(synth_spec);
            const UnixTime pivot = parse_iso8601(config.pivot.empty()
                                                     ? std::string("2021-11-12T00:00:00Z")
                                                     : config.pivot);
            const SynthCorpus synth = generate(specs, options, pivot, seed_set ? seed : 42);
            save_synth(synth, synth_out);
            save_specs_json(specs, options, synth_out + "/specs.json");
            std::size_t positives = 0;
            for (const auto& p : synth.planted) positives += p.follow_back;
            log::info("generated " + std::to_string(synth.corpus.core_count()) + " accounts (" +
                      std::to_string(positives) + " follow-back) under " + synth_out);
            return 0;
        }

        if (app.got_subcommand(c_hp)) {
            const SynthCorpus synth = load_synth(hp_dir);
            const Strategy strategy = strategy_from_string(hp_strategy);
            HoneypotConfig hc;
            const HoneypotResult result =
                honeypot_protocol(synth, strategy, hp_budget, hc, seed_set ? seed : 42);
            const std::string dir = flags.out_dir.empty() ? hp_dir : flags.out_dir;
            std::filesystem::create_directories(dir);
            save_follow_log_csv(result, synth.corpus.node_ids, dir + "/follow_log.csv");
            nlohmann::json j;
            j["strategy"] = strategy_name(strategy);
            nlohmann::json phases = nlohmann::json::array();
            for (const PhaseStats& p : result.phases) {
                phases.push_back({{"phase", p.phase},
                                  {"follows", p.follows},
                                  {"responses", p.responses},
                                  {"rate", p.rate}});
                std::printf("%-12s follows=%zu responses=%zu rate=%.4f\n", p.phase.c_str(), p.follows,
                            p.responses, p.rate);
            }
            j["phases"] = std::move(phases);
            j["responses_total"] = result.responses_total;
            j["frac_within_1h"] = result.frac_within_1h;
            j["frac_within_5min"] = result.frac_within_5min;
            std::ofstream out(dir + "/honeypot_stats.json", std::ios::binary);
            out << j.dump(2) << "\n";
            std::printf("responses=%zu within_1h=%.4f within_5min=%.4f\n", result.responses_total,
                        result.frac_within_1h, result.frac_within_5min);
            return 0;
        }

        if (app.got_subcommand(c_report)) {
            std::cout << render_report(summary_path, report_format);
            return 0;
        }

        // Pipeline stages.
        std::filesystem::create_directories(config.out_dir);
        if (app.got_subcommand(c_run)) {
            std::vector<std::string> stages;
            if (!stages_csv.empty()) {
                std::stringstream ss(stages_csv);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    if (!item.empty()) stages.push_back(item);
                }
            }
            run_pipeline(config, stages);
            return 0;
        }
        if (app.got_subcommand(c_ingest)) stage_ingest(config);
        else if (app.got_subcommand(c_comm)) stage_communities(config);
        else if (app.got_subcommand(c_char)) stage_characterize(config);
        else if (app.got_subcommand(c_coord)) stage_coordination(config);
        else if (app.got_subcommand(c_abuse)) stage_abuse(config);
        else if (app.got_subcommand(c_feat)) stage_features(config);
        else if (app.got_subcommand(c_embed)) stage_embed(config);
        else if (app.got_subcommand(c_train)) stage_train(config);
        else if (app.got_subcommand(c_eval)) stage_evaluate(config);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
