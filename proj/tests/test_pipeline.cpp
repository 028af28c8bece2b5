#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fbnet/errors.hpp"
#include "fbnet/pipeline.hpp"
#include "fbnet/synth.hpp"

using namespace fbnet;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Generates a compact corpus sized so both split modes work with scaled-down
// test-set sizes.
fs::path test_corpus() {
    static fs::path dir;
    if (!dir.empty()) return dir;
    dir = fs::temp_directory_path() / "fbnet_pipe_corpus";
    std::vector<CommunitySpec> specs(4);
    specs[0] = {.label = "a", .size = 150, .follow_back_ratio = 0.6, .automation_ratio = 0.5,
                .intra_mutual_prob = 0.25, .inter_edge_prob = 0.002};
    specs[1] = {.label = "b", .size = 130, .follow_back_ratio = 0.4, .automation_ratio = 0.4,
                .intra_mutual_prob = 0.25, .inter_edge_prob = 0.002};
    specs[2] = {.label = "c", .size = 120, .follow_back_ratio = 0.3, .automation_ratio = 0.3,
                .intra_mutual_prob = 0.3, .inter_edge_prob = 0.002};
    specs[3] = {.label = "d", .size = 110, .follow_back_ratio = 0.25, .automation_ratio = 0.2,
                .intra_mutual_prob = 0.3, .inter_edge_prob = 0.002};
    for (auto& s : specs) {
        s.engagement_median = 150;
        s.retweet_ratio_mean = 0.4;
        s.coordination_pattern = "strong-narrow";
    }
    SynthOptions options;
    options.background_accounts = 40;
    options.tweets_min = 15;
    options.tweets_max = 40;
    const SynthCorpus s = generate(specs, options, parse_iso8601("2021-11-12T00:00:00Z"), 31);
    save_synth(s, dir.string());
    return dir;
}

PipelineConfig test_config(const std::string& out_name) {
    const fs::path dir = test_corpus();
    PipelineConfig config;
    config.accounts_path = (dir / "accounts.jsonl").string();
    config.edges_path = (dir / "edges.csv").string();
    config.tweets_path = (dir / "tweets.jsonl").string();
    config.labels_path = (dir / "labels.jsonl").string();
    config.min_size = 50;
    config.random_test_per_class = 40;
    config.stratified_per_class = 15;
    config.text_dim = 32;
    config.out_dir = (fs::temp_directory_path() / out_name).string();
    fs::create_directories(config.out_dir);
    return config;
}

}  // namespace

TEST_CASE("config files parse with sections and reject unknown keys") {
    const fs::path path = fs::temp_directory_path() / "fbnet_test.ini";
    {
        std::ofstream out(path);
        out << "# comment\n[corpus]\naccounts = /data/a.jsonl\npivot = 2021-11-12T00:00:00Z\n"
            << "[community]\nmin_size = 55\nseed = 17\n"
            << "[features]\nfamilies = profile, ego\n"
            << "[train]\nmodel = gcn\n";
    }
    const PipelineConfig config = PipelineConfig::from_file(path.string());
    CHECK(config.accounts_path == "/data/a.jsonl");
    CHECK(config.min_size == 55);
    CHECK(config.community_seed == 17);
    CHECK(config.families == std::vector<std::string>{"profile", "ego"});
    CHECK(config.model == "gcn");

    {
        std::ofstream out(path);
        out << "[corpus]\nnonsense = 1\n";
    }
    CHECK_THROWS_AS(PipelineConfig::from_file(path.string()), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::from_file("/missing/config.ini"), ConfigError);
}

TEST_CASE("full pipeline writes the report bundle and summary") {
    PipelineConfig config = test_config("fbnet_pipe_out");
    run_pipeline(config);
    for (const char* f : {"ingest.json", "partition.json", "profiles.json", "characterization.json",
                          "coordination.json", "coordination.csv", "abuse.json", "features.csv",
                          "features.meta.json", "splits.json", "model.json", "evaluation.json",
                          "summary.json"}) {
        CHECK(fs::exists(fs::path(config.out_dir) / f));
    }
    // 4 planted communities + None.
    const std::string summary = slurp(fs::path(config.out_dir) / "summary.json");
    CHECK(summary.find("\"None\"") != std::string::npos);
}

TEST_CASE("two runs with the same config produce byte-identical summaries") {
    PipelineConfig c1 = test_config("fbnet_pipe_det1");
    PipelineConfig c2 = test_config("fbnet_pipe_det2");
    run_pipeline(c1);
    run_pipeline(c2);
    const std::string s1 = slurp(fs::path(c1.out_dir) / "summary.json");
    const std::string s2 = slurp(fs::path(c2.out_dir) / "summary.json");
    CHECK(!s1.empty());
    CHECK(s1 == s2);
}

TEST_CASE("partial stage runs only write their own outputs") {
    PipelineConfig config = test_config("fbnet_pipe_partial");
    run_pipeline(config, {"communities"});
    CHECK(fs::exists(fs::path(config.out_dir) / "partition.json"));
    CHECK_FALSE(fs::exists(fs::path(config.out_dir) / "characterization.json"));
    CHECK_FALSE(fs::exists(fs::path(config.out_dir) / "summary.json"));
}

TEST_CASE("missing corpus file aborts with the stage name and path") {
    PipelineConfig config = test_config("fbnet_pipe_missing");
    config.accounts_path = "/nonexistent/accounts.jsonl";
    try {
        run_pipeline(config, {"ingest"});
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(std::string(e.what()).find("ingest") != std::string::npos);
        CHECK(std::string(e.what()).find("/nonexistent/accounts.jsonl") != std::string::npos);
    }
}

TEST_CASE("stages executed in separate processes agree with the in-process run") {
#ifndef FBNET_CLI_PATH
    FAIL("FBNET_CLI_PATH not defined");
#else
    const fs::path dir = test_corpus();
    const fs::path out = fs::temp_directory_path() / "fbnet_pipe_proc";
    fs::create_directories(out);
    const std::string base = std::string(FBNET_CLI_PATH) + " ";
    const std::string common = " --corpus-dir " + dir.string() + " --out-dir " + out.string() +
                               " --min-size 50 2>/dev/null";
    REQUIRE(std::system((base + "communities --seed 42" + common).c_str()) == 0);
    REQUIRE(std::system((base + "abuse" + common).c_str()) == 0);

    PipelineConfig config = test_config("fbnet_pipe_proc_ref");
    config.community_seed = 42;
    run_pipeline(config, {"communities", "abuse"});
    CHECK(slurp(out / "partition.json") == slurp(fs::path(config.out_dir) / "partition.json"));
    CHECK(slurp(out / "abuse.json") == slurp(fs::path(config.out_dir) / "abuse.json"));

    // CLI exit codes: 2 for config errors, 3 for data errors.
    CHECK(std::system((base + "report --summary /missing.json --format yaml 2>/dev/null").c_str()) != 0);
    const int config_code = std::system((base + "run --config /missing.ini 2>/dev/null").c_str());
    CHECK(WEXITSTATUS(config_code) == 2);
    const int data_code =
        std::system((base + "ingest --accounts /missing.jsonl --edges /missing.csv --out-dir " +
                     out.string() + " 2>/dev/null")
                        .c_str());
    CHECK(WEXITSTATUS(data_code) == 4);  // wrapped as a stage failure by the runner
#endif
}

TEST_CASE("feature csv and partition round trips") {
    const fs::path dir = test_corpus();
    const Corpus corpus = load_corpus((dir / "accounts.jsonl").string(), (dir / "edges.csv").string(),
                                      (dir / "tweets.jsonl").string(), (dir / "labels.jsonl").string());
    Partition p = detect_communities(corpus, 50, 42);
    enrich_partition_stats(p, corpus);
    const double q = modularity(corpus, p);
    const fs::path pp = fs::temp_directory_path() / "fbnet_partition.json";
    save_partition(p, q, corpus, pp.string());
    double q2 = 0.0;
    const Partition loaded = load_partition(pp.string(), corpus, &q2);
    CHECK(q2 == doctest::Approx(q));
    CHECK(loaded.assignment == p.assignment);
    CHECK(loaded.none_id == p.none_id);

    std::vector<NodeId> users = {0, 1, 2, 5, 9};
    const FeatureMatrix m = profile_features(corpus, users, parse_iso8601("2021-11-12T00:00:00Z"));
    const fs::path fcsv = fs::temp_directory_path() / "fbnet_features.csv";
    const fs::path fmeta = fs::temp_directory_path() / "fbnet_features.meta.json";
    save_features_csv(m, corpus, fcsv.string(), fmeta.string());
    const FeatureMatrix loaded_m = load_features_csv(corpus, fcsv.string(), fmeta.string());
    CHECK(loaded_m.users == m.users);
    CHECK(loaded_m.columns == m.columns);
    CHECK(loaded_m.values == m.values);  // %.17g round-trips doubles exactly
}

TEST_CASE("gcn pipeline path trains and evaluates") {
    PipelineConfig config = test_config("fbnet_pipe_gcn");
    config.model = "gcn";
    config.gcn.epochs = 40;
    config.gcn.hidden = 8;
    config.text_dim = 16;
    config.families = {"profile", "ego"};
    run_pipeline(config);
    CHECK(fs::exists(fs::path(config.out_dir) / "gcn.bin"));
    const std::string eval = slurp(fs::path(config.out_dir) / "evaluation.json");
    CHECK(eval.find("\"model\": \"gcn\"") != std::string::npos);
}

TEST_CASE("report renders three sections") {
    PipelineConfig config = test_config("fbnet_pipe_report");
    run_pipeline(config);
    const std::string md = render_report((fs::path(config.out_dir) / "summary.json").string(), "markdown");
    CHECK(md.find("## Communities") != std::string::npos);
    CHECK(md.find("## Characterization") != std::string::npos);
    CHECK(md.find("## Classification") != std::string::npos);
    CHECK(md.find("| measure |") != std::string::npos);

    const std::string csv = render_report((fs::path(config.out_dir) / "summary.json").string(), "csv");
    // Header plus one row per measure.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 14);

    const std::string js = render_report((fs::path(config.out_dir) / "summary.json").string(), "json");
    CHECK(js.find("\"modularity\"") != std::string::npos);

    CHECK_THROWS_AS(render_report((fs::path(config.out_dir) / "summary.json").string(), "yaml"),
                    ConfigError);
}

TEST_CASE("stratified pipeline run covers the None mini-set") {
    PipelineConfig config = test_config("fbnet_pipe_strat");
    config.split = "stratified";
    run_pipeline(config);
    const std::string eval = slurp(fs::path(config.out_dir) / "evaluation.json");
    CHECK(eval.find("\"split\": \"Stratified\"") != std::string::npos);
    CHECK(eval.find("mean_f1") != std::string::npos);
    CHECK(eval.find("\"None\"") != std::string::npos);
}
