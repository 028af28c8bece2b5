#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbnet/classify.hpp"
#include "fbnet/community.hpp"
#include "fbnet/embedding.hpp"

namespace fbnet {

// Flat key-value configuration with [section] headers; every CLI flag
// overrides the corresponding key. All seeds default to 42 so bare runs are
// reproducible.
struct PipelineConfig {
    // [corpus]
    std::string accounts_path;
    std::string edges_path;
    std::string tweets_path;
    std::string labels_path;
    std::string pivot = "2021-11-12T00:00:00Z";

    // [community]
    std::size_t min_size = 100;
    std::uint64_t community_seed = 42;

    // [characterize]
    std::vector<std::string> exclude_communities;  // labels, e.g. th,kr
    bool fb_only = false;

    // [coordination]
    double coordination_floor = 0.0;
    double coordination_step = 0.05;
    std::string engagement_kinds = "retweets_and_quotes";  // or "retweets"

    // [abuse]
    std::size_t min_handles = 5;

    // [features]
    std::vector<std::string> families = {"profile", "tweets", "ego"};
    std::size_t text_dim = 256;

    // [embed]
    Node2VecParams node2vec;

    // [train]
    std::string model = "forest";  // forest | gcn
    std::string split = "random";  // random | stratified
    std::uint64_t split_seed = 42;
    std::size_t forest_trees = 100;
    std::size_t random_test_per_class = 500;
    std::size_t stratified_per_class = 25;
    GcnParams gcn;

    // [output]
    std::string out_dir = "out";

    static PipelineConfig from_file(const std::string& path);
    void set(const std::string& section, const std::string& key, const std::string& value);
};

// Known stages in execution order: ingest, communities, characterize,
// coordination, abuse, features, embed, train, evaluate.
const std::vector<std::string>& pipeline_stages();

// Runs the requested stages (all of them when `stages` is empty) and, when
// everything ran, writes summary.json. Each stage reads its inputs from the
// corpus paths and the files earlier stages wrote under out_dir. Throws
// StageError naming the failing stage.
void run_pipeline(const PipelineConfig& config, std::vector<std::string> stages = {});

// Individual stage entry points (also used by the CLI subcommands).
void stage_ingest(const PipelineConfig& config);
void stage_communities(const PipelineConfig& config);
void stage_characterize(const PipelineConfig& config);
void stage_coordination(const PipelineConfig& config);
void stage_abuse(const PipelineConfig& config);
void stage_features(const PipelineConfig& config);
void stage_embed(const PipelineConfig& config);
void stage_train(const PipelineConfig& config);
void stage_evaluate(const PipelineConfig& config);
void write_summary(const PipelineConfig& config);

// Partition persistence (partition.json).
void save_partition(const Partition& partition, double modularity_q, const Corpus& corpus,
                    const std::string& path);
Partition load_partition(const std::string& path, const Corpus& corpus, double* modularity_q = nullptr);

// Feature matrix persistence (features.csv + features.meta.json sidecar).
void save_features_csv(const FeatureMatrix& m, const Corpus& corpus, const std::string& csv_path,
                       const std::string& meta_path);
FeatureMatrix load_features_csv(const Corpus& corpus, const std::string& csv_path,
                                const std::string& meta_path);

// Renders summary.json as json, csv or markdown.
std::string render_report(const std::string& summary_path, const std::string& format);

}  // namespace fbnet
