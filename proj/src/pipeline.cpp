#include "fbnet/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fbnet/abuse.hpp"
#include "fbnet/coordination.hpp"
#include "fbnet/errors.hpp"
#include "fbnet/log.hpp"
#include "fbnet/measures.hpp"

namespace fbnet {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError(path + ": malformed JSON");
    return j;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << "\n";
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(value);
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Corpus load_config_corpus(const PipelineConfig& config) {
    if (config.accounts_path.empty() || config.edges_path.empty()) {
        throw ConfigError("corpus paths not configured (accounts/edges)");
    }
    return load_corpus(config.accounts_path, config.edges_path, config.tweets_path,
                       config.labels_path);
}

std::string out_path(const PipelineConfig& config, const std::string& file) {
    return config.out_dir + "/" + file;
}

}  // namespace

// --- configuration -----------------------------------------------------------

void PipelineConfig::set(const std::string& section, const std::string& key,
                         const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;
    auto to_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    auto to_size = [&] { return static_cast<std::size_t>(std::stoull(value)); };
    auto to_f = [&] { return std::stod(value); };
    auto to_bool = [&] { return value == "true" || value == "1" || value == "yes"; };

    if (full == "corpus.accounts") accounts_path = value;
    else if (full == "corpus.edges") edges_path = value;
    else if (full == "corpus.tweets") tweets_path = value;
    else if (full == "corpus.labels") labels_path = value;
    else if (full == "corpus.pivot") pivot = value;
    else if (full == "community.min_size") min_size = to_size();
    else if (full == "community.seed") community_seed = to_u64();
    else if (full == "characterize.exclude_communities") exclude_communities = split_list(value);
    else if (full == "characterize.fb_only") fb_only = to_bool();
    else if (full == "coordination.floor") coordination_floor = to_f();
    else if (full == "coordination.step") coordination_step = to_f();
    else if (full == "coordination.engagement_kinds") engagement_kinds = value;
    else if (full == "abuse.min_handles") min_handles = to_size();
    else if (full == "features.families") families = split_list(value);
    else if (full == "features.text_dim") text_dim = to_size();
    else if (full == "embed.dim") node2vec.dim = to_size();
    else if (full == "embed.walk_length") node2vec.walk_length = to_size();
    else if (full == "embed.walks_per_node") node2vec.walks_per_node = to_size();
    else if (full == "embed.window") node2vec.window = to_size();
    else if (full == "embed.p") node2vec.p = to_f();
    else if (full == "embed.q") node2vec.q = to_f();
    else if (full == "embed.negatives") node2vec.negatives_per_positive = to_size();
    else if (full == "embed.epochs") node2vec.epochs = to_size();
    else if (full == "embed.learning_rate") node2vec.learning_rate = to_f();
    else if (full == "embed.seed") node2vec.seed = to_u64();
    else if (full == "train.model") model = value;
    else if (full == "train.split") split = value;
    else if (full == "train.seed") split_seed = to_u64();
    else if (full == "train.forest_trees") forest_trees = to_size();
    else if (full == "train.random_test_per_class") random_test_per_class = to_size();
    else if (full == "train.stratified_per_class") stratified_per_class = to_size();
    else if (full == "train.gcn_hidden") gcn.hidden = to_size();
    else if (full == "train.gcn_epochs") gcn.epochs = to_size();
    else if (full == "train.gcn_learning_rate") gcn.learning_rate = to_f();
    else if (full == "output.dir") out_dir = value;
    else throw ConfigError("unknown config key '" + full + "'");
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    PipelineConfig config;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line.erase(0, line.find_first_not_of(" \t"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        try {
            config.set(section, key, value);
        } catch (const std::exception& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

// --- partition persistence --------------------------------------------------------

void save_partition(const Partition& partition, double modularity_q, const Corpus& corpus,
                    const std::string& path) {
    json j;
    j["modularity"] = modularity_q;
    j["none_id"] = partition.none_id;
    json jc = json::array();
    for (const CommunityStats& cs : partition.communities) {
        json members = json::array();
        for (NodeId v = 0; v < partition.assignment.size(); ++v) {
            if (partition.assignment[v] == cs.community_id) members.push_back(corpus.node_ids[v]);
        }
        jc.push_back({{"id", cs.community_id},
                      {"label", cs.label},
                      {"size", cs.size},
                      {"follow_back_ratio", cs.follow_back_ratio},
                      {"automated_ratio", cs.automated_ratio},
                      {"edge_reciprocity", cs.edge_reciprocity},
                      {"members", std::move(members)}});
    }
    j["communities"] = std::move(jc);
    write_json(j, path);
}

Partition load_partition(const std::string& path, const Corpus& corpus, double* modularity_q) {
    const json j = read_json(path);
    if (modularity_q) *modularity_q = j.at("modularity").get<double>();
    Partition p;
    p.none_id = j.at("none_id").get<std::int32_t>();
    p.assignment.assign(corpus.core_count(), -1);
    for (const auto& jc : j.at("communities")) {
        CommunityStats cs;
        cs.community_id = jc.at("id").get<std::int32_t>();
        cs.label = jc.at("label").get<std::string>();
        cs.size = jc.at("size").get<std::size_t>();
        cs.follow_back_ratio = jc.at("follow_back_ratio").get<double>();
        cs.automated_ratio = jc.at("automated_ratio").get<double>();
        cs.edge_reciprocity = jc.at("edge_reciprocity").get<double>();
        for (const auto& m : jc.at("members")) {
            p.assignment.at(corpus.node_of(m.get<std::string>())) = cs.community_id;
        }
        p.communities.push_back(std::move(cs));
    }
    for (NodeId v = 0; v < p.assignment.size(); ++v) {
        if (p.assignment[v] < 0) throw DataError(path + ": node " + corpus.node_ids[v] + " unassigned");
    }
    return p;
}

// --- feature persistence ------------------------------------------------------------

void save_features_csv(const FeatureMatrix& m, const Corpus& corpus, const std::string& csv_path,
                       const std::string& meta_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + csv_path);
    out << "user_id";
    for (const std::string& c : m.columns) out << ',' << c;
    out << "\n";
    char buf[40];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << corpus.node_ids[m.users[r]];
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.at(r, c));
            out << ',' << buf;
        }
        out << "\n";
    }
    json meta;
    meta["family"] = m.family;
    meta["columns"] = m.columns;
    meta["rows"] = m.rows();
    write_json(meta, meta_path);
}

FeatureMatrix load_features_csv(const Corpus& corpus, const std::string& csv_path,
                                const std::string& meta_path) {
    const json meta = read_json(meta_path);
    FeatureMatrix m;
    m.family = meta.at("family").get<std::string>();
    m.columns = meta.at("columns").get<std::vector<std::string>>();

    std::ifstream in(csv_path);
    if (!in) throw DataError("cannot open " + csv_path);
    std::string line;
    std::getline(in, line);  // header
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t pos = line.find(',');
        if (pos == std::string::npos) throw DataError(csv_path + ":" + std::to_string(line_no) + ": malformed row");
        m.users.push_back(corpus.node_of(line.substr(0, pos)));
        const char* cursor = line.c_str() + pos;
        for (std::size_t c = 0; c < m.columns.size(); ++c) {
            if (*cursor != ',') throw DataError(csv_path + ":" + std::to_string(line_no) + ": missing column");
            char* end = nullptr;
            m.values.push_back(std::strtod(cursor + 1, &end));
            cursor = end;
        }
    }
    return m;
}

// --- stages ------------------------------------------------------------------------

const std::vector<std::string>& pipeline_stages() {
    static const std::vector<std::string> stages = {"ingest",       "communities", "characterize",
                                                    "coordination", "abuse",       "features",
                                                    "embed",        "train",       "evaluate"};
    return stages;
}

void stage_ingest(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);
    std::size_t labeled = corpus.labels.size(), positives = 0;
    for (const LabelRecord& r : corpus.labels.all()) positives += r.followed_back;
    json j;
    j["accounts"] = corpus.core_count();
    j["external_stubs"] = corpus.node_count() - corpus.core_count();
    j["edges"] = corpus.graph.edge_count();
    j["tweets"] = corpus.tweets.size();
    j["labeled"] = labeled;
    j["positives"] = positives;
    write_json(j, out_path(config, "ingest.json"));
}

void stage_communities(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);
    Partition p = detect_communities(corpus, config.min_size, config.community_seed);
    enrich_partition_stats(p, corpus);
    const double q = modularity(corpus, p);
    save_partition(p, q, corpus, out_path(config, "partition.json"));

    // Content profiles ride along for the report.
    const auto profiles = community_profile(p, corpus, 5);
    json j = json::array();
    for (const auto& profile : profiles) {
        json tags = json::array(), users = json::array();
        for (const auto& e : profile.top_hashtags) tags.push_back({{"entity", e.entity}, {"users", e.user_count}});
        for (const auto& e : profile.top_retweeted_users) users.push_back({{"entity", e.entity}, {"users", e.user_count}});
        j.push_back({{"community", profile.community_id},
                     {"top_hashtags", std::move(tags)},
                     {"top_retweeted_users", std::move(users)}});
    }
    write_json(j, out_path(config, "profiles.json"));
}

namespace {

std::set<std::int32_t> resolve_excluded(const PipelineConfig& config, const Partition& p) {
    std::set<std::int32_t> out;
    for (const std::string& name : config.exclude_communities) {
        bool found = false;
        for (const CommunityStats& cs : p.communities) {
            if (cs.label == name || std::to_string(cs.community_id) == name) {
                out.insert(cs.community_id);
                found = true;
            }
        }
        if (!found) throw ConfigError("exclude_communities: no community labeled '" + name + "'");
    }
    return out;
}

json comparison_to_json(const ComparisonReport& report) {
    json rows = json::array();
    for (const MeasureComparison& m : report.measures) {
        json row;
        row["measure"] = m.measure;
        row["stat"] = m.stat == GroupStat::mean ? "mean" : "median";
        if (m.group_stat_fb) row["group_stat_fb"] = *m.group_stat_fb;
        if (m.group_stat_other) row["group_stat_other"] = *m.group_stat_other;
        if (m.diff) row["diff"] = *m.diff;
        row["test"] = m.test;
        if (m.statistic) row["statistic"] = *m.statistic;
        if (m.p) row["p"] = *m.p;
        if (!m.note.empty()) row["note"] = m.note;
        rows.push_back(std::move(row));
    }
    return {{"n_follow_back", report.n_follow_back}, {"n_other", report.n_other}, {"measures", rows}};
}

}  // namespace

void stage_characterize(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);
    const Partition p = load_partition(out_path(config, "partition.json"), corpus);
    const UnixTime pivot = parse_iso8601(config.pivot);

    const std::vector<MeasureRow> rows = compute_measures(corpus, pivot);
    const ComparisonReport binary = binary_comparison(rows);
    const auto excluded = resolve_excluded(config, p);
    const auto correlations = community_correlation(rows, p, excluded, config.fb_only);

    json j;
    j["pivot"] = config.pivot;
    j["binary"] = comparison_to_json(binary);
    json jc = json::array();
    for (const CommunityCorrelation& cc : correlations) {
        json row;
        row["measure"] = cc.measure;
        row["n_communities"] = cc.n_communities;
        if (cc.corr) {
            row["corr"] = cc.corr->r;
            row["p"] = cc.corr->p;
        }
        if (!cc.error.empty()) row["error"] = cc.error;
        if (!cc.dropped.empty()) row["dropped_communities"] = cc.dropped;
        jc.push_back(std::move(row));
    }
    j["community_correlation"] = std::move(jc);
    j["fb_only"] = config.fb_only;
    write_json(j, out_path(config, "characterization.json"));
}

void stage_coordination(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);
    const Partition p = load_partition(out_path(config, "partition.json"), corpus);
    const EngagementKinds kinds = config.engagement_kinds == "retweets"
                                      ? EngagementKinds::retweets
                                      : EngagementKinds::retweets_and_quotes;
    std::vector<double> grid;
    for (double t = config.coordination_floor; t <= 1.0 + 1e-12; t += config.coordination_step) {
        grid.push_back(std::min(t, 1.0));
    }

    const auto members = p.members();
    json j = json::array();
    std::ofstream csv(out_path(config, "coordination.csv"), std::ios::binary);
    csv << "community,threshold,ratio\n";
    char buf[32];
    for (const CommunityStats& cs : p.communities) {
        const auto engagements = extract_engagements(corpus, members[cs.community_id], kinds);
        const auto vectors = build_user_vectors(engagements);
        json row;
        row["community"] = cs.community_id;
        row["label"] = cs.label;
        row["engaged_users"] = vectors.vectors.size();
        json points = json::array();
        if (!vectors.vectors.empty()) {
            const auto network = similarity_network(vectors, config.coordination_floor);
            const auto curve = threshold_sweep(network, cs.size, grid, cs.community_id);
            for (const auto& [t, ratio] : curve.points) {
                points.push_back({{"threshold", t}, {"ratio", ratio}});
                std::snprintf(buf, sizeof(buf), "%.4f", t);
                csv << cs.community_id << ',' << buf << ',';
                std::snprintf(buf, sizeof(buf), "%.6f", ratio);
                csv << buf << "\n";
            }
        }
        row["points"] = std::move(points);
        j.push_back(std::move(row));
    }
    write_json(j, out_path(config, "coordination.json"));
}

void stage_abuse(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);
    const Partition p = load_partition(out_path(config, "partition.json"), corpus);

    const TrainReport trains = train_stats(corpus, p, config.min_handles);
    const auto automation = automation_ratio(p, corpus.labels);
    const SuspensionStats susp = suspension_stats(corpus, p);

    json j;
    json jc = json::array();
    for (const CommunityStats& cs : p.communities) {
        json row;
        row["community"] = cs.community_id;
        row["label"] = cs.label;
        const auto it = automation.find(cs.community_id);
        if (it != automation.end() && it->second) row["automation_ratio"] = *it->second;
        row["mean_rides"] = trains.mean_rides.at(cs.community_id);
        row["mean_conducts"] = trains.mean_conducts.at(cs.community_id);
        jc.push_back(std::move(row));
    }
    j["communities"] = std::move(jc);
    j["total_trains"] = trains.total_trains;
    json s;
    s["total_accounts"] = susp.total_accounts;
    s["suspended_total"] = susp.suspended_total;
    s["deleted_total"] = susp.deleted_total;
    s["fb_accounts"] = susp.fb_accounts;
    s["fb_suspended"] = susp.fb_suspended;
    s["automated_fb_accounts"] = susp.automated_fb_accounts;
    s["automated_fb_suspended"] = susp.automated_fb_suspended;
    s["community_non_fb_accounts"] = susp.community_non_fb_accounts;
    s["community_non_fb_suspended"] = susp.community_non_fb_suspended;
    s["baseline_accounts"] = susp.baseline_accounts;
    s["baseline_suspended"] = susp.baseline_suspended;
    if (susp.fb_rate) s["fb_rate"] = *susp.fb_rate;
    if (susp.baseline_rate) s["baseline_rate"] = *susp.baseline_rate;
    if (susp.relative_rate) s["relative_rate"] = *susp.relative_rate;
    j["suspensions"] = std::move(s);
    write_json(j, out_path(config, "abuse.json"));
}

void stage_features(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);
    const UnixTime pivot = parse_iso8601(config.pivot);

    std::vector<NodeId> users(corpus.core_count());
    std::iota(users.begin(), users.end(), 0);

    std::vector<FeatureMatrix> blocks;
    for (const std::string& family : config.families) {
        if (family == "profile") blocks.push_back(profile_features(corpus, users, pivot));
        else if (family == "tweets") blocks.push_back(tweet_features(corpus, users, pivot, config.text_dim));
        else if (family == "ego") blocks.push_back(ego_features(corpus, users));
        else if (family == "network") blocks.push_back(network_features(corpus, users));
        else if (family == "embedding") continue;  // produced by the embed stage
        else throw ConfigError("unknown feature family '" + family + "'");
    }
    if (blocks.empty()) throw ConfigError("no feature families configured");

    // Raw concatenation; standardization happens at training time with the
    // split's training rows.
    FeatureMatrix m;
    m.family = "combined";
    m.users = users;
    for (const FeatureMatrix& b : blocks) {
        for (const std::string& c : b.columns) m.columns.push_back(b.family + "." + c);
    }
    m.values.resize(users.size() * m.columns.size());
    std::size_t base = 0;
    for (const FeatureMatrix& b : blocks) {
        for (std::size_t r = 0; r < users.size(); ++r) {
            for (std::size_t c = 0; c < b.cols(); ++c) m.values[r * m.cols() + base + c] = b.at(r, c);
        }
        base += b.cols();
    }
    save_features_csv(m, corpus, out_path(config, "features.csv"), out_path(config, "features.meta.json"));
}

void stage_embed(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);
    const auto mask = corpus.core_mask();
    const auto walks = biased_walks(corpus.graph, config.node2vec, &mask);
    const EmbeddingTable table = train_embeddings(walks, config.node2vec);
    save_embeddings_csv(table, corpus.node_ids, out_path(config, "embeddings.csv"));
}

namespace {

// Splits the stored combined matrix back into family blocks, keeping only the
// requested families; appends node2vec embeddings when asked for.
FeatureMatrix features_for_training(const PipelineConfig& config, const Corpus& corpus,
                                    const Splits& splits) {
    FeatureMatrix stored = load_features_csv(corpus, out_path(config, "features.csv"),
                                             out_path(config, "features.meta.json"));
    std::vector<FeatureMatrix> blocks;
    for (const std::string& family : config.families) {
        if (family == "embedding") {
            const EmbeddingTable table =
                load_embeddings_csv(out_path(config, "embeddings.csv"), corpus.id_index);
            blocks.push_back(table.to_features(stored.users));
            continue;
        }
        FeatureMatrix block;
        block.family = family;
        block.users = stored.users;
        std::vector<std::size_t> cols;
        const std::string prefix = family + ".";
        for (std::size_t c = 0; c < stored.cols(); ++c) {
            if (stored.columns[c].rfind(prefix, 0) == 0) {
                cols.push_back(c);
                block.columns.push_back(stored.columns[c].substr(prefix.size()));
            }
        }
        if (cols.empty()) throw ConfigError("features.csv lacks family '" + family + "'; rerun the features stage");
        block.values.reserve(stored.rows() * cols.size());
        for (std::size_t r = 0; r < stored.rows(); ++r) {
            for (std::size_t c : cols) block.values.push_back(stored.at(r, c));
        }
        blocks.push_back(std::move(block));
    }
    std::vector<const FeatureMatrix*> ptrs;
    ptrs.reserve(blocks.size());
    for (const FeatureMatrix& b : blocks) ptrs.push_back(&b);
    return assemble(ptrs, splits.train);
}

std::vector<int> labels_of(const Corpus& corpus, std::span<const NodeId> users) {
    std::vector<int> y(users.size(), -1);
    for (std::size_t i = 0; i < users.size(); ++i) {
        const LabelRecord* r = corpus.labels.find(users[i]);
        if (r != nullptr) y[i] = r->followed_back ? 1 : 0;
    }
    return y;
}

json splits_to_json(const Splits& splits, const Corpus& corpus, std::span<const NodeId> users) {
    json j;
    j["mode"] = splits.mode == SplitMode::random ? "random" : "stratified";
    auto ids_of = [&](const std::vector<std::size_t>& rows) {
        json out = json::array();
        for (std::size_t r : rows) out.push_back(corpus.node_ids[users[r]]);
        return out;
    };
    j["train"] = ids_of(splits.train);
    j["test"] = ids_of(splits.test);
    json mini = json::array();
    for (const MiniSet& m : splits.mini_sets) {
        mini.push_back({{"name", m.name}, {"rows", ids_of(m.rows)}});
    }
    j["mini_sets"] = std::move(mini);
    return j;
}

Splits splits_from_json(const json& j, const Corpus& corpus,
                        const std::unordered_map<std::string, std::size_t>& row_of) {
    Splits s;
    s.mode = j.at("mode").get<std::string>() == "random" ? SplitMode::random : SplitMode::stratified;
    auto rows_of = [&](const json& arr) {
        std::vector<std::size_t> rows;
        for (const auto& id : arr) rows.push_back(row_of.at(id.get<std::string>()));
        return rows;
    };
    s.train = rows_of(j.at("train"));
    s.test = rows_of(j.at("test"));
    for (const auto& jm : j.at("mini_sets")) {
        s.mini_sets.push_back({jm.at("name").get<std::string>(), rows_of(jm.at("rows"))});
    }
    return s;
}

}  // namespace

void stage_train(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);
    const Partition p = load_partition(out_path(config, "partition.json"), corpus);

    std::vector<NodeId> users(corpus.core_count());
    std::iota(users.begin(), users.end(), 0);

    SplitConfig sc;
    sc.random_test_per_class = config.random_test_per_class;
    sc.stratified_per_class = config.stratified_per_class;
    sc.seed = config.split_seed;
    const SplitMode mode = config.split == "stratified" ? SplitMode::stratified : SplitMode::random;
    const Splits splits = make_splits(users, corpus.labels, &p, mode, sc);

    const FeatureMatrix X = features_for_training(config, corpus, splits);
    std::vector<int> y = labels_of(corpus, users);
    // Supervision restricted to the training rows.
    std::vector<int> y_train(y.size(), -1);
    for (std::size_t r : splits.train) y_train[r] = y[r];

    write_json(splits_to_json(splits, corpus, users), out_path(config, "splits.json"));

    if (config.model == "forest") {
        ForestParams fp;
        fp.trees = config.forest_trees;
        fp.seed = config.split_seed;
        const RandomForest forest = RandomForest::train(X, y, splits.train, fp);
        forest.save_json(out_path(config, "model.json"));
    } else if (config.model == "gcn") {
        // The GCN sees the in-corpus graph only.
        std::vector<std::pair<NodeId, NodeId>> edges;
        corpus.graph.for_each_edge([&](NodeId u, NodeId v) {
            if (u < corpus.core_count() && v < corpus.core_count()) edges.emplace_back(u, v);
        });
        const FollowGraph sub =
            FollowGraph::from_edges(static_cast<NodeId>(corpus.core_count()), std::move(edges));
        GcnParams gp = config.gcn;
        gp.seed = config.split_seed;
        const Gcn gcn = Gcn::train(sub, X, y_train, gp);
        gcn.save(out_path(config, "gcn.bin"));
    } else {
        throw ConfigError("unknown model '" + config.model + "' (expected forest or gcn)");
    }
}

void stage_evaluate(const PipelineConfig& config) {
    const Corpus corpus = load_config_corpus(config);

    std::vector<NodeId> users(corpus.core_count());
    std::iota(users.begin(), users.end(), 0);
    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < users.size(); ++i) row_of[corpus.node_ids[users[i]]] = i;

    const Splits splits = splits_from_json(read_json(out_path(config, "splits.json")), corpus, row_of);
    const FeatureMatrix X = features_for_training(config, corpus, splits);
    const std::vector<int> y = labels_of(corpus, users);

    std::unique_ptr<Classifier> model;
    if (config.model == "forest") {
        model = std::make_unique<RandomForest>(RandomForest::load_json(out_path(config, "model.json")));
    } else {
        std::vector<std::pair<NodeId, NodeId>> edges;
        corpus.graph.for_each_edge([&](NodeId u, NodeId v) {
            if (u < corpus.core_count() && v < corpus.core_count()) edges.emplace_back(u, v);
        });
        const FollowGraph sub =
            FollowGraph::from_edges(static_cast<NodeId>(corpus.core_count()), std::move(edges));
        model = std::make_unique<Gcn>(Gcn::load(out_path(config, "gcn.bin"), sub));
    }

    const EvalReport report = evaluate(*model, X, y, splits);
    json j;
    j["model"] = config.model;
    j["split"] = report.split_name;
    auto score_json = [](const SetScore& s) {
        json out;
        out["name"] = s.name;
        out["size"] = s.size;
        out["positives"] = s.positives;
        if (s.precision) out["precision"] = *s.precision;
        if (s.recall) out["recall"] = *s.recall;
        if (s.f1) out["f1"] = *s.f1;
        if (!s.warning.empty()) out["warning"] = s.warning;
        return out;
    };
    j["overall"] = score_json(report.overall);
    json mini = json::array();
    for (const SetScore& s : report.mini_sets) mini.push_back(score_json(s));
    j["mini_sets"] = std::move(mini);
    if (report.mean_precision) j["mean_precision"] = *report.mean_precision;
    if (report.mean_recall) j["mean_recall"] = *report.mean_recall;
    if (report.mean_f1) j["mean_f1"] = *report.mean_f1;
    write_json(j, out_path(config, "evaluation.json"));
}

void write_summary(const PipelineConfig& config) {
    json summary;
    summary["pivot"] = config.pivot;
    summary["seeds"] = {{"community", config.community_seed},
                        {"train", config.split_seed},
                        {"embed", config.node2vec.seed}};
    const json partition = read_json(out_path(config, "partition.json"));
    summary["modularity"] = partition.at("modularity");
    json comms = json::array();
    for (const auto& jc : partition.at("communities")) {
        comms.push_back({{"id", jc.at("id")},
                         {"label", jc.at("label")},
                         {"size", jc.at("size")},
                         {"follow_back_ratio", jc.at("follow_back_ratio")},
                         {"automated_ratio", jc.at("automated_ratio")},
                         {"edge_reciprocity", jc.at("edge_reciprocity")}});
    }
    summary["communities"] = std::move(comms);
    summary["characterization"] = read_json(out_path(config, "characterization.json"));
    summary["coordination"] = read_json(out_path(config, "coordination.json"));
    summary["abuse"] = read_json(out_path(config, "abuse.json"));
    summary["classification"] = read_json(out_path(config, "evaluation.json"));
    write_json(summary, out_path(config, "summary.json"));
}

void run_pipeline(const PipelineConfig& config, std::vector<std::string> stages) {
    const bool full_run = stages.empty();
    if (full_run) {
        stages = pipeline_stages();
        // node2vec embeddings are trained only when a family needs them.
        if (std::find(config.families.begin(), config.families.end(), "embedding") ==
            config.families.end()) {
            stages.erase(std::remove(stages.begin(), stages.end(), "embed"), stages.end());
        }
    }
    std::filesystem::create_directories(config.out_dir);
    for (const std::string& stage : stages) {
        log::info("stage: " + stage);
        try {
            if (stage == "ingest") stage_ingest(config);
            else if (stage == "communities") stage_communities(config);
            else if (stage == "characterize") stage_characterize(config);
            else if (stage == "coordination") stage_coordination(config);
            else if (stage == "abuse") stage_abuse(config);
            else if (stage == "features") stage_features(config);
            else if (stage == "embed") stage_embed(config);
            else if (stage == "train") stage_train(config);
            else if (stage == "evaluate") stage_evaluate(config);
            else throw ConfigError("unknown stage '" + stage + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(stage, e.what());
        }
    }
    if (full_run) {
        try {
            write_summary(config);
        } catch (const std::exception& e) {
            throw StageError("summary", e.what());
        }
    }
}

// --- report rendering ------------------------------------------------------------

namespace {

std::string fmt_num(const json& v) {
    if (v.is_null()) return "-";
    char buf[32];
    const double d = v.get<double>();
    if (d == static_cast<std::int64_t>(d) && std::abs(d) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(d));
    } else {
        std::snprintf(buf, sizeof(buf), "%.4g", d);
    }
    return buf;
}

json opt(const json& row, const char* key) {
    return row.contains(key) ? row.at(key) : json();
}

}  // namespace

std::string render_report(const std::string& summary_path, const std::string& format) {
    const json summary = read_json(summary_path);
    if (format == "json") return summary.dump(2) + "\n";

    if (format == "csv") {
        std::ostringstream out;
        out << "measure,stat,group_stat_fb,group_stat_other,diff,test,statistic,p,corr,corr_p\n";
        std::unordered_map<std::string, std::pair<json, json>> corr;
        for (const auto& row : summary.at("characterization").at("community_correlation")) {
            corr[row.at("measure").get<std::string>()] = {opt(row, "corr"), opt(row, "p")};
        }
        for (const auto& row : summary.at("characterization").at("binary").at("measures")) {
            const std::string measure = row.at("measure").get<std::string>();
            out << measure << ',' << row.at("stat").get<std::string>() << ','
                << fmt_num(opt(row, "group_stat_fb")) << ',' << fmt_num(opt(row, "group_stat_other"))
                << ',' << fmt_num(opt(row, "diff")) << ',' << row.at("test").get<std::string>() << ','
                << fmt_num(opt(row, "statistic")) << ',' << fmt_num(opt(row, "p")) << ','
                << fmt_num(corr[measure].first) << ',' << fmt_num(corr[measure].second) << "\n";
        }
        return out.str();
    }

    if (format != "markdown") throw ConfigError("unknown report format '" + format + "'");

    std::ostringstream out;
    out << "# Follow-back analysis summary\n\n";
    out << "Modularity: " << fmt_num(summary.at("modularity")) << "\n\n";

    out << "## Communities\n\n";
    out << "| id | label | size | follow-back ratio | automated ratio | edge reciprocity |\n";
    out << "|---:|-------|-----:|------------------:|----------------:|-----------------:|\n";
    for (const auto& c : summary.at("communities")) {
        out << "| " << c.at("id").get<int>() << " | " << c.at("label").get<std::string>() << " | "
            << c.at("size").get<std::size_t>() << " | " << fmt_num(c.at("follow_back_ratio")) << " | "
            << fmt_num(c.at("automated_ratio")) << " | " << fmt_num(c.at("edge_reciprocity")) << " |\n";
    }

    out << "\n## Characterization\n\n";
    out << "| measure | stat | FB | other | diff | test | p | corr | corr p |\n";
    out << "|---------|------|---:|------:|-----:|------|--:|-----:|-------:|\n";
    std::unordered_map<std::string, std::pair<json, json>> corr;
    for (const auto& row : summary.at("characterization").at("community_correlation")) {
        corr[row.at("measure").get<std::string>()] = {opt(row, "corr"), opt(row, "p")};
    }
    for (const auto& row : summary.at("characterization").at("binary").at("measures")) {
        const std::string measure = row.at("measure").get<std::string>();
        out << "| " << measure << " | " << row.at("stat").get<std::string>() << " | "
            << fmt_num(opt(row, "group_stat_fb")) << " | " << fmt_num(opt(row, "group_stat_other"))
            << " | " << fmt_num(opt(row, "diff")) << " | " << row.at("test").get<std::string>() << " | "
            << fmt_num(opt(row, "p")) << " | " << fmt_num(corr[measure].first) << " | "
            << fmt_num(corr[measure].second) << " |\n";
    }

    out << "\n## Classification\n\n";
    const json& cls = summary.at("classification");
    out << "| model | split | set | precision | recall | f1 |\n";
    out << "|-------|-------|-----|----------:|-------:|---:|\n";
    const json& overall = cls.at("overall");
    out << "| " << cls.at("model").get<std::string>() << " | " << cls.at("split").get<std::string>()
        << " | overall | " << fmt_num(opt(overall, "precision")) << " | "
        << fmt_num(opt(overall, "recall")) << " | " << fmt_num(opt(overall, "f1")) << " |\n";
    for (const auto& mini : cls.at("mini_sets")) {
        out << "| " << cls.at("model").get<std::string>() << " | " << cls.at("split").get<std::string>()
            << " | " << mini.at("name").get<std::string>() << " | " << fmt_num(opt(mini, "precision"))
            << " | " << fmt_num(opt(mini, "recall")) << " | " << fmt_num(opt(mini, "f1")) << " |\n";
    }
    if (cls.contains("mean_f1")) {
        out << "\nStratified means: precision " << fmt_num(opt(cls, "mean_precision")) << ", recall "
            << fmt_num(opt(cls, "mean_recall")) << ", f1 " << fmt_num(opt(cls, "mean_f1")) << "\n";
    }
    return out.str();
}

}  // namespace fbnet
