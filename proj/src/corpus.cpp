#include "fbnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fbnet/errors.hpp"
#include "fbnet/log.hpp"

namespace fbnet {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& what) {
    throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return in;
}

json parse_line(const std::string& path, std::size_t line_no, const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail_at(path, line_no, "malformed JSON object");
    return j;
}

std::string require_string(const json& j, const char* key, const std::string& path, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) fail_at(path, line, std::string("missing string field '") + key + "'");
    return it->get<std::string>();
}

std::int64_t require_count(const json& j, const char* key, const std::string& path, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) fail_at(path, line, std::string("missing integer field '") + key + "'");
    std::int64_t v = it->get<std::int64_t>();
    if (v < 0) fail_at(path, line, std::string("negative count in '") + key + "'");
    return v;
}

bool require_bool(const json& j, const char* key, const std::string& path, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_boolean()) fail_at(path, line, std::string("missing boolean field '") + key + "'");
    return it->get<bool>();
}

// Minimal JSON string escaping for the canonical writers.
void write_json_string(std::ostream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        switch (c) {
            case '"': out << "\\\""; break;
            case '\\': out << "\\\\"; break;
            case '\n': out << "\\n"; break;
            case '\r': out << "\\r"; break;
            case '\t': out << "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out << buf;
                } else {
                    out << c;
                }
        }
    }
    out << '"';
}

}  // namespace

void LabelStore::add(LabelRecord r) {
    if (index_[r.user] != kNone) throw DataError("duplicate label record for one account");
    if (r.response_time_s && (!r.followed_back || r.unsolicited)) {
        throw DataError("label invariant violated: response_time present requires followed_back and not unsolicited");
    }
    if (r.followed_dnfb && !r.followed_back) {
        throw DataError("label invariant violated: followed_dnfb present requires followed_back");
    }
    index_[r.user] = static_cast<std::uint32_t>(records_.size());
    records_.push_back(std::move(r));
}

NodeId Corpus::node_of(const std::string& id) const {
    auto it = id_index.find(id);
    if (it == id_index.end()) throw DataError("unknown account id: " + id);
    return it->second;
}

std::optional<NodeId> Corpus::try_node_of(const std::string& id) const {
    auto it = id_index.find(id);
    if (it == id_index.end()) return std::nullopt;
    return it->second;
}

std::vector<bool> Corpus::core_mask() const {
    std::vector<bool> mask(node_count(), false);
    for (std::size_t i = 0; i < core_count(); ++i) mask[i] = true;
    return mask;
}

std::unordered_map<std::string, NodeId> Corpus::screen_name_index() const {
    std::unordered_map<std::string, NodeId> idx;
    idx.reserve(accounts.size());
    for (NodeId u = 0; u < accounts.size(); ++u) {
        std::string key = accounts[u].screen_name;
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        idx.emplace(std::move(key), u);
    }
    return idx;
}

Corpus load_corpus(const std::string& accounts_path,
                   const std::string& edges_path,
                   const std::string& tweets_path,
                   const std::string& labels_path) {
    Corpus c;

    {
        std::ifstream in = open_or_throw(accounts_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            json j = parse_line(accounts_path, line_no, line);
            Account a;
            a.id = require_string(j, "id", accounts_path, line_no);
            a.screen_name = require_string(j, "screen_name", accounts_path, line_no);
            a.name = require_string(j, "name", accounts_path, line_no);
            a.description = require_string(j, "description", accounts_path, line_no);
            a.location = require_string(j, "location", accounts_path, line_no);
            a.url = require_string(j, "url", accounts_path, line_no);
            a.created_at = parse_iso8601(require_string(j, "created_at", accounts_path, line_no));
            a.followers_count = require_count(j, "followers_count", accounts_path, line_no);
            a.followings_count = require_count(j, "followings_count", accounts_path, line_no);
            a.statuses_count = require_count(j, "statuses_count", accounts_path, line_no);
            a.likes_count = require_count(j, "likes_count", accounts_path, line_no);
            a.suspended = require_bool(j, "suspended", accounts_path, line_no);
            a.deleted = require_bool(j, "deleted", accounts_path, line_no);
            if (c.id_index.count(a.id)) fail_at(accounts_path, line_no, "duplicate account id '" + a.id + "'");
            c.id_index.emplace(a.id, static_cast<NodeId>(c.accounts.size()));
            c.node_ids.push_back(a.id);
            c.accounts.push_back(std::move(a));
        }
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::size_t stub_count = 0;
    {
        std::ifstream in = open_or_throw(edges_path);
        std::string line;
        std::size_t line_no = 0;
        auto resolve = [&](const std::string& id) -> NodeId {
            auto it = c.id_index.find(id);
            if (it != c.id_index.end()) return it->second;
            NodeId node = static_cast<NodeId>(c.node_ids.size());
            c.id_index.emplace(id, node);
            c.node_ids.push_back(id);
            ++stub_count;
            return node;
        };
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (line_no == 1) {
                if (line != "src,dst") fail_at(edges_path, line_no, "expected header 'src,dst'");
                continue;
            }
            auto comma = line.find(',');
            if (comma == std::string::npos || comma == 0 || comma + 1 == line.size() ||
                line.find(',', comma + 1) != std::string::npos) {
                fail_at(edges_path, line_no, "expected exactly two comma-separated ids");
            }
            edges.emplace_back(resolve(line.substr(0, comma)), resolve(line.substr(comma + 1)));
        }
    }
    if (stub_count > 0) {
        log::info("created " + std::to_string(stub_count) + " external stub nodes for unknown edge endpoints");
    }

    std::size_t dups = 0, loops = 0;
    c.graph = FollowGraph::from_edges(static_cast<NodeId>(c.node_ids.size()), std::move(edges), &dups, &loops);
    if (dups > 0) log::info("deduplicated " + std::to_string(dups) + " repeated edge rows");
    if (loops > 0) log::warn("dropped " + std::to_string(loops) + " self-loop edge rows");

    c.tweets.reset(c.node_count());
    if (!tweets_path.empty()) {
        std::ifstream in = open_or_throw(tweets_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            json j = parse_line(tweets_path, line_no, line);
            Tweet t;
            t.id = require_string(j, "id", tweets_path, line_no);
            const std::string user_id = require_string(j, "user_id", tweets_path, line_no);
            auto node = c.try_node_of(user_id);
            if (!node || c.is_external(*node)) fail_at(tweets_path, line_no, "tweet references unknown account '" + user_id + "'");
            t.user = *node;
            t.created_at = parse_iso8601(require_string(j, "created_at", tweets_path, line_no));
            t.text = require_string(j, "text", tweets_path, line_no);
            t.is_retweet = require_bool(j, "is_retweet", tweets_path, line_no);
            t.is_reply = require_bool(j, "is_reply", tweets_path, line_no);
            t.is_quote = require_bool(j, "is_quote", tweets_path, line_no);
            if (auto it = j.find("retweeted_user_id"); it != j.end() && !it->is_null()) {
                if (!it->is_string()) fail_at(tweets_path, line_no, "retweeted_user_id must be a string");
                t.retweeted_user_id = it->get<std::string>();
            }
            if (t.is_retweet && !t.retweeted_user_id) {
                fail_at(tweets_path, line_no, "retweet without retweeted_user_id");
            }
            if (t.is_retweet && t.is_reply) {
                fail_at(tweets_path, line_no, "tweet flagged both retweet and reply");
            }
            if (auto it = j.find("mentions"); it != j.end() && it->is_array()) {
                for (const auto& m : *it) {
                    if (!m.is_string()) fail_at(tweets_path, line_no, "mentions must be handle strings");
                    t.mentions.push_back(m.get<std::string>());
                }
            } else {
                fail_at(tweets_path, line_no, "missing array field 'mentions'");
            }
            if (auto it = j.find("hashtags"); it != j.end() && it->is_array()) {
                for (const auto& h : *it) {
                    if (!h.is_string()) fail_at(tweets_path, line_no, "hashtags must be strings");
                    t.hashtags.push_back(h.get<std::string>());
                }
            } else {
                fail_at(tweets_path, line_no, "missing array field 'hashtags'");
            }
            t.like_count = require_count(j, "like_count", tweets_path, line_no);
            t.retweet_count = require_count(j, "retweet_count", tweets_path, line_no);
            c.tweets.add(std::move(t));
        }
    }

    c.labels.reset(c.node_count());
    if (!labels_path.empty()) {
        std::ifstream in = open_or_throw(labels_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            json j = parse_line(labels_path, line_no, line);
            LabelRecord r;
            const std::string user_id = require_string(j, "user_id", labels_path, line_no);
            auto node = c.try_node_of(user_id);
            if (!node || c.is_external(*node)) fail_at(labels_path, line_no, "label references unknown account '" + user_id + "'");
            r.user = *node;
            r.followed_back = require_bool(j, "followed_back", labels_path, line_no);
            if (auto it = j.find("response_time"); it != j.end() && !it->is_null()) {
                if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
                    fail_at(labels_path, line_no, "response_time must be non-negative integer seconds");
                }
                r.response_time_s = it->get<std::int64_t>();
            }
            r.unsolicited = require_bool(j, "unsolicited", labels_path, line_no);
            if (auto it = j.find("followed_dnfb"); it != j.end() && !it->is_null()) {
                if (!it->is_boolean()) fail_at(labels_path, line_no, "followed_dnfb must be boolean");
                r.followed_dnfb = it->get<bool>();
            }
            try {
                c.labels.add(std::move(r));
            } catch (const DataError& e) {
                fail_at(labels_path, line_no, e.what());
            }
        }
    }

    return c;
}

void save_corpus(const Corpus& corpus, const std::string& dir) {
    std::filesystem::create_directories(dir);

    {
        std::ofstream out(dir + "/accounts.jsonl", std::ios::binary);
        for (const Account& a : corpus.accounts) {
            out << "{\"id\":";
            write_json_string(out, a.id);
            out << ",\"screen_name\":";
            write_json_string(out, a.screen_name);
            out << ",\"name\":";
            write_json_string(out, a.name);
            out << ",\"description\":";
            write_json_string(out, a.description);
            out << ",\"location\":";
            write_json_string(out, a.location);
            out << ",\"url\":";
            write_json_string(out, a.url);
            out << ",\"created_at\":\"" << format_iso8601(a.created_at) << "\""
                << ",\"followers_count\":" << a.followers_count
                << ",\"followings_count\":" << a.followings_count
                << ",\"statuses_count\":" << a.statuses_count
                << ",\"likes_count\":" << a.likes_count
                << ",\"suspended\":" << (a.suspended ? "true" : "false")
                << ",\"deleted\":" << (a.deleted ? "true" : "false") << "}\n";
        }
    }

    {
        std::ofstream out(dir + "/edges.csv", std::ios::binary);
        out << "src,dst\n";
        corpus.graph.for_each_edge([&](NodeId u, NodeId v) {
            out << corpus.node_ids[u] << ',' << corpus.node_ids[v] << '\n';
        });
    }

    {
        std::ofstream out(dir + "/tweets.jsonl", std::ios::binary);
        for (const Tweet& t : corpus.tweets.all()) {
            out << "{\"id\":";
            write_json_string(out, t.id);
            out << ",\"user_id\":";
            write_json_string(out, corpus.node_ids[t.user]);
            out << ",\"created_at\":\"" << format_iso8601(t.created_at) << "\",\"text\":";
            write_json_string(out, t.text);
            out << ",\"is_retweet\":" << (t.is_retweet ? "true" : "false")
                << ",\"is_reply\":" << (t.is_reply ? "true" : "false")
                << ",\"is_quote\":" << (t.is_quote ? "true" : "false");
            if (t.retweeted_user_id) {
                out << ",\"retweeted_user_id\":";
                write_json_string(out, *t.retweeted_user_id);
            }
            out << ",\"mentions\":[";
            for (std::size_t i = 0; i < t.mentions.size(); ++i) {
                if (i) out << ',';
                write_json_string(out, t.mentions[i]);
            }
            out << "],\"hashtags\":[";
            for (std::size_t i = 0; i < t.hashtags.size(); ++i) {
                if (i) out << ',';
                write_json_string(out, t.hashtags[i]);
            }
            out << "],\"like_count\":" << t.like_count
                << ",\"retweet_count\":" << t.retweet_count << "}\n";
        }
    }

    {
        std::ofstream out(dir + "/labels.jsonl", std::ios::binary);
        for (const LabelRecord& r : corpus.labels.all()) {
            out << "{\"user_id\":";
            write_json_string(out, corpus.node_ids[r.user]);
            out << ",\"followed_back\":" << (r.followed_back ? "true" : "false");
            if (r.response_time_s) out << ",\"response_time\":" << *r.response_time_s;
            out << ",\"unsolicited\":" << (r.unsolicited ? "true" : "false");
            if (r.followed_dnfb) out << ",\"followed_dnfb\":" << (*r.followed_dnfb ? "true" : "false");
            out << "}\n";
        }
    }
}

}  // namespace fbnet
