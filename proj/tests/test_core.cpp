#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fbnet/corpus.hpp"
#include "fbnet/errors.hpp"
#include "fbnet/graph.hpp"
#include "fbnet/rng.hpp"
#include "fbnet/simd.hpp"
#include "fbnet/timeutil.hpp"

using namespace fbnet;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto dir = std::filesystem::temp_directory_path() / "fbnet_test_core";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

FollowGraph graph_of(NodeId n, std::vector<std::pair<NodeId, NodeId>> edges) {
    return FollowGraph::from_edges(n, std::move(edges));
}

}  // namespace

// --- SIMD kernels: scalar vs active backend equivalence -------------------

TEST_CASE("simd kernels match scalar reference") {
    Rng rng(7);
    for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{8}, std::size_t{17},
                          std::size_t{256}, std::size_t{1000}}) {
        std::vector<double> a(n), b(n);
        std::vector<float> af(n), bf(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.next_range(-2.0, 2.0);
            b[i] = rng.next_range(-2.0, 2.0);
            af[i] = static_cast<float>(a[i]);
            bf[i] = static_cast<float>(b[i]);
        }

        simd::force_backend(simd::Backend::scalar);
        const double dot_s = simd::dot(a.data(), b.data(), n);
        const double sum_s = simd::sum(a.data(), n);
        const double sumsq_s = simd::sumsq(a.data(), n);
        const float dotf_s = simd::dotf(af.data(), bf.data(), n);
        std::vector<double> y_s(b);
        simd::axpy(0.37, a.data(), y_s.data(), n);
        std::vector<float> yf_s(bf);
        simd::axpyf(0.37f, af.data(), yf_s.data(), n);
        std::vector<double> x_s(a);
        simd::scale(1.5, x_s.data(), n);

        const bool has_avx2 = simd::force_backend(simd::Backend::avx2);
        if (!has_avx2) return;  // nothing else to compare on this CPU

        CHECK(simd::dot(a.data(), b.data(), n) == doctest::Approx(dot_s).epsilon(1e-12));
        CHECK(simd::sum(a.data(), n) == doctest::Approx(sum_s).epsilon(1e-12));
        CHECK(simd::sumsq(a.data(), n) == doctest::Approx(sumsq_s).epsilon(1e-12));
        CHECK(simd::dotf(af.data(), bf.data(), n) == doctest::Approx(dotf_s).epsilon(1e-4));
        std::vector<double> y_v(b);
        simd::axpy(0.37, a.data(), y_v.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y_v[i] == doctest::Approx(y_s[i]).epsilon(1e-12));
        std::vector<float> yf_v(bf);
        simd::axpyf(0.37f, af.data(), yf_v.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(yf_v[i] == doctest::Approx(yf_s[i]).epsilon(1e-5));
        std::vector<double> x_v(a);
        simd::scale(1.5, x_v.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(x_v[i] == x_s[i]);
    }
    simd::force_backend(simd::Backend::avx2);  // leave default-ish
}

// --- timestamps ------------------------------------------------------------

TEST_CASE("iso8601 round trip") {
    for (const char* s : {"1970-01-01T00:00:00Z", "2020-03-01T00:00:00Z", "2021-11-12T23:59:59Z",
                          "2006-07-15T11:35:05Z", "2024-02-29T12:00:00Z"}) {
        CHECK(format_iso8601(parse_iso8601(s)) == s);
    }
    CHECK(parse_iso8601("1970-01-02T00:00:00Z") == 86400);
    CHECK_THROWS_AS(parse_iso8601("2020-13-01T00:00:00Z"), DataError);
    CHECK_THROWS_AS(parse_iso8601("2020-01-01 00:00:00Z"), DataError);
    CHECK_THROWS_AS(parse_iso8601("2020-01-01T00:00:00"), DataError);
}

TEST_CASE("age in julian years") {
    const UnixTime a = parse_iso8601("2020-11-12T00:00:00Z");
    const UnixTime pivot = a + static_cast<UnixTime>(kSecondsPerYear);
    CHECK(years_between(a, pivot) == doctest::Approx(1.0).epsilon(1e-12));
}

// --- reciprocity -----------------------------------------------------------

TEST_CASE("edge_reciprocity basics") {
    CHECK(edge_reciprocity(graph_of(2, {{0, 1}, {1, 0}})) == 1.0);
    CHECK(edge_reciprocity(graph_of(2, {{0, 1}})) == 0.0);
    CHECK_THROWS_AS(edge_reciprocity(graph_of(3, {})), DataError);
}

TEST_CASE("edge_reciprocity is 1 on reversal-closed edge sets") {
    Rng rng(5);
    std::set<std::pair<NodeId, NodeId>> edges;
    for (int k = 0; k < 30; ++k) {
        NodeId u = static_cast<NodeId>(rng.next_below(12));
        NodeId v = static_cast<NodeId>(rng.next_below(12));
        if (u == v) continue;
        edges.insert({u, v});
        edges.insert({v, u});
    }
    CHECK(edge_reciprocity(graph_of(12, {edges.begin(), edges.end()})) == 1.0);
}

TEST_CASE("edge_reciprocity matches brute-force scan on random graphs") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const NodeId n = 3 + static_cast<NodeId>(rng.next_below(18));
        std::set<std::pair<NodeId, NodeId>> edges;
        const std::size_t m = 1 + rng.next_below(2 * n);
        while (edges.size() < m) {
            NodeId u = static_cast<NodeId>(rng.next_below(n));
            NodeId v = static_cast<NodeId>(rng.next_below(n));
            if (u != v) edges.insert({u, v});
        }
        std::vector<std::pair<NodeId, NodeId>> list(edges.begin(), edges.end());
        const FollowGraph g = graph_of(n, list);

        std::size_t mutual = 0;
        for (const auto& e : list) {
            if (edges.count({e.second, e.first})) ++mutual;
        }
        const double expected = static_cast<double>(mutual) / static_cast<double>(list.size());
        CHECK(edge_reciprocity(g) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("user_reciprocity jaccard") {
    // followings {1,2,3}, followers {2,3,4} -> 2/4
    const FollowGraph g = graph_of(5, {{0, 1}, {0, 2}, {0, 3}, {2, 0}, {3, 0}, {4, 0}});
    CHECK(user_reciprocity(g, 0) == doctest::Approx(0.5));

    const FollowGraph mutual = graph_of(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}});
    CHECK(user_reciprocity(mutual, 0) == 1.0);

    const FollowGraph iso = graph_of(3, {{1, 2}});
    CHECK(user_reciprocity(iso, 0) == 0.0);
    CHECK_THROWS_AS(user_reciprocity(iso, 99), DataError);
}

TEST_CASE("mean user_reciprocity equals brute-force set recomputation") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const NodeId n = 4 + static_cast<NodeId>(rng.next_below(20));
        std::set<std::pair<NodeId, NodeId>> edges;
        for (std::size_t k = 0; k < 3u * n; ++k) {
            NodeId u = static_cast<NodeId>(rng.next_below(n));
            NodeId v = static_cast<NodeId>(rng.next_below(n));
            if (u != v) edges.insert({u, v});
        }
        const FollowGraph g = graph_of(n, {edges.begin(), edges.end()});

        double mean_module = 0.0, mean_brute = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            mean_module += user_reciprocity(g, u);
            std::set<NodeId> out, in;
            for (const auto& e : edges) {
                if (e.first == u) out.insert(e.second);
                if (e.second == u) in.insert(e.first);
            }
            std::set<NodeId> uni(out.begin(), out.end());
            uni.insert(in.begin(), in.end());
            std::size_t both = 0;
            for (NodeId v : out) both += in.count(v);
            mean_brute += uni.empty() ? 0.0 : static_cast<double>(both) / uni.size();
        }
        CHECK(mean_module / n == doctest::Approx(mean_brute / n).epsilon(1e-12));
    }
}

TEST_CASE("user_reciprocity invariant under neighbor relabeling") {
    const FollowGraph g1 = graph_of(5, {{0, 1}, {0, 2}, {3, 0}, {2, 0}});
    const FollowGraph g2 = graph_of(5, {{0, 4}, {0, 3}, {1, 0}, {3, 0}});
    CHECK(user_reciprocity(g1, 0) == user_reciprocity(g2, 0));
}

// --- corpus loading ----------------------------------------------------------

namespace {

const char* kAccounts =
    R"({"id":"a1","screen_name":"Alpha","name":"A","description":"","location":"","url":"","created_at":"2019-01-01T00:00:00Z","followers_count":10,"followings_count":5,"statuses_count":100,"likes_count":3,"suspended":false,"deleted":false})"
    "\n"
    R"({"id":"a2","screen_name":"Bravo","name":"B","description":"hi","location":"x","url":"","created_at":"2020-06-01T00:00:00Z","followers_count":1,"followings_count":2,"statuses_count":3,"likes_count":4,"suspended":true,"deleted":false})"
    "\n"
    R"({"id":"a3","screen_name":"Charlie","name":"C","description":"","location":"","url":"http://c","created_at":"2018-02-02T00:00:00Z","followers_count":0,"followings_count":0,"statuses_count":0,"likes_count":0,"suspended":false,"deleted":true})"
    "\n";

}  // namespace

TEST_CASE("load_corpus builds nodes and edges") {
    const std::string acc = write_temp("accounts.jsonl", kAccounts);
    const std::string edges = write_temp("edges.csv", "src,dst\na1,a2\na2,a1\n");
    const Corpus c = load_corpus(acc, edges);
    CHECK(c.core_count() == 3);
    CHECK(c.node_count() == 3);
    CHECK(c.graph.edge_count() == 2);
    CHECK(c.graph.has_edge(c.node_of("a1"), c.node_of("a2")));
}

TEST_CASE("unknown edge endpoint becomes an external stub") {
    const std::string acc = write_temp("accounts.jsonl", kAccounts);
    const std::string edges = write_temp("edges_stub.csv", "src,dst\na1,ghost\n");
    const Corpus c = load_corpus(acc, edges);
    CHECK(c.core_count() == 3);
    CHECK(c.node_count() == 4);
    CHECK(c.is_external(c.node_of("ghost")));
    CHECK_FALSE(c.is_external(c.node_of("a1")));
}

TEST_CASE("duplicate account id errors with the line number") {
    const std::string dup = std::string(kAccounts) +
        R"({"id":"a1","screen_name":"Dup","name":"D","description":"","location":"","url":"","created_at":"2019-01-01T00:00:00Z","followers_count":0,"followings_count":0,"statuses_count":0,"likes_count":0,"suspended":false,"deleted":false})"
        "\n";
    const std::string acc = write_temp("accounts_dup.jsonl", dup);
    const std::string edges = write_temp("edges_empty.csv", "src,dst\n");
    try {
        load_corpus(acc, edges);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find(":4:") != std::string::npos);
        CHECK(std::string(e.what()).find("duplicate account id") != std::string::npos);
    }
}

TEST_CASE("malformed line errors name file and line") {
    const std::string acc = write_temp("accounts_bad.jsonl", std::string(kAccounts) + "{not json\n");
    const std::string edges = write_temp("edges_empty.csv", "src,dst\n");
    try {
        load_corpus(acc, edges);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("accounts_bad.jsonl:4") != std::string::npos);
    }
}

TEST_CASE("duplicate edges are deduplicated") {
    const std::string acc = write_temp("accounts.jsonl", kAccounts);
    const std::string edges = write_temp("edges_dup.csv", "src,dst\na1,a2\na1,a2\na1,a2\n");
    const Corpus c = load_corpus(acc, edges);
    CHECK(c.graph.edge_count() == 1);
}

TEST_CASE("corpus save/load round-trips byte-identically") {
    const std::string acc = write_temp("accounts.jsonl", kAccounts);
    const std::string edges = write_temp("edges_rt.csv", "src,dst\na1,a2\na2,a1\na3,ghost\n");
    const std::string tweets = write_temp(
        "tweets.jsonl",
        R"({"id":"t1","user_id":"a1","created_at":"2021-01-01T00:00:00Z","text":"hello #x","is_retweet":false,"is_reply":false,"is_quote":false,"mentions":["Bravo"],"hashtags":["#x"],"like_count":2,"retweet_count":1})"
        "\n"
        R"({"id":"t2","user_id":"a2","created_at":"2021-02-01T00:00:00Z","text":"RT @z: y","is_retweet":true,"is_reply":false,"is_quote":false,"retweeted_user_id":"z9","mentions":[],"hashtags":[],"like_count":0,"retweet_count":0})"
        "\n");
    const std::string labels = write_temp(
        "labels.jsonl",
        R"({"user_id":"a1","followed_back":true,"response_time":600,"unsolicited":false,"followed_dnfb":true})"
        "\n"
        R"({"user_id":"a2","followed_back":false,"unsolicited":false})"
        "\n");

    const Corpus c = load_corpus(acc, edges, tweets, labels);
    auto dir1 = std::filesystem::temp_directory_path() / "fbnet_rt1";
    auto dir2 = std::filesystem::temp_directory_path() / "fbnet_rt2";
    save_corpus(c, dir1.string());
    const Corpus c2 = load_corpus((dir1 / "accounts.jsonl").string(), (dir1 / "edges.csv").string(),
                                  (dir1 / "tweets.jsonl").string(), (dir1 / "labels.jsonl").string());
    save_corpus(c2, dir2.string());
    for (const char* f : {"accounts.jsonl", "edges.csv", "tweets.jsonl", "labels.jsonl"}) {
        std::ifstream f1(dir1 / f, std::ios::binary), f2(dir2 / f, std::ios::binary);
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        CHECK(s1.str() == s2.str());
        CHECK(!s1.str().empty());
    }
}

TEST_CASE("label invariants enforced at load") {
    const std::string acc = write_temp("accounts.jsonl", kAccounts);
    const std::string edges = write_temp("edges_empty.csv", "src,dst\n");
    const std::string labels = write_temp(
        "labels_bad.jsonl",
        R"({"user_id":"a1","followed_back":false,"response_time":600,"unsolicited":false})"
        "\n");
    CHECK_THROWS_AS(load_corpus(acc, edges, "", labels), DataError);
}
