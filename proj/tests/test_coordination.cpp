#include <doctest.h>

#include <cmath>
#include <map>

#include "fbnet/coordination.hpp"
#include "fbnet/errors.hpp"
#include "fbnet/rng.hpp"
#include "helpers.hpp"

using namespace fbnet;

namespace {

std::vector<Engagement> eng(std::initializer_list<std::pair<NodeId, const char*>> list) {
    std::vector<Engagement> out;
    for (const auto& [u, key] : list) out.push_back({u, key});
    return out;
}

const UserVector* vector_of(const UserVectorSet& set, NodeId u) {
    for (const UserVector& v : set.vectors) {
        if (v.user == u) return &v;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("idf-zero terms leave all-shared users out") {
    // Three users all engage T0 (idf 0); u0 engages only T0 and is omitted.
    const auto vectors = build_user_vectors(eng({{0, "T0"}, {1, "T0"}, {2, "T0"}, {1, "T1"}, {2, "T2"}}));
    CHECK(vector_of(vectors, 0) == nullptr);
    CHECK(vector_of(vectors, 1) != nullptr);
    CHECK(vector_of(vectors, 2) != nullptr);
}

TEST_CASE("tf-idf weights match the hand-computed table") {
    // 5 users, 6 tweets. T0 engaged by everyone (idf 0); the rest hand-set.
    std::vector<Engagement> list;
    for (NodeId u = 0; u < 5; ++u) list.push_back({u, "T0"});
    list.push_back({0, "T1"});
    list.push_back({0, "T1"});
    list.push_back({1, "T1"});
    list.push_back({0, "T2"});
    list.push_back({2, "T3"});
    list.push_back({2, "T3"});
    list.push_back({2, "T3"});
    list.push_back({3, "T4"});
    list.push_back({4, "T4"});
    list.push_back({4, "T4"});
    list.push_back({4, "T5"});
    const auto vectors = build_user_vectors(list);

    const double idf25 = std::log(5.0 / 2.0);
    const double idf5 = std::log(5.0);
    auto weight = [&](NodeId u, const char* key) {
        const UserVector* v = vector_of(vectors, u);
        REQUIRE(v != nullptr);
        for (const auto& [term, w] : v->weights) {
            if (vectors.terms[term] == key) return w;
        }
        return 0.0;
    };
    CHECK(weight(0, "T1") == doctest::Approx(2.0 * idf25));
    CHECK(weight(0, "T2") == doctest::Approx(idf5));
    CHECK(weight(0, "T0") == 0.0);  // idf-zero term dropped
    CHECK(weight(1, "T1") == doctest::Approx(idf25));
    CHECK(weight(2, "T3") == doctest::Approx(3.0 * idf5));
    CHECK(weight(3, "T4") == doctest::Approx(idf25));
    CHECK(weight(4, "T4") == doctest::Approx(2.0 * idf25));
    CHECK(weight(4, "T5") == doctest::Approx(idf5));
}

TEST_CASE("cosine similarity basics") {
    const auto vectors = build_user_vectors(eng({{0, "A"}, {0, "B"},
                                                 {1, "A"}, {1, "B"},
                                                 {2, "C"}, {3, "D"}}));
    const UserVector* v0 = vector_of(vectors, 0);
    const UserVector* v1 = vector_of(vectors, 1);
    const UserVector* v2 = vector_of(vectors, 2);
    REQUIRE(v0 != nullptr);
    CHECK(cosine_similarity(*v0, *v1) == doctest::Approx(1.0));
    CHECK(cosine_similarity(*v0, *v2) == doctest::Approx(0.0));
}

TEST_CASE("pairwise similarities match a dense brute-force oracle") {
    Rng rng(3);
    std::vector<Engagement> list;
    for (NodeId u = 0; u < 10; ++u) {
        const std::size_t k = 1 + rng.next_below(6);
        for (std::size_t i = 0; i < k; ++i) {
            list.push_back({u, "T" + std::to_string(rng.next_below(12))});
        }
    }
    const auto vectors = build_user_vectors(list);
    const std::size_t n_terms = vectors.terms.size();

    // Dense reconstruction.
    std::map<NodeId, std::vector<double>> dense;
    for (const UserVector& v : vectors.vectors) {
        auto& row = dense[v.user];
        row.assign(n_terms, 0.0);
        for (const auto& [term, w] : v.weights) row[term] = w;
    }
    const auto net = similarity_network(vectors, 0.0);
    for (const auto& e : net.edges) {
        const auto& a = dense[e.u];
        const auto& b = dense[e.v];
        double dot = 0, na = 0, nb = 0;
        for (std::size_t t = 0; t < n_terms; ++t) {
            dot += a[t] * b[t];
            na += a[t] * a[t];
            nb += b[t] * b[t];
        }
        CHECK(e.weight == doctest::Approx(dot / std::sqrt(na * nb)).epsilon(1e-12));
    }
}

TEST_CASE("cosine is invariant to scaling all engagement counts") {
    std::vector<Engagement> base = eng({{0, "A"}, {0, "A"}, {0, "B"}, {1, "A"}, {1, "C"}, {2, "B"}});
    std::vector<Engagement> scaled;
    for (const auto& e : base) {
        for (int k = 0; k < 3; ++k) scaled.push_back(e);
    }
    const auto v1 = build_user_vectors(base);
    const auto v2 = build_user_vectors(scaled);
    const auto n1 = similarity_network(v1, 0.0);
    const auto n2 = similarity_network(v2, 0.0);
    REQUIRE(n1.edges.size() == n2.edges.size());
    for (std::size_t i = 0; i < n1.edges.size(); ++i) {
        CHECK(n1.edges[i].weight == doctest::Approx(n2.edges[i].weight).epsilon(1e-12));
    }
}

TEST_CASE("threshold_sweep on a complete high-similarity graph") {
    SimilarityNetwork net;
    net.nodes = {0, 1, 2, 3};
    for (NodeId u = 0; u < 4; ++u) {
        for (NodeId v = u + 1; v < 4; ++v) net.edges.push_back({u, v, 1.0});
    }
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    const auto curve = threshold_sweep(net, 4, grid);
    for (const auto& [t, ratio] : curve.points) CHECK(ratio == 1.0);
}

TEST_CASE("threshold_sweep giant-component tie breaks to smallest min id") {
    // Two 2-node components at weight 0.9 after the 0.95 threshold removes a
    // star edge; tie resolved toward the component containing node 0.
    SimilarityNetwork net;
    net.nodes = {0, 1, 2, 3, 4};
    net.edges.push_back({0, 1, 0.9});
    net.edges.push_back({2, 3, 0.9});
    net.edges.push_back({1, 2, 0.5});
    const std::vector<double> grid = {0.8};
    const auto curve = threshold_sweep(net, 5, grid);
    // Both components have size 2, node 4 isolated: ratio = 2/5.
    CHECK(curve.points[0].second == doctest::Approx(0.4));
}

TEST_CASE("threshold_sweep ratios are monotone non-increasing") {
    Rng rng(9);
    SimilarityNetwork net;
    for (NodeId u = 0; u < 30; ++u) net.nodes.push_back(u);
    for (NodeId u = 0; u < 30; ++u) {
        for (NodeId v = u + 1; v < 30; ++v) {
            if (rng.next_bool(0.2)) net.edges.push_back({u, v, rng.next_double()});
        }
    }
    const auto grid = default_threshold_grid();
    const auto curve = threshold_sweep(net, 30, grid);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].second <= curve.points[i - 1].second + 1e-12);
    }
}

TEST_CASE("threshold_sweep errors") {
    SimilarityNetwork empty;
    const std::vector<double> grid = {0.0};
    CHECK_THROWS_AS(threshold_sweep(empty, 1, grid), DataError);

    SimilarityNetwork one;
    one.nodes = {0};
    const std::vector<double> bad = {0.5, 0.25};
    CHECK_THROWS_AS(threshold_sweep(one, 1, bad), DataError);
}

TEST_CASE("engagement extraction keys retweets by user and text") {
    Corpus c = fbnet::testing::make_corpus(3, {});
    Tweet rt1 = fbnet::testing::make_tweet(0, "t1", "RT body one");
    rt1.is_retweet = true;
    rt1.retweeted_user_id = "z1";
    Tweet rt2 = fbnet::testing::make_tweet(1, "t2", "RT body one");
    rt2.is_retweet = true;
    rt2.retweeted_user_id = "z1";
    Tweet q = fbnet::testing::make_tweet(2, "t3", "quoted body");
    q.is_quote = true;
    c.tweets.add(std::move(rt1));
    c.tweets.add(std::move(rt2));
    c.tweets.add(std::move(q));

    const std::vector<NodeId> members = {0, 1, 2};
    const auto both = extract_engagements(c, members, EngagementKinds::retweets_and_quotes);
    CHECK(both.size() == 3);
    CHECK(both[0].tweet_key == both[1].tweet_key);  // same retweet target
    const auto rt_only = extract_engagements(c, members, EngagementKinds::retweets);
    CHECK(rt_only.size() == 2);
}
