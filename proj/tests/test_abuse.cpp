#include <doctest.h>

#include "fbnet/abuse.hpp"
#include "helpers.hpp"

using namespace fbnet;
using fbnet::testing::add_fb_label;
using fbnet::testing::make_corpus;
using fbnet::testing::make_tweet;

namespace {

Tweet with_mentions(NodeId user, const std::string& id, std::vector<std::string> mentions,
                    bool reply = false, bool retweet = false) {
    Tweet t = make_tweet(user, id, "train " + id, {}, std::move(mentions));
    t.is_reply = reply;
    t.is_retweet = retweet;
    if (retweet) t.retweeted_user_id = "z";
    return t;
}

Partition one_community(std::size_t n) {
    Partition p;
    p.assignment.assign(n, 0);
    p.communities.resize(1);
    p.communities[0].community_id = 0;
    p.communities[0].label = "C0";
    p.communities[0].size = n;
    return p;
}

}  // namespace

TEST_CASE("is_follow_train rule") {
    CHECK(is_follow_train(with_mentions(0, "a", {"u1", "u2", "u3", "u4", "u5"})));
    CHECK_FALSE(is_follow_train(with_mentions(0, "b", {"u1", "u2", "u3", "u4", "u5", "u6", "u7", "u8"},
                                              /*reply=*/true)));
    CHECK_FALSE(is_follow_train(with_mentions(0, "c", {"u1", "u2", "u3", "u4"})));
    // Duplicate handles do not qualify a tweet: 5 mentions, 3 distinct.
    CHECK_FALSE(is_follow_train(with_mentions(0, "d", {"u1", "U1", "u2", "u2", "u3"})));
    // Case-folding also merges mixed-case variants.
    CHECK(is_follow_train(with_mentions(0, "e", {"A", "a", "b", "c", "d", "E"})));
}

TEST_CASE("train_stats counts conducts and rides") {
    Corpus c = make_corpus(6, {});
    // user0 posts 2 trains; user1 is mentioned in 3 trains.
    const std::string u1 = c.accounts[1].screen_name;
    c.tweets.add(with_mentions(0, "t1", {u1, "x1", "x2", "x3", "x4"}));
    c.tweets.add(with_mentions(0, "t2", {u1, "y1", "y2", "y3", "y4"}));
    c.tweets.add(with_mentions(2, "t3", {u1, "z1", "z2", "z3", "z4"}));
    // A retweeted train does not count as conducting (and adds no rides).
    c.tweets.add(with_mentions(3, "t4", {u1, "w1", "w2", "w3", "w4"}, false, true));

    const TrainReport report = train_stats(c, one_community(6));
    CHECK(report.per_user[0].conducts == 2);
    CHECK(report.per_user[2].conducts == 1);
    CHECK(report.per_user[3].conducts == 0);
    CHECK(report.per_user[1].rides == 3);
    CHECK(report.total_trains == 3);
    // Sum of community conducts equals total trains by assigned members.
    double sum = 0;
    for (const auto& [comm, mean] : report.mean_conducts) sum += mean * 6;
    CHECK(sum == doctest::Approx(3.0));
}

TEST_CASE("rides match handles case-insensitively") {
    Corpus c = make_corpus(3, {});
    c.accounts[1].screen_name = "MixedCase";
    c.tweets.add(with_mentions(0, "t1", {"mixedcase", "a", "b", "c", "d"}));
    const TrainReport report = train_stats(c, one_community(3));
    CHECK(report.per_user[1].rides == 1);
}

TEST_CASE("corpus without trains yields zeros") {
    Corpus c = make_corpus(3, {});
    c.tweets.add(with_mentions(0, "t1", {"a", "b"}));
    const TrainReport report = train_stats(c, one_community(3));
    CHECK(report.total_trains == 0);
    for (const auto& s : report.per_user) {
        CHECK(s.conducts == 0);
        CHECK(s.rides == 0);
    }
}

TEST_CASE("automation_ratio per community") {
    Corpus c = make_corpus(12, {});
    Partition p;
    p.assignment.assign(12, 0);
    for (NodeId v = 6; v < 12; ++v) p.assignment[v] = 1;
    p.communities.resize(2);
    p.communities[0].community_id = 0;
    p.communities[1].community_id = 1;

    // Community 0: 5 FB members, 3 automated. Community 1: no FB members.
    for (NodeId v = 0; v < 5; ++v) add_fb_label(c, v, true, 600, v < 3);
    add_fb_label(c, 5, false);
    add_fb_label(c, 6, false);

    const auto ratios = automation_ratio(p, c.labels);
    REQUIRE(ratios.at(0).has_value());
    CHECK(*ratios.at(0) == doctest::Approx(0.6));
    CHECK_FALSE(ratios.at(1).has_value());
}

TEST_CASE("automation_ratio extremes") {
    Corpus c = make_corpus(4, {});
    Partition p = one_community(4);
    for (NodeId v = 0; v < 4; ++v) add_fb_label(c, v, true, 600, true);
    const auto ratios = automation_ratio(p, c.labels);
    CHECK(*ratios.at(0) == 1.0);
}

TEST_CASE("suspension_stats tallies and relative rate") {
    // 10 FB accounts in a community (3 suspended), 10 community non-FB
    // (1 suspended), 20 baseline accounts (2 suspended).
    Corpus c = make_corpus(40, {});
    Partition p;
    p.assignment.assign(40, 0);
    for (NodeId v = 20; v < 40; ++v) p.assignment[v] = 1;  // None group
    p.communities.resize(2);
    p.communities[0].community_id = 0;
    p.communities[1].community_id = 1;
    p.communities[1].label = "None";
    p.none_id = 1;

    for (NodeId v = 0; v < 10; ++v) {
        add_fb_label(c, v, true, 600, v < 4);
        c.accounts[v].suspended = v < 3;
    }
    for (NodeId v = 10; v < 20; ++v) {
        add_fb_label(c, v, false);
        c.accounts[v].suspended = v == 10;
    }
    for (NodeId v = 20; v < 40; ++v) {
        add_fb_label(c, v, false);
        c.accounts[v].suspended = v < 22;
    }

    const SuspensionStats s = suspension_stats(c, p);
    CHECK(s.total_accounts == 40);
    CHECK(s.suspended_total == 6);
    CHECK(s.fb_accounts == 10);
    CHECK(s.fb_suspended == 3);
    CHECK(s.automated_fb_accounts == 4);
    CHECK(s.community_non_fb_accounts == 10);
    CHECK(s.community_non_fb_suspended == 1);
    CHECK(s.baseline_accounts == 20);
    CHECK(s.baseline_suspended == 2);
    CHECK(*s.fb_rate == doctest::Approx(0.3));
    CHECK(*s.baseline_rate == doctest::Approx(0.1));
    CHECK(*s.relative_rate == doctest::Approx(3.0));
}

TEST_CASE("suspension rates at the paper-style construction") {
    // 1000 FB accounts at 6.7% suspension vs 1000 baseline at 4.3%: the
    // relative rate is their literal quotient.
    Corpus c = make_corpus(2000, {});
    Partition p;
    p.assignment.assign(2000, 0);
    p.communities.resize(2);
    p.communities[0].community_id = 0;
    p.communities[1].community_id = 1;
    p.communities[1].label = "None";
    p.none_id = 1;
    for (NodeId v = 1000; v < 2000; ++v) p.assignment[v] = 1;
    for (NodeId v = 0; v < 1000; ++v) {
        add_fb_label(c, v, true);
        c.accounts[v].suspended = v < 67;
    }
    for (NodeId v = 1000; v < 2000; ++v) c.accounts[v].suspended = v < 1043;
    const SuspensionStats s = suspension_stats(c, p);
    CHECK(*s.fb_rate == doctest::Approx(0.067));
    CHECK(*s.baseline_rate == doctest::Approx(0.043));
    CHECK(*s.relative_rate == doctest::Approx(0.067 / 0.043));
}

TEST_CASE("suspension_stats degenerate corners") {
    Corpus none = make_corpus(3, {});
    Partition p = one_community(3);
    const SuspensionStats s0 = suspension_stats(none, p);
    CHECK(s0.suspended_total == 0);
    CHECK_FALSE(s0.relative_rate.has_value());

    Corpus all = make_corpus(4, {});
    Partition q;
    q.assignment.assign(4, 0);
    q.communities.resize(2);
    q.communities[0].community_id = 0;
    q.communities[1].community_id = 1;
    q.none_id = 1;
    q.assignment[2] = q.assignment[3] = 1;
    for (NodeId v = 0; v < 2; ++v) add_fb_label(all, v, true);
    for (auto& a : all.accounts) a.suspended = true;
    const SuspensionStats s1 = suspension_stats(all, q);
    CHECK(*s1.fb_rate == 1.0);
    CHECK(*s1.baseline_rate == 1.0);
    CHECK(*s1.relative_rate == 1.0);
}
