#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbnet/timeutil.hpp"

namespace fbnet {

// Dense node index into a corpus. Indices below Corpus::core_count() are
// in-corpus accounts in file order; higher indices are external stubs created
// for edge endpoints that have no profile row.
using NodeId = std::uint32_t;

// Profile metadata snapshot for one account.
struct Account {
    std::string id;
    std::string screen_name;
    std::string name;
    std::string description;
    std::string location;
    std::string url;
    UnixTime created_at = 0;
    std::int64_t followers_count = 0;
    std::int64_t followings_count = 0;
    std::int64_t statuses_count = 0;
    std::int64_t likes_count = 0;
    bool suspended = false;
    bool deleted = false;
};

struct Tweet {
    std::string id;
    NodeId user = 0;
    UnixTime created_at = 0;
    std::string text;
    bool is_retweet = false;
    bool is_reply = false;
    bool is_quote = false;
    std::optional<std::string> retweeted_user_id;  // raw id, may be outside corpus
    std::vector<std::string> mentions;             // handles
    std::vector<std::string> hashtags;
    std::int64_t like_count = 0;
    std::int64_t retweet_count = 0;
};

// Honeypot-derived ground truth for one account.
struct LabelRecord {
    NodeId user = 0;
    bool followed_back = false;
    std::optional<std::int64_t> response_time_s;  // absent unless followed_back
    bool unsolicited = false;
    std::optional<bool> followed_dnfb;  // present only if followed_back
};

}  // namespace fbnet
