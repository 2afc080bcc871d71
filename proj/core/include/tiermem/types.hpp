#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace tiermem {

// The two knowledge categories the executive process distinguishes.
enum class Kind {
    CommonSense,
    UserSpecific,
};

std::string_view to_string(Kind kind);
Kind kind_from_string(std::string_view s);

// One raw note taken from a dialogue round. Lives only in working memory.
struct Note {
    std::string id;
    std::uint64_t round_index = 0;
    std::string text;
    std::uint64_t created_at = 0;  // monotonic sequence number

    bool operator==(const Note&) const = default;
};

// One unit of purified knowledge. `key` is the canonical identity
// (text::normalize_key of the purified text); `text` keeps the original.
struct KnowledgeItem {
    std::string key;
    Kind kind = Kind::CommonSense;
    std::string text;
    std::uint64_t source_round = 0;
    std::uint64_t last_seen_round = 0;
    std::uint64_t frequency = 1;

    bool operator==(const KnowledgeItem&) const = default;
};

KnowledgeItem make_item(Kind kind, std::string_view purified_text, std::uint64_t round);

// Identity of a knowledge item across tiers and the flag table.
struct FlagKey {
    Kind kind = Kind::CommonSense;
    std::string key;

    auto operator<=>(const FlagKey&) const = default;
};

struct MemoryConfig {
    std::uint64_t theta = 3;             // promotion threshold
    std::uint64_t refresh_period = 10;   // STM recency window, in rounds
    std::size_t working_capacity = 64;
    std::size_t stm_capacity = 256;
    std::size_t embedding_dim = 256;

    bool operator==(const MemoryConfig&) const = default;
};

}  // namespace tiermem
