#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tiermem/embedder.hpp"
#include "tiermem/memory.hpp"

namespace tiermem {

// Unit-cost edit distance over Unicode scalar values. Symmetric,
// levenshtein(a, a) == 0, empty strings allowed.
std::size_t levenshtein(std::string_view a, std::string_view b);

struct StmHit {
    KnowledgeItem item;
    std::size_t distance = 0;

    bool operator==(const StmHit&) const = default;
};

struct LtmHit {
    KnowledgeItem item;
    double similarity = 0.0;

    bool operator==(const LtmHit&) const = default;
};

// Closest-match retrieval over STM: the k items minimizing
// levenshtein(normalize_key(query), item.key), ascending by distance, ties
// broken by STM insertion order. Fewer than k are returned when STM is
// smaller.
std::vector<StmHit> retrieve_stm(const ShortTermMemory& stm, std::string_view query,
                                 std::size_t k);

// Semantic retrieval over LTM: the k entries maximizing the dot product of
// embed(query) with the stored unit embedding (cosine similarity),
// descending, ties broken by append order. Exhaustive exact scan.
std::vector<LtmHit> retrieve_ltm(const LongTermMemory& ltm, const Embedder& embedder,
                                 const std::string& query, std::size_t k);

inline constexpr std::string_view kUserSectionHeader = "[User-specific knowledge]";
inline constexpr std::string_view kCommonSectionHeader = "[Common-sense knowledge]";

// The assembled prompt p: ranked hits from both tiers plus the rendered text
// block that gets prepended to a query.
struct RetrievedPrompt {
    std::vector<StmHit> stm_hits;
    std::vector<LtmHit> ltm_hits;
    std::string rendered;

    bool empty() const { return rendered.empty(); }
};

// Render the hits under the two section headers, user-specific first. Items
// are deduplicated by (kind, key) across tiers with the STM hit winning, and
// dropped whole-item-at-a-time from the back of each section until the
// rendered block fits the character budget.
RetrievedPrompt assemble_prompt(std::vector<StmHit> stm_hits, std::vector<LtmHit> ltm_hits,
                                std::size_t budget);

// Convenience: run both retrievers against a snapshot and assemble.
RetrievedPrompt retrieve_prompt(const MemorySnapshot& memory, const Embedder& embedder,
                                const std::string& query, std::size_t k, std::size_t budget);

}  // namespace tiermem
