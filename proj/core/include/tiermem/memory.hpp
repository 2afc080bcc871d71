#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tiermem/types.hpp"

namespace tiermem {

// Persistent frequency counter per (kind, key). Counts only grow: they track
// every summarizing event since engine creation and survive STM refreshes.
struct FlagTable {
    std::map<FlagKey, std::uint64_t> counts;

    std::uint64_t count(Kind kind, const std::string& key) const;
    void increment(Kind kind, const std::string& key);

    bool operator==(const FlagTable&) const = default;
};

// Bounded FIFO buffer of raw notes. Cleared every iteration; no lookup.
struct WorkingMemory {
    std::vector<Note> notes;

    bool operator==(const WorkingMemory&) const = default;
};

// Bounded, recency-windowed store of knowledge items. Iteration order is
// insertion order; the closest-match retriever's tie-break depends on it.
struct ShortTermMemory {
    std::vector<KnowledgeItem> items;

    const KnowledgeItem* find(Kind kind, const std::string& key) const;
    bool contains(Kind kind, const std::string& key) const;

    bool operator==(const ShortTermMemory&) const = default;
};

struct LtmEntry {
    KnowledgeItem item;
    std::vector<double> embedding;  // unit norm, length = config.embedding_dim

    bool operator==(const LtmEntry&) const = default;
};

// Append-only store of frequently seen items. Entries are never removed or
// mutated.
struct LongTermMemory {
    std::vector<LtmEntry> entries;

    bool contains(Kind kind, const std::string& key) const;

    bool operator==(const LongTermMemory&) const = default;
};

inline constexpr int kSnapshotFormatVersion = 1;

// The full serializable memory state for one user. Snapshots are immutable
// values: every operation below returns a new snapshot and never touches its
// input, so older snapshots stay valid for concurrent readers.
struct MemorySnapshot {
    int format_version = kSnapshotFormatVersion;
    std::string user_id;
    std::uint64_t round_cursor = 0;
    MemoryConfig config;
    WorkingMemory working;
    ShortTermMemory stm;
    LongTermMemory ltm;
    FlagTable flag_table;

    bool operator==(const MemorySnapshot&) const = default;
};

MemorySnapshot make_snapshot(std::string user_id, MemoryConfig config = {});

// Append a note to working memory. Oldest note is dropped first when the
// capacity bound would be exceeded. Rejects notes whose text is empty after
// trimming (Errc::malformed_note).
MemorySnapshot record_note(const MemorySnapshot& memory, const Note& note);

// Upsert a knowledge item into STM and bump the flag table exactly once.
// An existing (kind, key) keeps its stored text and source_round; frequency
// is re-read from the flag table and last_seen_round updated. A key already
// promoted to LTM only bumps the flag table (LTM entries are immutable and
// the tiers stay disjoint). On capacity overflow the least-recently-seen
// non-candidate item is evicted (candidate: flag count >= theta - 1); ties
// fall back to insertion order, and if every item is a candidate the same
// rule runs over all of them.
MemorySnapshot upsert_stm(const MemorySnapshot& memory, const KnowledgeItem& item,
                          std::uint64_t current_round);

// Move a threshold-crossing item from STM to LTM with its embedding.
// Requires flag count >= theta, presence in STM, a unit-norm embedding of
// the configured dimension, and no prior promotion of the same key.
MemorySnapshot promote(const MemorySnapshot& memory, Kind kind, const std::string& key,
                       const std::vector<double>& embedding);

// Evict STM items whose last_seen_round fell out of the sliding window
// [current_round - refresh_period, current_round]. Flag table and LTM are
// untouched.
MemorySnapshot refresh_stm(const MemorySnapshot& memory, std::uint64_t current_round);

// Empty working memory; all other tiers untouched. Idempotent.
MemorySnapshot clear_working(const MemorySnapshot& memory);

struct IntegrityReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

// Check the cross-tier invariants: every LTM key has flag count >= theta,
// LTM keys are unique, STM and LTM are key-disjoint, STM within capacity,
// embeddings unit-norm at the configured dimension.
IntegrityReport check_integrity(const MemorySnapshot& memory);

}  // namespace tiermem
