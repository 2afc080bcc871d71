#include "tiermem/memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tiermem/error.hpp"
#include "tiermem/text.hpp"

namespace tiermem {

std::string_view to_string(Kind kind) {
    return kind == Kind::CommonSense ? "common_sense" : "user_specific";
}

Kind kind_from_string(std::string_view s) {
    if (s == "common_sense") return Kind::CommonSense;
    if (s == "user_specific") return Kind::UserSpecific;
    raise(Errc::malformed_item, "unknown kind: " + std::string(s));
}

KnowledgeItem make_item(Kind kind, std::string_view purified_text, std::uint64_t round) {
    const auto trimmed = text::trim(purified_text);
    if (trimmed.empty()) {
        raise(Errc::malformed_item, "knowledge item text empty after trim");
    }
    KnowledgeItem item;
    item.kind = kind;
    item.text = std::string(trimmed);
    item.key = text::normalize_key(trimmed);
    item.source_round = round;
    item.last_seen_round = round;
    item.frequency = 1;
    return item;
}

std::uint64_t FlagTable::count(Kind kind, const std::string& key) const {
    const auto it = counts.find(FlagKey{kind, key});
    return it == counts.end() ? 0 : it->second;
}

void FlagTable::increment(Kind kind, const std::string& key) {
    ++counts[FlagKey{kind, key}];
}

const KnowledgeItem* ShortTermMemory::find(Kind kind, const std::string& key) const {
    for (const auto& item : items) {
        if (item.kind == kind && item.key == key) return &item;
    }
    return nullptr;
}

bool ShortTermMemory::contains(Kind kind, const std::string& key) const {
    return find(kind, key) != nullptr;
}

bool LongTermMemory::contains(Kind kind, const std::string& key) const {
    return std::any_of(entries.begin(), entries.end(), [&](const LtmEntry& e) {
        return e.item.kind == kind && e.item.key == key;
    });
}

MemorySnapshot make_snapshot(std::string user_id, MemoryConfig config) {
    MemorySnapshot snapshot;
    snapshot.user_id = std::move(user_id);
    snapshot.config = config;
    return snapshot;
}

MemorySnapshot record_note(const MemorySnapshot& memory, const Note& note) {
    if (text::trim(note.text).empty()) {
        raise(Errc::malformed_note, "note text empty after trim");
    }
    if (note.round_index > memory.round_cursor) {
        raise(Errc::precondition_violation,
              "note round " + std::to_string(note.round_index) + " is ahead of cursor " +
                  std::to_string(memory.round_cursor));
    }
    MemorySnapshot next = memory;
    next.working.notes.push_back(note);
    while (next.working.notes.size() > next.config.working_capacity) {
        next.working.notes.erase(next.working.notes.begin());
    }
    return next;
}

namespace {

// Least-recently-seen first, insertion order breaking ties. Returns the
// index to evict among `candidates` (indices into stm.items).
std::size_t pick_eviction(const std::vector<KnowledgeItem>& items,
                          const std::vector<std::size_t>& candidates) {
    std::size_t best = candidates.front();
    for (std::size_t idx : candidates) {
        if (items[idx].last_seen_round < items[best].last_seen_round) best = idx;
        // equal last_seen: keep the smaller index (earlier insertion)
    }
    return best;
}

double norm(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

}  // namespace

MemorySnapshot upsert_stm(const MemorySnapshot& memory, const KnowledgeItem& item,
                          std::uint64_t current_round) {
    if (item.key != text::normalize_key(item.key)) {
        raise(Errc::malformed_item, "item key is not normalized: " + item.key);
    }
    if (text::trim(item.text).empty() || item.key.empty()) {
        raise(Errc::malformed_item, "item has empty text or key");
    }

    MemorySnapshot next = memory;
    next.flag_table.increment(item.kind, item.key);
    const std::uint64_t count = next.flag_table.count(item.kind, item.key);

    // Already promoted: the frequency is still recorded, the tiers stay as
    // they are (LTM entries are immutable and disjoint from STM).
    if (next.ltm.contains(item.kind, item.key)) {
        return next;
    }

    auto& items = next.stm.items;
    const auto existing = std::find_if(items.begin(), items.end(), [&](const KnowledgeItem& k) {
        return k.kind == item.kind && k.key == item.key;
    });
    if (existing != items.end()) {
        existing->frequency = count;
        existing->last_seen_round = std::max(existing->last_seen_round, current_round);
        return next;
    }

    KnowledgeItem stored = item;
    stored.frequency = count;
    stored.last_seen_round = current_round;
    items.push_back(std::move(stored));

    if (items.size() > next.config.stm_capacity) {
        const std::uint64_t candidate_floor =
            next.config.theta > 0 ? next.config.theta - 1 : 0;
        std::vector<std::size_t> evictable;
        for (std::size_t i = 0; i + 1 < items.size(); ++i) {  // never evict the new item
            if (next.flag_table.count(items[i].kind, items[i].key) < candidate_floor) {
                evictable.push_back(i);
            }
        }
        if (evictable.empty()) {
            for (std::size_t i = 0; i + 1 < items.size(); ++i) evictable.push_back(i);
        }
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(pick_eviction(items, evictable)));
    }
    return next;
}

MemorySnapshot promote(const MemorySnapshot& memory, Kind kind, const std::string& key,
                       const std::vector<double>& embedding) {
    const std::uint64_t count = memory.flag_table.count(kind, key);
    if (count < memory.config.theta) {
        raise(Errc::promotion_below_threshold,
              key + " has count " + std::to_string(count) + " < theta " +
                  std::to_string(memory.config.theta));
    }
    if (memory.ltm.contains(kind, key)) {
        raise(Errc::duplicate_ltm_key, key + " already promoted");
    }
    const KnowledgeItem* item = memory.stm.find(kind, key);
    if (item == nullptr) {
        raise(Errc::key_not_in_stm, key + " not present in STM");
    }
    if (embedding.size() != memory.config.embedding_dim) {
        raise(Errc::dimension_mismatch,
              "embedding has dimension " + std::to_string(embedding.size()) + ", expected " +
                  std::to_string(memory.config.embedding_dim));
    }
    if (std::abs(norm(embedding) - 1.0) > 1e-6) {
        raise(Errc::invalid_embedding, "embedding is not unit-norm");
    }

    MemorySnapshot next = memory;
    LtmEntry entry;
    entry.item = *item;
    entry.item.frequency = count;
    entry.embedding = embedding;
    next.ltm.entries.push_back(std::move(entry));
    auto& items = next.stm.items;
    items.erase(std::remove_if(items.begin(), items.end(),
                               [&](const KnowledgeItem& k) {
                                   return k.kind == kind && k.key == key;
                               }),
                items.end());
    return next;
}

MemorySnapshot refresh_stm(const MemorySnapshot& memory, std::uint64_t current_round) {
    MemorySnapshot next = memory;
    const std::uint64_t window = next.config.refresh_period;
    auto& items = next.stm.items;
    items.erase(std::remove_if(items.begin(), items.end(),
                               [&](const KnowledgeItem& k) {
                                   return k.last_seen_round + window < current_round;
                               }),
                items.end());
    return next;
}

MemorySnapshot clear_working(const MemorySnapshot& memory) {
    MemorySnapshot next = memory;
    next.working.notes.clear();
    return next;
}

IntegrityReport check_integrity(const MemorySnapshot& memory) {
    IntegrityReport report;
    std::map<FlagKey, int> ltm_seen;
    for (const auto& entry : memory.ltm.entries) {
        const FlagKey fk{entry.item.kind, entry.item.key};
        if (++ltm_seen[fk] > 1) {
            report.violations.push_back("duplicate LTM key: " + entry.item.key);
        }
        if (memory.flag_table.count(entry.item.kind, entry.item.key) < memory.config.theta) {
            report.violations.push_back("LTM key below threshold: " + entry.item.key);
        }
        if (entry.embedding.size() != memory.config.embedding_dim) {
            report.violations.push_back("LTM embedding dimension mismatch: " + entry.item.key);
        } else if (std::abs(norm(entry.embedding) - 1.0) > 1e-6) {
            report.violations.push_back("LTM embedding not unit-norm: " + entry.item.key);
        }
        if (memory.stm.contains(entry.item.kind, entry.item.key)) {
            report.violations.push_back("key present in both STM and LTM: " + entry.item.key);
        }
    }
    if (memory.stm.items.size() > memory.config.stm_capacity) {
        report.violations.push_back("STM exceeds capacity");
    }
    if (memory.working.notes.size() > memory.config.working_capacity) {
        report.violations.push_back("working memory exceeds capacity");
    }
    return report;
}

}  // namespace tiermem
