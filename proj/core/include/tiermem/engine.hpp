#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tiermem/coordinator.hpp"
#include "tiermem/embedder.hpp"
#include "tiermem/memory.hpp"

namespace tiermem {

// Observability record for one full dual-process iteration.
struct IterationReport {
    std::uint64_t round_index = 0;
    std::size_t notes_taken = 0;
    std::size_t items_summarized = 0;
    std::vector<FlagKey> items_promoted;
    bool stm_refreshed = false;
};

struct StepResult {
    MemorySnapshot memory;
    IterationReport report;
};

// One dual-process iteration over one dialogue round:
//   learn -> record notes -> summarize -> upsert into STM -> promote every
//   key at threshold (insertion order, embeddings computed now) -> refresh
//   STM at period boundaries -> clear working memory -> advance the cursor.
// All-or-nothing: a coordinator or embedder failure leaves the input
// snapshot as the caller's state (the partial copy is discarded). Requires
// round.round_index == memory.round_cursor.
StepResult step(const MemorySnapshot& memory, const Coordinator& coordinator,
                const Embedder& embedder, const DialogueRound& round);

// Called after every completed round with the new snapshot and its report.
using ReplayObserver =
    std::function<void(const MemorySnapshot& memory, const IterationReport& report)>;

struct ReplayResult {
    MemorySnapshot memory;
    std::vector<IterationReport> reports;
    std::optional<std::uint64_t> failed_round;
    std::string error;

    bool ok() const { return !failed_round.has_value(); }
};

// Fold step() over consecutively indexed rounds starting at the snapshot's
// cursor (anything else raises a precondition violation before any work).
// A failing round stops the replay; the result carries the last good
// snapshot, the reports so far and the failing round index.
ReplayResult replay(const MemorySnapshot& memory, const Coordinator& coordinator,
                    const Embedder& embedder, const std::vector<DialogueRound>& rounds,
                    const ReplayObserver& observer = {});

}  // namespace tiermem
