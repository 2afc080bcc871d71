#include "tiermem/engine.hpp"

#include "tiermem/error.hpp"

namespace tiermem {

StepResult step(const MemorySnapshot& memory, const Coordinator& coordinator,
                const Embedder& embedder, const DialogueRound& round) {
    if (round.round_index != memory.round_cursor) {
        raise(Errc::precondition_violation,
              "round index " + std::to_string(round.round_index) + " does not match cursor " +
                  std::to_string(memory.round_cursor));
    }

    IterationReport report;
    report.round_index = round.round_index;

    // Work on a copy; any throw below discards it and the input snapshot
    // stays the caller's state.
    MemorySnapshot next = memory;

    const auto notes = learn(coordinator, round);
    report.notes_taken = notes.size();
    for (const auto& note : notes) {
        next = record_note(next, note);
    }

    const auto items = summarize(coordinator, notes);
    report.items_summarized = items.size();
    for (const auto& item : items) {
        next = upsert_stm(next, item, round.round_index);
    }

    // Promotion pass over STM in insertion order; several keys may cross the
    // threshold in one round.
    std::vector<KnowledgeItem> ready;
    for (const auto& item : next.stm.items) {
        if (next.flag_table.count(item.kind, item.key) >= next.config.theta) {
            ready.push_back(item);
        }
    }
    for (const auto& item : ready) {
        next = promote(next, item.kind, item.key, embedder.embed(item.text));
        report.items_promoted.push_back(FlagKey{item.kind, item.key});
    }

    if ((round.round_index + 1) % next.config.refresh_period == 0) {
        next = refresh_stm(next, round.round_index + 1);
        report.stm_refreshed = true;
    }

    next = clear_working(next);
    next.round_cursor = round.round_index + 1;
    return StepResult{std::move(next), std::move(report)};
}

ReplayResult replay(const MemorySnapshot& memory, const Coordinator& coordinator,
                    const Embedder& embedder, const std::vector<DialogueRound>& rounds,
                    const ReplayObserver& observer) {
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        if (rounds[i].round_index != memory.round_cursor + i) {
            raise(Errc::precondition_violation,
                  "rounds must be consecutive from " + std::to_string(memory.round_cursor) +
                      "; round at position " + std::to_string(i) + " has index " +
                      std::to_string(rounds[i].round_index));
        }
    }

    ReplayResult result;
    result.memory = memory;
    result.reports.reserve(rounds.size());
    for (const auto& round : rounds) {
        try {
            auto [next, report] = step(result.memory, coordinator, embedder, round);
            result.memory = std::move(next);
            result.reports.push_back(report);
            if (observer) observer(result.memory, result.reports.back());
        } catch (const Error& e) {
            result.failed_round = round.round_index;
            result.error = e.what();
            break;
        }
    }
    return result;
}

}  // namespace tiermem
