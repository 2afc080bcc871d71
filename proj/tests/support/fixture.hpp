#pragma once

// The scripted 50-round dialogue fixture. A schedule table says exactly
// which fact is spoken in which round; the dialogue text, the expected flag
// counts and the expected promotions are all derived from that one table, so
// the counting oracle is independent of the engine's extraction pipeline.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tiermem/dialogue.hpp"
#include "tiermem/types.hpp"

namespace tiermem::fixture {

inline constexpr std::uint64_t kRounds = 50;
inline constexpr std::uint64_t kTheta = 3;
inline constexpr char kUserId[] = "fixture-patient-001";

struct ScheduledFact {
    Kind kind = Kind::CommonSense;
    std::string sentence;               // spoken form
    std::string purified;               // stored knowledge text
    std::string key;                    // normalize_key(purified)
    std::vector<std::uint64_t> rounds;  // rounds in which the fact is spoken
};

const std::vector<ScheduledFact>& schedule();

// 50 rounds of patient/doctor turns assembled from the schedule plus
// pattern-free filler.
std::vector<DialogueRound> build_rounds(std::uint64_t n_rounds = kRounds);

// Counting oracle: emissions per (kind, key) within the first n rounds,
// straight from the schedule.
std::map<FlagKey, std::uint64_t> expected_flag_counts(std::uint64_t n_rounds = kRounds);

// Keys emitted >= theta times within the first n rounds, i.e. the expected
// LTM population, with the round in which the theta-th emission happens.
std::map<FlagKey, std::uint64_t> expected_promotions(std::uint64_t n_rounds = kRounds);

}  // namespace tiermem::fixture
