#include "fixture.hpp"

#include <algorithm>
#include <array>

namespace tiermem::fixture {

const std::vector<ScheduledFact>& schedule() {
    static const std::vector<ScheduledFact> facts = {
        {Kind::UserSpecific,
         "I was diagnosed with type 2 diabetes.",
         "diagnosed with type 2 diabetes",
         "diagnosed with type 2 diabetes",
         {0, 2, 4, 6}},
        {Kind::UserSpecific,
         "I am allergic to penicillin.",
         "allergic to penicillin",
         "allergic to penicillin",
         {1, 3, 5}},
        {Kind::UserSpecific,
         "I take metformin every morning.",
         "take metformin every morning",
         "take metformin every morning",
         {2, 7, 12, 17}},
        {Kind::UserSpecific,
         "I prefer concise answers.",
         "prefer concise answers",
         "prefer concise answers",
         {0, 10, 20, 30, 40}},
        {Kind::UserSpecific,
         "I have a pounding headache.",
         "have a pounding headache",
         "have a pounding headache",
         {8, 9}},
        {Kind::UserSpecific,
         "I feel dizzy after lunch.",
         "feel dizzy after lunch",
         "feel dizzy after lunch",
         {15}},
        {Kind::UserSpecific,
         "I have a sore throat.",
         "have a sore throat",
         "have a sore throat",
         {6, 18, 31, 33}},
        {Kind::UserSpecific,
         "I feel numbness in my left hand.",
         "feel numbness in my left hand",
         "feel numbness in my left hand",
         {44, 47}},
        {Kind::CommonSense,
         "Tylenol can reduce fever.",
         "Tylenol can reduce fever",
         "tylenol can reduce fever",
         {0, 1, 4}},
        {Kind::CommonSense,
         "Drinking water helps with hydration.",
         "Drinking water helps with hydration",
         "drinking water helps with hydration",
         {3, 8, 11}},
        {Kind::CommonSense,
         "Ibuprofen can ease joint pain.",
         "Ibuprofen can ease joint pain",
         "ibuprofen can ease joint pain",
         {21, 22}},
        {Kind::CommonSense,
         "Regular sleep is important for recovery.",
         "Regular sleep is important for recovery",
         "regular sleep is important for recovery",
         {13, 14, 16}},
    };
    return facts;
}

std::vector<DialogueRound> build_rounds(std::uint64_t n_rounds) {
    static constexpr std::array<const char*, 4> kPatientFiller = {
        "Hello doctor.",
        "Thanks for the help.",
        "That makes sense.",
        "Understood.",
    };
    static constexpr std::array<const char*, 4> kDoctorFiller = {
        "Let us continue.",
        "Noted.",
        "Glad to hear an update.",
        "We will keep an eye on it.",
    };

    std::vector<DialogueRound> rounds;
    rounds.reserve(n_rounds);
    for (std::uint64_t r = 0; r < n_rounds; ++r) {
        std::string patient_text(kPatientFiller[r % kPatientFiller.size()]);
        std::string doctor_text(kDoctorFiller[r % kDoctorFiller.size()]);
        for (const auto& fact : schedule()) {
            if (std::find(fact.rounds.begin(), fact.rounds.end(), r) == fact.rounds.end()) {
                continue;
            }
            auto& turn = fact.kind == Kind::UserSpecific ? patient_text : doctor_text;
            turn += " ";
            turn += fact.sentence;
        }
        DialogueRound round;
        round.round_index = r;
        round.turns.push_back({Role::Patient, patient_text});
        round.turns.push_back({Role::Doctor, doctor_text});
        rounds.push_back(std::move(round));
    }
    return rounds;
}

std::map<FlagKey, std::uint64_t> expected_flag_counts(std::uint64_t n_rounds) {
    std::map<FlagKey, std::uint64_t> counts;
    for (const auto& fact : schedule()) {
        const auto n = static_cast<std::uint64_t>(
            std::count_if(fact.rounds.begin(), fact.rounds.end(),
                          [&](std::uint64_t r) { return r < n_rounds; }));
        if (n > 0) counts[FlagKey{fact.kind, fact.key}] = n;
    }
    return counts;
}

std::map<FlagKey, std::uint64_t> expected_promotions(std::uint64_t n_rounds) {
    std::map<FlagKey, std::uint64_t> promotions;
    for (const auto& fact : schedule()) {
        std::vector<std::uint64_t> in_range;
        for (const auto r : fact.rounds) {
            if (r < n_rounds) in_range.push_back(r);
        }
        std::sort(in_range.begin(), in_range.end());
        if (in_range.size() >= kTheta) {
            promotions[FlagKey{fact.kind, fact.key}] = in_range[kTheta - 1];
        }
    }
    return promotions;
}

}  // namespace tiermem::fixture
