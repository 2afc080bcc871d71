#pragma once

#include <string>
#include <vector>

#include "tiermem/chat.hpp"
#include "tiermem/dialogue.hpp"

namespace tiermem {

// One simulated speaker: background/persona plus a dialogue-style
// preference. Personas are rendered on a single line of the system prompt.
struct Profile {
    std::string persona;
    std::string preference;
};

// Per-round steering instructions for follow-up dialogue generation
// ("continue about the same symptom", "mention a new symptom", ...). Cycled
// when shorter than the number of rounds.
using TopicPlan = std::vector<std::string>;

// Generate a synthetic multi-round dialogue by running two alternating chat
// sessions against the same backend, each seeded with its profile at the
// start. Every round is one patient turn followed by one doctor turn, with
// round indices consecutive from 0. Throws on any backend failure; partial
// output is discarded.
std::vector<DialogueRound> self_chat(ChatBackend& backend, const Profile& patient,
                                     const Profile& doctor, std::size_t n_rounds,
                                     const TopicPlan& plan, const GenParams& params);

}  // namespace tiermem
