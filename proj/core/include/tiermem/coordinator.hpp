#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tiermem/dialogue.hpp"
#include "tiermem/types.hpp"

namespace tiermem {

class ChatBackend;

// Relevance and category decision for one note.
struct Judgement {
    bool relevant = false;
    Kind kind = Kind::CommonSense;
    std::string purified_text;
};

// The component driving the rehearsal process: takes notes from a dialogue
// round (learning) and judges/purifies them into knowledge (summarizing).
// Implementations are stateless after construction and safe to call
// concurrently; the replay pipeline still invokes them sequentially per user
// so round order stays deterministic.
class Coordinator {
public:
    virtual ~Coordinator() = default;

    // Raw note texts for one round, in deterministic order. May be empty.
    virtual std::vector<std::string> take_notes(const DialogueRound& round) const = 0;

    virtual Judgement judge(const std::string& note_text) const = 0;
};

// Notes longer than this are cut back to the last sentence boundary.
inline constexpr std::size_t kMaxNoteChars = 512;

// Learning step: pass a round through the coordinator and wrap the result as
// notes citing the round. Requires at least one turn.
std::vector<Note> learn(const Coordinator& coordinator, const DialogueRound& round);

// Summarizing step: keep exactly the notes judged relevant, converted to
// knowledge items in input order.
std::vector<KnowledgeItem> summarize(const Coordinator& coordinator,
                                     const std::vector<Note>& notes);

// Deterministic pattern-table coordinator. Sentences are segmented on
// [.?!]; a sentence becomes a note when it matches one of the anchors below,
// and the judgement purifies it to the clause starting at the anchor:
//
//   user-specific: "diagnosed with", "allergic to", "take/takes/taking"
//                  (medication statements), "prefer/prefers", symptom
//                  phrases ("have/having/feel/feeling/experiencing ..."
//                  naming a known symptom word)
//   common-sense:  "<X> can reduce/relieve/alleviate/lower/ease <Y>",
//                  "<X> helps with <Y>", "is recommended/important for"
//
// Identical input always yields identical output across runs and platforms.
class RuleCoordinator final : public Coordinator {
public:
    std::vector<std::string> take_notes(const DialogueRound& round) const override;
    Judgement judge(const std::string& note_text) const override;
};

// Versioned prompt assets for the chat-backed coordinator; fixtures pin
// these to detect accidental template drift.
inline constexpr int kCoordinatorPromptVersion = 1;
extern const std::string_view kNoteTakingPromptTemplate;
extern const std::string_view kJudgingPromptTemplate;

// Chat-LLM-backed coordinator. Sends the note-taking / judging templates and
// demands strict JSON replies ({"notes": [...]} and
// {"relevant": bool, "kind": "...", "purified": "..."}). Parse failures are
// retried up to two times, then surface as MalformedCoordinatorOutput;
// backend failures surface as CoordinatorUnavailable. Replies that cannot be
// classified fall back to irrelevant common-sense, i.e. they are dropped.
class RemoteCoordinator final : public Coordinator {
public:
    explicit RemoteCoordinator(ChatBackend& backend, std::uint64_t seed = 0);

    std::vector<std::string> take_notes(const DialogueRound& round) const override;
    Judgement judge(const std::string& note_text) const override;

private:
    std::string ask(const std::string& prompt) const;

    ChatBackend& backend_;
    std::uint64_t seed_;
};

}  // namespace tiermem
