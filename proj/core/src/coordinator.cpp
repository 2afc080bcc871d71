#include "tiermem/coordinator.hpp"

#include <algorithm>
#include <array>
#include <json.hpp>
#include <span>

#include "tiermem/chat.hpp"
#include "tiermem/error.hpp"
#include "tiermem/text.hpp"

namespace tiermem {

using nlohmann::json;

std::vector<Note> learn(const Coordinator& coordinator, const DialogueRound& round) {
    if (round.turns.empty()) {
        raise(Errc::precondition_violation, "dialogue round has no turns");
    }
    const auto raw = coordinator.take_notes(round);
    std::vector<Note> notes;
    notes.reserve(raw.size());
    std::size_t seq = 0;
    for (const auto& note_text : raw) {
        const auto trimmed = text::trim(note_text);
        if (trimmed.empty()) continue;
        Note note;
        note.id = "r" + std::to_string(round.round_index) + "-n" + std::to_string(seq);
        note.round_index = round.round_index;
        note.text = text::truncate_at_sentence(trimmed, kMaxNoteChars);
        note.created_at = round.round_index * 1000 + seq;
        ++seq;
        notes.push_back(std::move(note));
    }
    return notes;
}

std::vector<KnowledgeItem> summarize(const Coordinator& coordinator,
                                     const std::vector<Note>& notes) {
    std::vector<KnowledgeItem> items;
    for (const auto& note : notes) {
        const Judgement judgement = coordinator.judge(note.text);
        if (!judgement.relevant) continue;
        if (text::trim(judgement.purified_text).empty()) {
            raise(Errc::malformed_coordinator_output,
                  "relevant judgement with empty purified text for note " + note.id);
        }
        items.push_back(make_item(judgement.kind, judgement.purified_text, note.round_index));
    }
    return items;
}

// ---------------------------------------------------------------------------
// RuleCoordinator

namespace {

constexpr std::array<std::string_view, 26> kMedicationWords = {
    "metformin",   "insulin",     "ibuprofen",   "tylenol",     "aspirin",
    "paracetamol", "amoxicillin", "penicillin",  "lisinopril",  "statin",
    "statins",     "antibiotic",  "antibiotics", "antihistamine", "inhaler",
    "inhalers",    "medication",  "medications", "tablet",      "tablets",
    "pill",        "pills",       "dose",        "doses",       "vitamin",
    "vitamins",
};

constexpr std::array<std::string_view, 30> kSymptomWords = {
    "fever",     "fevers",       "cough",       "headache",  "headaches",
    "pain",      "pains",        "dizzy",       "dizziness", "nausea",
    "fatigue",   "rash",         "rashes",      "sore throat", "chills",
    "insomnia",  "cramp",        "cramps",      "swelling",  "congestion",
    "breath",    "itchy",        "numbness",    "vomiting",  "diarrhea",
    "migraine",  "migraines",    "palpitation", "palpitations", "heartburn",
};

constexpr std::array<std::string_view, 6> kEffectVerbs = {
    "reduce", "relieve", "alleviate", "lower", "ease", "help",
};

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

// Find `anchor` in `lower` as a whole word (boundaries on both sides).
std::size_t find_anchor(std::string_view lower, std::string_view anchor) {
    std::size_t pos = 0;
    while ((pos = lower.find(anchor, pos)) != std::string_view::npos) {
        const bool left_ok = pos == 0 || !is_word_char(lower[pos - 1]);
        const std::size_t end = pos + anchor.size();
        const bool right_ok = end >= lower.size() || !is_word_char(lower[end]);
        if (left_ok && right_ok) return pos;
        ++pos;
    }
    return std::string_view::npos;
}

bool contains_any(std::string_view lower, std::span<const std::string_view> words) {
    return std::any_of(words.begin(), words.end(), [&](std::string_view w) {
        return find_anchor(lower, w) != std::string_view::npos;
    });
}

std::string strip_terminator(std::string_view s) {
    auto t = text::trim(s);
    while (!t.empty() && (t.back() == '.' || t.back() == '!' || t.back() == '?')) {
        t.remove_suffix(1);
    }
    return std::string(text::trim(t));
}

// The clause starting at the matched anchor, sentence terminator removed.
std::string clause_from(std::string_view sentence, std::size_t pos) {
    return strip_terminator(sentence.substr(pos));
}

struct RuleMatch {
    bool matched = false;
    Kind kind = Kind::CommonSense;
    std::string purified;
};

RuleMatch match_sentence(std::string_view sentence) {
    const std::string lower = text::to_lower(sentence);

    // Questions assert nothing worth memorizing.
    if (!lower.empty() && text::trim(lower).back() == '?') return {};

    // User-specific anchors first; they are the more precise patterns.
    for (std::string_view anchor : {std::string_view("diagnosed with"), std::string_view("allergic to")}) {
        if (const auto pos = find_anchor(lower, anchor); pos != std::string_view::npos) {
            return {true, Kind::UserSpecific, clause_from(sentence, pos)};
        }
    }
    for (std::string_view anchor : {std::string_view("preference"), std::string_view("prefers"),
                                    std::string_view("prefer")}) {
        if (const auto pos = find_anchor(lower, anchor); pos != std::string_view::npos) {
            return {true, Kind::UserSpecific, clause_from(sentence, pos)};
        }
    }
    for (std::string_view anchor :
         {std::string_view("taking"), std::string_view("taken"), std::string_view("takes"),
          std::string_view("take")}) {
        const auto pos = find_anchor(lower, anchor);
        if (pos != std::string_view::npos &&
            contains_any(lower.substr(pos), std::span<const std::string_view>(kMedicationWords))) {
            return {true, Kind::UserSpecific, clause_from(sentence, pos)};
        }
    }
    for (std::string_view anchor :
         {std::string_view("experiencing"), std::string_view("suffering from"),
          std::string_view("having"), std::string_view("have"), std::string_view("had"),
          std::string_view("feeling"), std::string_view("feel"), std::string_view("felt")}) {
        const auto pos = find_anchor(lower, anchor);
        if (pos != std::string_view::npos &&
            contains_any(lower.substr(pos), std::span<const std::string_view>(kSymptomWords))) {
            return {true, Kind::UserSpecific, clause_from(sentence, pos)};
        }
    }

    // Common-sense: drug/remedy effect statements and general health advice.
    if (const auto can_pos = find_anchor(lower, "can"); can_pos != std::string_view::npos) {
        const auto tail = lower.substr(can_pos);
        if (contains_any(tail, std::span<const std::string_view>(kEffectVerbs))) {
            return {true, Kind::CommonSense, strip_terminator(sentence)};
        }
    }
    if (find_anchor(lower, "helps with") != std::string_view::npos ||
        find_anchor(lower, "is recommended") != std::string_view::npos ||
        find_anchor(lower, "is important for") != std::string_view::npos) {
        return {true, Kind::CommonSense, strip_terminator(sentence)};
    }
    return {};
}

}  // namespace

std::vector<std::string> RuleCoordinator::take_notes(const DialogueRound& round) const {
    std::vector<std::string> notes;
    for (const auto& turn : round.turns) {
        for (const auto& sentence : text::split_sentences(turn.text)) {
            if (match_sentence(sentence).matched) notes.push_back(sentence);
        }
    }
    return notes;
}

Judgement RuleCoordinator::judge(const std::string& note_text) const {
    Judgement judgement;
    // A note may carry several sentences after truncation stitching; judge
    // the first matching one.
    for (const auto& sentence : text::split_sentences(note_text)) {
        const RuleMatch match = match_sentence(sentence);
        if (match.matched) {
            judgement.relevant = true;
            judgement.kind = match.kind;
            judgement.purified_text = match.purified;
            return judgement;
        }
    }
    return judgement;
}

// ---------------------------------------------------------------------------
// RemoteCoordinator

const std::string_view kNoteTakingPromptTemplate =
    "tiermem coordinator note-taking template v1\n"
    "You extract factual notes from one round of a patient-doctor dialogue.\n"
    "Take a note for every statement worth remembering about the patient\n"
    "(conditions, allergies, medications, symptoms, preferences) and every\n"
    "general medical fact stated. Ignore greetings and questions.\n"
    "Reply with strict JSON only, no prose: {\"notes\": [\"...\"]}\n"
    "\n"
    "Dialogue round:\n"
    "{dialogue}\n";

const std::string_view kJudgingPromptTemplate =
    "tiermem coordinator judging template v1\n"
    "Decide whether the note below is relevant knowledge worth storing.\n"
    "Classify it as \"user_specific\" (about this patient) or\n"
    "\"common_sense\" (generally true medical knowledge), and rewrite it as\n"
    "one short purified statement.\n"
    "Reply with strict JSON only, no prose:\n"
    "{\"relevant\": true, \"kind\": \"user_specific\", \"purified\": \"...\"}\n"
    "\n"
    "Note:\n"
    "{note}\n";

namespace {

std::string fill_template(std::string_view tmpl, std::string_view slot, const std::string& value) {
    std::string out(tmpl);
    const auto pos = out.find(slot);
    if (pos != std::string::npos) out.replace(pos, slot.size(), value);
    return out;
}

// Models love to wrap JSON in code fences; accept that.
std::string_view strip_code_fence(std::string_view s) {
    auto t = text::trim(s);
    if (t.starts_with("```")) {
        const auto first_newline = t.find('\n');
        if (first_newline != std::string_view::npos) t.remove_prefix(first_newline + 1);
        const auto fence = t.rfind("```");
        if (fence != std::string_view::npos) t = t.substr(0, fence);
    }
    return text::trim(t);
}

}  // namespace

RemoteCoordinator::RemoteCoordinator(ChatBackend& backend, std::uint64_t seed)
    : backend_(backend), seed_(seed) {}

std::string RemoteCoordinator::ask(const std::string& prompt) const {
    GenParams params;
    params.temperature = 0.0;
    params.seed = seed_;
    std::vector<ChatMessage> messages{{ChatRole::User, prompt}};
    try {
        return backend_.complete(messages, params);
    } catch (const Error& e) {
        if (e.code() == Errc::backend_unavailable || e.code() == Errc::auth_error ||
            e.code() == Errc::response_truncated) {
            raise(Errc::coordinator_unavailable, e.what());
        }
        throw;
    }
}

std::vector<std::string> RemoteCoordinator::take_notes(const DialogueRound& round) const {
    std::string rendered;
    for (const auto& turn : round.turns) {
        rendered += std::string(to_string(turn.role)) + ": " + turn.text + "\n";
    }
    const std::string prompt =
        fill_template(kNoteTakingPromptTemplate, "{dialogue}", rendered);

    for (int attempt = 0; attempt < 3; ++attempt) {
        const std::string reply = ask(prompt);
        try {
            const json j = json::parse(strip_code_fence(reply));
            std::vector<std::string> notes;
            for (const auto& n : j.at("notes")) notes.push_back(n.get<std::string>());
            return notes;
        } catch (const json::exception&) {
            // retry
        }
    }
    raise(Errc::malformed_coordinator_output, "note-taking reply was not the expected JSON");
}

Judgement RemoteCoordinator::judge(const std::string& note_text) const {
    const std::string prompt = fill_template(kJudgingPromptTemplate, "{note}", note_text);
    for (int attempt = 0; attempt < 3; ++attempt) {
        const std::string reply = ask(prompt);
        try {
            const json j = json::parse(strip_code_fence(reply));
            Judgement judgement;
            judgement.relevant = j.at("relevant").get<bool>();
            const auto kind_str = j.value("kind", "common_sense");
            if (kind_str == "user_specific") {
                judgement.kind = Kind::UserSpecific;
            } else if (kind_str == "common_sense") {
                judgement.kind = Kind::CommonSense;
            } else {
                // Unclassifiable: drop conservatively.
                judgement.kind = Kind::CommonSense;
                judgement.relevant = false;
            }
            judgement.purified_text = j.value("purified", "");
            if (judgement.relevant && text::trim(judgement.purified_text).empty()) {
                judgement.relevant = false;
            }
            return judgement;
        } catch (const json::exception&) {
            // retry
        }
    }
    raise(Errc::malformed_coordinator_output, "judging reply was not the expected JSON");
}

}  // namespace tiermem
