#include "tiermem/selfchat.hpp"

#include "tiermem/error.hpp"

namespace tiermem {

namespace {

std::string system_prompt(std::string_view role_line, const Profile& profile) {
    std::string out(role_line);
    out += "\nProfile: " + profile.persona;
    if (!profile.preference.empty()) {
        out += "\nDialogue preference: " + profile.preference;
    }
    out += "\n";
    out += kSafetyPreamble;
    return out;
}

}  // namespace

std::vector<DialogueRound> self_chat(ChatBackend& backend, const Profile& patient,
                                     const Profile& doctor, std::size_t n_rounds,
                                     const TopicPlan& plan, const GenParams& params) {
    if (n_rounds == 0) {
        raise(Errc::precondition_violation, "self_chat requires n_rounds >= 1");
    }
    if (patient.persona.empty()) {
        raise(Errc::precondition_violation, "patient profile needs a persona");
    }

    std::vector<ChatMessage> patient_session{
        {ChatRole::System,
         system_prompt("You are the patient in a medical consultation. Stay in character and "
                       "speak in the first person.",
                       patient)}};
    std::vector<ChatMessage> doctor_session{
        {ChatRole::System,
         system_prompt("You are the doctor in a medical consultation. Stay in character and "
                       "answer the patient directly.",
                       doctor)}};

    std::vector<DialogueRound> rounds;
    rounds.reserve(n_rounds);
    std::string last_doctor_text;

    for (std::size_t r = 0; r < n_rounds; ++r) {
        std::string instruction;
        if (r == 0) {
            instruction = "Begin the consultation by describing your main concern.";
        } else {
            instruction = "The doctor said: \"" + last_doctor_text +
                          "\" Continue the consultation.";
        }
        if (!plan.empty()) {
            instruction += " " + plan[r % plan.size()];
        }

        patient_session.push_back({ChatRole::User, instruction});
        const std::string patient_text = backend.complete(patient_session, params);
        patient_session.push_back({ChatRole::Assistant, patient_text});

        doctor_session.push_back({ChatRole::User, patient_text});
        const std::string doctor_text = backend.complete(doctor_session, params);
        doctor_session.push_back({ChatRole::Assistant, doctor_text});
        last_doctor_text = doctor_text;

        DialogueRound round;
        round.round_index = r;
        round.turns.push_back({Role::Patient, patient_text});
        round.turns.push_back({Role::Doctor, doctor_text});
        rounds.push_back(std::move(round));
    }
    return rounds;
}

}  // namespace tiermem
