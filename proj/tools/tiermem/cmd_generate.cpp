#include <fstream>
#include <iostream>
#include <json.hpp>

#include "commands.hpp"
#include "tiermem/dialogue.hpp"
#include "tiermem/error.hpp"
#include "tiermem/selfchat.hpp"

namespace tiermem::cli {

using nlohmann::json;

namespace {

struct UserProfiles {
    std::string user_id;
    Profile patient;
    Profile doctor;
};

std::vector<UserProfiles> load_profiles(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::io_error, "cannot open profiles file: " + path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        raise(Errc::invalid_config, std::string("profiles file is not valid JSON: ") + e.what());
    }
    std::vector<UserProfiles> users;
    try {
        for (const auto& j : doc) {
            UserProfiles user;
            user.user_id = j.at("user_id").get<std::string>();
            user.patient.persona = j.at("patient").at("persona").get<std::string>();
            user.patient.preference = j.at("patient").value("preference", "");
            if (j.contains("doctor")) {
                user.doctor.persona = j.at("doctor").at("persona").get<std::string>();
                user.doctor.preference = j.at("doctor").value("preference", "");
            } else {
                user.doctor.persona =
                    "You give practical medical guidance. Drinking water helps with hydration. "
                    "Rest is important for recovery.";
            }
            users.push_back(std::move(user));
        }
    } catch (const json::exception& e) {
        raise(Errc::invalid_config, std::string("bad profiles structure: ") + e.what());
    }
    if (users.empty()) {
        raise(Errc::invalid_config, "profiles file lists no users");
    }
    return users;
}

TopicPlan load_topics(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::io_error, "cannot open topics file: " + path);
    }
    try {
        const json doc = json::parse(in);
        TopicPlan plan;
        for (const auto& t : doc) plan.push_back(t.get<std::string>());
        return plan;
    } catch (const json::exception& e) {
        raise(Errc::invalid_config, std::string("topics file is not a JSON string array: ") +
                                        e.what());
    }
}

}  // namespace

int cmd_generate_data(const Runtime& runtime, const GenerateArgs& args) {
    std::vector<UserProfiles> users;
    TopicPlan plan;
    try {
        users = load_profiles(args.profiles_path);
        plan = load_topics(args.topics_path);
    } catch (const std::exception& e) {
        return report_error(e);
    }

    std::vector<UserDialogue> dialogues;
    try {
        for (const auto& user : users) {
            UserDialogue dialogue;
            dialogue.user_id = user.user_id;
            dialogue.rounds = self_chat(runtime.generator(), user.patient, user.doctor,
                                        args.n_rounds, plan, runtime.config().selfchat_params());
            dialogues.push_back(std::move(dialogue));
        }
        write_dialogue_jsonl(dialogues, args.out_path);
    } catch (const std::exception& e) {
        return report_error(e);
    }

    if (runtime.options().verbose) {
        std::cout << "wrote " << users.size() * args.n_rounds << " rounds for " << users.size()
                  << " user(s) to " << args.out_path << "\n";
    }
    return kExitOk;
}

}  // namespace tiermem::cli
