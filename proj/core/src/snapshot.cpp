#include "tiermem/snapshot.hpp"

#include <fstream>
#include <json.hpp>

#include "tiermem/error.hpp"

namespace tiermem {

using nlohmann::json;

namespace {

json item_to_json(const KnowledgeItem& item) {
    return json{
        {"frequency", item.frequency},
        {"key", item.key},
        {"kind", to_string(item.kind)},
        {"last_seen_round", item.last_seen_round},
        {"source_round", item.source_round},
        {"text", item.text},
    };
}

KnowledgeItem item_from_json(const json& j) {
    KnowledgeItem item;
    item.frequency = j.at("frequency").get<std::uint64_t>();
    item.key = j.at("key").get<std::string>();
    item.kind = kind_from_string(j.at("kind").get<std::string>());
    item.last_seen_round = j.at("last_seen_round").get<std::uint64_t>();
    item.source_round = j.at("source_round").get<std::uint64_t>();
    item.text = j.at("text").get<std::string>();
    return item;
}

}  // namespace

std::string save_snapshot(const MemorySnapshot& memory) {
    json notes = json::array();
    for (const auto& note : memory.working.notes) {
        notes.push_back(json{
            {"created_at", note.created_at},
            {"id", note.id},
            {"round_index", note.round_index},
            {"text", note.text},
        });
    }

    json stm_items = json::array();
    for (const auto& item : memory.stm.items) stm_items.push_back(item_to_json(item));

    json ltm_entries = json::array();
    for (const auto& entry : memory.ltm.entries) {
        ltm_entries.push_back(json{
            {"embedding", entry.embedding},
            {"item", item_to_json(entry.item)},
        });
    }

    // Nested object keyed by kind then key; nlohmann::json keeps object keys
    // lexicographically sorted, which makes the document byte-stable.
    json flags = json{{"common_sense", json::object()}, {"user_specific", json::object()}};
    for (const auto& [fk, count] : memory.flag_table.counts) {
        flags[std::string(to_string(fk.kind))][fk.key] = count;
    }

    const json doc = {
        {"config",
         {
             {"embedding_dim", memory.config.embedding_dim},
             {"refresh_period", memory.config.refresh_period},
             {"stm_capacity", memory.config.stm_capacity},
             {"theta", memory.config.theta},
             {"working_capacity", memory.config.working_capacity},
         }},
        {"flag_table", flags},
        {"format_version", memory.format_version},
        {"ltm", {{"entries", ltm_entries}}},
        {"round_cursor", memory.round_cursor},
        {"stm", {{"items", stm_items}}},
        {"user_id", memory.user_id},
        {"working", {{"notes", notes}}},
    };
    return doc.dump(2) + "\n";
}

MemorySnapshot load_snapshot(const std::string& bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::exception& e) {
        raise(Errc::corrupt_snapshot, std::string("not valid JSON: ") + e.what());
    }
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kSnapshotFormatVersion) {
            raise(Errc::unsupported_version,
                  "format_version " + std::to_string(version) + " not supported");
        }
        MemorySnapshot memory;
        memory.format_version = version;
        memory.user_id = doc.at("user_id").get<std::string>();
        memory.round_cursor = doc.at("round_cursor").get<std::uint64_t>();

        const auto& cfg = doc.at("config");
        memory.config.embedding_dim = cfg.at("embedding_dim").get<std::size_t>();
        memory.config.refresh_period = cfg.at("refresh_period").get<std::uint64_t>();
        memory.config.stm_capacity = cfg.at("stm_capacity").get<std::size_t>();
        memory.config.theta = cfg.at("theta").get<std::uint64_t>();
        memory.config.working_capacity = cfg.at("working_capacity").get<std::size_t>();

        for (const auto& j : doc.at("working").at("notes")) {
            Note note;
            note.created_at = j.at("created_at").get<std::uint64_t>();
            note.id = j.at("id").get<std::string>();
            note.round_index = j.at("round_index").get<std::uint64_t>();
            note.text = j.at("text").get<std::string>();
            memory.working.notes.push_back(std::move(note));
        }
        for (const auto& j : doc.at("stm").at("items")) {
            memory.stm.items.push_back(item_from_json(j));
        }
        for (const auto& j : doc.at("ltm").at("entries")) {
            LtmEntry entry;
            entry.item = item_from_json(j.at("item"));
            entry.embedding = j.at("embedding").get<std::vector<double>>();
            memory.ltm.entries.push_back(std::move(entry));
        }
        for (const auto& [kind_str, per_key] : doc.at("flag_table").items()) {
            const Kind kind = kind_from_string(kind_str);
            for (const auto& [key, count] : per_key.items()) {
                memory.flag_table.counts[FlagKey{kind, key}] = count.get<std::uint64_t>();
            }
        }
        return memory;
    } catch (const Error&) {
        throw;
    } catch (const json::exception& e) {
        raise(Errc::corrupt_snapshot, std::string("bad snapshot structure: ") + e.what());
    }
}

void save_snapshot_file(const MemorySnapshot& memory, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        raise(Errc::io_error, "cannot open for write: " + path.string());
    }
    out << save_snapshot(memory);
    if (!out) {
        raise(Errc::io_error, "write failed: " + path.string());
    }
}

MemorySnapshot load_snapshot_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::io_error, "cannot open for read: " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_snapshot(bytes);
}

}  // namespace tiermem
