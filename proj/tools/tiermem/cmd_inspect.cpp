#include <algorithm>
#include <iostream>

#include "commands.hpp"
#include "tiermem/snapshot.hpp"

namespace tiermem::cli {

int cmd_inspect(const Runtime& runtime, const InspectArgs& args) {
    MemorySnapshot memory;
    try {
        memory = load_snapshot_file(args.snapshot_path);
    } catch (const std::exception& e) {
        return report_error(e);
    }

    std::cout << "user:            " << memory.user_id << "\n";
    std::cout << "round cursor:    " << memory.round_cursor << "\n";
    std::cout << "working notes:   " << memory.working.notes.size() << "\n";
    std::cout << "stm items:       " << memory.stm.items.size() << "\n";
    std::cout << "ltm entries:     " << memory.ltm.entries.size() << "\n";
    std::cout << "flagged keys:    " << memory.flag_table.counts.size() << "\n";

    std::size_t promoted_user = 0;
    std::size_t promoted_common = 0;
    for (const auto& entry : memory.ltm.entries) {
        (entry.item.kind == Kind::UserSpecific ? promoted_user : promoted_common) += 1;
    }
    std::cout << "promotions:      " << promoted_user << " user-specific, " << promoted_common
              << " common-sense\n";

    std::vector<std::pair<FlagKey, std::uint64_t>> by_count(memory.flag_table.counts.begin(),
                                                            memory.flag_table.counts.end());
    std::stable_sort(by_count.begin(), by_count.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::cout << "top keys:\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, by_count.size()); ++i) {
        std::cout << "  " << by_count[i].second << "x [" << to_string(by_count[i].first.kind)
                  << "] " << by_count[i].first.key << "\n";
    }

    auto effective = runtime.config();
    effective.memory = memory.config;
    std::cout << "config digest:   " << config_digest(effective) << "\n";

    const auto integrity = check_integrity(memory);
    if (!integrity.ok()) {
        for (const auto& violation : integrity.violations) {
            std::cerr << "integrity warning: " << violation << "\n";
        }
        return kExitIntegrity;
    }
    std::cout << "integrity:       ok\n";
    return kExitOk;
}

}  // namespace tiermem::cli
