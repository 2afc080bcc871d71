#include "tiermem/retrieval.hpp"

#include <algorithm>
#include <numeric>

#include "tiermem/error.hpp"
#include "tiermem/text.hpp"

namespace tiermem {

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const auto sa = text::utf8_decode(a);
    const auto sb = text::utf8_decode(b);
    if (sa.empty()) return sb.size();
    if (sb.empty()) return sa.size();

    std::vector<std::size_t> costs(sb.size() + 1);
    std::iota(costs.begin(), costs.end(), std::size_t{0});
    for (std::size_t i = 0; i < sa.size(); ++i) {
        std::size_t corner = costs[0];
        costs[0] = i + 1;
        for (std::size_t j = 0; j < sb.size(); ++j) {
            const std::size_t upper = costs[j + 1];
            if (sa[i] == sb[j]) {
                costs[j + 1] = corner;
            } else {
                costs[j + 1] = 1 + std::min({upper, corner, costs[j]});
            }
            corner = upper;
        }
    }
    return costs[sb.size()];
}

std::vector<StmHit> retrieve_stm(const ShortTermMemory& stm, std::string_view query,
                                 std::size_t k) {
    if (k == 0) return {};
    const std::string normalized = text::normalize_key(query);

    std::vector<std::pair<std::size_t, std::size_t>> ranked;  // (distance, index)
    ranked.reserve(stm.items.size());
    for (std::size_t i = 0; i < stm.items.size(); ++i) {
        ranked.emplace_back(levenshtein(normalized, stm.items[i].key), i);
    }
    std::sort(ranked.begin(), ranked.end());  // distance, then insertion order

    std::vector<StmHit> hits;
    hits.reserve(std::min(k, ranked.size()));
    for (std::size_t i = 0; i < ranked.size() && hits.size() < k; ++i) {
        hits.push_back(StmHit{stm.items[ranked[i].second], ranked[i].first});
    }
    return hits;
}

std::vector<LtmHit> retrieve_ltm(const LongTermMemory& ltm, const Embedder& embedder,
                                 const std::string& query, std::size_t k) {
    if (k == 0 || ltm.entries.empty()) return {};
    const std::vector<double> q = embedder.embed(query);

    std::vector<std::pair<double, std::size_t>> ranked;  // (similarity, index)
    ranked.reserve(ltm.entries.size());
    for (std::size_t i = 0; i < ltm.entries.size(); ++i) {
        const auto& e = ltm.entries[i].embedding;
        if (e.size() != q.size()) {
            raise(Errc::dimension_mismatch,
                  "LTM entry dimension " + std::to_string(e.size()) + " vs query dimension " +
                      std::to_string(q.size()));
        }
        const double sim = std::inner_product(q.begin(), q.end(), e.begin(), 0.0);
        ranked.emplace_back(sim, i);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& lhs, const auto& rhs) {
        if (lhs.first != rhs.first) return lhs.first > rhs.first;
        return lhs.second < rhs.second;  // append order on ties
    });

    std::vector<LtmHit> hits;
    hits.reserve(std::min(k, ranked.size()));
    for (std::size_t i = 0; i < ranked.size() && hits.size() < k; ++i) {
        hits.push_back(LtmHit{ltm.entries[ranked[i].second].item, ranked[i].first});
    }
    return hits;
}

namespace {

// Append as many whole items as fit. The header itself is rolled back when
// no item fits under it.
void fill_section(std::string& rendered, std::string_view header,
                  const std::vector<const KnowledgeItem*>& items, std::size_t budget) {
    if (items.empty()) return;
    std::string section;
    section += rendered.empty() ? std::string(header) : "\n" + std::string(header);
    bool any = false;
    for (const auto* item : items) {
        const std::string line = "\n- " + item->text;
        if (rendered.size() + section.size() + line.size() > budget) {
            if (any) break;
            return;  // header alone never renders
        }
        section += line;
        any = true;
    }
    if (any) rendered += section;
}

}  // namespace

RetrievedPrompt assemble_prompt(std::vector<StmHit> stm_hits, std::vector<LtmHit> ltm_hits,
                                std::size_t budget) {
    RetrievedPrompt prompt;
    prompt.stm_hits = std::move(stm_hits);
    prompt.ltm_hits = std::move(ltm_hits);

    // Dedup across tiers by (kind, key); STM hits come first and win.
    std::vector<const KnowledgeItem*> user_items;
    std::vector<const KnowledgeItem*> common_items;
    std::vector<FlagKey> seen;
    auto add = [&](const KnowledgeItem& item) {
        const FlagKey fk{item.kind, item.key};
        if (std::find(seen.begin(), seen.end(), fk) != seen.end()) return;
        seen.push_back(fk);
        (item.kind == Kind::UserSpecific ? user_items : common_items).push_back(&item);
    };
    for (const auto& hit : prompt.stm_hits) add(hit.item);
    for (const auto& hit : prompt.ltm_hits) add(hit.item);

    fill_section(prompt.rendered, kUserSectionHeader, user_items, budget);
    fill_section(prompt.rendered, kCommonSectionHeader, common_items, budget);
    return prompt;
}

RetrievedPrompt retrieve_prompt(const MemorySnapshot& memory, const Embedder& embedder,
                                const std::string& query, std::size_t k, std::size_t budget) {
    return assemble_prompt(retrieve_stm(memory.stm, query, k),
                           retrieve_ltm(memory.ltm, embedder, query, k), budget);
}

}  // namespace tiermem
