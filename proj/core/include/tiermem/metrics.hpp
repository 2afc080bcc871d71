#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tiermem {

class ChatBackend;

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Unigram overlap with clipped counts over case-folded, whitespace-split,
// punctuation-stripped tokens. Both sides empty scores 1.0 by convention;
// exactly one empty scores 0.
RougeScore rouge1(std::string_view candidate, std::string_view reference);

// Token-level longest-common-subsequence variant: precision = LCS/|cand|,
// recall = LCS/|ref|. Same tokenization and empty conventions as rouge1.
RougeScore rougeL(std::string_view candidate, std::string_view reference);

// Fraction of exact label matches. Lists must have equal, nonzero length.
double preference_accuracy(const std::vector<std::string>& predictions,
                           const std::vector<std::string>& gold);

// Outcome of one pairwise comparison, candidate vs reference system.
enum class Verdict {
    Win,
    Tie,
    Lose,
};

std::string_view to_string(Verdict verdict);

// wins / (wins + ties + losses). Requires at least one verdict.
double win_rate(const std::vector<Verdict>& verdicts);

// Sample Pearson correlation coefficient. Requires equal lengths >= 2 and
// nonzero variance on both sides.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// ---------------------------------------------------------------------------
// Judge protocol

inline constexpr int kJudgePromptVersion = 1;
extern const std::string_view kJudgePromptTemplate;

struct GenerationPair {
    std::string query;
    std::string candidate;
    std::string baseline;
};

struct JudgeOutcome {
    std::vector<Verdict> verdicts;  // one per completed pair, input order
    std::size_t completed = 0;
    bool aborted = false;  // backend failure mid-batch; verdicts are partial
    std::string error;
};

// Ask the backend to compare candidate vs baseline for every pair. The
// candidate is placed in slot A or B at random per pair (mt19937_64 from
// `seed`, so the placement sequence is recorded and reproducible) to cancel
// position bias. Unparseable replies count as Tie. A backend failure aborts
// the batch and flags the partial result.
JudgeOutcome judge_pairs(ChatBackend& backend, const std::vector<GenerationPair>& pairs,
                         std::uint64_t seed);

}  // namespace tiermem
