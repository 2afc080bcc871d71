#include "tiermem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "tiermem/chat.hpp"
#include "tiermem/error.hpp"
#include "tiermem/text.hpp"

namespace tiermem {

namespace {

RougeScore from_counts(double overlap, double cand_n, double ref_n) {
    RougeScore score;
    if (cand_n == 0.0 && ref_n == 0.0) {
        score.precision = score.recall = score.f1 = 1.0;
        return score;
    }
    if (cand_n == 0.0 || ref_n == 0.0) {
        return score;
    }
    score.precision = overlap / cand_n;
    score.recall = overlap / ref_n;
    if (score.precision + score.recall > 0.0) {
        score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
    }
    return score;
}

}  // namespace

RougeScore rouge1(std::string_view candidate, std::string_view reference) {
    const auto cand = text::tokenize(candidate);
    const auto ref = text::tokenize(reference);

    std::map<std::string, std::size_t> ref_counts;
    for (const auto& token : ref) ++ref_counts[token];

    std::size_t overlap = 0;
    for (const auto& token : cand) {
        const auto it = ref_counts.find(token);
        if (it != ref_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    return from_counts(static_cast<double>(overlap), static_cast<double>(cand.size()),
                       static_cast<double>(ref.size()));
}

RougeScore rougeL(std::string_view candidate, std::string_view reference) {
    const auto cand = text::tokenize(candidate);
    const auto ref = text::tokenize(reference);
    if (cand.empty() || ref.empty()) {
        return from_counts(0.0, static_cast<double>(cand.size()),
                           static_cast<double>(ref.size()));
    }

    // Two-row LCS table over tokens.
    std::vector<std::size_t> prev(ref.size() + 1, 0);
    std::vector<std::size_t> curr(ref.size() + 1, 0);
    for (std::size_t i = 1; i <= cand.size(); ++i) {
        for (std::size_t j = 1; j <= ref.size(); ++j) {
            if (cand[i - 1] == ref[j - 1]) {
                curr[j] = prev[j - 1] + 1;
            } else {
                curr[j] = std::max(prev[j], curr[j - 1]);
            }
        }
        std::swap(prev, curr);
    }
    return from_counts(static_cast<double>(prev[ref.size()]), static_cast<double>(cand.size()),
                       static_cast<double>(ref.size()));
}

double preference_accuracy(const std::vector<std::string>& predictions,
                           const std::vector<std::string>& gold) {
    if (predictions.size() != gold.size()) {
        raise(Errc::length_mismatch, "prediction and gold lists differ in length");
    }
    if (predictions.empty()) {
        raise(Errc::length_mismatch, "need at least one labeled example");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] == gold[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Win: return "win";
        case Verdict::Tie: return "tie";
        case Verdict::Lose: return "lose";
    }
    return "tie";
}

double win_rate(const std::vector<Verdict>& verdicts) {
    if (verdicts.empty()) {
        raise(Errc::degenerate_input, "win_rate needs at least one verdict");
    }
    const auto wins = std::count(verdicts.begin(), verdicts.end(), Verdict::Win);
    return static_cast<double>(wins) / static_cast<double>(verdicts.size());
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        raise(Errc::length_mismatch, "series differ in length");
    }
    if (xs.size() < 2) {
        raise(Errc::length_mismatch, "need at least two points");
    }
    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;

    double cov = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        raise(Errc::degenerate_input, "zero variance in at least one series");
    }
    return cov / std::sqrt(var_x * var_y);
}

// ---------------------------------------------------------------------------
// Judge protocol

const std::string_view kJudgePromptTemplate =
    "tiermem judge template v1\n"
    "You compare two assistant responses to the same question and decide\n"
    "which answers it better in content and style.\n"
    "Reply with exactly one token: VERDICT_A if Response A is better,\n"
    "VERDICT_B if Response B is better, or VERDICT_TIE.\n"
    "\n"
    "Question:{question}\n"
    "Response A:{response_a}\n"
    "Response B:{response_b}";

namespace {

std::string render_judge_prompt(const std::string& question, const std::string& a,
                                const std::string& b) {
    std::string out(kJudgePromptTemplate);
    auto replace = [&out](std::string_view slot, const std::string& value) {
        const auto pos = out.find(slot);
        if (pos != std::string::npos) out.replace(pos, slot.size(), " " + value);
    };
    replace("{question}", question);
    replace("{response_a}", a);
    replace("{response_b}", b);
    return out;
}

Verdict parse_verdict(const std::string& reply, bool candidate_is_a) {
    const bool says_a = reply.find("VERDICT_A") != std::string::npos;
    const bool says_b = reply.find("VERDICT_B") != std::string::npos;
    if (says_a == says_b) return Verdict::Tie;  // both, neither, or VERDICT_TIE
    const bool candidate_won = says_a == candidate_is_a;
    return candidate_won ? Verdict::Win : Verdict::Lose;
}

}  // namespace

JudgeOutcome judge_pairs(ChatBackend& backend, const std::vector<GenerationPair>& pairs,
                         std::uint64_t seed) {
    JudgeOutcome outcome;
    std::mt19937_64 rng(seed);
    for (const auto& pair : pairs) {
        const bool candidate_is_a = (rng() & 1ULL) == 0ULL;
        const std::string prompt =
            candidate_is_a ? render_judge_prompt(pair.query, pair.candidate, pair.baseline)
                           : render_judge_prompt(pair.query, pair.baseline, pair.candidate);
        GenParams params;
        params.temperature = 0.0;
        params.seed = seed;
        try {
            const std::string reply =
                backend.complete({ChatMessage{ChatRole::User, prompt}}, params);
            outcome.verdicts.push_back(parse_verdict(reply, candidate_is_a));
            ++outcome.completed;
        } catch (const Error& e) {
            outcome.aborted = true;
            outcome.error = e.what();
            break;
        }
    }
    return outcome;
}

}  // namespace tiermem
