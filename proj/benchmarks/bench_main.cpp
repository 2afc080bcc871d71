#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "tiermem/coordinator.hpp"
#include "tiermem/embedder.hpp"
#include "tiermem/engine.hpp"
#include "tiermem/memory.hpp"
#include "tiermem/metrics.hpp"
#include "tiermem/retrieval.hpp"

using namespace tiermem;

namespace {

std::string random_text(std::mt19937_64& rng, std::size_t words) {
    static const char* vocab[] = {"fever",  "cough", "water",   "sleep",  "pain",
                                  "doctor", "daily", "morning", "tablet", "rest"};
    std::string s;
    for (std::size_t i = 0; i < words; ++i) {
        if (!s.empty()) s += " ";
        s += vocab[rng() % 10];
    }
    return s;
}

LongTermMemory make_ltm(std::size_t entries, const Embedder& embedder) {
    LongTermMemory ltm;
    std::mt19937_64 rng(1);
    for (std::size_t i = 0; i < entries; ++i) {
        LtmEntry entry;
        entry.item = make_item(Kind::CommonSense, random_text(rng, 6) + " " + std::to_string(i),
                               0);
        entry.embedding = embedder.embed(entry.item.text);
        ltm.entries.push_back(std::move(entry));
    }
    return ltm;
}

}  // namespace

static void BM_Levenshtein(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto a = random_text(rng, static_cast<std::size_t>(state.range(0)));
    const auto b = random_text(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(levenshtein(a, b));
    }
}
BENCHMARK(BM_Levenshtein)->Arg(4)->Arg(16)->Arg(64);

static void BM_EmbedLocal(benchmark::State& state) {
    const LocalEmbedder embedder(256);
    std::mt19937_64 rng(7);
    const auto text = random_text(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(embedder.embed(text));
    }
}
BENCHMARK(BM_EmbedLocal)->Arg(8)->Arg(64);

static void BM_RetrieveLtm(benchmark::State& state) {
    const LocalEmbedder embedder(256);
    const auto ltm = make_ltm(static_cast<std::size_t>(state.range(0)), embedder);
    for (auto _ : state) {
        benchmark::DoNotOptimize(retrieve_ltm(ltm, embedder, "fever water sleep", 3));
    }
}
BENCHMARK(BM_RetrieveLtm)->Arg(100)->Arg(1000)->Arg(5000);

static void BM_RetrieveStm(benchmark::State& state) {
    ShortTermMemory stm;
    std::mt19937_64 rng(3);
    for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i) {
        stm.items.push_back(
            make_item(Kind::UserSpecific, random_text(rng, 5) + " " + std::to_string(i), 0));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(retrieve_stm(stm, "fever cough water", 3));
    }
}
BENCHMARK(BM_RetrieveStm)->Arg(64)->Arg(256);

static void BM_EngineStep(benchmark::State& state) {
    RuleCoordinator coordinator;
    LocalEmbedder embedder(256);
    std::mt19937_64 rng(5);
    auto memory = make_snapshot("bench-user");
    for (auto _ : state) {
        DialogueRound round;
        round.round_index = memory.round_cursor;
        round.turns.push_back(
            {Role::Patient, "I have a " + random_text(rng, 1) + " headache today."});
        round.turns.push_back({Role::Doctor, "Drinking water helps with hydration."});
        auto result = step(memory, coordinator, embedder, round);
        memory = std::move(result.memory);
        benchmark::DoNotOptimize(memory);
    }
}
BENCHMARK(BM_EngineStep);

static void BM_RougeL(benchmark::State& state) {
    std::mt19937_64 rng(11);
    const auto cand = random_text(rng, 64);
    const auto ref = random_text(rng, 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rougeL(cand, ref));
    }
}
BENCHMARK(BM_RougeL);

BENCHMARK_MAIN();
