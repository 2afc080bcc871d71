#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "../support/oracles.hpp"
#include "tiermem/adaptation.hpp"
#include "tiermem/error.hpp"

using namespace tiermem;

TEST_CASE("lora_apply with a zero up-projection returns the base bit-identically") {
    const Matrix base(2, 3, {1.5, -2.0, 0.25, 4.0, -0.0, 3.125});
    LoraPair pair;
    pair.rank = 1;
    pair.alpha = 32.0;
    pair.down = Matrix(1, 3, {0.7, -1.2, 9.9});
    pair.up = Matrix(2, 1);  // zeros
    const auto out = lora_apply(base, pair);
    REQUIRE(out.entries.size() == base.entries.size());
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        CHECK(std::memcmp(&out.entries[i], &base.entries[i], sizeof(double)) == 0);
    }
}

TEST_CASE("lora_apply scalar case") {
    const Matrix base(1, 1, {2.0});
    LoraPair pair;
    pair.rank = 1;
    pair.alpha = 1.0;
    pair.up = Matrix(1, 1, {3.0});
    pair.down = Matrix(1, 1, {4.0});
    CHECK(lora_apply(base, pair).at(0, 0) == doctest::Approx(14.0).epsilon(1e-15));
}

TEST_CASE("lora_apply matches a naive triple-loop product") {
    std::mt19937_64 rng(42);
    auto rnd = [&rng]() { return std::uniform_real_distribution<double>(-2.0, 2.0)(rng); };
    const std::size_t d = 2;
    const std::size_t k = 2;
    const std::size_t r = 1;

    Matrix base(d, k);
    for (auto& x : base.entries) x = rnd();
    LoraPair pair;
    pair.rank = r;
    pair.alpha = 32.0;
    pair.down = Matrix(r, k);
    pair.up = Matrix(d, r);
    for (auto& x : pair.down.entries) x = rnd();
    for (auto& x : pair.up.entries) x = rnd();

    const auto out = lora_apply(base, pair);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double delta = 0.0;
            for (std::size_t t = 0; t < r; ++t) {
                delta += pair.up.at(i, t) * pair.down.at(t, j);
            }
            const double expected = base.at(i, j) + (pair.alpha / double(r)) * delta;
            CHECK(out.at(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("lora_apply with alpha equal to rank is the raw product update") {
    const Matrix base(2, 2, {1.0, 2.0, 3.0, 4.0});
    LoraPair pair;
    pair.rank = 2;
    pair.alpha = 2.0;
    pair.down = Matrix(2, 2, {1.0, 0.0, 0.0, 1.0});
    pair.up = Matrix(2, 2, {1.0, 0.0, 0.0, 1.0});
    const auto out = lora_apply(base, pair);
    CHECK(out.at(0, 0) == doctest::Approx(2.0));
    CHECK(out.at(1, 1) == doctest::Approx(5.0));
}

TEST_CASE("lora_apply is linear in each factor separately") {
    std::mt19937_64 rng(11);
    auto rnd = [&rng]() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); };
    const Matrix base(3, 4);
    LoraPair pair;
    pair.rank = 2;
    pair.alpha = 8.0;
    pair.down = Matrix(2, 4);
    pair.up = Matrix(3, 2);
    for (auto& x : pair.down.entries) x = rnd();
    for (auto& x : pair.up.entries) x = rnd();

    auto scaled = pair;
    for (auto& x : scaled.down.entries) x *= 3.0;
    const auto base_out = lora_apply(base, pair);
    const auto scaled_out = lora_apply(base, scaled);
    for (std::size_t i = 0; i < base_out.entries.size(); ++i) {
        CHECK(scaled_out.entries[i] == doctest::Approx(3.0 * base_out.entries[i]).epsilon(1e-12));
    }
}

TEST_CASE("operations never mutate their inputs") {
    const Matrix base(2, 2, {1.0, 2.0, 3.0, 4.0});
    LoraPair pair;
    pair.rank = 1;
    pair.alpha = 4.0;
    pair.down = Matrix(1, 2, {0.5, -0.5});
    pair.up = Matrix(2, 1, {1.0, 2.0});
    const auto base_copy = base;
    const auto pair_down_copy = pair.down;
    (void)lora_apply(base, pair);
    CHECK(base == base_copy);
    CHECK(pair.down == pair_down_copy);

    const MaskedPrediction pred{{0.5, 0.5}};
    const auto probs_copy = pred.probabilities;
    (void)knowledge_loss(pred);
    (void)grad_knowledge_loss(pred);
    CHECK(pred.probabilities == probs_copy);
}

TEST_CASE("lora_apply validates shapes") {
    const Matrix base(2, 2, {1.0, 2.0, 3.0, 4.0});
    LoraPair pair;
    pair.rank = 1;
    pair.alpha = 1.0;
    pair.down = Matrix(1, 3, {1.0, 2.0, 3.0});  // wrong k
    pair.up = Matrix(2, 1, {1.0, 1.0});
    CHECK_THROWS_WITH_AS(lora_apply(base, pair), doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("knowledge_loss worked values") {
    CHECK(knowledge_loss({{1.0, 1.0, 1.0}}) == 0.0);

    // Uniform 1/V over K tokens -> ln V.
    const double v = 50000.0;
    MaskedPrediction uniform{std::vector<double>(7, 1.0 / v)};
    CHECK(std::abs(knowledge_loss(uniform) - std::log(v)) < 1e-12);

    MaskedPrediction two{{0.5, 0.25}};
    CHECK(knowledge_loss(two) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("knowledge_loss rejects out-of-domain probabilities") {
    CHECK_THROWS_WITH_AS(knowledge_loss({{0.0}}), doctest::Contains("DomainError"), Error);
    CHECK_THROWS_WITH_AS(knowledge_loss({{1.5}}), doctest::Contains("DomainError"), Error);
    CHECK_THROWS_WITH_AS(knowledge_loss({{}}), doctest::Contains("DomainError"), Error);
}

TEST_CASE("knowledge_loss is permutation-invariant and monotone in each probability") {
    MaskedPrediction a{{0.9, 0.2, 0.5}};
    MaskedPrediction b{{0.5, 0.9, 0.2}};
    CHECK(knowledge_loss(a) == doctest::Approx(knowledge_loss(b)).epsilon(1e-15));

    MaskedPrediction worse{{0.9, 0.1, 0.5}};
    CHECK(knowledge_loss(worse) > knowledge_loss(a));
}

TEST_CASE("sample_loss worked values and homogeneity") {
    CHECK(sample_loss({{1.0, 2.0}, {1.0, 2.0}}) == 0.0);
    CHECK(sample_loss({{1.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(2.0));

    const ReprPair pair{{1.0, -2.0, 0.5}, {0.0, 1.0, 2.0}};
    ReprPair scaled = pair;
    for (auto& x : scaled.original) x *= 3.0;
    for (auto& x : scaled.adapted) x *= 3.0;
    CHECK(sample_loss(scaled) == doctest::Approx(9.0 * sample_loss(pair)).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(sample_loss({{1.0}, {1.0, 2.0}}), doctest::Contains("ShapeMismatch"),
                         Error);
}

TEST_CASE("adaptation_loss is the sum of its parts") {
    const MaskedPrediction pred{{0.5, 0.25}};
    const ReprPair pair{{1.0, 0.0}, {0.0, 1.0}};
    CHECK(adaptation_loss(pred, pair) ==
          doctest::Approx(knowledge_loss(pred) + sample_loss(pair)).epsilon(1e-15));
    CHECK(adaptation_loss({{1.0}}, {{2.0}, {2.0}}) == 0.0);
}

TEST_CASE("analytic gradients match the stated formulas") {
    const auto grad = grad_knowledge_loss({{1.0, 1.0}});
    REQUIRE(grad.size() == 2);
    CHECK(grad[0] == doctest::Approx(-0.5));
    CHECK(grad[1] == doctest::Approx(-0.5));

    const auto sg = grad_sample_loss({{1.0, 2.0}, {1.0, 2.0}});
    for (double g : sg.d_original) CHECK(g == 0.0);
    for (double g : sg.d_adapted) CHECK(g == 0.0);
}

TEST_CASE("gradients match central finite differences on random instances") {
    std::mt19937_64 rng(2024);
    const double h = 1e-5;
    const double tol = 1e-4;

    for (int instance = 0; instance < 100; ++instance) {
        const std::size_t n = 1 + rng() % 6;

        // knowledge loss
        std::vector<double> probs(n);
        for (auto& p : probs) p = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        const auto analytic = grad_knowledge_loss({probs});
        const auto numeric = oracle::finite_difference(
            probs, [](const std::vector<double>& x) { return knowledge_loss({x}); }, h);
        for (std::size_t i = 0; i < n; ++i) {
            const double rel =
                std::abs(analytic[i] - numeric[i]) / std::max(1.0, std::abs(numeric[i]));
            CHECK(rel <= tol);
        }

        // sample loss, gradient w.r.t. both sides
        std::vector<double> vo(n);
        std::vector<double> vk(n);
        for (auto& x : vo) x = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        for (auto& x : vk) x = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        const auto sg = grad_sample_loss({vo, vk});
        const auto num_o = oracle::finite_difference(
            vo, [&vk](const std::vector<double>& x) { return sample_loss({x, vk}); }, h);
        const auto num_k = oracle::finite_difference(
            vk, [&vo](const std::vector<double>& x) { return sample_loss({vo, x}); }, h);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(sg.d_original[i] - num_o[i]) /
                      std::max(1.0, std::abs(num_o[i])) <=
                  tol);
            CHECK(std::abs(sg.d_adapted[i] - num_k[i]) / std::max(1.0, std::abs(num_k[i])) <=
                  tol);
        }
    }
}
