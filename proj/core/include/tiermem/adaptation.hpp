#pragma once

#include <cstddef>
#include <vector>

namespace tiermem {

// Dense row-major matrix, desk scale. All entries must stay finite.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries;  // row-major, rows * cols

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0.0) {}
    Matrix(std::size_t r, std::size_t c, std::vector<double> values);

    double& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

Matrix matmul(const Matrix& lhs, const Matrix& rhs);

// Low-rank update factors: `down` projects the k input columns to the rank,
// `up` lifts back to the d output rows, so up * down has the base's d x k
// shape. alpha is the update's scaling numerator; the applied delta is
// (alpha / rank) * up * down. Setting alpha == rank gives the raw unscaled
// product.
struct LoraPair {
    Matrix down;  // rank x k
    Matrix up;    // d x rank
    std::size_t rank = 1;
    double alpha = 1.0;
};

// base + (alpha / rank) * up * down. The base matrix is not modified.
Matrix lora_apply(const Matrix& base, const LoraPair& pair);

// Per-masked-token generation probabilities, each in (0, 1].
struct MaskedPrediction {
    std::vector<double> probabilities;
};

// Token representations before (original) and after (adapted) the adapter
// layer, of equal length.
struct ReprPair {
    std::vector<double> original;
    std::vector<double> adapted;
};

// Mean negative log-probability over the masked tokens (natural log).
// Zero exactly when every probability is 1.
double knowledge_loss(const MaskedPrediction& pred);

// Squared Euclidean distance between the two representations, guarding
// against drift of the adapted layer from the original.
double sample_loss(const ReprPair& pair);

// knowledge_loss + sample_loss.
double adaptation_loss(const MaskedPrediction& pred, const ReprPair& pair);

// d/dp_i = -1 / (K * p_i)
std::vector<double> grad_knowledge_loss(const MaskedPrediction& pred);

struct SampleLossGrad {
    std::vector<double> d_original;  //  2 (original - adapted)
    std::vector<double> d_adapted;   // -2 (original - adapted)
};

SampleLossGrad grad_sample_loss(const ReprPair& pair);

}  // namespace tiermem
