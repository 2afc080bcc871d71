#include "tiermem/adaptation.hpp"

#include <cmath>

#include "tiermem/error.hpp"

namespace tiermem {

namespace {

void require_finite(const std::vector<double>& values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            raise(Errc::domain_error, std::string(what) + " contains a non-finite entry");
        }
    }
}

}  // namespace

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), entries(std::move(values)) {
    if (entries.size() != rows * cols) {
        raise(Errc::shape_mismatch, "entry count does not match rows * cols");
    }
    require_finite(entries, "matrix");
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols != rhs.rows) {
        raise(Errc::shape_mismatch,
              "cannot multiply " + std::to_string(lhs.rows) + "x" + std::to_string(lhs.cols) +
                  " by " + std::to_string(rhs.rows) + "x" + std::to_string(rhs.cols));
    }
    Matrix out(lhs.rows, rhs.cols);
    for (std::size_t i = 0; i < lhs.rows; ++i) {
        for (std::size_t k = 0; k < lhs.cols; ++k) {
            const double v = lhs.at(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols; ++j) {
                out.at(i, j) += v * rhs.at(k, j);
            }
        }
    }
    return out;
}

Matrix lora_apply(const Matrix& base, const LoraPair& pair) {
    if (pair.rank == 0) {
        raise(Errc::shape_mismatch, "rank must be positive");
    }
    if (pair.down.rows != pair.rank || pair.up.cols != pair.rank) {
        raise(Errc::shape_mismatch, "factor shapes do not match the declared rank");
    }
    if (pair.up.rows != base.rows || pair.down.cols != base.cols) {
        raise(Errc::shape_mismatch, "up * down does not compose to the base shape");
    }
    if (pair.rank > std::min(base.rows, base.cols)) {
        raise(Errc::shape_mismatch, "rank exceeds min(d, k)");
    }
    if (!(pair.alpha > 0.0)) {
        raise(Errc::domain_error, "alpha must be positive");
    }

    const Matrix delta = matmul(pair.up, pair.down);
    const double scale = pair.alpha / static_cast<double>(pair.rank);
    Matrix out = base;
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        // Skipping exact-zero terms keeps a zero update bit-identical to the
        // base (x += 0.0 would flip the sign of -0.0 entries).
        const double term = scale * delta.entries[i];
        if (term != 0.0) out.entries[i] += term;
    }
    return out;
}

double knowledge_loss(const MaskedPrediction& pred) {
    if (pred.probabilities.empty()) {
        raise(Errc::domain_error, "prediction needs at least one masked token");
    }
    double sum = 0.0;
    for (double p : pred.probabilities) {
        if (!(p > 0.0) || p > 1.0) {
            raise(Errc::domain_error, "probability outside (0, 1]");
        }
        sum += std::log(p);
    }
    return -sum / static_cast<double>(pred.probabilities.size());
}

double sample_loss(const ReprPair& pair) {
    if (pair.original.size() != pair.adapted.size()) {
        raise(Errc::shape_mismatch, "representation vectors differ in length");
    }
    require_finite(pair.original, "original representation");
    require_finite(pair.adapted, "adapted representation");
    double sum = 0.0;
    for (std::size_t i = 0; i < pair.original.size(); ++i) {
        const double d = pair.original[i] - pair.adapted[i];
        sum += d * d;
    }
    return sum;
}

double adaptation_loss(const MaskedPrediction& pred, const ReprPair& pair) {
    return knowledge_loss(pred) + sample_loss(pair);
}

std::vector<double> grad_knowledge_loss(const MaskedPrediction& pred) {
    if (pred.probabilities.empty()) {
        raise(Errc::domain_error, "prediction needs at least one masked token");
    }
    const double k = static_cast<double>(pred.probabilities.size());
    std::vector<double> grad(pred.probabilities.size());
    for (std::size_t i = 0; i < pred.probabilities.size(); ++i) {
        const double p = pred.probabilities[i];
        if (!(p > 0.0) || p > 1.0) {
            raise(Errc::domain_error, "probability outside (0, 1]");
        }
        grad[i] = -1.0 / (k * p);
    }
    return grad;
}

SampleLossGrad grad_sample_loss(const ReprPair& pair) {
    if (pair.original.size() != pair.adapted.size()) {
        raise(Errc::shape_mismatch, "representation vectors differ in length");
    }
    SampleLossGrad grad;
    grad.d_original.resize(pair.original.size());
    grad.d_adapted.resize(pair.original.size());
    for (std::size_t i = 0; i < pair.original.size(); ++i) {
        const double d = pair.original[i] - pair.adapted[i];
        grad.d_original[i] = 2.0 * d;
        grad.d_adapted[i] = -2.0 * d;
    }
    return grad;
}

}  // namespace tiermem
