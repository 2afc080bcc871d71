#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tiermem {

struct RemoteEndpoint;

// Text-to-unit-vector encoder used by LTM storage and retrieval. embed()
// must return a vector of exactly dimension() entries with unit Euclidean
// norm (within 1e-6).
class Embedder {
public:
    virtual ~Embedder() = default;

    virtual std::size_t dimension() const = 0;
    virtual std::vector<double> embed(const std::string& text) const = 0;
};

// Deterministic character-trigram feature hashing: every trigram of Unicode
// scalar values hashes into one of `dimension` buckets, term-frequency
// weighted, L2-normalized. Text yielding no trigram (fewer than three
// characters) maps to the zero-guard vector with all mass in bucket 0.
// Identical text gives bit-identical vectors across processes and platforms.
class LocalEmbedder final : public Embedder {
public:
    explicit LocalEmbedder(std::size_t dimension = 256);

    std::size_t dimension() const override { return dimension_; }
    std::vector<double> embed(const std::string& text) const override;

private:
    std::size_t dimension_;
};

// Client for the common embeddings endpoint:
//   POST {base_url}/v1/embeddings  {"input": ["..."], "model": "..."}
//   -> {"data": [{"embedding": [...]}]}
// Responses are re-normalized to unit length before use. Transient failures
// retry with backoff; exhaustion surfaces as BackendUnavailable.
class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(const RemoteEndpoint& endpoint, std::size_t dimension);

    std::size_t dimension() const override { return dimension_; }
    std::vector<double> embed(const std::string& text) const override;

private:
    std::string base_url_;
    std::string api_key_;
    std::string model_;
    int timeout_ms_;
    std::size_t dimension_;
};

}  // namespace tiermem
