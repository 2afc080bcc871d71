#include "tiermem/embedder.hpp"

#include <chrono>
#include <cmath>
#include <json.hpp>
#include <thread>

#include "tiermem/chat.hpp"
#include "tiermem/error.hpp"
#include "tiermem/text.hpp"

#include <httplib.h>

namespace tiermem {

using nlohmann::json;

LocalEmbedder::LocalEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) {
        raise(Errc::invalid_config, "embedder dimension must be positive");
    }
}

std::vector<double> LocalEmbedder::embed(const std::string& input) const {
    std::vector<double> v(dimension_, 0.0);
    const auto cps = text::utf8_decode(input);
    if (cps.size() < 3) {
        v[0] = 1.0;  // zero-guard vector
        return v;
    }
    for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
        const std::vector<char32_t> gram(cps.begin() + static_cast<std::ptrdiff_t>(i),
                                         cps.begin() + static_cast<std::ptrdiff_t>(i) + 3);
        const std::uint64_t h = text::fnv1a(text::utf8_encode(gram));
        v[h % dimension_] += 1.0;
    }
    double sum = 0.0;
    for (double x : v) sum += x * x;
    const double norm = std::sqrt(sum);
    for (double& x : v) x /= norm;
    return v;
}

RemoteEmbedder::RemoteEmbedder(const RemoteEndpoint& endpoint, std::size_t dimension)
    : base_url_(endpoint.base_url),
      api_key_(resolve_api_key(endpoint)),
      model_(endpoint.model),
      timeout_ms_(endpoint.timeout_ms),
      dimension_(dimension) {
    if (dimension_ == 0) {
        raise(Errc::invalid_config, "embedder dimension must be positive");
    }
}

std::vector<double> RemoteEmbedder::embed(const std::string& input) const {
    const json body = {{"input", json::array({input})}, {"model", model_}};

    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
    client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(50 << attempt));
        }
        auto res = client.Post("/v1/embeddings", headers, body.dump(), "application/json");
        if (!res) continue;  // connection-level failure, retry
        if (res->status == 401 || res->status == 403) {
            raise(Errc::auth_error, "embeddings endpoint rejected credentials (status " +
                                        std::to_string(res->status) + ")");
        }
        if (res->status >= 500) continue;
        if (res->status != 200) {
            raise(Errc::backend_unavailable,
                  "embeddings endpoint returned status " + std::to_string(res->status));
        }
        try {
            const json j = json::parse(res->body);
            auto v = j.at("data").at(0).at("embedding").get<std::vector<double>>();
            if (v.size() != dimension_) {
                raise(Errc::dimension_mismatch,
                      "remote embedding has dimension " + std::to_string(v.size()) +
                          ", expected " + std::to_string(dimension_));
            }
            double sum = 0.0;
            for (double x : v) sum += x * x;
            if (sum <= 0.0) {
                raise(Errc::backend_unavailable, "remote embedding is a zero vector");
            }
            const double norm = std::sqrt(sum);
            for (double& x : v) x /= norm;
            return v;
        } catch (const json::exception& e) {
            raise(Errc::backend_unavailable,
                  std::string("embeddings response was not the expected JSON: ") + e.what());
        }
    }
    raise(Errc::backend_unavailable, "embeddings endpoint unreachable after retries");
}

}  // namespace tiermem
