#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tiermem {

// Every recoverable failure in the library carries one of these codes so
// callers (and tests) can branch on the cause instead of parsing messages.
enum class Errc {
    malformed_note,
    malformed_item,
    promotion_below_threshold,
    duplicate_ltm_key,
    key_not_in_stm,
    invalid_embedding,
    dimension_mismatch,
    unsupported_version,
    corrupt_snapshot,
    coordinator_unavailable,
    malformed_coordinator_output,
    shape_mismatch,
    domain_error,
    length_mismatch,
    degenerate_input,
    backend_unavailable,
    response_truncated,
    auth_error,
    precondition_violation,
    io_error,
    invalid_config,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace tiermem
