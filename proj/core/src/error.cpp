#include "tiermem/error.hpp"

namespace tiermem {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::malformed_note: return "MalformedNote";
        case Errc::malformed_item: return "MalformedItem";
        case Errc::promotion_below_threshold: return "PromotionBelowThreshold";
        case Errc::duplicate_ltm_key: return "DuplicateLtmKey";
        case Errc::key_not_in_stm: return "KeyNotInStm";
        case Errc::invalid_embedding: return "InvalidEmbedding";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::unsupported_version: return "UnsupportedVersion";
        case Errc::corrupt_snapshot: return "CorruptSnapshot";
        case Errc::coordinator_unavailable: return "CoordinatorUnavailable";
        case Errc::malformed_coordinator_output: return "MalformedCoordinatorOutput";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::domain_error: return "DomainError";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::degenerate_input: return "DegenerateInput";
        case Errc::backend_unavailable: return "BackendUnavailable";
        case Errc::response_truncated: return "ResponseTruncated";
        case Errc::auth_error: return "AuthError";
        case Errc::precondition_violation: return "PreconditionViolation";
        case Errc::io_error: return "IoError";
        case Errc::invalid_config: return "InvalidConfig";
    }
    return "UnknownError";
}

}  // namespace tiermem
