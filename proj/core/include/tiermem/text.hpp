#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tiermem::text {

// Decode UTF-8 into Unicode scalar values. Invalid byte sequences decode to
// U+FFFD, one replacement per rejected byte, so the result is total and
// deterministic for arbitrary input.
std::vector<char32_t> utf8_decode(std::string_view s);

std::string utf8_encode(const std::vector<char32_t>& cps);

std::string_view trim(std::string_view s);

// ASCII case-fold. Knowledge keys and metric tokens only need to be stable,
// not locale-correct.
std::string to_lower(std::string_view s);

// Canonical knowledge-item key: case-fold, collapse whitespace runs to a
// single space, trim, strip trailing [.,;!?]. Idempotent.
std::string normalize_key(std::string_view s);

// Metric tokenization: case-fold, split on whitespace, strip surrounding
// punctuation from each token. Tokens that become empty are dropped.
std::vector<std::string> tokenize(std::string_view s);

// Split on [.?!], keeping the terminator with the sentence. Sentences are
// trimmed; empties dropped.
std::vector<std::string> split_sentences(std::string_view s);

// Truncate to at most max_chars bytes, cutting back to the last sentence
// boundary when one exists inside the limit.
std::string truncate_at_sentence(std::string_view s, std::size_t max_chars);

// FNV-1a, the project-wide stable hash (std::hash is not portable).
std::uint64_t fnv1a(std::string_view s);

}  // namespace tiermem::text
