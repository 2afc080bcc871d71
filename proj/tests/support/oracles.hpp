#pragma once

// Independent reference implementations used to check the library. These are
// deliberately written the slow, obvious way and must not share code with
// the implementations they verify.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace tiermem::oracle {

// Full-matrix Levenshtein DP over Unicode scalar values.
std::size_t levenshtein_full_matrix(std::string_view a, std::string_view b);

// LCS length by enumerating every subsequence of `a` and testing it against
// `b`. Exponential; fine for short sequences.
std::size_t lcs_exhaustive(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Indices of the top-k entries by dot product with the query, descending,
// ties by index. Plain selection loop.
std::vector<std::size_t> top_k_by_dot(const std::vector<std::vector<double>>& entries,
                                      const std::vector<double>& query, std::size_t k);

// Central finite difference of f at x, one coordinate at a time.
std::vector<double> finite_difference(const std::vector<double>& x,
                                      const std::function<double(const std::vector<double>&)>& f,
                                      double h);

}  // namespace tiermem::oracle
