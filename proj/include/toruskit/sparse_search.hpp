#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "toruskit/z2.hpp"

namespace toruskit {

struct SearchOptions {
  unsigned jobs = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SparseSearchResult {
  std::size_t dim = 0;
  std::size_t max_nonzero = 0;
  // One representative per GL(d,2)-class, in canonical coordinates, sorted.
  std::vector<Z2Set> classes;
  std::uint64_t nodes = 0;
};

constexpr std::size_t kMaxSearchDim = 5;

// Largest generating sets with the codimension-three property, up to GL(d,2).
// Throws CapabilityError for d outside [1, 5] and BudgetExceeded past the deadline.
SparseSearchResult enumerate_max_sparse(std::size_t d, const SearchOptions& options = {});

// GL(d,2)-invariant normal form of a generating set (d <= 6): the image with
// the lexicographically smallest sorted member list over all bases chosen from S.
Z2Set gl_canonical_form(const Z2Set& s);

}  // namespace toruskit
