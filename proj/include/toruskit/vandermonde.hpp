#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toruskit/integer.hpp"
#include "toruskit/polynomial.hpp"

namespace toruskit {

// Confluent Vandermonde matrix in values b_i with block sizes betti[i] = n_i + 1.
// Row r carries the power p = N-1-r; column k of block i holds the k-th
// derivative of b^p at b_i, that is p!/(p-k)! * b_i^(p-k).
std::vector<IntVector> confluent_matrix(const std::vector<Integer>& b, const std::vector<std::size_t>& betti);
Integer confluent_determinant(const std::vector<Integer>& b, const std::vector<std::size_t>& betti);

// C = prod_i prod_{q=1..n_i} (-1)^q q!
Integer vandermonde_constant(const std::vector<std::size_t>& betti);
// C * prod_{i<j} (b_i - b_j)^(betti_i * betti_j)
Integer vandermonde_product(const std::vector<Integer>& b, const std::vector<std::size_t>& betti);

// Both sides as polynomials in b_0..b_{k-1}.
Polynomial confluent_determinant_polynomial(const std::vector<std::size_t>& betti);
Polynomial vandermonde_product_polynomial(const std::vector<std::size_t>& betti);

struct SymbolicIdentity {
  bool holds = false;
  std::size_t terms = 0;  // monomials on each side
};

// Exact comparison of the two sides in the b variables.
SymbolicIdentity verify_vandermonde_identity(const std::vector<std::size_t>& betti);

struct VandermondeOptions {
  std::uint64_t seed = 0;
  unsigned trials = 3;
  long bound = 1L << 16;
  std::size_t symbolic_limit = 16;    // largest matrix size handled symbolically
  unsigned expansion_degree = 24;     // largest t-degree expanded in the character variables
};

struct VandermondeReport {
  bool nonzero = false;
  std::string method;          // "symbolic" or "evaluation"
  bool expanded_in_t = false;  // both sides were also expanded in the torus coordinates
  bool identity_holds = false;
  double error_bound = 0.0;    // probability bound for evaluation verdicts
  unsigned trials = 0;
  std::optional<std::pair<std::size_t, std::size_t>> collision;  // u_i = +-u_j
  Integer constant;
  std::size_t degree = 0;      // total degree in the torus coordinates
};

// Whether det, as a polynomial in the torus coordinates with b_i = (u_i . t)^2, is nonzero.
VandermondeReport vandermonde_free_check(const std::vector<IntVector>& u, const std::vector<std::size_t>& betti,
                                         const VandermondeOptions& options = {});

}  // namespace toruskit
