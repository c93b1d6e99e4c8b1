#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "toruskit/integer.hpp"

namespace toruskit {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// Dense matrix over Q, row-major.
class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  // Reduced row echelon form in place; returns the pivot columns.
  std::vector<std::size_t> rref();
  // Basis of {x : M x = 0}.
  std::vector<RationalVector> nullspace() const;

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

RationalVector to_rational(const IntVector& v);

// Coordinates of v in the given (independent) vectors, if v lies in their span.
std::optional<RationalVector> solve_in_span(const std::vector<IntVector>& basis, const IntVector& v);

// Smallest positive multiple of v that is integral, keeping direction.
IntVector clear_denominators(const RationalVector& v);
// Common positive rescaling of a tuple to integer vectors with overall content 1.
std::vector<IntVector> clear_denominators(const std::vector<RationalVector>& tuple);

}  // namespace toruskit
