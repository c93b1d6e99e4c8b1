#pragma once

#include <optional>
#include <span>
#include <vector>

#include "toruskit/integer.hpp"

namespace toruskit {

// Row-style Hermite normal form: upper triangular, positive pivots, entries
// above a pivot reduced into [0, pivot). Zero rows are dropped.
std::vector<IntVector> hermite_normal_form(std::size_t d, std::span<const IntVector> generators);

// Nonzero Smith invariants d1 | d2 | ... | dr of the generator matrix.
std::vector<Integer> elementary_divisors(std::size_t d, std::span<const IntVector> generators);

// Determinant of a square list of rows.
Integer determinant(std::span<const IntVector> rows);

std::size_t rank(std::size_t d, std::span<const IntVector> vectors);
bool linearly_independent(std::size_t d, std::span<const IntVector> vectors);

// Exactly d vectors of length d forming a basis of Z^d.
bool is_zbasis(std::size_t d, std::span<const IntVector> vectors);

// A sublattice of Z^d stored by its Hermite basis, so equality of lattices is
// equality of objects.
class Sublattice {
 public:
  explicit Sublattice(std::size_t d) : ambient_rank_(d) {}
  static Sublattice span(std::size_t d, std::span<const IntVector> generators);
  static Sublattice full(std::size_t d);

  std::size_t ambient_rank() const { return ambient_rank_; }
  std::size_t rank() const { return basis_.size(); }
  std::size_t corank() const { return ambient_rank_ - basis_.size(); }
  const std::vector<IntVector>& basis() const { return basis_; }

  bool contains(const IntVector& v) const;
  bool contains(const Sublattice& other) const;
  // Integer coordinates of v in basis(), if v lies in the lattice.
  std::optional<std::vector<Integer>> coordinates(const IntVector& v) const;
  // Inverse of coordinates(): sum of coords[i] * basis()[i].
  IntVector combine(std::span<const Integer> coords) const;

  std::vector<Integer> elementary_divisors() const;
  bool is_saturated() const;
  // Z^d intersected with the rational span.
  Sublattice saturation() const;
  // Order of the torsion of Z^d / L restricted to the rational span.
  Integer saturation_index() const;

  Sublattice operator+(const Sublattice& other) const;

  friend bool operator==(const Sublattice& a, const Sublattice& b) = default;
  // Canonical encoding order: rank, then basis rows lexicographically.
  friend std::strong_ordering operator<=>(const Sublattice& a, const Sublattice& b);

  std::string to_string() const;

 private:
  std::size_t ambient_rank_;
  std::vector<IntVector> basis_;
};

Sublattice canonical_basis(std::size_t d, std::span<const IntVector> generators);
bool is_saturated(const Sublattice& lattice);

// Unimodular change of coordinates applied to row vectors: v -> v * M.
IntVector row_times(const IntVector& v, std::span<const IntVector> matrix_rows);

}  // namespace toruskit
