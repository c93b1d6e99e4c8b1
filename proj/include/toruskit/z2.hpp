#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace toruskit {

// Element of GF(2)^d; bit i is coordinate i.
struct Z2Vector {
  std::uint64_t bits = 0;

  static Z2Vector unit(std::size_t i) { return {std::uint64_t{1} << i}; }
  bool is_zero() const { return bits == 0; }
  bool bit(std::size_t i) const { return (bits >> i) & 1U; }
  int weight() const { return std::popcount(bits); }
  // Pairing with a dual vector.
  bool pair(Z2Vector dual) const { return std::popcount(bits & dual.bits) & 1; }

  friend Z2Vector operator+(Z2Vector a, Z2Vector b) { return {a.bits ^ b.bits}; }
  Z2Vector& operator+=(Z2Vector o) {
    bits ^= o.bits;
    return *this;
  }
  friend bool operator==(Z2Vector, Z2Vector) = default;
  friend auto operator<=>(Z2Vector, Z2Vector) = default;

  std::string to_string(std::size_t d) const;
  static Z2Vector parse(const std::string& text);
};

constexpr std::size_t kMaxZ2Dim = 64;

// Linear subspace kept in reduced echelon form (pivot = highest set bit,
// pivots strictly decreasing, pivot bits cleared in all other rows).
class Subspace {
 public:
  explicit Subspace(std::size_t d = 0) : ambient_dim_(d) {}
  static Subspace span(std::size_t d, std::span<const Z2Vector> vectors);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  std::size_t codim() const { return ambient_dim_ - basis_.size(); }
  const std::vector<Z2Vector>& basis() const { return basis_; }

  // Canonical representative of v + this subspace.
  Z2Vector reduce(Z2Vector v) const;
  bool contains(Z2Vector v) const { return reduce(v).is_zero(); }
  // Adds v; returns false if v was already in the span.
  bool insert(Z2Vector v);
  std::vector<Z2Vector> elements() const;
  // Coordinates of a member with respect to basis().
  std::uint64_t coordinates(Z2Vector v) const;

  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend auto operator<=>(const Subspace&, const Subspace&) = default;

  std::string to_string() const;

 private:
  std::size_t ambient_dim_;
  std::vector<Z2Vector> basis_;
};

std::size_t z2_rank(std::span<const Z2Vector> vectors);
bool z2_independent(std::span<const Z2Vector> vectors);

// Subset of GF(2)^d containing 0, members kept sorted and unique.
class Z2Set {
 public:
  Z2Set() = default;
  Z2Set(std::size_t d, std::vector<Z2Vector> members);

  std::size_t dim() const { return dim_; }
  const std::vector<Z2Vector>& members() const { return members_; }
  std::vector<Z2Vector> nonzero() const;
  std::size_t size() const { return members_.size(); }
  std::size_t nonzero_count() const { return members_.size() - 1; }
  bool contains(Z2Vector v) const;
  bool is_generating() const;

  friend bool operator==(const Z2Set&, const Z2Set&) = default;
  std::string to_string() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Z2Vector> members_;
};

// {0} + basis + pairwise sums; the extremal configuration.
Z2Set hamming2_set(std::size_t d, std::span<const Z2Vector> basis);
Z2Set hamming2_set(std::size_t d);

// A codimension-3 subspace spanned by members of S onto whose quotient S
// projects surjectively, if any.
std::optional<Subspace> codim3_violation(const Z2Set& s);
bool has_codim3_property(const Z2Set& s);

struct Z2Split {
  Subspace w;
  Z2Vector s;
};

// Every valid (W, s), ordered by s and then by the echelon basis of W.
std::vector<Z2Split> all_splits(const Z2Set& s);
Z2Split find_split(const Z2Set& s);

// Every valid hyperplane U in echelon-basis order.
std::vector<Subspace> all_codim1_independent(const Z2Set& s);
Subspace find_codim1_independent(const Z2Set& s);

std::optional<std::vector<Z2Vector>> canonicalize_hamming2(const Z2Set& s);

// Closure operations: image in V/<v> (coordinates: drop the pivot bit of v)
// and S restricted to a subspace in echelon coordinates.
Z2Set quotient_by(const Z2Set& s, Z2Vector v);
Z2Set restrict_to(const Z2Set& s, const Subspace& sub);
// Image under the linear map sending coordinate i to columns[i].
Z2Set map_linear(const Z2Set& s, std::size_t target_dim, std::span<const Z2Vector> columns);

}  // namespace toruskit
