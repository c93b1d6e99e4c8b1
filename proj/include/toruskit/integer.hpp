#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace toruskit {

using Integer = mpz_class;

std::strong_ordering compare(const Integer& a, const Integer& b);

// Fixed-length vector of arbitrary-precision integers; a character of the torus
// in lattice coordinates.
class IntVector {
 public:
  IntVector() = default;
  explicit IntVector(std::size_t d) : entries_(d) {}
  IntVector(std::initializer_list<long> values);
  explicit IntVector(std::vector<Integer> values) : entries_(std::move(values)) {}

  static IntVector unit(std::size_t d, std::size_t i);

  std::size_t size() const { return entries_.size(); }
  Integer& operator[](std::size_t i) { return entries_[i]; }
  const Integer& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::span<const Integer> entries() const { return entries_; }

  bool is_zero() const;
  // gcd of the entries (0 for the zero vector)
  Integer content() const;
  // Sign convention for weights: first nonzero entry positive.
  bool has_canonical_sign() const;
  IntVector canonical_sign() const;
  bool is_primitive() const;
  // Divide by the content and fix the sign; the zero vector maps to itself.
  IntVector primitive() const;

  IntVector& operator+=(const IntVector& other);
  IntVector& operator-=(const IntVector& other);
  IntVector& operator*=(const Integer& k);
  friend IntVector operator+(IntVector a, const IntVector& b) { return a += b; }
  friend IntVector operator-(IntVector a, const IntVector& b) { return a -= b; }
  friend IntVector operator*(const Integer& k, IntVector a) { return a *= k; }
  IntVector operator-() const;

  friend bool operator==(const IntVector& a, const IntVector& b);
  friend std::strong_ordering operator<=>(const IntVector& a, const IntVector& b);

  std::string to_string() const;

 private:
  std::vector<Integer> entries_;
};

Integer dot(const IntVector& a, const IntVector& b);

// Two nonzero vectors span the same line.
bool parallel(const IntVector& a, const IntVector& b);

// Raises MalformedInput unless every vector has length d.
void require_length(std::span<const IntVector> vectors, std::size_t d);

}  // namespace toruskit
