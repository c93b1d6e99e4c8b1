#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "toruskit/integer.hpp"

namespace toruskit {

// Sparse multivariate polynomial over Z in at most 8 variables; exponents are
// packed 8 bits per variable (degree per variable below 256).
class Polynomial {
 public:
  using Monomial = std::uint64_t;
  static constexpr std::size_t kMaxVariables = 8;
  static constexpr unsigned kMaxExponent = 255;

  explicit Polynomial(std::size_t variables = 0);
  static Polynomial constant(std::size_t variables, const Integer& c);
  static Polynomial variable(std::size_t variables, std::size_t i);
  // Linear form sum_i coeffs[i] x_i.
  static Polynomial linear(const IntVector& coeffs);

  static Monomial monomial(const std::vector<unsigned>& exponents);
  static unsigned exponent(Monomial m, std::size_t i) { return static_cast<unsigned>((m >> (8 * i)) & 0xff); }

  std::size_t variables() const { return vars_; }
  const std::map<Monomial, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned total_degree() const;

  void add_term(Monomial m, const Integer& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Integer& k);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial pow(unsigned e) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  Integer evaluate(const std::vector<Integer>& point) const;
  // Substitute polynomials (all in the same ring) for the variables.
  Polynomial compose(const std::vector<Polynomial>& values) const;

  std::string to_string() const;

 private:
  std::size_t vars_;
  std::map<Monomial, Integer> terms_;
};

}  // namespace toruskit
