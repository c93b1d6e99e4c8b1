#include "toruskit/rational.hpp"

#include <utility>

namespace toruskit {

std::vector<std::size_t> RationalMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && sgn((*this)(p, c)) == 0) ++p;
    if (p == rows_) continue;
    if (p != r) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
    }
    Rational inv = 1 / (*this)(r, c);
    for (std::size_t j = c; j < cols_; ++j) (*this)(r, j) *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || sgn((*this)(i, c)) == 0) continue;
      Rational f = (*this)(i, c);
      for (std::size_t j = c; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<RationalVector> RationalMatrix::nullspace() const {
  RationalMatrix m = *this;
  auto pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    RationalVector x(cols_);
    x[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = -m(k, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

RationalVector to_rational(const IntVector& v) {
  RationalVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

std::optional<RationalVector> solve_in_span(const std::vector<IntVector>& basis, const IntVector& v) {
  const std::size_t k = basis.size();
  const std::size_t d = v.size();
  RationalMatrix m(d, k + 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < k; ++j) m(i, j) = basis[j][i];
    m(i, k) = v[i];
  }
  auto pivots = m.rref();
  if (!pivots.empty() && pivots.back() == k) return std::nullopt;
  RationalVector x(k);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m(r, k);
  return x;
}

IntVector clear_denominators(const RationalVector& v) { return clear_denominators(std::vector<RationalVector>{v})[0]; }

std::vector<IntVector> clear_denominators(const std::vector<RationalVector>& tuple) {
  Integer lcm = 1;
  for (const auto& v : tuple) {
    for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  }
  std::vector<IntVector> out;
  Integer g = 0;
  for (const auto& v : tuple) {
    IntVector w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      w[i] = v[i].get_num() * (lcm / v[i].get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w[i].get_mpz_t());
    }
    out.push_back(std::move(w));
  }
  if (g > 1) {
    for (auto& w : out) {
      for (std::size_t i = 0; i < w.size(); ++i) mpz_divexact(w[i].get_mpz_t(), w[i].get_mpz_t(), g.get_mpz_t());
    }
  }
  return out;
}

}  // namespace toruskit
