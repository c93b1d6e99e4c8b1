#include "toruskit/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "toruskit/errors.hpp"

namespace toruskit {

std::strong_ordering compare(const Integer& a, const Integer& b) {
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

IntVector::IntVector(std::initializer_list<long> values) {
  entries_.reserve(values.size());
  for (long v : values) entries_.emplace_back(v);
}

IntVector IntVector::unit(std::size_t d, std::size_t i) {
  IntVector v(d);
  v[i] = 1;
  return v;
}

bool IntVector::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Integer& x) { return sgn(x) == 0; });
}

Integer IntVector::content() const {
  Integer g = 0;
  for (const auto& x : entries_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

bool IntVector::has_canonical_sign() const {
  for (const auto& x : entries_) {
    if (sgn(x) != 0) return sgn(x) > 0;
  }
  return true;
}

IntVector IntVector::canonical_sign() const { return has_canonical_sign() ? *this : -*this; }

bool IntVector::is_primitive() const { return !is_zero() && content() == 1 && has_canonical_sign(); }

IntVector IntVector::primitive() const {
  Integer g = content();
  if (g == 0) return *this;
  IntVector out(size());
  for (std::size_t i = 0; i < size(); ++i) mpz_divexact(out[i].get_mpz_t(), entries_[i].get_mpz_t(), g.get_mpz_t());
  return out.canonical_sign();
}

IntVector& IntVector::operator+=(const IntVector& other) {
  for (std::size_t i = 0; i < size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

IntVector& IntVector::operator-=(const IntVector& other) {
  for (std::size_t i = 0; i < size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

IntVector& IntVector::operator*=(const Integer& k) {
  for (auto& x : entries_) x *= k;
  return *this;
}

IntVector IntVector::operator-() const {
  IntVector out(*this);
  for (auto& x : out.entries_) x = -x;
  return out;
}

bool operator==(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const IntVector& a, const IntVector& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto c = compare(a[i], b[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string IntVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < size(); ++i) os << (i ? "," : "") << entries_[i];
  os << ')';
  return os.str();
}

Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool parallel(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i] * b[j] != a[j] * b[i]) return false;
    }
  }
  return true;
}

void require_length(std::span<const IntVector> vectors, std::size_t d) {
  for (const auto& v : vectors) {
    if (v.size() != d) {
      throw MalformedInput("vector " + v.to_string() + " has length " + std::to_string(v.size()) +
                           ", expected " + std::to_string(d));
    }
  }
}

namespace {

using Rows = std::vector<IntVector>;

// log2 of a bound on every minor of the matrix (Hadamard).
double minor_bound_log2(std::span<const IntVector> rows) {
  double total = 0;
  for (const auto& r : rows) {
    double sq = 0;
    for (const auto& x : r) {
      double v = x.get_d();
      sq += v * v;
    }
    if (sq > 1) total += 0.5 * std::log2(sq);
  }
  return total;
}

bool fits_small(std::span<const IntVector> rows) {
  for (const auto& r : rows) {
    for (const auto& x : r) {
      if (!x.fits_slong_p()) return false;
    }
  }
  return 2 * minor_bound_log2(rows) < 120;
}

// Fraction-free elimination; returns rank and, for square input, the determinant.
template <class T>
std::pair<std::size_t, T> bareiss(std::vector<std::vector<T>> a, std::size_t cols) {
  const std::size_t m = a.size();
  T prev = 1;
  int sign = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m; ++c) {
    std::size_t p = r;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  T det = 0;
  if (m == cols && r == m) det = sign > 0 ? prev : T(-prev);
  return {r, det};
}

std::pair<std::size_t, Integer> eliminate(std::span<const IntVector> rows, std::size_t cols) {
  if (rows.empty()) return {0, Integer(cols == 0 ? 1 : 0)};
  if (fits_small(rows)) {
    std::vector<std::vector<__int128>> a(rows.size(), std::vector<__int128>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = rows[i][j].get_si();
    }
    auto [r, det] = bareiss<__int128>(std::move(a), cols);
    // |det| < 2^60 by the Hadamard bound check
    return {r, Integer(static_cast<long>(det))};
  }
  std::vector<std::vector<Integer>> a(rows.size(), std::vector<Integer>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = rows[i][j];
  }
  auto [r, det] = bareiss<Integer>(std::move(a), cols);
  return {r, det};
}

// Extended-gcd row combination: afterwards rows[r][c] = gcd and rows[i][c] = 0.
void gcd_combine(IntVector& top, IntVector& other, std::size_t c) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), top[c].get_mpz_t(), other[c].get_mpz_t());
  Integer a = top[c] / g;
  Integer b = other[c] / g;
  IntVector new_top = s * top + t * other;
  IntVector new_other = b * top - a * other;
  top = std::move(new_top);
  other = std::move(new_other);
}

struct SmithResult {
  std::vector<Integer> divisors;
  Rows right;  // rows of V in A = U D V
};

SmithResult smith(std::size_t d, std::span<const IntVector> generators, bool track) {
  Rows a(generators.begin(), generators.end());
  const std::size_t m = a.size();
  Rows v;
  if (track) {
    for (std::size_t i = 0; i < d; ++i) v.push_back(IntVector::unit(d, i));
  }
  // Column operation col_j += k col_i; V tracks the inverse as a row operation.
  auto col_add = [&](std::size_t j, std::size_t i, const Integer& k) {
    for (auto& row : a) row[j] += k * row[i];
    if (track) v[i] -= k * v[j];
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    if (track) std::swap(v[i], v[j]);
  };

  std::vector<Integer> divisors;
  std::size_t t = 0;
  while (t < m && t < d) {
    // smallest nonzero entry of the trailing block
    std::size_t pi = m, pj = d;
    for (std::size_t i = t; i < m; ++i) {
      for (std::size_t j = t; j < d; ++j) {
        if (sgn(a[i][j]) != 0 && (pi == m || mpz_cmpabs(a[i][j].get_mpz_t(), a[pi][pj].get_mpz_t()) < 0)) {
          pi = i;
          pj = j;
        }
      }
    }
    if (pi == m) break;
    std::swap(a[t], a[pi]);
    if (pj != t) col_swap(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(a[i][t]) == 0) continue;
        gcd_combine(a[t], a[i], t);
      }
      for (std::size_t j = t + 1; j < d; ++j) {
        if (sgn(a[t][j]) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        col_add(j, t, -q);
        if (sgn(a[t][j]) != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      for (std::size_t i = t + 1; i < m && clean; ++i) {
        if (sgn(a[i][t]) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the trailing block by the pivot
      for (std::size_t i = t + 1; i < m && clean; ++i) {
        for (std::size_t j = t + 1; j < d; ++j) {
          if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
            a[t] += a[i];
            clean = false;
            break;
          }
        }
      }
    }
    divisors.push_back(abs(a[t][t]));
    ++t;
  }
  return {std::move(divisors), std::move(v)};
}

}  // namespace

std::vector<IntVector> hermite_normal_form(std::size_t d, std::span<const IntVector> generators) {
  require_length(generators, d);
  Rows rows;
  for (const auto& g : generators) {
    if (!g.is_zero()) rows.push_back(g);
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < d && r < rows.size(); ++c) {
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (sgn(rows[i][c]) != 0) gcd_combine(rows[r], rows[i], c);
    }
    if (sgn(rows[r][c]) == 0) continue;
    if (sgn(rows[r][c]) < 0) rows[r] = -rows[r];
    for (std::size_t k = 0; k < r; ++k) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[k][c].get_mpz_t(), rows[r][c].get_mpz_t());
      if (sgn(q) != 0) rows[k] -= q * rows[r];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::vector<Integer> elementary_divisors(std::size_t d, std::span<const IntVector> generators) {
  require_length(generators, d);
  return smith(d, generators, false).divisors;
}

Integer determinant(std::span<const IntVector> rows) {
  require_length(rows, rows.size());
  return eliminate(rows, rows.size()).second;
}

std::size_t rank(std::size_t d, std::span<const IntVector> vectors) {
  require_length(vectors, d);
  return eliminate(vectors, d).first;
}

bool linearly_independent(std::size_t d, std::span<const IntVector> vectors) {
  return vectors.size() <= d && rank(d, vectors) == vectors.size();
}

bool is_zbasis(std::size_t d, std::span<const IntVector> vectors) {
  if (vectors.size() != d) {
    throw MalformedInput("a Z-basis test needs exactly " + std::to_string(d) + " vectors, got " +
                         std::to_string(vectors.size()));
  }
  require_length(vectors, d);
  if (d == 0) return true;
  return abs(determinant(vectors)) == 1;
}

Sublattice Sublattice::span(std::size_t d, std::span<const IntVector> generators) {
  Sublattice out(d);
  out.basis_ = hermite_normal_form(d, generators);
  return out;
}

Sublattice Sublattice::full(std::size_t d) {
  Sublattice out(d);
  for (std::size_t i = 0; i < d; ++i) out.basis_.push_back(IntVector::unit(d, i));
  return out;
}

std::optional<std::vector<Integer>> Sublattice::coordinates(const IntVector& v) const {
  if (v.size() != ambient_rank_) return std::nullopt;
  IntVector rest = v;
  std::vector<Integer> coords;
  std::size_t col = 0;
  for (const auto& row : basis_) {
    while (sgn(row[col]) == 0) {
      if (sgn(rest[col]) != 0) return std::nullopt;
      ++col;
    }
    if (!mpz_divisible_p(rest[col].get_mpz_t(), row[col].get_mpz_t())) return std::nullopt;
    Integer c = rest[col] / row[col];
    if (sgn(c) != 0) rest -= c * row;
    coords.push_back(c);
    ++col;
  }
  if (!rest.is_zero()) return std::nullopt;
  return coords;
}

IntVector Sublattice::combine(std::span<const Integer> coords) const {
  IntVector out(ambient_rank_);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (sgn(coords[i]) != 0) out += coords[i] * basis_[i];
  }
  return out;
}

bool Sublattice::contains(const IntVector& v) const { return coordinates(v).has_value(); }

bool Sublattice::contains(const Sublattice& other) const {
  if (other.ambient_rank_ != ambient_rank_) return false;
  return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const IntVector& b) { return contains(b); });
}

std::vector<Integer> Sublattice::elementary_divisors() const { return toruskit::elementary_divisors(ambient_rank_, basis_); }

bool Sublattice::is_saturated() const {
  auto divs = elementary_divisors();
  return std::all_of(divs.begin(), divs.end(), [](const Integer& x) { return x == 1; });
}

Sublattice Sublattice::saturation() const {
  auto result = smith(ambient_rank_, basis_, true);
  Rows gens(result.right.begin(), result.right.begin() + static_cast<long>(result.divisors.size()));
  return span(ambient_rank_, gens);
}

Integer Sublattice::saturation_index() const {
  Integer p = 1;
  for (const auto& x : elementary_divisors()) p *= x;
  return p;
}

Sublattice Sublattice::operator+(const Sublattice& other) const {
  Rows gens = basis_;
  gens.insert(gens.end(), other.basis_.begin(), other.basis_.end());
  return span(ambient_rank_, gens);
}

std::strong_ordering operator<=>(const Sublattice& a, const Sublattice& b) {
  if (auto c = a.ambient_rank_ <=> b.ambient_rank_; c != 0) return c;
  if (auto c = a.basis_.size() <=> b.basis_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.basis_.size(); ++i) {
    if (auto c = a.basis_[i] <=> b.basis_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string Sublattice::to_string() const {
  std::string s = "<";
  for (std::size_t i = 0; i < basis_.size(); ++i) s += (i ? "," : "") + basis_[i].to_string();
  return s + ">";
}

Sublattice canonical_basis(std::size_t d, std::span<const IntVector> generators) {
  return Sublattice::span(d, generators);
}

bool is_saturated(const Sublattice& lattice) { return lattice.is_saturated(); }

IntVector row_times(const IntVector& v, std::span<const IntVector> matrix_rows) {
  std::size_t cols = matrix_rows.empty() ? 0 : matrix_rows[0].size();
  IntVector out(cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (sgn(v[i]) != 0) out += v[i] * matrix_rows[i];
  }
  return out;
}

}  // namespace toruskit
