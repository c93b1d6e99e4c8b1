#include "toruskit/vandermonde.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "toruskit/errors.hpp"
#include "toruskit/lattice.hpp"

namespace toruskit {

namespace {

using Monomial = Polynomial::Monomial;

std::size_t total_size(const std::vector<std::size_t>& betti) {
  std::size_t n = 0;
  for (auto b : betti) {
    if (b == 0) throw MalformedInput("block sizes must be positive");
    n += b;
  }
  return n;
}

Integer falling_factorial(std::size_t p, std::size_t k) {
  Integer out = 1;
  for (std::size_t q = 0; q < k; ++q) out *= static_cast<long>(p) - static_cast<long>(q);
  return out;
}

struct Overflow {};

constexpr std::size_t kMaxSymbolicRows = 20;

template <class C>
struct Checked;

template <>
struct Checked<__int128> {
  static void add(__int128& a, __int128 b) {
    if (__builtin_add_overflow(a, b, &a)) throw Overflow{};
  }
  static __int128 mul(__int128 a, __int128 b) {
    __int128 out;
    if (__builtin_mul_overflow(a, b, &out)) throw Overflow{};
    return out;
  }
  static __int128 from(long v) { return v; }
  static Integer to_integer(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Integer hi = static_cast<unsigned long>(m >> 64);
    Integer lo = static_cast<unsigned long>(m & ~std::uint64_t{0});
    Integer out = (hi << 64) + lo;
    return neg ? Integer(-out) : out;
  }
};

template <>
struct Checked<Integer> {
  static void add(Integer& a, const Integer& b) { a += b; }
  static Integer mul(const Integer& a, const Integer& b) { return a * b; }
  static Integer from(long v) { return v; }
  static Integer to_integer(const Integer& v) { return v; }
};

template <class C>
using SmallPoly = std::vector<std::pair<Monomial, C>>;

template <class C>
void accumulate(SmallPoly<C>& p, Monomial m, const C& c) {
  for (auto& [pm, pc] : p) {
    if (pm == m) {
      Checked<C>::add(pc, c);
      return;
    }
  }
  p.emplace_back(m, c);
}

// Coefficients of a homogeneous polynomial of known degree in b_0..b_{k-1}. The
// last exponent is implied by the others, so a dense box over the remaining
// exponents is used whenever it is small enough.
template <class C>
class HomogeneousTerms {
 public:
  explicit HomogeneousTerms(const std::vector<std::size_t>& betti) : k_(betti.size()) {
    const std::size_t n = total_size(betti);
    if (k_ > Polynomial::kMaxVariables) throw CapabilityError("at most 8 blocks in symbolic expansion");
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = i + 1; j < k_; ++j) degree_ += betti[i] * betti[j];
      const std::size_t bound = betti[i] * (n - betti[i]);
      if (bound > Polynomial::kMaxExponent) throw CapabilityError("polynomial degree exceeds 255 in one variable");
      bounds_.push_back(bound);
    }
    std::size_t size = 1;
    for (std::size_t i = 0; i + 1 < k_; ++i) {
      strides_.push_back(size);
      size *= bounds_[i] + 1;
      if (size > kDenseLimit) break;
    }
    dense_mode_ = size <= kDenseLimit;
    if (dense_mode_) dense_.assign(size, Checked<C>::from(0));
    reached_.assign(k_ == 0 ? 0 : k_ - 1, 0);
  }

  void add(Monomial m, const C& c) {
    if (dense_mode_) {
      for (std::size_t q = 0; q < reached_.size(); ++q)
        reached_[q] = std::max<std::size_t>(reached_[q], Polynomial::exponent(m, q));
      Checked<C>::add(dense_[index(m)], c);
    } else {
      Checked<C>::add(sparse_[drop_last(m)], c);
    }
  }

  // Multiply in place by (b_i - b_j).
  void multiply_difference(std::size_t i, std::size_t j) {
    const C minus_one = Checked<C>::from(-1);
    if (!dense_mode_) {
      std::unordered_map<Monomial, C> next;
      next.reserve(sparse_.size() * 2);
      for (const auto& [m, c] : sparse_) {
        if (c == 0) continue;
        Checked<C>::add(next[drop_last(m + unit(i))], c);
        Checked<C>::add(next[drop_last(m + unit(j))], Checked<C>::mul(c, minus_one));
      }
      sparse_ = std::move(next);
      return;
    }
    // Only the box of exponents reached so far can hold nonzero coefficients.
    std::vector<C> next(dense_.size(), Checked<C>::from(0));
    std::vector<std::size_t> exps(reached_.size(), 0);
    for (bool more = true; more;) {
      std::size_t idx = 0;
      for (std::size_t q = 0; q < exps.size(); ++q) idx += exps[q] * strides_[q];
      if (!(dense_[idx] == 0)) {
        for (std::size_t v : {i, j}) {
          std::size_t target = idx;
          if (v + 1 < k_) {
            if (exps[v] == bounds_[v]) throw std::logic_error("exponent bound exceeded");
            target += strides_[v];
          }
          Checked<C>::add(next[target], v == i ? dense_[idx] : Checked<C>::mul(dense_[idx], minus_one));
        }
      }
      more = false;
      for (std::size_t q = 0; q < exps.size(); ++q) {
        if (++exps[q] <= reached_[q]) {
          more = true;
          break;
        }
        exps[q] = 0;
      }
    }
    for (std::size_t v : {i, j})
      if (v + 1 < k_) ++reached_[v];
    dense_ = std::move(next);
  }

  std::size_t terms() const {
    if (dense_mode_) return static_cast<std::size_t>(std::count_if(dense_.begin(), dense_.end(), [](const C& c) { return !(c == 0); }));
    return static_cast<std::size_t>(std::count_if(sparse_.begin(), sparse_.end(), [](const auto& kv) { return !(kv.second == 0); }));
  }

  bool operator==(const HomogeneousTerms& o) const {
    if (dense_mode_ && o.dense_mode_) return dense_ == o.dense_;
    return to_polynomial() == o.to_polynomial();
  }

  Polynomial to_polynomial() const {
    Polynomial p(k_);
    auto emit = [&](std::vector<unsigned> exps, const C& c) {
      if (c == 0 || k_ == 0) return;
      unsigned used = 0;
      for (auto e : exps) used += e;
      exps.push_back(static_cast<unsigned>(degree_) - used);
      p.add_term(Polynomial::monomial(exps), Checked<C>::to_integer(c));
    };
    if (dense_mode_) {
      std::vector<unsigned> exps(k_ == 0 ? 0 : k_ - 1, 0);
      for (std::size_t idx = 0; idx < dense_.size(); ++idx) {
        emit(exps, dense_[idx]);
        for (std::size_t q = 0; q < exps.size(); ++q) {
          if (++exps[q] <= bounds_[q]) break;
          exps[q] = 0;
        }
      }
    } else {
      for (const auto& [m, c] : sparse_) {
        std::vector<unsigned> exps;
        for (std::size_t q = 0; q + 1 < k_; ++q) exps.push_back(Polynomial::exponent(m, q));
        emit(exps, c);
      }
    }
    return p;
  }

 private:
  static constexpr std::size_t kDenseLimit = std::size_t{1} << 22;

  static Monomial unit(std::size_t i) { return Monomial{1} << (8 * i); }
  Monomial drop_last(Monomial m) const { return k_ == 0 ? 0 : m & ((Monomial{1} << (8 * (k_ - 1))) - 1); }
  std::size_t index(Monomial m) const {
    std::size_t idx = 0;
    for (std::size_t q = 0; q + 1 < k_; ++q) idx += Polynomial::exponent(m, q) * strides_[q];
    return idx;
  }

  std::size_t k_;
  std::size_t degree_ = 0;
  std::vector<std::size_t> bounds_, strides_;
  std::vector<std::size_t> reached_;  // largest exponent per dense variable touched by multiply_difference
  bool dense_mode_ = true;
  std::vector<C> dense_;
  std::unordered_map<Monomial, C> sparse_;
};

// Laplace expansion of the column blocks [first, last) over all row sets of the
// right size. Keys are the rows used; signs count inversions among those rows only.
// States are indexed directly by the row mask.
template <class C>
std::vector<SmallPoly<C>> expand_blocks(const std::vector<std::size_t>& betti, std::size_t first, std::size_t last,
                                        std::size_t n) {
  auto power = [n](std::size_t r) { return static_cast<long>(n - 1 - r); };
  std::vector<SmallPoly<C>> current(std::size_t{1} << n);
  std::vector<std::uint32_t> active{0};
  current[0].emplace_back(0, Checked<C>::from(1));
  for (std::size_t blk = first; blk < last; ++blk) {
    const std::size_t s = betti[blk];
    std::vector<SmallPoly<C>> next(std::size_t{1} << n);
    std::vector<std::uint32_t> reached;
    for (std::uint32_t used : active) {
      const auto& poly = current[used];
      std::vector<std::size_t> free;
      for (std::size_t r = 0; r < n; ++r)
        if (!(used >> r & 1)) free.push_back(r);
      std::vector<std::size_t> pick(s);
      for (std::size_t a = 0; a < s; ++a) pick[a] = a;
      while (true) {
        std::uint32_t rows = 0;
        long exponent = -static_cast<long>(s * (s - 1) / 2);
        std::size_t inversions = 0;
        long minor = 1;
        for (std::size_t a = 0; a < s; ++a) {
          const std::size_t r = free[pick[a]];
          rows |= std::uint32_t{1} << r;
          exponent += power(r);
          inversions += std::popcount(used >> r);
          // det [p^k] over the chosen rows (the falling factorials are a unitriangular change of basis)
          for (std::size_t b = a + 1; b < s; ++b) minor *= power(free[pick[b]]) - power(r);
        }
        if (inversions % 2) minor = -minor;
        const Monomial shift = static_cast<Monomial>(exponent) << (8 * blk);
        const C factor = Checked<C>::from(minor);
        auto& target = next[used | rows];
        if (target.empty()) reached.push_back(used | rows);
        for (const auto& [m, c] : poly) accumulate(target, m + shift, Checked<C>::mul(c, factor));

        std::size_t a = s;
        while (a > 0 && pick[a - 1] == free.size() - s + a - 1) --a;
        if (a == 0) break;
        ++pick[a - 1];
        for (std::size_t b = a; b < s; ++b) pick[b] = pick[b - 1] + 1;
      }
    }
    current = std::move(next);
    active = std::move(reached);
  }
  return current;
}

// Expands the front and back halves of the blocks separately and pairs complementary row sets.
template <class C>
HomogeneousTerms<C> determinant_terms(const std::vector<std::size_t>& betti) {
  const std::size_t n = total_size(betti);
  if (n > kMaxSymbolicRows) throw CapabilityError("symbolic expansion is limited to 20 rows");
  HomogeneousTerms<C> out(betti);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::size_t split = 0, front_rows = 0;
  auto imbalance = [n](std::size_t rows) { return rows * 2 > n ? rows * 2 - n : n - rows * 2; };
  while (split < betti.size() && imbalance(front_rows + betti[split]) < imbalance(front_rows))
    front_rows += betti[split++];
  auto front = expand_blocks<C>(betti, 0, split, n);
  auto back = expand_blocks<C>(betti, split, betti.size(), n);
  for (std::uint32_t rows = 0; rows <= full; ++rows) {
    const auto& fpoly = front[rows];
    const auto& bpoly = back[full & ~rows];
    if (fpoly.empty() || bpoly.empty()) continue;
    std::size_t cross = 0;
    for (std::size_t r = 0; r < n; ++r)
      if (!(rows >> r & 1)) cross += std::popcount(rows >> r);
    for (const auto& [fm, fc] : fpoly) {
      if (fc == 0) continue;
      const C sc = cross % 2 ? Checked<C>::mul(fc, Checked<C>::from(-1)) : fc;
      for (const auto& [bm, bc] : bpoly) out.add(fm + bm, Checked<C>::mul(sc, bc));
    }
  }
  return out;
}

template <class C>
HomogeneousTerms<C> product_terms(const std::vector<std::size_t>& betti) {
  HomogeneousTerms<C> poly(betti);
  const Integer c = vandermonde_constant(betti);
  if constexpr (std::is_same_v<C, Integer>) {
    poly.add(0, c);
  } else {
    if (!c.fits_slong_p()) throw Overflow{};
    poly.add(0, c.get_si());
  }
  for (std::size_t i = 0; i < betti.size(); ++i)
    for (std::size_t j = i + 1; j < betti.size(); ++j)
      for (std::size_t e = 0; e < betti[i] * betti[j]; ++e) poly.multiply_difference(i, j);
  return poly;
}

}  // namespace

std::vector<IntVector> confluent_matrix(const std::vector<Integer>& b, const std::vector<std::size_t>& betti) {
  if (b.size() != betti.size()) throw MalformedInput("one value per block is required");
  const std::size_t n = total_size(betti);
  std::vector<IntVector> rows(n, IntVector(n));
  Integer pw;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t p = n - 1 - r;
    std::size_t col = 0;
    for (std::size_t i = 0; i < betti.size(); ++i) {
      for (std::size_t k = 0; k < betti[i]; ++k, ++col) {
        if (k > p) continue;
        mpz_pow_ui(pw.get_mpz_t(), b[i].get_mpz_t(), p - k);
        rows[r][col] = falling_factorial(p, k) * pw;
      }
    }
  }
  return rows;
}

Integer confluent_determinant(const std::vector<Integer>& b, const std::vector<std::size_t>& betti) {
  return determinant(confluent_matrix(b, betti));
}

Integer vandermonde_constant(const std::vector<std::size_t>& betti) {
  Integer c = 1;
  for (auto s : betti) {
    Integer fact = 1;
    for (std::size_t q = 1; q < s; ++q) {
      fact *= static_cast<long>(q);
      c *= q % 2 ? Integer(-fact) : fact;
    }
  }
  return c;
}

Integer vandermonde_product(const std::vector<Integer>& b, const std::vector<std::size_t>& betti) {
  if (b.size() != betti.size()) throw MalformedInput("one value per block is required");
  Integer out = vandermonde_constant(betti), f;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      Integer diff = b[i] - b[j];
      mpz_pow_ui(f.get_mpz_t(), diff.get_mpz_t(), betti[i] * betti[j]);
      out *= f;
    }
  }
  return out;
}

Polynomial confluent_determinant_polynomial(const std::vector<std::size_t>& betti) {
  try {
    return determinant_terms<__int128>(betti).to_polynomial();
  } catch (const Overflow&) {
    return determinant_terms<Integer>(betti).to_polynomial();
  }
}

Polynomial vandermonde_product_polynomial(const std::vector<std::size_t>& betti) {
  try {
    return product_terms<__int128>(betti).to_polynomial();
  } catch (const Overflow&) {
    return product_terms<Integer>(betti).to_polynomial();
  }
}

SymbolicIdentity verify_vandermonde_identity(const std::vector<std::size_t>& betti) {
  SymbolicIdentity out;
  auto run = [&]<class C>() {
    auto lhs = determinant_terms<C>(betti);
    auto rhs = product_terms<C>(betti);
    out.holds = lhs == rhs;
    out.terms = lhs.terms();
  };
  try {
    run.template operator()<__int128>();
  } catch (const Overflow&) {
    run.template operator()<Integer>();
  }
  return out;
}

VandermondeReport vandermonde_free_check(const std::vector<IntVector>& u, const std::vector<std::size_t>& betti,
                                         const VandermondeOptions& options) {
  if (u.empty()) throw MalformedInput("at least one character is required");
  if (u.size() != betti.size()) throw MalformedInput("one block size per character is required");
  const std::size_t d = u[0].size();
  require_length(u, d);
  const std::size_t n = total_size(betti);

  VandermondeReport rep;
  rep.constant = vandermonde_constant(betti);
  for (std::size_t i = 0; i < betti.size(); ++i)
    for (std::size_t j = i + 1; j < betti.size(); ++j) rep.degree += 2 * betti[i] * betti[j];
  for (std::size_t i = 0; i < u.size() && !rep.collision; ++i)
    for (std::size_t j = i + 1; j < u.size() && !rep.collision; ++j)
      if (u[i] == u[j] || u[i] == -u[j]) rep.collision = std::pair{i, j};

  if (n <= options.symbolic_limit && betti.size() <= Polynomial::kMaxVariables) {
    rep.method = "symbolic";
    auto lhs = confluent_determinant_polynomial(betti);
    rep.identity_holds = lhs == vandermonde_product_polynomial(betti);
    // The b-identity factors det into C and the squared differences; a product of
    // nonzero polynomials is nonzero, so the verdict is exact.
    rep.nonzero = rep.identity_holds ? !rep.collision.has_value() : !lhs.is_zero();
    if (d <= Polynomial::kMaxVariables && rep.degree <= options.expansion_degree) {
      std::vector<Polynomial> squares;
      for (const auto& v : u) {
        auto l = Polynomial::linear(v);
        squares.push_back(l * l);
      }
      auto lhs_t = lhs.compose(squares);
      auto rhs_t = Polynomial::constant(d, rep.constant);
      for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j)
          rhs_t = rhs_t * (squares[i] - squares[j]).pow(static_cast<unsigned>(betti[i] * betti[j]));
      rep.expanded_in_t = true;
      rep.identity_holds = rep.identity_holds && lhs_t == rhs_t;
      rep.nonzero = !lhs_t.is_zero();
    }
    return rep;
  }

  rep.method = "evaluation";
  rep.trials = options.trials;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<long> coord(-options.bound, options.bound);
  rep.identity_holds = true;
  for (unsigned trial = 0; trial < options.trials; ++trial) {
    IntVector t(d);
    for (std::size_t q = 0; q < d; ++q) t[q] = coord(rng);
    std::vector<Integer> b;
    for (const auto& v : u) {
      Integer x = dot(v, t);
      b.push_back(x * x);
    }
    Integer det = confluent_determinant(b, betti);
    if (det != vandermonde_product(b, betti)) rep.identity_holds = false;
    if (sgn(det) != 0) rep.nonzero = true;
  }
  // A nonzero value certifies nonvanishing outright; the bound covers an all-zero verdict
  // and the identity comparison.
  const double per_trial = static_cast<double>(rep.degree) / static_cast<double>(2 * options.bound + 1);
  rep.error_bound = std::pow(std::min(1.0, per_trial), static_cast<double>(options.trials));
  return rep;
}

}  // namespace toruskit
