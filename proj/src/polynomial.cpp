#include "toruskit/polynomial.hpp"

#include <sstream>

#include "toruskit/errors.hpp"

namespace toruskit {

namespace {

Polynomial::Monomial add_monomials(Polynomial::Monomial a, Polynomial::Monomial b, std::size_t vars) {
  Polynomial::Monomial out = 0;
  for (std::size_t i = 0; i < vars; ++i) {
    unsigned e = Polynomial::exponent(a, i) + Polynomial::exponent(b, i);
    if (e > Polynomial::kMaxExponent) throw CapabilityError("polynomial degree exceeds 255 in one variable");
    out |= static_cast<Polynomial::Monomial>(e) << (8 * i);
  }
  return out;
}

}  // namespace

Polynomial::Polynomial(std::size_t variables) : vars_(variables) {
  if (variables > kMaxVariables) throw CapabilityError("at most 8 polynomial variables are supported");
}

Polynomial Polynomial::constant(std::size_t variables, const Integer& c) {
  Polynomial p(variables);
  p.add_term(0, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t variables, std::size_t i) {
  Polynomial p(variables);
  p.add_term(Monomial{1} << (8 * i), 1);
  return p;
}

Polynomial Polynomial::linear(const IntVector& coeffs) {
  Polynomial p(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) p.add_term(Monomial{1} << (8 * i), coeffs[i]);
  return p;
}

Polynomial::Monomial Polynomial::monomial(const std::vector<unsigned>& exponents) {
  Monomial m = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > kMaxExponent) throw CapabilityError("polynomial degree exceeds 255 in one variable");
    m |= static_cast<Monomial>(exponents[i]) << (8 * i);
  }
  return m;
}

unsigned Polynomial::total_degree() const {
  unsigned best = 0;
  for (const auto& [m, c] : terms_) {
    unsigned deg = 0;
    for (std::size_t i = 0; i < vars_; ++i) deg += exponent(m, i);
    best = std::max(best, deg);
  }
  return best;
}

void Polynomial::add_term(Monomial m, const Integer& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Integer& k) {
  if (sgn(k) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= k;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out(std::max(a.vars_, b.vars_));
  Integer prod;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      prod = ca * cb;
      out.add_term(add_monomials(ma, mb, out.vars_), prod);
    }
  }
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(vars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Integer Polynomial::evaluate(const std::vector<Integer>& point) const {
  if (point.size() != vars_) throw MalformedInput("evaluation point has the wrong number of coordinates");
  Integer total = 0, term, p;
  for (const auto& [m, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < vars_; ++i) {
      unsigned e = exponent(m, i);
      if (e == 0) continue;
      mpz_pow_ui(p.get_mpz_t(), point[i].get_mpz_t(), e);
      term *= p;
    }
    total += term;
  }
  return total;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& values) const {
  if (values.size() != vars_) throw MalformedInput("composition needs one polynomial per variable");
  const std::size_t target = values.empty() ? 0 : values[0].variables();
  std::vector<std::vector<Polynomial>> powers(vars_);
  Polynomial out(target);
  for (const auto& [m, c] : terms_) {
    Polynomial term = constant(target, c);
    for (std::size_t i = 0; i < vars_; ++i) {
      unsigned e = exponent(m, i);
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(target, 1));
      while (cache.size() <= e) cache.push_back(cache.back() * values[i]);
      if (e > 0) term = term * cache[e];
    }
    out += term;
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    Integer a = abs(c);
    bool unit = true;
    for (std::size_t i = 0; i < vars_; ++i) unit = unit && exponent(m, i) == 0;
    if (a != 1 || unit) os << a.get_str();
    bool star = a != 1;
    for (std::size_t i = 0; i < vars_; ++i) {
      unsigned e = exponent(m, i);
      if (e == 0) continue;
      if (star) os << "*";
      os << "x" << i;
      if (e > 1) os << "^" << e;
      star = true;
    }
  }
  return os.str();
}

}  // namespace toruskit
