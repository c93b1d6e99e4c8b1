#include "toruskit/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "toruskit/rational.hpp"

namespace toruskit {

namespace {

// Visits k-subsets of {0..n-1} in lexicographic order until visit returns false.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!visit(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<IntVector> pick(const std::vector<IntVector>& all, const std::vector<std::size_t>& idx) {
  std::vector<IntVector> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

// Weights as machine integers when every d x d minor is far below 2^63.
struct SmallWeights {
  std::size_t d = 0;
  std::vector<std::vector<long>> rows;
  bool usable = false;

  explicit SmallWeights(const WeightSystem& w) : d(w.rank()) {
    double max_norm = 1;
    for (const auto& v : w.weights()) {
      std::vector<long> r;
      double sq = 0;
      for (const auto& x : v) {
        if (!x.fits_slong_p()) return;
        r.push_back(x.get_si());
        sq += x.get_d() * x.get_d();
      }
      max_norm = std::max(max_norm, std::sqrt(sq));
      rows.push_back(std::move(r));
    }
    usable = d <= 12 && static_cast<double>(d) * std::log2(max_norm) < 58;
  }

  __int128 det(const std::vector<std::size_t>& idx) const {
    __int128 a[12][12];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) a[i][j] = rows[idx[i]][j];
    }
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < d; ++k) {
      std::size_t p = k;
      while (p < d && a[p][k] == 0) ++p;
      if (p == d) return 0;
      if (p != k) {
        for (std::size_t j = 0; j < d; ++j) std::swap(a[p][j], a[k][j]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < d; ++i) {
        for (std::size_t j = k + 1; j < d; ++j) a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
      }
      prev = a[k][k];
    }
    return sign * prev;
  }
};

WeightSystem express_in(const WeightSystem& w, const Sublattice& lattice, std::vector<std::size_t>* kept) {
  std::vector<IntVector> coords;
  std::vector<std::uint64_t> mults;
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto c = lattice.coordinates(w.weights()[i]);
    if (!c) continue;
    coords.push_back(IntVector(std::move(*c)).canonical_sign());
    mults.push_back(w.multiplicities()[i]);
    if (kept) kept->push_back(i);
  }
  return WeightSystem(lattice.rank(), std::move(coords), std::move(mults));
}

Sublattice map_out(const Sublattice& inner, const Sublattice& outer) {
  std::vector<IntVector> gens;
  for (const auto& b : inner.basis()) gens.push_back(outer.combine(b.entries()));
  return Sublattice::span(outer.ambient_rank(), gens);
}

void require_faithful(const WeightSystem& w) {
  if (!is_faithful(w)) {
    auto divs = elementary_divisors(w.rank(), w.weights());
    std::string s;
    for (const auto& x : divs) s += (s.empty() ? "" : ",") + x.get_str();
    throw PreconditionError("weights do not generate the character lattice (elementary divisors [" + s + "], rank " +
                            std::to_string(divs.size()) + " of " + std::to_string(w.rank()) + ")");
  }
}

SplitResult assemble(const WeightSystem& w, Sublattice l1, Sublattice l2, const IntVector& h, const Z2Split& split) {
  SplitResult out;
  out.h = SubgroupSpec{l1};
  out.rho1_weight = h;
  out.rho1_multiplicity = w.multiplicities()[*w.index_of(h)];
  out.fixed_weights = express_in(w, l1, nullptr);
  out.rho2 = express_in(w, l2, nullptr);
  out.l1 = std::move(l1);
  out.l2 = std::move(l2);
  out.z2_split = split;
  return out;
}

std::vector<SplitResult> connected_splits(const WeightSystem& w) {
  const std::size_t d = w.rank();
  Z2Set s = mod2_weights(w);
  std::map<std::uint64_t, std::size_t> preimage;
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (mpz_odd_p(w.weights()[i][j].get_mpz_t())) bits |= std::uint64_t{1} << j;
    }
    preimage[bits] = i;
  }
  std::vector<SplitResult> out;
  for (const auto& split : all_splits(s)) {
    std::vector<IntVector> inside;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto& e = w.weights()[i];
      std::uint64_t bits = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (mpz_odd_p(e[j].get_mpz_t())) bits |= std::uint64_t{1} << j;
      }
      if (split.w.contains({bits})) inside.push_back(e);
    }
    const IntVector& h = w.weights()[preimage.at(split.s.bits)];
    Sublattice l2 = Sublattice::span(d, inside);
    inside.push_back(h);
    Sublattice l1 = Sublattice::span(d, inside);
    if (l2.corank() != 2 || l1.corank() != 1) {
      throw std::logic_error("mod-2 split lifted to lattices of the wrong corank");
    }
    out.push_back(assemble(w, std::move(l1), std::move(l2), h, split));
  }
  return out;
}

}  // namespace

WeightSystem::WeightSystem(std::size_t d, std::vector<IntVector> weights, std::vector<std::uint64_t> multiplicities,
                           std::uint64_t trivial)
    : rank_(d), weights_(std::move(weights)), multiplicities_(std::move(multiplicities)), trivial_(trivial) {
  require_length(weights_, d);
  if (multiplicities_.empty()) multiplicities_.assign(weights_.size(), 1);
  if (multiplicities_.size() != weights_.size()) throw MalformedInput("multiplicities and weights differ in length");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i].is_zero()) throw MalformedInput("zero weight at position " + std::to_string(i));
    if (multiplicities_[i] == 0) throw MalformedInput("zero multiplicity at position " + std::to_string(i));
    weights_[i] = weights_[i].canonical_sign();
  }
  auto sorted = weights_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw MalformedInput("weights repeat up to sign");
  }
}

WeightSystem WeightSystem::merged(std::size_t d, const std::vector<IntVector>& weights,
                                  const std::vector<std::uint64_t>& multiplicities, std::uint64_t trivial,
                                  std::vector<std::string>* warnings) {
  require_length(weights, d);
  if (!multiplicities.empty() && multiplicities.size() != weights.size()) {
    throw MalformedInput("multiplicities and weights differ in length");
  }
  std::vector<IntVector> out;
  std::vector<std::uint64_t> mults;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].is_zero()) throw MalformedInput("zero weight at position " + std::to_string(i));
    IntVector c = weights[i].canonical_sign();
    std::uint64_t m = multiplicities.empty() ? 1 : multiplicities[i];
    auto it = std::find(out.begin(), out.end(), c);
    if (it == out.end()) {
      out.push_back(c);
      mults.push_back(m);
    } else {
      mults[static_cast<std::size_t>(it - out.begin())] += m;
      if (warnings) warnings->push_back("weight " + weights[i].to_string() + " merged into " + c.to_string());
    }
  }
  return WeightSystem(d, std::move(out), std::move(mults), trivial);
}

std::optional<std::size_t> WeightSystem::index_of(const IntVector& w) const {
  IntVector c = w.canonical_sign();
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == c) return i;
  }
  return std::nullopt;
}

WeightSystem WeightSystem::transformed(const std::vector<IntVector>& matrix_rows) const {
  std::vector<IntVector> out;
  for (const auto& w : weights_) out.push_back(row_times(w, matrix_rows));
  std::size_t cols = matrix_rows.empty() ? 0 : matrix_rows[0].size();
  return WeightSystem(cols, std::move(out), multiplicities_, trivial_);
}

std::string WeightSystem::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    s += (i ? ", " : "") + weights_[i].to_string();
    if (multiplicities_[i] != 1) s += "^" + std::to_string(multiplicities_[i]);
  }
  return s + "}";
}

bool is_faithful(const WeightSystem& w) {
  return Sublattice::span(w.rank(), w.weights()) == Sublattice::full(w.rank());
}

bool has_connected_isotropy(const WeightSystem& w) {
  if (!is_faithful(w)) return !finite_isotropy_witness(w).has_value();
  SmallWeights small(w);
  bool ok = true;
  for_each_subset(w.size(), w.rank(), [&](const std::vector<std::size_t>& idx) {
    if (small.usable) {
      __int128 det = small.det(idx);
      ok = det == 0 || det == 1 || det == -1;
    } else {
      Integer det = determinant(pick(w.weights(), idx));
      ok = abs(det) <= 1;
    }
    return ok;
  });
  return ok;
}

std::optional<IsotropyWitness> finite_isotropy_witness(const WeightSystem& w) {
  if (is_faithful(w) && has_connected_isotropy(w)) return std::nullopt;
  const std::size_t d = w.rank();
  std::optional<IsotropyWitness> found;
  for (std::size_t k = 1; k <= std::min(d, w.size()) && !found; ++k) {
    for_each_subset(w.size(), k, [&](const std::vector<std::size_t>& idx) {
      auto vecs = pick(w.weights(), idx);
      auto divs = elementary_divisors(d, vecs);
      if (divs.size() == k && divs.back() != 1) {
        found = IsotropyWitness{idx, divs};
        return false;
      }
      return true;
    });
  }
  return found;
}

Reduction reduce_to_connected_isotropy(const WeightSystem& w) {
  const std::size_t d = w.rank();
  // A kernel is allowed here; it lies in every isotropy group and is divided out with them.
  if (rank(d, w.weights()) != d) throw PreconditionError("weights do not span the character lattice rationally");
  Reduction out;
  if (has_connected_isotropy(w)) {
    out.reduced = w;
    out.lattice = Sublattice::full(d);
    for (std::size_t i = 0; i < w.size(); ++i) out.kept.push_back(i);
    return out;
  }
  // Finite isotropy groups are kernels of full-rank spans; maximal groups are minimal spans.
  std::vector<Sublattice> spans;
  for_each_subset(w.size(), d, [&](const std::vector<std::size_t>& idx) {
    auto vecs = pick(w.weights(), idx);
    if (rank(d, vecs) == d) {
      auto l = Sublattice::span(d, vecs);
      if (std::find(spans.begin(), spans.end(), l) == spans.end()) spans.push_back(std::move(l));
    }
    return true;
  });
  std::optional<Sublattice> best;
  Integer best_index = 0;
  for (const auto& l : spans) {
    bool minimal = std::none_of(spans.begin(), spans.end(), [&](const Sublattice& o) { return o != l && l.contains(o); });
    if (!minimal) continue;
    Integer index = l.saturation_index();
    if (!best || index > best_index || (index == best_index && l < *best)) {
      best = l;
      best_index = index;
    }
  }
  out.lattice = *best;
  out.finite_order = best_index;
  out.reduced = express_in(w, out.lattice, &out.kept);
  return out;
}

Z2Set mod2_weights(const WeightSystem& w) {
  require_faithful(w);
  const std::size_t d = w.rank();
  if (d > kMaxZ2Dim) throw CapabilityError("mod-2 reduction supports d <= 64");
  std::map<std::uint64_t, std::size_t> seen;
  std::vector<Z2Vector> image;
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (mpz_odd_p(w.weights()[i][j].get_mpz_t())) bits |= std::uint64_t{1} << j;
    }
    std::optional<IsotropyWitness> witness;
    std::string clause;
    if (bits == 0) {
      clause = "weight " + w.weights()[i].to_string() + " vanishes mod 2";
      witness = IsotropyWitness{{i}, elementary_divisors(d, std::vector<IntVector>{w.weights()[i]})};
    } else if (auto it = seen.find(bits); it != seen.end()) {
      clause = "weights " + w.weights()[it->second].to_string() + " and " + w.weights()[i].to_string() +
               " agree mod 2";
      std::vector<IntVector> pair{w.weights()[it->second], w.weights()[i]};
      auto divs = elementary_divisors(d, pair);
      if (divs.size() == 2 && divs.back() != 1) witness = IsotropyWitness{{it->second, i}, divs};
    }
    if (!clause.empty()) {
      if (!witness) witness = finite_isotropy_witness(w);
      throw IsotropyError(clause, witness.value_or(IsotropyWitness{}));
    }
    seen[bits] = i;
    image.push_back({bits});
  }
  return Z2Set(d, std::move(image));
}

std::vector<SplitResult> all_s1_splits(const WeightSystem& w) {
  if (w.rank() < 3) throw CapabilityError("S1-splitting needs d >= 3, got d = " + std::to_string(w.rank()));
  require_faithful(w);
  std::vector<SplitResult> out;
  if (has_connected_isotropy(w)) {
    out = connected_splits(w);
  } else {
    Reduction red = reduce_to_connected_isotropy(w);
    for (const auto& inner : connected_splits(red.reduced)) {
      Sublattice l1 = map_out(inner.l1, red.lattice);
      Sublattice l2 = map_out(inner.l2, red.lattice);
      IntVector h = red.lattice.combine(inner.rho1_weight.entries()).canonical_sign();
      out.push_back(assemble(w, std::move(l1), std::move(l2), h, inner.z2_split));
      out.back().reduced = true;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SplitResult& a, const SplitResult& b) {
    if (a.l1 != b.l1) return a.l1 < b.l1;
    if (a.l2 != b.l2) return a.l2 < b.l2;
    return a.rho1_weight < b.rho1_weight;
  });
  return out;
}

SplitResult s1_split(const WeightSystem& w) {
  auto all = all_s1_splits(w);
  if (all.empty()) throw std::logic_error("no S1-splitting found for a faithful system");
  return all.front();
}

IteratedSplit iterated_split(const WeightSystem& w, std::size_t steps) {
  if (w.rank() != 2 * steps + 1) {
    throw PreconditionError("iterated splitting with " + std::to_string(steps) + " steps needs rank " +
                            std::to_string(2 * steps + 1) + ", got " + std::to_string(w.rank()));
  }
  if (steps > 0) require_faithful(w);
  IteratedSplit out;
  if (steps == 0) {
    Reduction red = reduce_to_connected_isotropy(w);
    out.h = SubgroupSpec{red.lattice};
    out.induced = red.reduced;
  } else {
    SplitResult split = s1_split(w);
    IteratedSplit inner = iterated_split(split.rho2, steps - 1);
    std::vector<IntVector> gens;
    for (const auto& b : inner.h.annihilator.basis()) gens.push_back(split.l2.combine(b.entries()));
    gens.push_back(split.rho1_weight);
    Sublattice annihilator = Sublattice::span(w.rank(), gens);
    out.h = SubgroupSpec{annihilator};
    out.induced = express_in(w, annihilator, nullptr);
  }
  if (out.induced.size() != steps + 1 || out.h.dim() != steps) {
    throw std::logic_error("iterated splitting produced " + std::to_string(out.induced.size()) + " weights");
  }
  return out;
}

TheoremEResult verify_theorem_e(const WeightSystem& w) {
  require_faithful(w);
  if (auto witness = finite_isotropy_witness(w)) {
    throw IsotropyError("weight system has a finite isotropy group", *witness);
  }
  const std::size_t d = w.rank();
  TheoremEResult out;
  out.count = w.size();
  out.bound = d * (d + 1) / 2;
  out.bound_holds = out.count <= out.bound;
  if (out.count != out.bound) return out;

  Z2Set image = mod2_weights(w);
  auto basis2 = canonicalize_hamming2(image);
  if (!basis2) {
    out.classification_holds = false;
    return out;
  }
  auto lift = [&](Z2Vector v) -> IntVector {
    for (const auto& e : w.weights()) {
      std::uint64_t bits = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (mpz_odd_p(e[j].get_mpz_t())) bits |= std::uint64_t{1} << j;
      }
      if (bits == v.bits) return e;
    }
    throw std::logic_error("mod-2 image without preimage");
  };
  std::vector<IntVector> basis;
  for (auto b : *basis2) basis.push_back(lift(b));
  // Sign-normalize so that the lift of b1 + bj is e1 - ej.
  for (std::size_t j = 1; j < d; ++j) {
    IntVector g = lift((*basis2)[0] + (*basis2)[j]);
    auto c = solve_in_span(basis, g);
    if (!c) {
      out.classification_holds = false;
      return out;
    }
    Rational c0 = (*c)[0], cj = (*c)[j];
    if (sgn(c0) < 0) {
      c0 = -c0;
      cj = -cj;
    }
    if (sgn(cj) > 0) basis[j] = -basis[j];
  }
  for (const auto& e : w.weights()) {
    auto c = solve_in_span(basis, e);
    bool ok = false;
    if (c) {
      std::vector<std::size_t> support;
      for (std::size_t i = 0; i < d; ++i) {
        if (sgn((*c)[i]) != 0) support.push_back(i);
      }
      if (support.size() == 1) {
        ok = abs((*c)[support[0]]) == 1;
      } else if (support.size() == 2) {
        Rational a = (*c)[support[0]], b = (*c)[support[1]];
        ok = abs(a) == 1 && a == -b;
      }
    }
    if (!ok) {
      out.classification_holds = false;
      return out;
    }
  }
  out.basis = std::move(basis);
  return out;
}

}  // namespace toruskit
