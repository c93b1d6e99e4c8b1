#include "toruskit/z2.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "toruskit/errors.hpp"

namespace toruskit {

namespace {

int pivot_of(Z2Vector v) { return 63 - std::countl_zero(v.bits); }

void require_generating(const Z2Set& s) {
  if (!s.is_generating()) throw PreconditionError("set does not generate GF(2)^" + std::to_string(s.dim()));
}

// Calls visit(U) once for every subspace of dimension k spanned by members of S.
void for_each_spanned_subspace(const Z2Set& s, std::size_t k, const std::function<void(const Subspace&)>& visit) {
  auto nonzero = s.nonzero();
  std::set<Subspace> seen;
  std::function<void(std::size_t, const Subspace&)> rec = [&](std::size_t start, const Subspace& current) {
    if (current.dim() == k) {
      if (seen.insert(current).second) visit(current);
      return;
    }
    for (std::size_t i = start; i < nonzero.size(); ++i) {
      Subspace next = current;
      if (next.insert(nonzero[i])) rec(i + 1, next);
    }
  };
  rec(0, Subspace(s.dim()));
}

void require_split_domain(const Z2Set& s) {
  if (s.dim() < 3) throw PreconditionError("d >= 3 required, got d = " + std::to_string(s.dim()));
  if (auto u = codim3_violation(s)) {
    throw PreconditionError("codimension-three property fails: S maps onto V/U for U = " + u->to_string());
  }
}

}  // namespace

std::string Z2Vector::to_string(std::size_t d) const {
  std::string out(d, '0');
  for (std::size_t i = 0; i < d; ++i) {
    if (bit(i)) out[i] = '1';
  }
  return out;
}

Z2Vector Z2Vector::parse(const std::string& text) {
  if (text.size() > kMaxZ2Dim) throw MalformedInput("bitstring longer than 64: " + text);
  Z2Vector v;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      v.bits |= std::uint64_t{1} << i;
    } else if (text[i] != '0') {
      throw MalformedInput("bitstring may contain only 0 and 1: " + text);
    }
  }
  return v;
}

Subspace Subspace::span(std::size_t d, std::span<const Z2Vector> vectors) {
  Subspace out(d);
  for (auto v : vectors) out.insert(v);
  return out;
}

Z2Vector Subspace::reduce(Z2Vector v) const {
  for (auto b : basis_) {
    if (v.bit(static_cast<std::size_t>(pivot_of(b)))) v += b;
  }
  return v;
}

bool Subspace::insert(Z2Vector v) {
  v = reduce(v);
  if (v.is_zero()) return false;
  std::size_t p = static_cast<std::size_t>(pivot_of(v));
  for (auto& b : basis_) {
    if (b.bit(p)) b += v;
  }
  auto pos = std::find_if(basis_.begin(), basis_.end(), [&](Z2Vector b) { return pivot_of(b) < pivot_of(v); });
  basis_.insert(pos, v);
  return true;
}

std::vector<Z2Vector> Subspace::elements() const {
  std::vector<Z2Vector> out;
  out.reserve(std::size_t{1} << dim());
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << dim()); ++c) {
    Z2Vector v;
    for (std::size_t i = 0; i < dim(); ++i) {
      if ((c >> i) & 1U) v += basis_[i];
    }
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Subspace::coordinates(Z2Vector v) const {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (v.bit(static_cast<std::size_t>(pivot_of(basis_[i])))) c |= std::uint64_t{1} << i;
  }
  return c;
}

std::string Subspace::to_string() const {
  std::string s = "<";
  for (std::size_t i = 0; i < basis_.size(); ++i) s += (i ? "," : "") + basis_[i].to_string(ambient_dim_);
  return s + ">";
}

std::size_t z2_rank(std::span<const Z2Vector> vectors) {
  Subspace s(kMaxZ2Dim);
  for (auto v : vectors) s.insert(v);
  return s.dim();
}

bool z2_independent(std::span<const Z2Vector> vectors) { return z2_rank(vectors) == vectors.size(); }

Z2Set::Z2Set(std::size_t d, std::vector<Z2Vector> members) : dim_(d), members_(std::move(members)) {
  if (d > kMaxZ2Dim) throw MalformedInput("GF(2) dimension above 64");
  for (auto v : members_) {
    if (d < 64 && (v.bits >> d) != 0) throw MalformedInput("vector " + v.to_string(64) + " outside GF(2)^" + std::to_string(d));
  }
  members_.push_back(Z2Vector{});
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

std::vector<Z2Vector> Z2Set::nonzero() const { return {members_.begin() + 1, members_.end()}; }

bool Z2Set::contains(Z2Vector v) const { return std::binary_search(members_.begin(), members_.end(), v); }

bool Z2Set::is_generating() const { return z2_rank(members_) == dim_; }

std::string Z2Set::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) s += (i ? "," : "") + members_[i].to_string(dim_);
  return s + "}";
}

Z2Set hamming2_set(std::size_t d, std::span<const Z2Vector> basis) {
  std::vector<Z2Vector> members(basis.begin(), basis.end());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) members.push_back(basis[i] + basis[j]);
  }
  return Z2Set(d, std::move(members));
}

Z2Set hamming2_set(std::size_t d) {
  std::vector<Z2Vector> basis;
  for (std::size_t i = 0; i < d; ++i) basis.push_back(Z2Vector::unit(i));
  return hamming2_set(d, basis);
}

std::optional<Subspace> codim3_violation(const Z2Set& s) {
  require_generating(s);
  if (s.dim() < 3) return std::nullopt;
  std::optional<Subspace> found;
  for_each_spanned_subspace(s, s.dim() - 3, [&](const Subspace& u) {
    if (found) return;
    std::vector<Z2Vector> reps;
    for (auto m : s.members()) reps.push_back(u.reduce(m));
    std::sort(reps.begin(), reps.end());
    if (std::unique(reps.begin(), reps.end()) - reps.begin() == 8) found = u;
  });
  return found;
}

bool has_codim3_property(const Z2Set& s) { return !codim3_violation(s).has_value(); }

std::vector<Z2Split> all_splits(const Z2Set& s) {
  require_split_domain(s);
  std::vector<Z2Split> out;
  for_each_spanned_subspace(s, s.dim() - 2, [&](const Subspace& w) {
    std::vector<Z2Vector> reps;
    for (auto m : s.members()) reps.push_back(w.reduce(m));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (reps[i].is_zero()) continue;
      if (std::count(reps.begin(), reps.end(), reps[i]) == 1) out.push_back({w, s.members()[i]});
    }
  });
  std::sort(out.begin(), out.end(), [](const Z2Split& a, const Z2Split& b) {
    if (a.s != b.s) return a.s < b.s;
    return a.w < b.w;
  });
  return out;
}

Z2Split find_split(const Z2Set& s) {
  auto splits = all_splits(s);
  if (splits.empty()) throw PreconditionError("no codimension-two split exists");
  return splits.front();
}

std::vector<Subspace> all_codim1_independent(const Z2Set& s) {
  require_split_domain(s);
  if (s.dim() > 24) throw CapabilityError("hyperplane enumeration supports d <= 24");
  std::vector<Subspace> out;
  for (std::uint64_t f = 1; f < (std::uint64_t{1} << s.dim()); ++f) {
    Z2Vector functional{f};
    std::vector<Z2Vector> inside, outside;
    for (auto m : s.members()) (m.pair(functional) ? outside : inside).push_back(m);
    if (z2_rank(inside) != s.dim() - 1) continue;
    if (!z2_independent(outside)) continue;
    out.push_back(Subspace::span(s.dim(), inside));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Subspace find_codim1_independent(const Z2Set& s) {
  auto all = all_codim1_independent(s);
  if (all.empty()) throw PreconditionError("no hyperplane with independent complement exists");
  return all.front();
}

std::optional<std::vector<Z2Vector>> canonicalize_hamming2(const Z2Set& s) {
  require_generating(s);
  const std::size_t d = s.dim();
  if (s.nonzero_count() != d * (d + 1) / 2) return std::nullopt;
  if (d <= 2) {
    // S = V here; the two smallest nonzero members form a basis
    auto nz = s.nonzero();
    nz.resize(d);
    return nz;
  }
  if (!has_codim3_property(s)) return std::nullopt;
  std::optional<std::vector<Z2Vector>> best;
  for (const auto& u : all_codim1_independent(s)) {
    std::vector<Z2Vector> basis;
    for (auto m : s.members()) {
      if (!u.contains(m)) basis.push_back(m);
    }
    if (basis.size() != d || hamming2_set(d, basis) != s) continue;
    if (!best || basis < *best) best = basis;
  }
  return best;
}

Z2Set quotient_by(const Z2Set& s, Z2Vector v) {
  if (v.is_zero()) throw PreconditionError("quotient by the zero vector");
  std::size_t p = static_cast<std::size_t>(pivot_of(v));
  std::uint64_t low_mask = (std::uint64_t{1} << p) - 1;
  std::vector<Z2Vector> image;
  for (auto m : s.members()) {
    if (m.bit(p)) m += v;
    image.push_back({(m.bits & low_mask) | ((m.bits >> (p + 1)) << p)});
  }
  return Z2Set(s.dim() - 1, std::move(image));
}

Z2Set restrict_to(const Z2Set& s, const Subspace& sub) {
  std::vector<Z2Vector> image;
  for (auto m : s.members()) {
    if (sub.contains(m)) image.push_back({sub.coordinates(m)});
  }
  return Z2Set(sub.dim(), std::move(image));
}

Z2Set map_linear(const Z2Set& s, std::size_t target_dim, std::span<const Z2Vector> columns) {
  std::vector<Z2Vector> image;
  for (auto m : s.members()) {
    Z2Vector out;
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (m.bit(i)) out += columns[i];
    }
    image.push_back(out);
  }
  return Z2Set(target_dim, std::move(image));
}

}  // namespace toruskit
