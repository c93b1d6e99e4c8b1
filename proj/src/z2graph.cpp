#include "toruskit/z2graph.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <numeric>
#include <set>
#include <sstream>

#include "toruskit/errors.hpp"
#include "toruskit/lattice.hpp"
#include "toruskit/rational.hpp"

namespace toruskit {

Z2LabeledGraph::Z2LabeledGraph(SkeletonGraph base, std::vector<std::vector<Z2Vector>> edge_labels,
                               std::vector<std::vector<Z2Vector>> loop_labels)
    : base_(std::move(base)), edge_labels_(std::move(edge_labels)), loop_labels_(std::move(loop_labels)) {
  const std::size_t d = base_.torus_rank();
  if (d > kMaxZ2Dim) throw CapabilityError("GF(2) labels support d <= 64");
  if (edge_labels_.size() != base_.edges().size() || loop_labels_.size() != base_.loops().size())
    throw MalformedInput("one GF(2) label list per edge group and loop group is required");
  auto check = [d](const std::vector<Z2Vector>& labels, std::size_t count, const char* what) {
    if (labels.size() != count)
      throw MalformedInput(std::string("each parallel ") + what + " needs exactly one GF(2) label");
    for (auto x : labels)
      if (d < 64 && (x.bits >> d) != 0) throw MalformedInput("GF(2) label has bits beyond d");
  };
  for (std::size_t g = 0; g < edge_labels_.size(); ++g) check(edge_labels_[g], base_.edges()[g].count, "edge");
  for (std::size_t g = 0; g < loop_labels_.size(); ++g) check(loop_labels_[g], base_.loops()[g].count, "loop");
}

std::vector<Z2Vector> Z2LabeledGraph::labels_between(std::size_t i, std::size_t j) const {
  std::vector<Z2Vector> out;
  if (i == j) {
    for (std::size_t g = 0; g < base_.loops().size(); ++g)
      if (base_.loops()[g].vertex == i) out.insert(out.end(), loop_labels_[g].begin(), loop_labels_[g].end());
    return out;
  }
  if (i > j) std::swap(i, j);
  for (std::size_t g = 0; g < base_.edges().size(); ++g) {
    const auto& e = base_.edges()[g];
    if (e.i == i && e.j == j) out.insert(out.end(), edge_labels_[g].begin(), edge_labels_[g].end());
  }
  return out;
}

namespace {

std::map<Z2Vector, std::size_t> tally(const std::vector<Z2Vector>& labels) {
  std::map<Z2Vector, std::size_t> out;
  for (auto x : labels) ++out[x];
  return out;
}

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

// Whether the labels are exactly the coset `rep + u`, each with multiplicity m2.
bool is_uniform_coset(const std::vector<Z2Vector>& labels, const Subspace& u, Z2Vector rep, std::size_t m2) {
  auto counts = tally(labels);
  auto elems = u.elements();
  if (counts.size() != elems.size()) return false;
  for (auto x : elems) {
    auto it = counts.find(x + rep);
    if (it == counts.end() || it->second != m2) return false;
  }
  return true;
}

}  // namespace

Z2StructureReport validate_z2_structure(const Z2LabeledGraph& g) {
  const auto& base = g.base();
  auto skel = validate_skeleton(base);
  if (!skel.ok) throw PreconditionError("base graph fails validation (" + skel.clause + "): " + skel.detail);
  const std::size_t d = base.torus_rank();
  const std::size_t k = base.vertex_count();
  Z2StructureReport rep;
  rep.structure.m = skel.m;
  auto fail = [&](std::string clause, std::string detail, std::vector<std::size_t> where) {
    rep.ok = false;
    rep.clause = std::move(clause);
    rep.detail = std::move(detail);
    rep.vertices = std::move(where);
    return rep;
  };

  std::vector<Z2Vector> reference = k == 1 ? g.labels_between(0, 0) : g.labels_between(0, 1);
  if (reference.empty()) {  // a lone point
    rep.structure.u = Subspace(d);
    rep.structure.m2 = 1;
    rep.ok = true;
    return rep;
  }
  Subspace u(d);
  for (auto x : reference) u.insert(x + reference.front());
  rep.structure.u = u;
  const std::size_t usize = std::size_t{1} << u.dim();
  if (reference.empty() || reference.size() % usize != 0)
    return fail("multiplicity", "label count is not a multiple of |U|", {0});
  const std::size_t m2 = reference.size() / usize;
  rep.structure.m2 = m2;
  if (!is_power_of_two(m2)) return fail("power-of-two", "multiplicity " + std::to_string(m2) + " is not a power of 2", {0});

  if (k == 1) {
    if (!is_uniform_coset(reference, u, Z2Vector{}, m2))
      return fail("loops", "loop labels at vertex 0 are not the elements of U with uniform multiplicity", {0});
    rep.ok = true;
    return rep;
  }

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      auto labels = g.labels_between(i, j);
      const Z2Vector a = u.reduce(labels.front());
      rep.structure.a[{i, j}] = a;
      for (auto x : labels) {
        if (u.reduce(x) != a) {
          std::ostringstream os;
          os << "labels " << labels.front().to_string(d) << " and " << x.to_string(d) << " between " << i << " and " << j
             << " lie in different cosets of U";
          return fail("coset", os.str(), {i, j});
        }
      }
      if (!is_uniform_coset(labels, u, a, m2)) {
        std::ostringstream os;
        os << "labels between " << i << " and " << j << " are not a+U with each element " << m2 << " times";
        return fail("multiplicity", os.str(), {i, j});
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t l = j + 1; l < k; ++l) {
        const Z2Vector sum = rep.structure.a[{i, j}] + rep.structure.a[{i, l}] + rep.structure.a[{j, l}];
        if (!u.contains(sum)) {
          std::ostringstream os;
          os << "a_" << i << j << " + a_" << i << l << " + a_" << j << l << " = " << sum.to_string(d) << " is not in U";
          return fail("cocycle", os.str(), {i, j, l});
        }
      }
    }
  }
  for (std::size_t v = 0; v < k; ++v) {
    if (base.vertices()[v].dim == 0) continue;
    if (!is_uniform_coset(g.labels_between(v, v), u, Z2Vector{}, m2))
      return fail("loops", "loop labels at vertex " + std::to_string(v) +
                               " are not the elements of U with uniform multiplicity", {v});
  }
  rep.ok = true;
  return rep;
}

InvolutionReport involution_fixed_analysis(const Z2LabeledGraph& g, Z2Vector iota) {
  auto z = validate_z2_structure(g);
  if (!z.ok) throw PreconditionError("GF(2) structure fails validation (" + z.clause + "): " + z.detail);
  const auto& base = g.base();
  const std::size_t k = base.vertex_count();
  auto survives = [iota](Z2Vector label) { return !label.pair(iota); };

  bool acts = false;
  for (const auto& group : g.edge_labels())
    for (auto x : group) acts = acts || !survives(x);
  for (const auto& group : g.loop_labels())
    for (auto x : group) acts = acts || !survives(x);
  if (!acts) throw PreconditionError("iota lies in the kernel of the action");

  auto surviving = [&](std::size_t i, std::size_t j) {
    auto labels = g.labels_between(i, j);
    return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), survives));
  };

  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (surviving(i, j) > 0) parent[find(i)] = find(j);

  InvolutionReport rep;
  rep.w = 2 * z.structure.m;
  rep.unverified_w = rep.w == 8;
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < k; ++v) groups[find(v)].push_back(v);
  for (auto& [root, verts] : groups) {
    FixedComponentSummary c;
    c.vertices = verts;
    std::size_t chi = 0;
    for (auto v : verts) chi += base.vertices()[v].euler_characteristic();
    if (verts.size() == 1) {
      const auto v = verts[0];
      c.surviving_per_pair = surviving(v, v);
      c.dim = base.vertices()[v].dim == 0 ? 0 : 2 * c.surviving_per_pair * (chi - 1);
    } else {
      c.surviving_per_pair = surviving(verts[0], verts[1]);
      for (std::size_t a = 0; a < verts.size(); ++a) {
        for (std::size_t b = a + 1; b < verts.size(); ++b) {
          if (surviving(verts[a], verts[b]) != c.surviving_per_pair) {
            rep.clause = "dimension-bookkeeping";
            rep.detail = "surviving edge counts differ inside the component of vertex " + std::to_string(verts[0]);
            rep.components.push_back(c);
            return rep;
          }
        }
        if (base.vertices()[verts[a]].dim > 0 && surviving(verts[a], verts[a]) != c.surviving_per_pair) {
          rep.clause = "dimension-bookkeeping";
          rep.detail = "surviving loops at vertex " + std::to_string(verts[a]) + " do not match the edge count";
          rep.components.push_back(c);
          return rep;
        }
      }
      c.dim = 2 * c.surviving_per_pair * (chi - 1);
    }
    rep.components.push_back(std::move(c));
  }
  std::sort(rep.components.begin(), rep.components.end(),
            [](const auto& x, const auto& y) { return x.vertices < y.vertices; });

  const std::size_t n = base.dim();
  if (rep.components.size() > 2) {
    rep.clause = "at-most-two-components";
    rep.detail = std::to_string(rep.components.size()) + " fixed components";
    return rep;
  }
  if (rep.components.size() == 1) {
    if (2 * rep.components[0].dim != n) {
      rep.clause = "half-dimension";
      rep.detail = "a single fixed component has dimension " + std::to_string(rep.components[0].dim) + ", not n/2";
      return rep;
    }
  } else if (!rep.unverified_w && rep.components[0].dim + rep.components[1].dim + rep.w != n) {
    rep.clause = "dimension-sum";
    rep.detail = "component dimensions sum to " + std::to_string(rep.components[0].dim + rep.components[1].dim) +
                 ", expected n - w = " + std::to_string(n - std::min(n, rep.w));
    return rep;
  }
  rep.ok = true;
  return rep;
}

namespace {

Permutation compose(const Permutation& a, const Permutation& b) {  // a after b
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = i;
  return out;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

std::vector<IntVector> expand_labels(const SkeletonGraph& g, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  std::vector<IntVector> out;
  for (const auto& e : g.edges())
    if (e.i == i && e.j == j)
      for (std::size_t c = 0; c < e.count; ++c) out.push_back(e.label);
  return out;
}

}  // namespace

SigmaReport sigma_permutations(const std::vector<IntVector>& r, const std::vector<IntVector>& t,
                               const std::vector<IntVector>& s) {
  const std::size_t m = r.size();
  if (m == 0 || t.size() != m || s.size() != m) throw MalformedInput("r, t and s need the same positive length");
  const std::size_t d = r[0].size();
  require_length(r, d);
  require_length(t, d);
  require_length(s, d);
  SigmaReport rep;
  for (std::size_t k = 0; k < m; ++k) {
    Permutation sigma(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::array<IntVector, 2> pair{r[k], t[i]};
      if (rank(d, pair) != 2)
        throw PreconditionError("degenerate configuration: r_" + std::to_string(k) + " and t_" + std::to_string(i) +
                                " are dependent");
      std::optional<std::size_t> found;
      for (std::size_t l = 0; l < m; ++l) {
        std::array<IntVector, 3> triple{r[k], t[i], s[l]};
        if (rank(d, triple) != 2) continue;
        if (found)
          throw PreconditionError("degenerate configuration: several s_l lie in span{r_" + std::to_string(k) + ", t_" +
                                  std::to_string(i) + "}");
        found = l;
      }
      if (!found)
        throw PreconditionError("degenerate configuration: no s_l lies in span{r_" + std::to_string(k) + ", t_" +
                                std::to_string(i) + "}");
      sigma[i] = *found;
    }
    rep.sigma.push_back(std::move(sigma));
  }
  for (std::size_t k = 0; k < m; ++k) {
    std::set<std::size_t> image(rep.sigma[k].begin(), rep.sigma[k].end());
    if (image.size() != m) {
      rep.clause = "bijection";
      rep.detail = "sigma_" + std::to_string(k) + " is not a bijection";
      return rep;
    }
  }
  std::vector<Permutation> gens;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      Permutation tau = compose(inverse(rep.sigma[a]), rep.sigma[b]);
      bool free = true;
      for (std::size_t i = 0; i < m; ++i) free = free && tau[i] != i;
      if (!free || !is_identity(compose(tau, tau))) {
        rep.clause = "involution";
        rep.detail = "sigma_" + std::to_string(a) + "^-1 sigma_" + std::to_string(b) +
                     " is not a fixed-point-free involution";
        return rep;
      }
      gens.push_back(std::move(tau));
    }
  }
  Permutation id(m);
  std::iota(id.begin(), id.end(), 0);
  std::set<Permutation> group{id};
  std::vector<Permutation> frontier{id};
  while (!frontier.empty()) {
    auto p = frontier.back();
    frontier.pop_back();
    for (const auto& gen : gens) {
      auto q = compose(gen, p);
      if (group.insert(q).second) frontier.push_back(q);
    }
  }
  rep.group_order = group.size();
  for (const auto& p : group) {
    for (const auto& q : group) {
      if (!is_identity(compose(p, p)) || compose(p, q) != compose(q, p)) {
        rep.clause = "elementary-abelian";
        rep.detail = "the generated group is not elementary abelian";
        return rep;
      }
    }
  }
  if (m % rep.group_order != 0) {
    rep.clause = "order";
    rep.detail = "group order " + std::to_string(rep.group_order) + " does not divide m = " + std::to_string(m);
    return rep;
  }
  if (m != 1 && m != 2 && m != 4) {
    rep.clause = "edge-count";
    rep.detail = "m = " + std::to_string(m) + " is not 1, 2 or 4";
    return rep;
  }
  rep.ok = true;
  return rep;
}

SigmaReport sigma_permutations(const SkeletonGraph& g, std::size_t i, std::size_t j, std::size_t l) {
  const std::size_t k = g.vertex_count();
  if (i >= k || j >= k || l >= k || i == j || j == l || i == l)
    throw MalformedInput("sigma permutations need three distinct vertices");
  return sigma_permutations(expand_labels(g, i, j), expand_labels(g, i, l), expand_labels(g, j, l));
}

M4Labels m4_model_labels(const std::vector<IntVector>& u) {
  if (u.size() != 4) throw MalformedInput("the m = 4 model needs u0, u1, u2, u3");
  require_length(u, u[0].size());
  const auto &u0 = u[0], &u1 = u[1], &u2 = u[2], &u3 = u[3];
  M4Labels out;
  out.r = {u1 + u2, u2 - u1, u3 + u0, u0 - u3};
  out.s1 = {u0 - u1, u0 + u1, u2 - u3, u2 + u3};
  out.s2 = {u0 + u2, u0 - u2, -u1 - u3, u3 - u1};
  return out;
}

namespace {

std::vector<IntVector> projective_set(const std::vector<IntVector>& vs) {
  std::vector<IntVector> out;
  for (const auto& v : vs) out.push_back(v.primitive());
  std::sort(out.begin(), out.end());
  return out;
}

// Exact vectors up to sign, for comparing scaled data.
std::vector<IntVector> signed_set(std::vector<IntVector> vs) {
  for (auto& v : vs)
    if (!v.has_canonical_sign()) v = -v;
  std::sort(vs.begin(), vs.end());
  return vs;
}

}  // namespace

M4Fit fit_m4_model(const std::vector<IntVector>& r, const std::vector<IntVector>& s1,
                   const std::vector<IntVector>& s2) {
  if (r.size() != 4 || s1.size() != 4 || s2.size() != 4) throw MalformedInput("r, s1 and s2 need four weights each");
  const std::size_t d = r[0].size();
  require_length(r, d);
  require_length(s1, d);
  require_length(s2, d);
  if (rank(d, r) < 4) throw PreconditionError("r_1..r_4 are linearly dependent");

  const std::array<std::vector<IntVector>, 2> s_sets{s1, s2};
  // Coordinates of every s in the r basis, solved once; reordering r permutes them.
  std::array<std::vector<std::optional<RationalVector>>, 2> s_coords;
  for (std::size_t t = 0; t < 2; ++t)
    for (const auto& v : s_sets[t]) s_coords[t].push_back(solve_in_span(r, v));
  std::vector<std::size_t> order{0, 1, 2, 3};
  M4Fit fit;
  std::vector<M4Fit> exact_fits, loose_fits;
  std::set<std::vector<IntVector>> exact_keys, loose_keys;
  // The scales of the r_j absorb all sign choices, leaving orderings, the choice
  // of s_11, and which input list plays the role of s1.
  do {
    std::vector<IntVector> basis;
    for (auto idx : order) basis.push_back(r[idx]);
    for (std::size_t swap = 0; swap < 2; ++swap) {
      const auto& first = s_sets[swap];
      const auto& second = s_sets[1 - swap];
      const auto want_first = projective_set(first);
      const auto want_second = projective_set(second);
      for (const auto& solved : s_coords[swap]) {
        if (!solved) continue;
        RationalVector coords_in_order(4);
        for (std::size_t j = 0; j < 4; ++j) coords_in_order[j] = (*solved)[order[j]];
        const auto* coords = &coords_in_order;
        if (std::any_of(coords->begin(), coords->end(), [](const Rational& c) { return sgn(c) == 0; })) continue;
        // s11 = 1/2 (-r1 + r2 + r3 + r4) fixes r_j = lambda_j * basis_j. Work with
        // R_j = L * r_j for a common denominator L so everything stays integral.
        std::array<Rational, 4> lambda;
        Integer denom = 1;
        for (std::size_t j = 0; j < 4; ++j) {
          lambda[j] = 2 * (*coords)[j] * (j == 0 ? -1 : 1);
          denom = lcm(denom, Integer(lambda[j].get_den()));
        }
        std::vector<IntVector> rs;
        for (std::size_t j = 0; j < 4; ++j) rs.push_back(Integer(lambda[j] * denom) * basis[j]);
        // 2L times the half-sum with the given signs.
        auto signed_sum = [&](auto sign) {
          IntVector v(d);
          for (std::size_t j = 0; j < 4; ++j) {
            if (sign(j) > 0) v += rs[j];
            else v -= rs[j];
          }
          return v;
        };
        // Stop at the first predicted label missing from the data.
        std::vector<IntVector> pred1, pred2, prim1, prim2;
        bool hits = true;
        for (std::size_t i = 0; i < 4 && hits; ++i) {
          pred1.push_back(signed_sum([i](std::size_t j) { return j == i ? -1 : 1; }));
          pred2.push_back(signed_sum([i](std::size_t j) { return ((j == 0) + (j == i)) % 2 ? -1 : 1; }));
          prim1.push_back(pred1.back().primitive());
          prim2.push_back(pred2.back().primitive());
          hits = std::binary_search(want_first.begin(), want_first.end(), prim1.back()) &&
                 std::binary_search(want_second.begin(), want_second.end(), prim2.back());
        }
        if (!hits) continue;
        std::sort(prim1.begin(), prim1.end());
        std::sort(prim2.begin(), prim2.end());
        if (prim1 != want_first || prim2 != want_second) continue;
        M4Fit cand;
        cand.u = {rs[2] + rs[3], rs[0] - rs[1], rs[0] + rs[1], rs[2] - rs[3]};
        Integer g = 0;
        for (const auto& w : cand.u) g = gcd(g, w.content());
        // u1 = (r1 - r2)/2 is nonzero; its leading sign fixes the global sign
        if (!cand.u[1].has_canonical_sign()) g = -g;
        for (auto& w : cand.u)
          for (std::size_t q = 0; q < d; ++q) w[q] /= g;
        bool exact = std::all_of(lambda.begin(), lambda.end(), [](const Rational& x) { return abs(x) == 1; });
        const Integer scale = 2 * denom;
        auto scaled = [&](const std::vector<IntVector>& vs) {
          std::vector<IntVector> out;
          for (const auto& v : vs) out.push_back(scale * v);
          return signed_set(out);
        };
        exact = exact && signed_set(pred1) == scaled(first) && signed_set(pred2) == scaled(second);
        auto& pool = exact ? exact_fits : loose_fits;
        if (!(exact ? exact_keys : loose_keys).insert(signed_set(cand.u)).second) continue;
        cand.r_order = order;
        cand.span_dim = rank(d, cand.u);
        cand.ok = true;
        pool.push_back(std::move(cand));
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  // Fits reproducing the input scales are preferred over merely projective ones.
  auto& pool = exact_fits.empty() ? loose_fits : exact_fits;
  if (!pool.empty()) {
    fit = pool.front();
    for (const auto& f : pool) fit.solutions.push_back(f.u);
    return fit;
  }
  fit.detail = "no reordering and rescaling of r matches the s1 and s2 formulas";
  return fit;
}

}  // namespace toruskit
