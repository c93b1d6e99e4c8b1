#include "toruskit/gkm.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "toruskit/errors.hpp"
#include "toruskit/rational.hpp"

namespace toruskit {

const char* to_string(ComponentType t) {
  switch (t) {
    case ComponentType::Point: return "point";
    case ComponentType::Sphere: return "sphere";
    case ComponentType::CP: return "CP";
    case ComponentType::HP: return "HP";
  }
  return "?";
}

ComponentType parse_component_type(const std::string& s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "point" || t == "pt") return ComponentType::Point;
  if (t == "sphere") return ComponentType::Sphere;
  if (t == "cp") return ComponentType::CP;
  if (t == "hp") return ComponentType::HP;
  throw MalformedInput("unknown component type '" + s + "'");
}

const char* to_string(ModelType t) { return t == ModelType::CP ? "CP" : "HP"; }

void FixedComponent::validate() const {
  if (dim % 2 != 0) throw MalformedInput("component dimension must be even");
  if ((dim == 0) != (type == ComponentType::Point))
    throw MalformedInput("dimension 0 is exactly the point type");
  if (type == ComponentType::HP && dim % 4 != 0) throw MalformedInput("HP component dimension must be divisible by 4");
}

std::size_t FixedComponent::euler_characteristic() const {
  switch (type) {
    case ComponentType::Point: return 1;
    case ComponentType::Sphere: return 2;
    case ComponentType::CP: return dim / 2 + 1;
    case ComponentType::HP: return dim / 4 + 1;
  }
  return 1;
}

std::size_t FixedComponent::generator_multiplicity() const {
  switch (type) {
    case ComponentType::Point: return 0;
    case ComponentType::Sphere: return dim / 2;
    case ComponentType::CP: return 1;
    case ComponentType::HP: return 2;
  }
  return 0;
}

SkeletonGraph::SkeletonGraph(std::size_t d, std::size_t n, std::vector<FixedComponent> vertices,
                             std::vector<EdgeGroup> edges, std::vector<LoopGroup> loops)
    : d_(d), n_(n), vertices_(std::move(vertices)), edges_(std::move(edges)), loops_(std::move(loops)) {
  if (n_ % 2 != 0) throw MalformedInput("ambient dimension n must be even");
  if (vertices_.empty()) throw MalformedInput("graph has no vertices");
  for (const auto& v : vertices_) {
    v.validate();
    if (v.dim > n_) throw MalformedInput("component dimension exceeds n");
  }
  const std::size_t k = vertices_.size();
  for (auto& e : edges_) {
    if (e.i >= k || e.j >= k) throw MalformedInput("edge endpoint out of range");
    if (e.i == e.j) throw MalformedInput("edge joins a vertex to itself; use a loop");
    if (e.label.size() != d_) throw MalformedInput("edge label length differs from d");
    if (e.label.is_zero()) throw MalformedInput("zero label on an edge between distinct vertices");
    if (e.count == 0) throw MalformedInput("edge count must be positive");
    if (e.i > e.j) std::swap(e.i, e.j);
    e.label = e.label.primitive();
  }
  for (auto& l : loops_) {
    if (l.vertex >= k) throw MalformedInput("loop vertex out of range");
    if (l.label.size() != d_) throw MalformedInput("loop label length differs from d");
    if (l.count == 0) throw MalformedInput("loop count must be positive");
    if (vertices_[l.vertex].dim == 0) throw MalformedInput("loop at a zero-dimensional vertex");
    l.label = l.label.primitive();
  }
}

std::size_t SkeletonGraph::edge_count(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  std::size_t c = 0;
  for (const auto& e : edges_)
    if (e.i == i && e.j == j) c += e.count;
  return c;
}

std::size_t SkeletonGraph::loop_count(std::size_t v) const {
  std::size_t c = 0;
  for (const auto& l : loops_)
    if (l.vertex == v) c += l.count;
  return c;
}

std::size_t SkeletonGraph::euler_characteristic() const {
  std::size_t chi = 0;
  for (const auto& v : vertices_) chi += v.euler_characteristic();
  return chi;
}

namespace {

void add_edge(std::vector<EdgeGroup>& edges, std::size_t i, std::size_t j, const IntVector& label) {
  IntVector canon = label.primitive();
  for (auto& e : edges) {
    if (e.i == i && e.j == j && e.label == canon) {
      ++e.count;
      return;
    }
  }
  edges.push_back({i, j, canon, 1});
}

void add_loop(std::vector<LoopGroup>& loops, std::size_t v, const IntVector& label) {
  IntVector canon = label.primitive();
  for (auto& l : loops) {
    if (l.vertex == v && l.label == canon) {
      ++l.count;
      return;
    }
  }
  loops.push_back({v, canon, 1});
}

}  // namespace

SkeletonGraph build_model_graph(ModelType type, std::size_t n, const std::vector<FixedComponent>& components,
                                const std::vector<IntVector>& u) {
  if (components.empty()) throw PreconditionError("model graph needs at least one component");
  if (u.size() != components.size()) throw PreconditionError("one character per component is required");
  const std::size_t d = u[0].size();
  require_length(u, d);
  std::size_t total = 0;
  for (const auto& c : components) {
    c.validate();
    const bool ok = type == ModelType::CP ? (c.type == ComponentType::CP || c.type == ComponentType::Point)
                                          : c.type != ComponentType::Sphere;
    if (!ok) throw PreconditionError(std::string("component type ") + to_string(c.type) + " not allowed in a " +
                                     to_string(type) + " model");
    if (c.type == ComponentType::CP || c.type == ComponentType::HP || c.type == ComponentType::Point)
      total += c.euler_characteristic();
  }
  const std::size_t expected = type == ModelType::CP ? n / 2 + 1 : n / 4 + 1;
  if ((type == ModelType::CP && n % 2 != 0) || (type == ModelType::HP && n % 4 != 0) || total != expected) {
    std::ostringstream os;
    os << "dimension bookkeeping: sum of (n_i+1) is " << total << " but n = " << n << " requires " << expected;
    throw PreconditionError(os.str());
  }
  const std::size_t k = components.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (u[i] == u[j] || (type == ModelType::HP && u[i] == -u[j]))
        throw PreconditionError("characters u_" + std::to_string(i) + " and u_" + std::to_string(j) + " coincide");
    }
  }
  std::vector<EdgeGroup> edges;
  std::vector<LoopGroup> loops;
  const IntVector zero(d);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      add_edge(edges, i, j, u[i] - u[j]);
      if (type == ModelType::HP) add_edge(edges, i, j, u[i] + u[j]);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto& c = components[i];
    if (c.dim == 0) continue;
    if (type == ModelType::CP) {
      add_loop(loops, i, zero);
    } else if (c.type == ComponentType::HP) {
      if (!u[i].is_zero()) throw PreconditionError("an HP component needs u_i = 0");
      add_loop(loops, i, zero);
      add_loop(loops, i, zero);
    } else {
      if (u[i].is_zero()) throw PreconditionError("a CP component in an HP model needs u_i != 0");
      add_loop(loops, i, zero);
      add_loop(loops, i, u[i]);
    }
  }
  return SkeletonGraph(d, n, components, std::move(edges), std::move(loops));
}

SkeletonReport validate_skeleton(const SkeletonGraph& g) {
  SkeletonReport rep;
  rep.chi = g.euler_characteristic();
  const std::size_t k = g.vertex_count();
  auto fail = [&](std::string clause, std::string detail) {
    rep.ok = false;
    rep.clause = std::move(clause);
    rep.detail = std::move(detail);
    return rep;
  };
  bool have_m = false;
  if (k == 1) {
    rep.m = g.loop_count(0);
    have_m = g.vertices()[0].dim > 0;
    if (have_m && rep.m == 0) return fail("loop-count", "positive-dimensional vertex 0 has no loops");
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const std::size_t c = g.edge_count(i, j);
        if (!have_m) {
          rep.m = c;
          have_m = true;
        } else if (c != rep.m) {
          std::ostringstream os;
          os << "vertices " << i << " and " << j << " are joined by " << c << " edges, expected " << rep.m;
          return fail("uniform-multiplicity", os.str());
        }
      }
    }
    if (rep.m == 0) return fail("connected", "vertices are not joined by edges");
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t loops = g.loop_count(i);
      const bool positive = g.vertices()[i].dim > 0;
      if ((positive && loops != rep.m) || (!positive && loops != 0)) {
        std::ostringstream os;
        os << "vertex " << i << " carries " << loops << " loops, expected " << (positive ? rep.m : 0);
        return fail("loop-count", os.str());
      }
    }
  }
  if (have_m && 2 * rep.m * (rep.chi - 1) != g.dim()) {
    std::ostringstream os;
    os << "2m(chi-1) = " << 2 * rep.m * (rep.chi - 1) << " but n = " << g.dim();
    return fail("euler-formula", os.str());
  }
  if (!have_m && g.dim() != 0) return fail("euler-formula", "an isolated point needs n = 0");
  const bool big = std::any_of(g.vertices().begin(), g.vertices().end(), [](const auto& v) { return v.dim >= 4; });
  if (big && rep.m != 1 && rep.m != 2 && 2 * rep.m != g.dim()) {
    std::ostringstream os;
    os << "m = " << rep.m << " with a component of dimension >= 4 and n = " << g.dim();
    return fail("multiplicity-values", os.str());
  }
  rep.ok = true;
  return rep;
}

WeightSystem isotropy_rep_at(const SkeletonGraph& g, std::size_t vertex) {
  if (vertex >= g.vertex_count()) throw MalformedInput("vertex out of range");
  const auto& vs = g.vertices();
  const auto& fi = vs[vertex];
  std::set<IntVector> labels;
  for (const auto& e : g.edges())
    if (e.i == vertex || e.j == vertex) labels.insert(e.label);
  for (const auto& l : g.loops())
    if (l.vertex == vertex && !l.label.is_zero()) labels.insert(l.label);

  std::vector<IntVector> weights;
  std::vector<std::uint64_t> mults;
  std::size_t total = fi.dim;
  for (const auto& r : labels) {
    // vertices reachable through r-labeled edges
    std::vector<bool> seen(g.vertex_count(), false);
    std::vector<std::size_t> stack{vertex};
    seen[vertex] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (const auto& e : g.edges()) {
        if (e.label != r) continue;
        std::size_t w = e.i == v ? e.j : e.j == v ? e.i : v;
        if (w != v && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::size_t mult_n = 0, chi = 0, size = 0;
    for (std::size_t w = 0; w < g.vertex_count(); ++w) {
      if (!seen[w]) continue;
      ++size;
      chi += vs[w].euler_characteristic();
    }
    if (size == 1) {
      std::size_t loops = 0;
      for (const auto& l : g.loops())
        if (l.vertex == vertex && l.label == r) loops += l.count;
      mult_n = loops + fi.generator_multiplicity();
    } else {
      std::optional<std::size_t> common;
      for (const auto& e : g.edges()) {
        if (e.label != r || (e.i != vertex && e.j != vertex)) continue;
        if (common && *common != e.count)
          throw PreconditionError("inconsistent reconstruction: label " + r.to_string() +
                                  " occurs with different edge counts at vertex " + std::to_string(vertex));
        common = e.count;
      }
      mult_n = *common;
    }
    const std::size_t dim_n = 2 * mult_n * (chi - 1);
    if (dim_n <= fi.dim || (dim_n - fi.dim) % 2 != 0)
      throw PreconditionError("inconsistent reconstruction: component for label " + r.to_string() + " has dimension " +
                              std::to_string(dim_n) + " at vertex " + std::to_string(vertex));
    const std::size_t m = (dim_n - fi.dim) / 2;
    weights.push_back(r);
    mults.push_back(m);
    total += 2 * m;
  }
  if (total != g.dim())
    throw PreconditionError("inconsistent reconstruction: isotropy dimensions at vertex " + std::to_string(vertex) +
                            " sum to " + std::to_string(total) + ", not n = " + std::to_string(g.dim()));
  return WeightSystem(g.torus_rank(), std::move(weights), std::move(mults), fi.dim);
}

std::vector<IntVector> normalize_gauge(ModelType type, const std::vector<IntVector>& u) {
  if (u.empty()) return {};
  std::vector<RationalVector> q;
  for (const auto& v : u) {
    IntVector w = type == ModelType::CP ? v - u[0] : v.canonical_sign();
    q.push_back(to_rational(w));
  }
  auto out = clear_denominators(q);
  if (type == ModelType::CP) {
    for (const auto& v : out) {
      if (v.is_zero()) continue;
      if (!v.has_canonical_sign())
        for (auto& w : out) w = -w;
      break;
    }
  }
  return out;
}

namespace {

// A linear expression sum_v coeff_v * u_v over the unknowns u_0..u_{k-1} in Q^d.
using Expression = std::vector<std::pair<std::size_t, int>>;

class ModelSolver {
 public:
  ModelSolver(const SkeletonGraph& g, ModelType type, std::vector<std::size_t> vertices)
      : g_(g), type_(type), verts_(std::move(vertices)), d_(g.torus_rank()) {}

  std::optional<std::vector<RationalVector>> solve() {
    const std::size_t k = verts_.size();
    const std::size_t unknowns = k * d_;
    std::vector<RationalVector> rows;
    std::vector<Expression> nonzero;
    std::vector<std::vector<std::pair<Expression, IntVector>>> choices;  // per undecided pair

    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t v = verts_[a];
      std::vector<IntVector> zero_loops, labeled;
      for (const auto& l : g_.loops()) {
        if (l.vertex != v) continue;
        for (std::size_t c = 0; c < l.count; ++c) (l.label.is_zero() ? zero_loops : labeled).push_back(l.label);
      }
      if (type_ == ModelType::CP) {
        if (!labeled.empty()) return std::nullopt;
      } else if (g_.vertices()[v].dim > 0) {
        if (zero_loops.size() == 2 && labeled.empty()) {
          equal_zero(rows, {{a, 1}});
        } else if (zero_loops.size() == 1 && labeled.size() == 1) {
          parallel_to(rows, {{a, 1}}, labeled[0]);
          nonzero.push_back({{a, 1}});
        } else {
          return std::nullopt;
        }
      }
    }
    if (type_ == ModelType::CP) equal_zero(rows, {{0, 1}});

    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        std::vector<IntVector> labels;
        for (const auto& e : g_.edges()) {
          if (e.i == std::min(verts_[a], verts_[b]) && e.j == std::max(verts_[a], verts_[b]))
            for (std::size_t c = 0; c < e.count; ++c) labels.push_back(e.label);
        }
        Expression minus{{a, 1}, {b, -1}}, plus{{a, 1}, {b, 1}};
        if (type_ == ModelType::CP) {
          if (labels.size() != 1) return std::nullopt;
          parallel_to(rows, minus, labels[0]);
          nonzero.push_back(minus);
          continue;
        }
        if (labels.size() != 2) return std::nullopt;
        nonzero.push_back(minus);
        nonzero.push_back(plus);
        // Flipping the sign of u_b swaps the two roles, so star pairs need only one assignment.
        if (a == 0 || labels[0] == labels[1]) {
          parallel_to(rows, minus, labels[0]);
          parallel_to(rows, plus, labels[1]);
        } else {
          choices.push_back({{minus, labels[0]}, {plus, labels[1]}});
          choices.push_back({{minus, labels[1]}, {plus, labels[0]}});
        }
      }
    }

    auto base = nullspace_of(rows, unknowns);
    if (base.empty()) {
      // Only the zero assignment remains.
      if (!nonzero.empty()) return std::nullopt;
      return std::vector<RationalVector>(k, RationalVector(d_));
    }
    // Further constraints act on coefficient vectors c with x = sum c_t base_t.
    std::vector<RationalVector> reduced_rows;
    return search(base, reduced_rows, nonzero, choices, 0);
  }

 private:
  void equal_zero(std::vector<RationalVector>& rows, const Expression& e) const {
    for (std::size_t q = 0; q < d_; ++q) {
      RationalVector row(verts_.size() * d_);
      for (auto [v, s] : e) row[v * d_ + q] += s;
      rows.push_back(std::move(row));
    }
  }

  void parallel_to(std::vector<RationalVector>& rows, const Expression& e, const IntVector& r) const {
    std::size_t p = 0;
    while (sgn(r[p]) == 0) ++p;
    for (std::size_t q = 0; q < d_; ++q) {
      if (q == p) continue;
      RationalVector row(verts_.size() * d_);
      for (auto [v, s] : e) {
        row[v * d_ + q] += Rational(r[p] * s);
        row[v * d_ + p] -= Rational(r[q] * s);
      }
      rows.push_back(std::move(row));
    }
  }

  static std::vector<RationalVector> nullspace_of(const std::vector<RationalVector>& rows, std::size_t cols) {
    if (rows.empty()) {
      std::vector<RationalVector> basis;
      for (std::size_t c = 0; c < cols; ++c) {
        RationalVector x(cols);
        x[c] = 1;
        basis.push_back(std::move(x));
      }
      return basis;
    }
    RationalMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m.nullspace();
  }

  RationalVector evaluate(const Expression& e, const RationalVector& x) const {
    RationalVector out(d_);
    for (auto [v, s] : e)
      for (std::size_t q = 0; q < d_; ++q) out[q] += s * x[v * d_ + q];
    return out;
  }

  static bool is_zero(const RationalVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
  }

  static RationalVector combine(const std::vector<RationalVector>& basis, const RationalVector& c) {
    RationalVector x(basis[0].size());
    for (std::size_t t = 0; t < basis.size(); ++t) {
      if (sgn(c[t]) == 0) continue;
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += c[t] * basis[t][j];
    }
    return x;
  }

  // Solution space in unknown coordinates, given constraints on coefficients.
  std::vector<RationalVector> solutions(const std::vector<RationalVector>& base,
                                        const std::vector<RationalVector>& reduced_rows) const {
    std::vector<RationalVector> out;
    for (const auto& c : nullspace_of(reduced_rows, base.size())) out.push_back(combine(base, c));
    return out;
  }

  bool feasible(const std::vector<RationalVector>& sol, const std::vector<Expression>& nonzero) const {
    if (sol.empty()) return false;
    for (const auto& e : nonzero) {
      bool vanishes = true;
      for (const auto& x : sol) {
        if (!is_zero(evaluate(e, x))) {
          vanishes = false;
          break;
        }
      }
      if (vanishes) return false;
    }
    return true;
  }

  std::optional<std::vector<RationalVector>> search(const std::vector<RationalVector>& base,
                                                    std::vector<RationalVector>& reduced_rows,
                                                    const std::vector<Expression>& nonzero,
                                                    const std::vector<std::vector<std::pair<Expression, IntVector>>>& choices,
                                                    std::size_t next) const {
    auto sol = solutions(base, reduced_rows);
    if (!feasible(sol, nonzero)) return std::nullopt;
    if (next == choices.size()) return generic_point(sol, nonzero);
    for (std::size_t opt = 0; opt < 2; ++opt) {
      const auto& choice = choices[next + opt];
      const std::size_t before = reduced_rows.size();
      for (const auto& [expr, label] : choice) {
        std::vector<RationalVector> rows;
        parallel_to(rows, expr, label);
        for (const auto& row : rows) {
          RationalVector red(base.size());
          for (std::size_t t = 0; t < base.size(); ++t)
            for (std::size_t j = 0; j < row.size(); ++j)
              if (sgn(row[j]) != 0) red[t] += row[j] * base[t][j];
          reduced_rows.push_back(std::move(red));
        }
      }
      auto found = search(base, reduced_rows, nonzero, choices, next + 2);
      reduced_rows.resize(before);
      if (found) return found;
    }
    return std::nullopt;
  }

  // Points on the moment curve avoid any finite union of proper subspaces after finitely many tries.
  std::vector<RationalVector> generic_point(const std::vector<RationalVector>& sol,
                                            const std::vector<Expression>& nonzero) const {
    for (long s = 1;; ++s) {
      RationalVector c(sol.size());
      Rational p = 1;
      for (auto& x : c) {
        x = p;
        p *= s;
      }
      auto x = combine(sol, c);
      bool good = std::none_of(nonzero.begin(), nonzero.end(),
                               [&](const Expression& e) { return is_zero(evaluate(e, x)); });
      if (!good) continue;
      std::vector<RationalVector> u;
      for (std::size_t a = 0; a < verts_.size(); ++a) u.emplace_back(x.begin() + a * d_, x.begin() + (a + 1) * d_);
      return u;
    }
  }

  const SkeletonGraph& g_;
  ModelType type_;
  std::vector<std::size_t> verts_;
  std::size_t d_;
};

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

FitResult fit_linear_model(const SkeletonGraph& g, ModelType type) {
  auto rep = validate_skeleton(g);
  if (!rep.ok) throw PreconditionError("graph fails validation (" + rep.clause + "): " + rep.detail);
  if (rep.m == 4) throw PreconditionError("no linear label model is available for m = 4");
  const std::size_t want = type == ModelType::CP ? 1 : 2;
  if (g.vertex_count() > 1 && rep.m != want)
    throw PreconditionError(std::string(to_string(type)) + " fitting needs m = " + std::to_string(want) + ", found m = " +
                            std::to_string(rep.m));
  if (g.vertex_count() == 1 && g.vertices()[0].dim > 0 && rep.m != want)
    throw PreconditionError("loop count does not match the requested model");

  FitResult out;
  out.model.type = type;
  const std::size_t k = g.vertex_count();
  std::vector<std::size_t> all(k);
  std::iota(all.begin(), all.end(), 0);
  if (auto u = ModelSolver(g, type, all).solve()) {
    std::vector<IntVector> ints = clear_denominators(*u);
    out.ok = true;
    out.model.u = normalize_gauge(type, ints);
    return out;
  }
  for (std::size_t size = 1; size <= k; ++size) {
    std::vector<std::size_t> subset(size);
    std::iota(subset.begin(), subset.end(), 0);
    do {
      if (!ModelSolver(g, type, subset).solve()) {
        out.violating = subset;
        std::ostringstream os;
        os << "no consistent " << to_string(type) << " model on vertices {";
        for (std::size_t a = 0; a < subset.size(); ++a) os << (a ? "," : "") << subset[a];
        os << "}";
        out.detail = os.str();
        return out;
      }
    } while (next_combination(subset, k));
  }
  out.violating = all;
  out.detail = "no consistent model";
  return out;
}

}  // namespace toruskit
