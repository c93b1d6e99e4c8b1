#include "toruskit/commands.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <sstream>

#include "toruskit/errors.hpp"
#include "toruskit/gkm.hpp"
#include "toruskit/rational.hpp"
#include "toruskit/sparse_search.hpp"
#include "toruskit/vandermonde.hpp"
#include "toruskit/weights.hpp"
#include "toruskit/z2graph.hpp"

namespace toruskit {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Error: return "error";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "error";
}

namespace {

using io::Json;
using io::to_json;

struct Result {
  bool pass = false;
  Json details = Json::object();
  std::vector<std::string> warnings;
};

struct Command {
  const char* statement;
  std::function<Result(const Json&, const RunOptions&)> run;
};

Json bitstrings(const std::vector<Z2Vector>& vs, std::size_t d) {
  Json out = Json::array();
  for (auto v : vs) out.push_back(v.to_string(d));
  return out;
}

Json witness_json(const IsotropyWitness& w) {
  Json out;
  out["subset"] = w.subset;
  Json divs = Json::array();
  for (const auto& x : w.divisors) divs.push_back(to_json(x));
  out["divisors"] = divs;
  return out;
}

Json subgroup_json(const SubgroupSpec& h) {
  Json out;
  out["annihilator"] = to_json(h.annihilator.basis());
  out["dim"] = h.dim();
  out["connected"] = h.connected();
  out["components"] = to_json(h.components());
  return out;
}

std::size_t count_field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw MalformedInput(std::string("input: missing field '") + key + "'");
  return io::parse_count(doc.at(key), key);
}

std::vector<IntVector> vector_list(const Json& doc, const char* key, std::optional<std::size_t> d) {
  if (!doc.is_object() || !doc.contains(key)) throw MalformedInput(std::string("input: missing field '") + key + "'");
  const Json& arr = doc.at(key);
  if (!arr.is_array() || arr.empty()) throw MalformedInput(std::string(key) + ": expected a non-empty array");
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(io::parse_int_vector(arr[i], std::string(key) + "[" + std::to_string(i) + "]", d));
    if (!d) d = out.back().size();
  }
  return out;
}

std::optional<std::size_t> optional_dim(const Json& doc) {
  if (doc.is_object() && doc.contains("d")) return io::parse_count(doc.at("d"), "d");
  return std::nullopt;
}

Result weights_analyze(const Json& doc, const RunOptions&) {
  Result r;
  WeightSystem w = io::parse_weight_system(doc, &r.warnings);
  const bool faithful = is_faithful(w);
  const bool connected = has_connected_isotropy(w);
  r.details["weights"] = to_json(w);
  r.details["faithful"] = faithful;
  r.details["connected_isotropy"] = connected;
  if (!connected) {
    r.details["witness"] = witness_json(*finite_isotropy_witness(w));
    if (rank(w.rank(), w.weights()) == w.rank()) {
      Reduction red = reduce_to_connected_isotropy(w);
      Json j;
      j["finite_order"] = to_json(red.finite_order);
      j["lattice"] = to_json(red.lattice.basis());
      j["reduced"] = to_json(red.reduced);
      j["kept"] = red.kept;
      r.details["reduction"] = j;
    }
  } else if (faithful) {
    const std::size_t d = w.rank();
    r.details["count"] = w.size();
    r.details["bound"] = d * (d + 1) / 2;
    if (d <= kMaxZ2Dim) {
      Z2Set image = mod2_weights(w);
      r.details["mod2_image"] = bitstrings(image.nonzero(), d);
      r.details["codim3_property"] = has_codim3_property(image);
    }
  }
  r.pass = connected;
  return r;
}

Result weights_split(const Json& doc, const RunOptions&) {
  Result r;
  WeightSystem w = io::parse_weight_system(doc, &r.warnings);
  if (doc.contains("steps")) {
    const std::size_t steps = io::parse_count(doc.at("steps"), "steps");
    IteratedSplit it = iterated_split(w, steps);
    r.details["steps"] = steps;
    r.details["h"] = subgroup_json(it.h);
    r.details["induced"] = to_json(it.induced);
    r.pass = it.induced.size() == steps + 1;
    return r;
  }
  SplitResult s = s1_split(w);
  const std::size_t d = w.rank();
  r.details["h"] = subgroup_json(s.h);
  r.details["l1"] = to_json(s.l1.basis());
  r.details["l2"] = to_json(s.l2.basis());
  r.details["rho1_weight"] = to_json(s.rho1_weight);
  r.details["rho1_multiplicity"] = s.rho1_multiplicity;
  r.details["rho2"] = to_json(s.rho2);
  r.details["fixed_weights"] = to_json(s.fixed_weights);
  r.details["z2_split"] = {{"w", bitstrings(s.z2_split.w.basis(), d)}, {"s", s.z2_split.s.to_string(d)}};
  r.details["reduced"] = s.reduced;
  r.pass = true;
  return r;
}

Result weights_theorem_e(const Json& doc, const RunOptions&) {
  Result r;
  WeightSystem w = io::parse_weight_system(doc, &r.warnings);
  TheoremEResult t = verify_theorem_e(w);
  r.details["count"] = t.count;
  r.details["bound"] = t.bound;
  r.details["bound_holds"] = t.bound_holds;
  r.details["extremal"] = t.count == t.bound;
  if (t.basis) r.details["basis"] = to_json(*t.basis);
  r.details["classification_holds"] = t.classification_holds;
  r.pass = t.bound_holds && t.classification_holds;
  return r;
}

Result z2_max_sparse(const Json& doc, const RunOptions& opts) {
  Result r;
  const std::size_t d = count_field(doc, "d");
  SearchOptions search;
  search.jobs = std::max(1u, opts.jobs);
  if (opts.budget_seconds)
    search.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(*opts.budget_seconds));
  SparseSearchResult res = enumerate_max_sparse(d, search);
  const std::size_t bound = d * (d + 1) / 2;
  Json classes = Json::array();
  for (const auto& c : res.classes) classes.push_back(bitstrings(c.nonzero(), d));
  const Z2Set standard = gl_canonical_form(hamming2_set(d));
  const bool standard_only = res.classes.size() == 1 && res.classes[0] == standard;
  r.details["d"] = d;
  r.details["max_nonzero"] = res.max_nonzero;
  r.details["bound"] = bound;
  r.details["classes"] = classes;
  r.details["extremal_is_standard"] = standard_only;
  r.details["nodes"] = res.nodes;
  r.pass = res.max_nonzero == bound && standard_only;
  return r;
}

Result z2_split(const Json& doc, const RunOptions&) {
  Result r;
  const std::size_t d = count_field(doc, "d");
  if (d == 0 || d > kMaxZ2Dim) throw MalformedInput("d: must be between 1 and 64");
  if (!doc.contains("vectors") || !doc.at("vectors").is_array())
    throw MalformedInput("vectors: expected an array of bitstrings or 0/1 arrays");
  std::vector<Z2Vector> members;
  const Json& vs = doc.at("vectors");
  for (std::size_t i = 0; i < vs.size(); ++i)
    members.push_back(io::parse_z2(vs[i], "vectors[" + std::to_string(i) + "]", d));
  Z2Set s(d, members);
  r.details["d"] = d;
  r.details["nonzero_count"] = s.nonzero_count();
  if (d < 3) throw PreconditionError("splitting needs d >= 3");
  if (auto violation = codim3_violation(s)) {
    r.details["codim3_property"] = false;
    r.details["violation"] = bitstrings(violation->basis(), d);
    r.pass = false;
    return r;
  }
  r.details["codim3_property"] = true;
  Z2Split split = find_split(s);
  r.details["split"] = {{"w", bitstrings(split.w.basis(), d)}, {"s", split.s.to_string(d)}};
  if (d <= 24) {
    Subspace u = find_codim1_independent(s);
    std::vector<Z2Vector> outside;
    for (auto m : s.members())
      if (!u.contains(m)) outside.push_back(m);
    r.details["hyperplane"] = {{"u", bitstrings(u.basis(), d)}, {"outside", bitstrings(outside, d)}};
  }
  r.details["bound"] = d * (d + 1) / 2;
  r.pass = s.nonzero_count() <= d * (d + 1) / 2;
  return r;
}

Json skeleton_json(const SkeletonReport& rep) {
  Json j;
  j["m"] = rep.m;
  j["chi"] = rep.chi;
  if (!rep.ok) {
    j["clause"] = rep.clause;
    j["violation"] = rep.detail;
  }
  return j;
}

Result gkm_validate(const Json& doc, const RunOptions&) {
  Result r;
  auto graph = io::parse_graph(doc);
  const auto& g = graph.base;
  auto rep = validate_skeleton(g);
  r.details = skeleton_json(rep);
  r.details["n"] = g.dim();
  r.details["vertices"] = g.vertex_count();
  if (!rep.ok) return r;
  Json iso = Json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    try {
      iso.push_back(to_json(isotropy_rep_at(g, v)));
    } catch (const PreconditionError& e) {
      r.details["clause"] = "isotropy-reconstruction";
      r.details["violation"] = e.what();
      return r;
    }
  }
  r.details["isotropy"] = iso;
  r.pass = true;
  return r;
}

ModelType parse_mode(const std::string& s) {
  if (s == "CP" || s == "cp") return ModelType::CP;
  if (s == "HP" || s == "hp") return ModelType::HP;
  throw MalformedInput("mode: expected CP or HP");
}

Result gkm_fit(const Json& doc, const RunOptions&) {
  Result r;
  auto graph = io::parse_graph(doc);
  const auto& g = graph.base;
  ModelType mode;
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) throw MalformedInput("mode: expected a string");
    mode = parse_mode(doc.at("mode").get<std::string>());
  } else {
    auto rep = validate_skeleton(g);
    if (!rep.ok) throw PreconditionError("graph fails validation (" + rep.clause + "): " + rep.detail);
    if (rep.m == 1) mode = ModelType::CP;
    else if (rep.m == 2) mode = ModelType::HP;
    else throw PreconditionError("no linear label model for m = " + std::to_string(rep.m));
  }
  FitResult fit = fit_linear_model(g, mode);
  r.details["mode"] = to_string(mode);
  if (fit.ok) {
    r.details["u"] = to_json(fit.model.u);
  } else {
    r.details["violating"] = fit.violating;
    r.details["violation"] = fit.detail;
  }
  r.pass = fit.ok;
  return r;
}

Result gkm_vandermonde(const Json& doc, const RunOptions& opts) {
  Result r;
  auto u = vector_list(doc, "u", optional_dim(doc));
  if (!doc.contains("betti") || !doc.at("betti").is_array()) throw MalformedInput("betti: expected an array");
  std::vector<std::size_t> betti;
  for (std::size_t i = 0; i < doc.at("betti").size(); ++i) {
    betti.push_back(io::parse_count(doc.at("betti")[i], "betti[" + std::to_string(i) + "]"));
    if (betti.back() == 0) throw MalformedInput("betti[" + std::to_string(i) + "]: must be positive");
  }
  if (betti.size() != u.size()) throw MalformedInput("betti: expected one entry per character");
  std::size_t total = 0;
  for (auto b : betti) total += b;
  if (doc.contains("n")) {
    const std::size_t n = io::parse_count(doc.at("n"), "n");
    if (n % 4 != 0 || total != n / 4 + 1)
      throw PreconditionError("dimension bookkeeping: sum of betti is " + std::to_string(total) + " but n = " +
                              std::to_string(n) + " requires n/4 + 1");
  }
  VandermondeOptions vo;
  vo.seed = opts.seed;
  auto rep = vandermonde_free_check(u, betti, vo);
  r.details["nonzero"] = rep.nonzero;
  r.details["identity_holds"] = rep.identity_holds;
  r.details["method"] = rep.method;
  r.details["expanded_in_t"] = rep.expanded_in_t;
  r.details["constant"] = to_json(rep.constant);
  r.details["degree"] = rep.degree;
  if (rep.method == "evaluation") {
    r.details["trials"] = rep.trials;
    // Exact Schwartz-Zippel bound, clamped at 1.
    Rational per_trial(Integer(static_cast<unsigned long>(rep.degree)), Integer(2 * vo.bound + 1));
    per_trial.canonicalize();
    if (per_trial > 1) per_trial = 1;
    Rational bound = 1;
    for (unsigned t = 0; t < rep.trials; ++t) bound *= per_trial;
    r.details["error_bound"] = {to_json(Integer(bound.get_num())), to_json(Integer(bound.get_den()))};
    r.details["seed"] = opts.seed;
  }
  if (rep.collision) r.details["collision"] = {rep.collision->first, rep.collision->second};
  r.pass = rep.nonzero && rep.identity_holds;
  return r;
}

Z2LabeledGraph require_z2(const io::GraphDocument& doc) {
  if (!doc.z2) throw MalformedInput("edges: GF(2) labels (z2label or z2labels) are required");
  return *doc.z2;
}

Result z2graph_validate(const Json& doc, const RunOptions&) {
  Result r;
  auto g = require_z2(io::parse_graph(doc));
  const std::size_t d = g.base().torus_rank();
  auto rep = validate_z2_structure(g);
  r.details["m"] = rep.structure.m;
  r.details["u"] = bitstrings(rep.structure.u.basis(), d);
  r.details["m2"] = rep.structure.m2;
  if (rep.ok) {
    Json a = Json::array();
    for (const auto& [ij, rep_a] : rep.structure.a) a.push_back({{"i", ij.first}, {"j", ij.second}, {"a", rep_a.to_string(d)}});
    r.details["cosets"] = a;
  } else {
    r.details["clause"] = rep.clause;
    r.details["violation"] = rep.detail;
    r.details["vertices"] = rep.vertices;
  }
  r.pass = rep.ok;
  return r;
}

Result z2graph_involution(const Json& doc, const RunOptions&) {
  Result r;
  auto g = require_z2(io::parse_graph(doc));
  const std::size_t d = g.base().torus_rank();
  if (!doc.contains("iota")) throw MalformedInput("input: missing field 'iota'");
  Z2Vector iota = io::parse_z2(doc.at("iota"), "iota", d);
  auto rep = involution_fixed_analysis(g, iota);
  Json comps = Json::array();
  for (const auto& c : rep.components)
    comps.push_back({{"vertices", c.vertices}, {"dim", c.dim}, {"surviving_per_pair", c.surviving_per_pair}});
  r.details["components"] = comps;
  r.details["n"] = g.base().dim();
  r.details["w"] = rep.w;
  if (rep.unverified_w) r.details["note"] = "w = 8: the dimension sum is reported, not verified";
  if (!rep.ok) {
    r.details["clause"] = rep.clause;
    r.details["violation"] = rep.detail;
  }
  r.pass = rep.ok;
  return r;
}

Result z2graph_m4(const Json& doc, const RunOptions&) {
  Result res;
  auto d = optional_dim(doc);
  auto r = vector_list(doc, "r", d);
  d = r[0].size();
  auto s1 = vector_list(doc, "s1", d);
  auto s2 = vector_list(doc, "s2", d);
  M4Fit fit = fit_m4_model(r, s1, s2);
  if (fit.ok) {
    res.details["u"] = to_json(fit.u);
    res.details["r_order"] = fit.r_order;
    res.details["span_dim"] = fit.span_dim;
    Json alts = Json::array();
    for (const auto& sol : fit.solutions) alts.push_back(to_json(sol));
    res.details["solutions"] = alts;
    try {
      auto sigma = sigma_permutations(r, s1, s2);
      res.details["sigma_group_order"] = sigma.group_order;
    } catch (const PreconditionError&) {
    }
  } else {
    res.details["violation"] = fit.detail;
  }
  res.pass = fit.ok;
  return res;
}

const std::map<std::string, Command>& registry() {
  static const std::map<std::string, Command> commands{
      {"weights-analyze",
       {"connected isotropy: every linearly independent set of weights spans a saturated sublattice", weights_analyze}},
      {"weights-split", {"circle splitting of a representation with connected isotropy", weights_split}},
      {"weights-theorem-e",
       {"at most d(d+1)/2 pairwise inequivalent weights under connected isotropy, with equality only for "
        "{e_i} and {e_i - e_j} in a suitable basis",
        weights_theorem_e}},
      {"z2-max-sparse",
       {"a generating subset of GF(2)^d with the codimension-three property has at most d(d+1)/2 nonzero "
        "elements, with equality only for the weight-two configuration",
        z2_max_sparse}},
      {"z2-split", {"codimension-three sets admit a codimension-two split and an independent complement", z2_split}},
      {"gkm-validate", {"uniform edge multiplicity m and the Euler formula chi = n/(2m) + 1", gkm_validate}},
      {"gkm-fit", {"edge labels are multiples of u_i - u_j (CP) or u_i +- u_j (HP)", gkm_fit}},
      {"gkm-vandermonde",
       {"the confluent Vandermonde determinant equals C prod (u_i^2 - u_j^2)^((n_i+1)(n_j+1)) and is nonzero",
        gkm_vandermonde}},
      {"z2graph-validate",
       {"GF(2) labels between two vertices form a coset a_ij + U with uniform multiplicity and a cocycle condition",
        z2graph_validate}},
      {"z2graph-involution",
       {"an involution has one fixed component of dimension n/2 or two whose dimensions sum to n - w",
        z2graph_involution}},
      {"z2graph-m4", {"m = 4 labels are half-sums of four independent weights", z2graph_m4}},
  };
  return commands;
}

std::string render_text(const std::string& command, const CommandOutcome& out) {
  std::ostringstream os;
  os << command << ": " << to_string(out.verdict) << "\n";
  if (out.report.contains("statement")) os << "statement: " << out.report["statement"].get<std::string>() << "\n";
  if (out.report.contains("error")) os << "error: " << out.report["error"]["message"].get<std::string>() << "\n";
  if (out.report.contains("details"))
    for (const auto& [key, value] : out.report["details"].items()) os << "  " << key << ": " << value.dump() << "\n";
  if (out.report.contains("warnings"))
    for (const auto& w : out.report["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
  return os.str();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, cmd] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

CommandOutcome execute(const std::string& command, std::string_view input, const RunOptions& options) {
  CommandOutcome out;
  out.report["command"] = command;
  auto error = [&](const char* kind, const std::string& message, int code, Verdict verdict) {
    out.verdict = verdict;
    out.exit_code = code;
    out.report["error"] = {{"kind", kind}, {"message", message}};
  };
  auto it = registry().find(command);
  if (it == registry().end()) {
    error("unknown-command", "unknown command '" + command + "'", 2, Verdict::Error);
  } else {
    out.report["statement"] = it->second.statement;
    try {
      Json doc = io::parse_document(input);
      Result r = it->second.run(doc, options);
      out.verdict = r.pass ? Verdict::Pass : Verdict::Fail;
      out.exit_code = r.pass ? 0 : 1;
      out.report["details"] = std::move(r.details);
      if (!r.warnings.empty()) out.report["warnings"] = r.warnings;
    } catch (const MalformedInput& e) {
      error("malformed-input", e.what(), 2, Verdict::Error);
    } catch (const IsotropyError& e) {
      error("precondition", e.what(), 2, Verdict::Error);
      out.report["error"]["witness"] = witness_json(e.witness);
    } catch (const PreconditionError& e) {
      error("precondition", e.what(), 2, Verdict::Error);
    } catch (const CapabilityError& e) {
      error("capability", e.what(), 2, Verdict::Error);
    } catch (const BudgetExceeded& e) {
      error("budget-exceeded", e.what(), 3, Verdict::Inconclusive);
    }
  }
  out.report["verdict"] = to_string(out.verdict);
  out.text = render_text(command, out);
  return out;
}

}  // namespace toruskit
