#include "toruskit/io.hpp"

#include <sstream>

#include "toruskit/errors.hpp"
#include "toruskit/rational.hpp"

namespace toruskit::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw MalformedInput(where + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

std::string child(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

}  // namespace

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    auto pos = msg.find("syntax error");
    throw MalformedInput("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         (pos == std::string::npos ? msg : msg.substr(pos)));
  }
}

Integer parse_integer(const Json& v, const std::string& where) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Integer(std::to_string(v.get<std::uint64_t>()));
    return Integer(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) bad(where, "empty integer string");
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') bad(where, "'" + s + "' is not a decimal integer");
    return Integer(s[0] == '+' ? s.substr(1) : s);
  }
  if (v.is_number()) bad(where, "expected an integer, got a non-integral number");
  bad(where, "expected an integer");
}

std::size_t parse_count(const Json& v, const std::string& where) {
  Integer x = parse_integer(v, where);
  if (sgn(x) < 0 || !x.fits_ulong_p()) bad(where, "expected a non-negative integer");
  return x.get_ui();
}

IntVector parse_int_vector(const Json& v, const std::string& where, std::optional<std::size_t> length) {
  if (!v.is_array()) bad(where, "expected an array of integers");
  if (length && v.size() != *length)
    bad(where, "has length " + std::to_string(v.size()) + ", expected " + std::to_string(*length));
  std::vector<Integer> entries;
  for (std::size_t i = 0; i < v.size(); ++i) entries.push_back(parse_integer(v[i], at(where, i)));
  return IntVector(std::move(entries));
}

IntVector parse_label(const Json& v, const std::string& where, std::size_t length) {
  if (!v.is_array()) bad(where, "expected an array");
  if (v.size() != length) bad(where, "has length " + std::to_string(v.size()) + ", expected " + std::to_string(length));
  std::vector<Rational> entries;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& x = v[i];
    if (x.is_array()) {
      if (x.size() != 2) bad(at(where, i), "rationals are [num, den] pairs");
      Integer num = parse_integer(x[0], at(where, i) + "[0]");
      Integer den = parse_integer(x[1], at(where, i) + "[1]");
      if (sgn(den) == 0) bad(at(where, i), "zero denominator");
      Rational q(num, den);
      q.canonicalize();
      entries.push_back(q);
    } else {
      entries.emplace_back(parse_integer(x, at(where, i)));
    }
  }
  return clear_denominators(entries);
}

Z2Vector parse_z2(const Json& v, const std::string& where, std::size_t d) {
  if (d > kMaxZ2Dim) bad(where, "GF(2) vectors support d <= 64");
  Z2Vector out;
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s.size() != d) bad(where, "bitstring has length " + std::to_string(s.size()) + ", expected " + std::to_string(d));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') bad(where, "bitstrings use only 0 and 1");
      if (s[i] == '1') out.bits |= std::uint64_t{1} << i;
    }
    return out;
  }
  if (!v.is_array()) bad(where, "expected a bitstring or an array of 0/1");
  if (v.size() != d) bad(where, "has length " + std::to_string(v.size()) + ", expected " + std::to_string(d));
  for (std::size_t i = 0; i < d; ++i) {
    Integer x = parse_integer(v[i], at(where, i));
    if (x != 0 && x != 1) bad(at(where, i), "entries must be 0 or 1");
    if (x == 1) out.bits |= std::uint64_t{1} << i;
  }
  return out;
}

WeightSystem parse_weight_system(const Json& doc, std::vector<std::string>* warnings) {
  if (!doc.is_object()) bad("input", "expected an object");
  const std::size_t d = parse_count(field(doc, "d", "input"), "d");
  if (d == 0) bad("d", "must be positive");
  const Json& ws = field(doc, "weights", "input");
  if (!ws.is_array()) bad("weights", "expected an array");
  std::vector<IntVector> weights;
  for (std::size_t i = 0; i < ws.size(); ++i) weights.push_back(parse_int_vector(ws[i], at("weights", i), d));
  std::vector<std::uint64_t> mults;
  if (const Json* m = optional_field(doc, "multiplicities")) {
    if (!m->is_array() || m->size() != weights.size()) bad("multiplicities", "expected one entry per weight");
    for (std::size_t i = 0; i < m->size(); ++i) {
      std::size_t x = parse_count((*m)[i], at("multiplicities", i));
      if (x == 0) bad(at("multiplicities", i), "must be positive");
      mults.push_back(x);
    }
  }
  std::uint64_t trivial = 0;
  if (const Json* t = optional_field(doc, "trivial")) trivial = parse_count(*t, "trivial");
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i].is_zero()) bad(at("weights", i), "zero weight; use 'trivial' for trivial summands");
  return WeightSystem::merged(d, weights, mults, trivial, warnings);
}

GraphDocument parse_graph(const Json& doc) {
  if (!doc.is_object()) bad("input", "expected an object");
  const std::size_t d = parse_count(field(doc, "d", "input"), "d");
  const std::size_t n = parse_count(field(doc, "n", "input"), "n");
  if (n % 2 != 0) bad("n", "ambient dimension must be even (clause: even-dimension)");
  const Json& vs = field(doc, "vertices", "input");
  if (!vs.is_array() || vs.empty()) bad("vertices", "expected a non-empty array");
  std::vector<FixedComponent> vertices;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string where = at("vertices", i);
    FixedComponent c;
    c.dim = parse_count(field(vs[i], "dim", where), child(where, "dim"));
    const Json* t = optional_field(vs[i], "ctype");
    if (!t) t = optional_field(vs[i], "type");
    if (t) {
      if (!t->is_string()) bad(child(where, "ctype"), "expected a string");
      try {
        c.type = parse_component_type(t->get<std::string>());
      } catch (const MalformedInput& e) {
        bad(child(where, "ctype"), e.what());
      }
    } else if (c.dim != 0) {
      bad(where, "positive-dimensional vertices need a ctype");
    }
    try {
      c.validate();
    } catch (const MalformedInput& e) {
      bad(where, e.what());
    }
    vertices.push_back(c);
  }

  bool any_z2 = false, all_z2 = true;
  auto z2_of = [&](const Json& obj, std::size_t count, const std::string& where) {
    std::vector<Z2Vector> labels;
    if (const Json* many = optional_field(obj, "z2labels")) {
      if (!many->is_array() || many->size() != count)
        bad(child(where, "z2labels"), "expected one GF(2) label per parallel copy");
      for (std::size_t c = 0; c < count; ++c) labels.push_back(parse_z2((*many)[c], at(child(where, "z2labels"), c), d));
    } else if (const Json* one = optional_field(obj, "z2label")) {
      labels.assign(count, parse_z2(*one, child(where, "z2label"), d));
    }
    any_z2 = any_z2 || !labels.empty();
    all_z2 = all_z2 && !labels.empty();
    return labels;
  };

  std::vector<EdgeGroup> edges;
  std::vector<std::vector<Z2Vector>> edge_z2;
  if (const Json* es = optional_field(doc, "edges")) {
    if (!es->is_array()) bad("edges", "expected an array");
    for (std::size_t g = 0; g < es->size(); ++g) {
      const std::string where = at("edges", g);
      const Json& e = (*es)[g];
      EdgeGroup eg;
      eg.i = parse_count(field(e, "i", where), child(where, "i"));
      eg.j = parse_count(field(e, "j", where), child(where, "j"));
      eg.label = parse_label(field(e, "label", where), child(where, "label"), d);
      eg.count = 1;
      if (const Json* c = optional_field(e, "count")) eg.count = parse_count(*c, child(where, "count"));
      if (eg.i >= vertices.size() || eg.j >= vertices.size()) bad(where, "endpoint out of range");
      if (eg.i == eg.j) bad(where, "an edge must join distinct vertices; use loops");
      if (eg.label.is_zero()) bad(child(where, "label"), "zero label on an edge between distinct vertices");
      edge_z2.push_back(z2_of(e, eg.count, where));
      edges.push_back(std::move(eg));
    }
  }
  std::vector<LoopGroup> loops;
  std::vector<std::vector<Z2Vector>> loop_z2;
  if (const Json* ls = optional_field(doc, "loops")) {
    if (!ls->is_array()) bad("loops", "expected an array");
    for (std::size_t g = 0; g < ls->size(); ++g) {
      const std::string where = at("loops", g);
      const Json& l = (*ls)[g];
      LoopGroup lg;
      const Json* v = optional_field(l, "vertex");
      if (!v) v = &field(l, "i", where);
      lg.vertex = parse_count(*v, child(where, "vertex"));
      lg.label = IntVector(d);
      if (const Json* lab = optional_field(l, "label")) lg.label = parse_label(*lab, child(where, "label"), d);
      if (const Json* c = optional_field(l, "count")) lg.count = parse_count(*c, child(where, "count"));
      if (lg.vertex >= vertices.size()) bad(where, "vertex out of range");
      if (vertices[lg.vertex].dim == 0) bad(where, "loops exist only at positive-dimensional vertices");
      loop_z2.push_back(z2_of(l, lg.count, where));
      loops.push_back(std::move(lg));
    }
  }
  if (any_z2 && !all_z2) bad("edges", "either every edge and loop carries GF(2) labels or none does");

  GraphDocument out;
  try {
    out.base = SkeletonGraph(d, n, std::move(vertices), std::move(edges), std::move(loops));
  } catch (const MalformedInput& e) {
    bad("graph", e.what());
  }
  if (any_z2) out.z2 = Z2LabeledGraph(out.base, std::move(edge_z2), std::move(loop_z2));
  return out;
}

Json to_json(const Integer& x) {
  if (x.fits_slong_p()) return Json(x.get_si());
  return Json(x.get_str());
}

Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const std::vector<IntVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

Json to_json(const WeightSystem& w) {
  Json out;
  out["d"] = w.rank();
  out["weights"] = to_json(w.weights());
  out["multiplicities"] = w.multiplicities();
  out["trivial"] = w.trivial_multiplicity();
  return out;
}

Json to_json(Z2Vector v, std::size_t d) { return Json(v.to_string(d)); }

std::string format_vectors(const std::vector<IntVector>& vs) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? ", " : "") << vs[i].to_string();
  os << "}";
  return os.str();
}

}  // namespace toruskit::io
