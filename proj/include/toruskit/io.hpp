#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "toruskit/gkm.hpp"
#include "toruskit/weights.hpp"
#include "toruskit/z2.hpp"
#include "toruskit/z2graph.hpp"

namespace toruskit::io {

// Keys are kept sorted, which makes dumps deterministic.
using Json = nlohmann::json;

// Parses a JSON document; syntax errors become MalformedInput with line and column.
Json parse_document(std::string_view text);

// Integers may be JSON integers or decimal strings (for values beyond 64 bits).
Integer parse_integer(const Json& v, const std::string& where);
std::size_t parse_count(const Json& v, const std::string& where);
IntVector parse_int_vector(const Json& v, const std::string& where, std::optional<std::size_t> length = {});
// Projective label: entries are integers or [num, den] pairs; scaled to an integral vector.
IntVector parse_label(const Json& v, const std::string& where, std::size_t length);
// Bitstring ("0110", character i is coordinate i) or array of 0/1.
Z2Vector parse_z2(const Json& v, const std::string& where, std::size_t d);

// {"d": int, "weights": [[...]], "multiplicities": [...], "trivial": int}; +-duplicates merge with a warning.
WeightSystem parse_weight_system(const Json& doc, std::vector<std::string>* warnings);

struct GraphDocument {
  SkeletonGraph base;
  std::optional<Z2LabeledGraph> z2;  // present when edges carry z2label / z2labels
};

// {"d", "n", "vertices": [{"dim", "ctype"}], "edges": [{"i", "j", "label", "count", "z2label"}], "loops": [...]}
GraphDocument parse_graph(const Json& doc);

Json to_json(const Integer& x);
Json to_json(const IntVector& v);
Json to_json(const std::vector<IntVector>& vs);
Json to_json(const WeightSystem& w);
Json to_json(Z2Vector v, std::size_t d);

std::string format_vectors(const std::vector<IntVector>& vs);

}  // namespace toruskit::io
