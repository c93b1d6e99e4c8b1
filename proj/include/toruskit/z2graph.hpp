#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toruskit/gkm.hpp"
#include "toruskit/z2.hpp"

namespace toruskit {

// Skeleton graph whose parallel edges and loops each carry a GF(2) character.
class Z2LabeledGraph {
 public:
  Z2LabeledGraph() = default;
  // edge_labels[g] has one entry per parallel edge of base.edges()[g], likewise for loops.
  Z2LabeledGraph(SkeletonGraph base, std::vector<std::vector<Z2Vector>> edge_labels,
                 std::vector<std::vector<Z2Vector>> loop_labels);

  const SkeletonGraph& base() const { return base_; }
  const std::vector<std::vector<Z2Vector>>& edge_labels() const { return edge_labels_; }
  const std::vector<std::vector<Z2Vector>>& loop_labels() const { return loop_labels_; }

  // Every label on an edge between i and j (i != j), or on loops at i (i == j).
  std::vector<Z2Vector> labels_between(std::size_t i, std::size_t j) const;

 private:
  SkeletonGraph base_;
  std::vector<std::vector<Z2Vector>> edge_labels_, loop_labels_;
};

struct CosetStructure {
  Subspace u;
  std::map<std::pair<std::size_t, std::size_t>, Z2Vector> a;  // canonical coset representative per pair i < j
  std::size_t m2 = 0;
  std::size_t m = 0;
};

struct Z2StructureReport {
  bool ok = false;
  CosetStructure structure;
  std::string clause;
  std::string detail;
  std::vector<std::size_t> vertices;  // where the violation sits
};

Z2StructureReport validate_z2_structure(const Z2LabeledGraph& g);

struct FixedComponentSummary {
  std::vector<std::size_t> vertices;
  std::size_t dim = 0;
  std::size_t surviving_per_pair = 0;
};

struct InvolutionReport {
  bool ok = false;
  std::vector<FixedComponentSummary> components;
  std::size_t w = 0;           // degree of the generator, 2m
  bool unverified_w = false;   // w = 8: reported but not checked
  std::string clause;
  std::string detail;
};

// Fixed-set accounting for the involution iota (an element of GF(2)^d).
InvolutionReport involution_fixed_analysis(const Z2LabeledGraph& g, Z2Vector iota);

using Permutation = std::vector<std::size_t>;

struct SigmaReport {
  bool ok = false;
  std::vector<Permutation> sigma;  // sigma[k][i] = l
  std::size_t group_order = 0;
  std::string clause;
  std::string detail;
};

// sigma_k(i) is the unique l with s_l in span{r_k, t_i}.
SigmaReport sigma_permutations(const std::vector<IntVector>& r, const std::vector<IntVector>& t,
                               const std::vector<IntVector>& s);
// Same with r, t, s the labels on the edges (i,j), (i,l) and (j,l) of a graph.
SigmaReport sigma_permutations(const SkeletonGraph& g, std::size_t i, std::size_t j, std::size_t l);

struct M4Labels {
  std::vector<IntVector> r, s1, s2;
};

// Edge labels of the m = 4 configuration built from u = (u0, u1, u2, u3).
M4Labels m4_model_labels(const std::vector<IntVector>& u);

struct M4Fit {
  bool ok = false;
  std::vector<IntVector> u;           // u0, u1, u2, u3; integral with content 1
  std::vector<std::size_t> r_order;   // input index used as r_1..r_4
  std::size_t span_dim = 0;
  // Every distinct u (up to signed permutation) matching the data; u is the first.
  // Labels alone leave a threefold ambiguity in general.
  std::vector<std::vector<IntVector>> solutions;
  std::string detail;
};

M4Fit fit_m4_model(const std::vector<IntVector>& r, const std::vector<IntVector>& s1,
                   const std::vector<IntVector>& s2);

}  // namespace toruskit
