#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toruskit/integer.hpp"
#include "toruskit/weights.hpp"

namespace toruskit {

enum class ComponentType { Point, Sphere, CP, HP };

const char* to_string(ComponentType t);
ComponentType parse_component_type(const std::string& s);

// A fixed-point component: a point, an even sphere, or a projective space.
struct FixedComponent {
  std::size_t dim = 0;
  ComponentType type = ComponentType::Point;

  static FixedComponent point() { return {0, ComponentType::Point}; }
  static FixedComponent cp(std::size_t k) { return k == 0 ? point() : FixedComponent{2 * k, ComponentType::CP}; }
  static FixedComponent hp(std::size_t k) { return k == 0 ? point() : FixedComponent{4 * k, ComponentType::HP}; }
  static FixedComponent sphere(std::size_t dim) { return {dim, ComponentType::Sphere}; }

  // Throws MalformedInput when dim and type disagree.
  void validate() const;
  // Total Betti number: 1 for a point, k+1 for CP^k and HP^k, 2 for a sphere.
  std::size_t euler_characteristic() const;
  // Half the degree of the generator of cohomology; 0 for a point.
  std::size_t generator_multiplicity() const;

  friend bool operator==(const FixedComponent&, const FixedComponent&) = default;
};

struct EdgeGroup {
  std::size_t i = 0, j = 0;  // i < j after construction
  IntVector label;           // primitive, canonical sign
  std::size_t count = 1;     // parallel edges
};

struct LoopGroup {
  std::size_t vertex = 0;
  IntVector label;  // zero or primitive
  std::size_t count = 1;
};

// Labeled multigraph of fixed components joined by the one-skeleton.
class SkeletonGraph {
 public:
  SkeletonGraph() = default;
  // Canonicalizes labels; throws MalformedInput on structural violations.
  SkeletonGraph(std::size_t d, std::size_t n, std::vector<FixedComponent> vertices, std::vector<EdgeGroup> edges,
                std::vector<LoopGroup> loops);

  std::size_t torus_rank() const { return d_; }
  std::size_t dim() const { return n_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<FixedComponent>& vertices() const { return vertices_; }
  const std::vector<EdgeGroup>& edges() const { return edges_; }
  const std::vector<LoopGroup>& loops() const { return loops_; }

  std::size_t edge_count(std::size_t i, std::size_t j) const;
  std::size_t loop_count(std::size_t v) const;
  std::size_t euler_characteristic() const;

 private:
  std::size_t d_ = 0, n_ = 0;
  std::vector<FixedComponent> vertices_;
  std::vector<EdgeGroup> edges_;
  std::vector<LoopGroup> loops_;
};

enum class ModelType { CP, HP };

const char* to_string(ModelType t);

// Complete graph of the linear action on CP^{n/2} or HP^{n/4} with fixed
// components given by `components` and block characters u.
SkeletonGraph build_model_graph(ModelType type, std::size_t n, const std::vector<FixedComponent>& components,
                                const std::vector<IntVector>& u);

struct SkeletonReport {
  bool ok = false;
  std::size_t m = 0;
  std::size_t chi = 0;
  std::string clause;  // empty when ok
  std::string detail;
};

SkeletonReport validate_skeleton(const SkeletonGraph& g);

// Weights of the isotropy representation at a vertex, multiplicities from the
// dimensions of the codimension-one fixed components; trivial_multiplicity is dim F_i.
WeightSystem isotropy_rep_at(const SkeletonGraph& g, std::size_t vertex);

struct LinearModel {
  ModelType type = ModelType::CP;
  std::vector<IntVector> u;
};

struct FitResult {
  bool ok = false;
  LinearModel model;
  std::vector<std::size_t> violating;  // smallest inconsistent vertex set (a triangle when possible)
  std::string detail;
};

FitResult fit_linear_model(const SkeletonGraph& g, ModelType type);

// Gauge normal form used by fit_linear_model (CP: u0 = 0, positive scale with
// u1 leading positive; HP: every u_i leading positive); integral with content 1.
std::vector<IntVector> normalize_gauge(ModelType type, const std::vector<IntVector>& u);

}  // namespace toruskit
