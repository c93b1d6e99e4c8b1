#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toruskit/errors.hpp"
#include "toruskit/lattice.hpp"
#include "toruskit/z2.hpp"

namespace toruskit {

// Nonzero characters of T^d, pairwise inequivalent up to sign, each with a
// complex multiplicity. Weights carry the canonical sign but need not be
// primitive (2e1 is a legitimate circle weight).
class WeightSystem {
 public:
  WeightSystem() = default;
  // Throws MalformedInput on zero weights, wrong lengths or repeated classes.
  WeightSystem(std::size_t d, std::vector<IntVector> weights, std::vector<std::uint64_t> multiplicities = {},
               std::uint64_t trivial = 0);
  // Like the constructor but folds +-duplicates together, appending a message per merge.
  static WeightSystem merged(std::size_t d, const std::vector<IntVector>& weights,
                             const std::vector<std::uint64_t>& multiplicities, std::uint64_t trivial,
                             std::vector<std::string>* warnings);

  std::size_t rank() const { return rank_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<IntVector>& weights() const { return weights_; }
  const std::vector<std::uint64_t>& multiplicities() const { return multiplicities_; }
  std::uint64_t trivial_multiplicity() const { return trivial_; }
  std::optional<std::size_t> index_of(const IntVector& w) const;

  // Image under v -> v * M for a d x d' matrix given by rows.
  WeightSystem transformed(const std::vector<IntVector>& matrix_rows) const;

  std::string to_string() const;

 private:
  std::size_t rank_ = 0;
  std::vector<IntVector> weights_;
  std::vector<std::uint64_t> multiplicities_;
  std::uint64_t trivial_ = 0;
};

// Closed subgroup of T^d given by the characters that vanish on it.
struct SubgroupSpec {
  Sublattice annihilator{0};

  std::size_t dim() const { return annihilator.corank(); }
  bool connected() const { return annihilator.is_saturated(); }
  // Order of the component group.
  Integer components() const { return annihilator.saturation_index(); }
};

struct IsotropyWitness {
  std::vector<std::size_t> subset;  // indices into the weight list
  std::vector<Integer> divisors;    // elementary divisors of their span
};

// Raised when an operation needs connected isotropy and finds a finite isotropy group.
class IsotropyError : public PreconditionError {
 public:
  IsotropyError(const std::string& what, IsotropyWitness w) : PreconditionError(what), witness(std::move(w)) {}
  IsotropyWitness witness;
};

bool is_faithful(const WeightSystem& w);

// Connected isotropy everywhere; for faithful systems this is |det| = 1 on
// every independent d-subset.
bool has_connected_isotropy(const WeightSystem& w);

// Smallest subset (then lexicographically first) spanning a non-saturated lattice.
std::optional<IsotropyWitness> finite_isotropy_witness(const WeightSystem& w);

struct Reduction {
  WeightSystem reduced;                // on T^d / F, in coordinates of `lattice`
  Sublattice lattice{0};               // characters trivial on F
  std::vector<std::size_t> kept;       // original indices, in the order of `reduced`
  Integer finite_order = 1;            // |F|

  const std::vector<IntVector>& base_change() const { return lattice.basis(); }
};

Reduction reduce_to_connected_isotropy(const WeightSystem& w);

Z2Set mod2_weights(const WeightSystem& w);

struct SplitResult {
  SubgroupSpec h;
  Sublattice l1{0}, l2{0};
  IntVector rho1_weight;
  std::uint64_t rho1_multiplicity = 0;
  WeightSystem rho2;            // coordinates of the basis of l2
  WeightSystem fixed_weights;   // coordinates of the basis of l1
  Z2Split z2_split;             // split of the mod-2 image that produced it
  bool reduced = false;         // a finite isotropy group was divided out first
};

// Every valid split in the order used for tie-breaking (smallest L1, then L2, then h).
std::vector<SplitResult> all_s1_splits(const WeightSystem& w);
SplitResult s1_split(const WeightSystem& w);

struct IteratedSplit {
  SubgroupSpec h;
  WeightSystem induced;  // coordinates of the basis of h.annihilator
};

IteratedSplit iterated_split(const WeightSystem& w, std::size_t steps);

struct TheoremEResult {
  std::size_t count = 0;
  std::size_t bound = 0;
  bool bound_holds = true;
  // Present when count == bound and the extremal shape was confirmed.
  std::optional<std::vector<IntVector>> basis;
  bool classification_holds = true;
};

TheoremEResult verify_theorem_e(const WeightSystem& w);

}  // namespace toruskit
