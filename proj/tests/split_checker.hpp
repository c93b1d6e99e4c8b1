// Independent verification of circle-splitting output.
#pragma once

#include <string>

#include "oracles.hpp"
#include "toruskit/weights.hpp"

namespace oracle {

// Empty when every invariant holds, otherwise the first broken one.
inline std::string check_split(const toruskit::WeightSystem& w, const toruskit::SplitResult& s) {
  const std::size_t d = w.rank();
  const auto& b1 = s.l1.basis();
  const auto& b2 = s.l2.basis();
  if (rank(b1) != d - 1 || b1.size() != d - 1) return "L1 is not of corank one";
  if (rank(b2) != d - 2 || b2.size() != d - 2) return "L2 is not of corank two";
  for (const auto& v : b2)
    if (!integral_coordinates(b1, v)) return "L2 is not contained in L1";

  // Weights trivial on H are exactly h and those in L2.
  const IntVector& h = s.rho1_weight;
  std::vector<std::size_t> in_l1;
  bool h_seen = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& e = w.weights()[i];
    if (!integral_coordinates(b1, e)) continue;
    in_l1.push_back(i);
    bool in_l2 = b2.empty() ? false : integral_coordinates(b2, e).has_value();
    if (e == up_to_sign(h)) {
      h_seen = true;
      if (in_l2) return "h lies in L2";
    } else if (!in_l2) {
      return "L1 contains a weight other than h outside L2: " + e.to_string();
    }
  }
  if (!h_seen) return "h is not a weight in L1";
  if (!b2.empty() && solve(b2, h)) return "h lies in the span of L2";

  // L1 = Z h + L2, so the quotient torus is a product and h is primitive there.
  std::vector<IntVector> coords;
  for (const auto& v : b2) {
    auto c = integral_coordinates(b1, v);
    coords.push_back(IntVector(std::vector<Integer>(c->begin(), c->end())));
  }
  auto ch = integral_coordinates(b1, h);
  coords.push_back(IntVector(std::vector<Integer>(ch->begin(), ch->end())));
  std::vector<std::vector<Integer>> m;
  for (const auto& r : coords) m.emplace_back(r.begin(), r.end());
  Integer dt = det(m);
  if (dt != 1 && dt != -1) return "h and L2 do not span L1";
  if (minor_gcd({coords.back()}) != 1) return "h is not primitive in L1";

  // Induced representation: the weights in L1, expressed in the basis of L1, faithful.
  if (s.fixed_weights.size() != in_l1.size()) return "fixed weights do not match the weights in L1";
  std::vector<IntVector> fixed_coords;
  for (std::size_t k = 0; k < s.fixed_weights.size(); ++k) {
    const auto& f = s.fixed_weights.weights()[k];
    IntVector back(d);
    for (std::size_t j = 0; j < f.size(); ++j) back += f[j] * b1[j];
    back = up_to_sign(back);
    bool found = false;
    for (auto i : in_l1) {
      if (w.weights()[i] == back) {
        found = w.multiplicities()[i] == s.fixed_weights.multiplicities()[k];
        break;
      }
    }
    if (!found) return "fixed weight " + f.to_string() + " has no matching weight";
    fixed_coords.push_back(f);
  }
  if (!faithful(fixed_coords, d - 1)) return "induced representation is not faithful";
  if (s.rho2.size() + 1 != in_l1.size()) return "rho2 does not carry the weights of L2";
  return {};
}

}  // namespace oracle
