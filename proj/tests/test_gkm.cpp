#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "toruskit/errors.hpp"
#include "toruskit/gkm.hpp"

using namespace toruskit;

namespace {

using FC = FixedComponent;

IntVector e(std::size_t d, std::size_t i) { return IntVector::unit(d, i); }

// Labels between i and j as a sorted list of primitive representatives.
std::vector<IntVector> labels(const SkeletonGraph& g, std::size_t i, std::size_t j) {
  std::vector<IntVector> out;
  for (const auto& eg : g.edges())
    if ((eg.i == i && eg.j == j) || (eg.i == j && eg.j == i))
      for (std::size_t c = 0; c < eg.count; ++c) out.push_back(eg.label);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntVector> prim(std::vector<IntVector> vs) {
  for (auto& v : vs) v = v.primitive();
  std::sort(vs.begin(), vs.end());
  return vs;
}

// Generic characters: pairwise differences and sums are nonzero and nonparallel.
std::vector<IntVector> generic_u(gen::Rng& rng, std::size_t k, std::size_t d, bool hp) {
  while (true) {
    std::vector<IntVector> u;
    for (std::size_t i = 0; i < k; ++i) u.push_back(gen::random_vector(rng, d, -4, 4));
    std::vector<IntVector> combos;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        combos.push_back(u[i] - u[j]);
        if (hp) combos.push_back(u[i] + u[j]);
      }
    bool ok = true;
    for (std::size_t a = 0; a < combos.size() && ok; ++a) {
      if (combos[a].is_zero()) ok = false;
      for (std::size_t b = a + 1; b < combos.size() && ok; ++b)
        if (!combos[b].is_zero() && parallel(combos[a], combos[b])) ok = false;
    }
    if (ok) return u;
  }
}

// Standard linear model: at block i the complex weights are u_j - u_i (CP) or
// u_i +- u_j (HP), each with multiplicity n_j + 1.
std::map<IntVector, std::uint64_t> linear_model_weights(ModelType type, const std::vector<FC>& comps,
                                                        const std::vector<IntVector>& u, std::size_t i) {
  std::map<IntVector, std::uint64_t> out;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    if (j == i) continue;
    const std::uint64_t mult = comps[j].euler_characteristic();
    out[(u[i] - u[j]).primitive()] += mult;
    if (type == ModelType::HP) out[(u[i] + u[j]).primitive()] += mult;
  }
  return out;
}

}  // namespace

TEST(FixedComponent, Bookkeeping) {
  EXPECT_EQ(FC::point().euler_characteristic(), 1u);
  EXPECT_EQ(FC::cp(3).euler_characteristic(), 4u);
  EXPECT_EQ(FC::hp(2).euler_characteristic(), 3u);
  EXPECT_EQ(FC::sphere(6).euler_characteristic(), 2u);
  EXPECT_EQ(FC::cp(2).generator_multiplicity(), 1u);
  EXPECT_EQ(FC::hp(1).generator_multiplicity(), 2u);
  EXPECT_THROW((FC{3, ComponentType::CP}).validate(), MalformedInput);
  EXPECT_THROW((FC{2, ComponentType::Point}).validate(), MalformedInput);
  EXPECT_EQ(parse_component_type("hp"), ComponentType::HP);
}

TEST(SkeletonGraph, StructuralChecks) {
  // zero label on an edge between distinct vertices
  EXPECT_THROW(SkeletonGraph(2, 2, {FC::point(), FC::point()}, {{0, 1, IntVector{0, 0}, 1}}, {}), MalformedInput);
  // loop at an isolated point
  EXPECT_THROW(SkeletonGraph(2, 2, {FC::point(), FC::point()}, {{0, 1, e(2, 0), 1}}, {{0, IntVector{0, 0}, 1}}),
               MalformedInput);
  // odd ambient dimension
  EXPECT_THROW(SkeletonGraph(2, 3, {FC::point(), FC::point()}, {{0, 1, e(2, 0), 1}}, {}), MalformedInput);
  // labels become primitive with the canonical sign, endpoints ordered
  SkeletonGraph g(2, 2, {FC::point(), FC::point()}, {{1, 0, IntVector{-2, 4}, 1}}, {});
  EXPECT_EQ(g.edges()[0].i, 0u);
  EXPECT_EQ(g.edges()[0].label, (IntVector{1, -2}));
}

TEST(BuildModelGraph, CpTriangle) {
  auto g = build_model_graph(ModelType::CP, 4, {FC::point(), FC::point(), FC::point()}, {e(2, 0), e(2, 1), IntVector(2)});
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(labels(g, 0, 1), (std::vector<IntVector>{IntVector{1, -1}}));
  EXPECT_EQ(labels(g, 0, 2), (std::vector<IntVector>{e(2, 0)}));
  EXPECT_EQ(labels(g, 1, 2), (std::vector<IntVector>{e(2, 1)}));
  EXPECT_TRUE(g.loops().empty());
}

TEST(BuildModelGraph, HpPair) {
  auto g = build_model_graph(ModelType::HP, 4, {FC::point(), FC::point()}, {e(2, 0), e(2, 1)});
  EXPECT_EQ(labels(g, 0, 1), prim({IntVector{1, -1}, IntVector{1, 1}}));
}

TEST(BuildModelGraph, SingleCp2Vertex) {
  auto g = build_model_graph(ModelType::CP, 4, {FC::cp(2)}, {e(2, 0)});
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.loop_count(0), 1u);
  EXPECT_TRUE(g.loops()[0].label.is_zero());
  auto rep = validate_skeleton(g);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.chi, 3u);
}

TEST(BuildModelGraph, Preconditions) {
  EXPECT_THROW(build_model_graph(ModelType::CP, 6, {FC::point(), FC::point()}, {e(2, 0), e(2, 1)}), PreconditionError);
  EXPECT_THROW(build_model_graph(ModelType::CP, 2, {FC::point(), FC::point()}, {e(2, 0), e(2, 0)}), PreconditionError);
  EXPECT_THROW(build_model_graph(ModelType::HP, 4, {FC::point(), FC::point()}, {e(2, 0), -e(2, 0)}),
               PreconditionError);
}

TEST(ValidateSkeleton, ModelsAndSphere) {
  auto cp = validate_skeleton(
      build_model_graph(ModelType::CP, 4, {FC::point(), FC::point(), FC::point()}, {e(3, 0), e(3, 1), e(3, 2)}));
  EXPECT_TRUE(cp.ok);
  EXPECT_EQ(cp.m, 1u);
  EXPECT_EQ(cp.chi, 3u);

  auto hp = validate_skeleton(
      build_model_graph(ModelType::HP, 8, {FC::point(), FC::point(), FC::point()}, {e(3, 0), e(3, 1), e(3, 2)}));
  EXPECT_TRUE(hp.ok);
  EXPECT_EQ(hp.m, 2u);
  EXPECT_EQ(hp.chi, 3u);

  for (std::size_t m = 1; m <= 4; ++m) {
    SkeletonGraph sphere(2, 2 * m, {FC::point(), FC::point()}, {{0, 1, e(2, 0), m}}, {});
    auto rep = validate_skeleton(sphere);
    EXPECT_TRUE(rep.ok) << rep.detail;
    EXPECT_EQ(rep.chi, 2u);
    EXPECT_EQ(rep.m, m);
  }
}

TEST(ValidateSkeleton, NamesTheViolatedClause) {
  SkeletonGraph uneven(2, 4, {FC::point(), FC::point(), FC::point()},
                       {{0, 1, e(2, 0), 1}, {0, 2, e(2, 1), 2}, {1, 2, IntVector{1, 1}, 1}}, {});
  auto a = validate_skeleton(uneven);
  EXPECT_FALSE(a.ok);
  EXPECT_EQ(a.clause, "uniform-multiplicity");

  SkeletonGraph euler(2, 6, {FC::point(), FC::point(), FC::point()},
                      {{0, 1, e(2, 0), 1}, {0, 2, e(2, 1), 1}, {1, 2, IntVector{1, 1}, 1}}, {});
  auto b = validate_skeleton(euler);
  EXPECT_FALSE(b.ok);
  EXPECT_EQ(b.clause, "euler-formula");

  SkeletonGraph loops(2, 4, {FC::cp(1), FC::point()}, {{0, 1, e(2, 0), 1}}, {});
  auto c = validate_skeleton(loops);
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.clause, "loop-count");

  // m = 3 with a four-dimensional component and n != 6
  SkeletonGraph mult(2, 24, {FC::cp(2), FC::cp(1)}, {{0, 1, e(2, 0), 3}},
                     {{0, IntVector{0, 0}, 3}, {1, IntVector{0, 0}, 3}});
  auto m = validate_skeleton(mult);
  EXPECT_FALSE(m.ok);
  EXPECT_EQ(m.clause, "multiplicity-values");
}

TEST(IsotropyRep, CpTrianglePoints) {
  auto g = build_model_graph(ModelType::CP, 4, {FC::point(), FC::point(), FC::point()}, {e(2, 0), e(2, 1), IntVector(2)});
  auto w = isotropy_rep_at(g, 2);
  EXPECT_EQ(prim(w.weights()), prim({e(2, 0), e(2, 1)}));
  for (auto m : w.multiplicities()) EXPECT_EQ(m, 1u);
  EXPECT_EQ(w.trivial_multiplicity(), 0u);
}

TEST(IsotropyRep, HpWithMultiplicityTwo) {
  // HP^2 with an isolated point (u = e1) and an HP^1 (u = 0)
  auto g = build_model_graph(ModelType::HP, 8, {FC::point(), FC::hp(1)}, {e(2, 0), IntVector(2)});
  EXPECT_TRUE(validate_skeleton(g).ok);
  auto w = isotropy_rep_at(g, 0);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w.weights()[0], e(2, 0));
  EXPECT_EQ(w.multiplicities()[0], 4u);
  auto at_hp = isotropy_rep_at(g, 1);
  EXPECT_EQ(at_hp.trivial_multiplicity(), 4u);
  EXPECT_EQ(at_hp.multiplicities()[0], 2u);
}

TEST(IsotropyRep, ZeroLoopGivesTrivialSummand) {
  auto g = build_model_graph(ModelType::CP, 6, {FC::cp(1), FC::point(), FC::point()},
                             {e(3, 0), e(3, 1), e(3, 2)});
  auto w = isotropy_rep_at(g, 0);
  EXPECT_EQ(w.trivial_multiplicity(), 2u);
  EXPECT_EQ(w.size(), 2u);
}

TEST(IsotropyRep, InconsistentReconstruction) {
  // two spheres at a point cannot account for n = 6
  SkeletonGraph g(2, 6, {FC::point(), FC::point()}, {{0, 1, e(2, 0), 1}, {0, 1, e(2, 1), 1}}, {});
  EXPECT_THROW(isotropy_rep_at(g, 0), PreconditionError);
}

TEST(FitLinearModel, CpTriangle) {
  SkeletonGraph g(3, 4, {FC::point(), FC::point(), FC::point()},
                  {{0, 1, IntVector{1, -1, 0}, 1}, {1, 2, IntVector{0, 1, -1}, 1}, {0, 2, IntVector{1, 0, -1}, 1}}, {});
  auto fit = fit_linear_model(g, ModelType::CP);
  ASSERT_TRUE(fit.ok) << fit.detail;
  EXPECT_EQ(fit.model.u, normalize_gauge(ModelType::CP, {e(3, 0), e(3, 1), e(3, 2)}));
}

TEST(FitLinearModel, HpHiddenModelWithScaledLabels) {
  gen::Rng rng(41);
  std::vector<IntVector> u{{1, 0}, {0, 1}, {1, 1}};
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<EdgeGroup> edges;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        for (int s : {-1, 1}) {
          Integer k = gen::uniform(rng, 1, 5) * (gen::uniform(rng, 0, 1) ? 1 : -1);
          IntVector label = u[i] + Integer(s) * u[j];
          if (gen::uniform(rng, 0, 1)) {
            edges.push_back({i, j, k * label, 1});
          } else {
            edges.push_back({j, i, k * label, 1});
          }
        }
    SkeletonGraph g(2, 8, {FC::point(), FC::point(), FC::point()}, edges, {});
    auto fit = fit_linear_model(g, ModelType::HP);
    ASSERT_TRUE(fit.ok) << fit.detail;
    EXPECT_EQ(fit.model.u, normalize_gauge(ModelType::HP, u));
  }
}

TEST(FitLinearModel, SingleEdgeIsGaugeComplete) {
  SkeletonGraph g(2, 2, {FC::point(), FC::point()}, {{0, 1, IntVector{3, 1}, 1}}, {});
  auto fit = fit_linear_model(g, ModelType::CP);
  ASSERT_TRUE(fit.ok);
  ASSERT_EQ(fit.model.u.size(), 2u);
  EXPECT_TRUE(parallel(fit.model.u[0] - fit.model.u[1], IntVector{3, 1}));
}

TEST(FitLinearModel, RejectsWrongModeAndCayleyCount) {
  auto hp = build_model_graph(ModelType::HP, 8, {FC::point(), FC::point(), FC::point()}, {e(3, 0), e(3, 1), e(3, 2)});
  EXPECT_THROW(fit_linear_model(hp, ModelType::CP), PreconditionError);
  SkeletonGraph m4(2, 8, {FC::point(), FC::point()},
                   {{0, 1, e(2, 0), 1}, {0, 1, e(2, 1), 1}, {0, 1, IntVector{1, 1}, 1}, {0, 1, IntVector{1, -1}, 1}},
                   {});
  EXPECT_THROW(fit_linear_model(m4, ModelType::HP), PreconditionError);
}

TEST(NormalizeGauge, ShiftAndSignInvariance) {
  std::vector<IntVector> u{{2, 1}, {0, 3}, {-1, 1}};
  auto a = normalize_gauge(ModelType::CP, u);
  std::vector<IntVector> shifted;
  for (const auto& v : u) shifted.push_back(Integer(-3) * (v + IntVector{5, -7}));
  EXPECT_EQ(normalize_gauge(ModelType::CP, shifted), a);
  EXPECT_TRUE(a[0].is_zero());

  auto h = normalize_gauge(ModelType::HP, u);
  std::vector<IntVector> flipped{-u[0], u[1], Integer(1) * -u[2]};
  EXPECT_EQ(normalize_gauge(ModelType::HP, flipped), h);
}

// ---- properties ---------------------------------------------------------

TEST(GkmProperties, ModelGraphsValidateWithTheirParameters) {
  gen::Rng rng(42);
  for (int iter = 0; iter < 200; ++iter) {
    const bool hp = iter % 2;
    const ModelType type = hp ? ModelType::HP : ModelType::CP;
    std::size_t k = 2 + iter % 4;
    std::vector<FC> comps;
    std::size_t chi = 0;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t n_i = hp ? 0 : static_cast<std::size_t>(gen::uniform(rng, 0, 2));
      comps.push_back(FC::cp(n_i));
      chi += n_i + 1;
    }
    std::size_t n = hp ? 4 * (chi - 1) : 2 * (chi - 1);
    auto u = generic_u(rng, k, 3, hp);
    auto g = build_model_graph(type, n, comps, u);
    auto rep = validate_skeleton(g);
    ASSERT_TRUE(rep.ok) << rep.clause << ": " << rep.detail;
    EXPECT_EQ(rep.m, hp ? 2u : 1u);
    EXPECT_EQ(rep.chi, chi);
    EXPECT_EQ(rep.chi, n / (2 * rep.m) + 1);
    for (std::size_t i = 0; i < k; ++i) {
      auto w = isotropy_rep_at(g, i);
      std::map<IntVector, std::uint64_t> got;
      for (std::size_t a = 0; a < w.size(); ++a) got[w.weights()[a].primitive()] += w.multiplicities()[a];
      auto expect = linear_model_weights(type, comps, u, i);
      EXPECT_EQ(got, expect);
      EXPECT_EQ(w.trivial_multiplicity(), comps[i].dim);
    }
  }
}

TEST(GkmProperties, FitRecoversHiddenModel) {
  gen::Rng rng(43);
  for (int iter = 0; iter < 200; ++iter) {
    const bool hp = iter % 2;
    const ModelType type = hp ? ModelType::HP : ModelType::CP;
    std::size_t k = 2 + iter % 4;
    std::size_t d = 3 + iter % 2;
    auto u = generic_u(rng, k, d, hp);
    std::vector<FC> comps(k, FC::point());
    std::size_t n = hp ? 4 * (k - 1) : 2 * (k - 1);
    auto g = build_model_graph(type, n, comps, u);
    auto fit = fit_linear_model(g, type);
    ASSERT_TRUE(fit.ok) << fit.detail;
    EXPECT_EQ(fit.model.u, normalize_gauge(type, u));
  }
}

TEST(GkmProperties, PerturbedLabelIsRejectedWithTriangle) {
  gen::Rng rng(44);
  for (int iter = 0; iter < 100; ++iter) {
    const bool hp = iter % 2;
    const ModelType type = hp ? ModelType::HP : ModelType::CP;
    std::size_t k = 3 + iter % 3;
    std::size_t d = 4;
    auto u = generic_u(rng, k, d, hp);
    auto g = build_model_graph(type, hp ? 4 * (k - 1) : 2 * (k - 1), std::vector<FC>(k, FC::point()), u);
    auto edges = g.edges();
    std::size_t victim = static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<long>(edges.size()) - 1));
    // A replacement outside the span of all characters at a third vertex keeps
    // every triangle through this edge inconsistent.
    std::size_t i = edges[victim].i, j = edges[victim].j;
    std::size_t third = 0;
    while (third == i || third == j) ++third;
    IntVector r;
    do {
      r = gen::random_vector(rng, d, -9, 9);
    } while (oracle::rank({u[i] - u[third], u[j] - u[third], u[i] + u[third], r}) < (hp ? 4u : 3u) ||
             oracle::rank({u[i] - u[third], u[j] - u[third], r}) < 3);
    edges[victim].label = r;
    SkeletonGraph bad(d, g.dim(), g.vertices(), edges, g.loops());
    auto fit = fit_linear_model(bad, type);
    EXPECT_FALSE(fit.ok);
    EXPECT_EQ(fit.violating.size(), 3u) << (hp ? "HP " : "CP ") << fit.detail;
    EXPECT_TRUE(std::find(fit.violating.begin(), fit.violating.end(), i) != fit.violating.end());
    EXPECT_TRUE(std::find(fit.violating.begin(), fit.violating.end(), j) != fit.violating.end());
  }
}

TEST(GkmProperties, RationalRescalingKeepsVerdict) {
  gen::Rng rng(45);
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t k = 3 + iter % 3;
    auto u = generic_u(rng, k, 3, false);
    auto g = build_model_graph(ModelType::CP, 2 * (k - 1), std::vector<FC>(k, FC::point()), u);
    auto edges = g.edges();
    for (auto& eg : edges) eg.label = Integer(gen::uniform(rng, 1, 7) * (gen::uniform(rng, 0, 1) ? 1 : -1)) * eg.label;
    SkeletonGraph scaled(3, g.dim(), g.vertices(), edges, g.loops());
    auto a = fit_linear_model(g, ModelType::CP), b = fit_linear_model(scaled, ModelType::CP);
    EXPECT_EQ(a.ok, b.ok);
    EXPECT_EQ(a.model.u, b.model.u);
  }
}
