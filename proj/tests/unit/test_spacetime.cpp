#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qcausal/random.hpp"
#include "qcausal/spacetime.hpp"

using namespace qcausal;

namespace {

// Grid over the diamond in null coordinates, corners included.
std::vector<Event> diamond_grid(const Diamond& d, int n) {
  std::vector<Event> pts;
  const double u0 = d.center.t + d.center.x;
  const double v0 = d.center.t - d.center.x;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double u = u0 - d.radius + 2.0 * d.radius * a / (n - 1);
      const double v = v0 - d.radius + 2.0 * d.radius * b / (n - 1);
      pts.push_back({0.5 * (u + v), 0.5 * (u - v)});
    }
  }
  return pts;
}

CausalRelation sampled_relation(const Diamond& a, const Diamond& b) {
  bool all_space = true, all_future = true, all_past = true;
  for (const auto& p : diamond_grid(a, 10)) {
    for (const auto& q : diamond_grid(b, 10)) {
      const auto c = classify_points(p, q);
      all_space &= c.relation == CausalRelation::SpaceLike;
      all_future &= c.relation == CausalRelation::TimeLikeFuture;
      all_past &= c.relation == CausalRelation::TimeLikePast;
    }
  }
  if (all_space) return CausalRelation::SpaceLike;
  if (all_future) return CausalRelation::TimeLikeFuture;
  if (all_past) return CausalRelation::TimeLikePast;
  return CausalRelation::Neither;
}

bool respects_time_order(const std::vector<Region>& regions, const std::vector<std::size_t>& order,
                         const LatticeModel* model) {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = 0; j < regions.size(); ++j)
      if (classify_regions(regions[i], regions[j], model) == CausalRelation::TimeLikeFuture &&
          pos[i] > pos[j])
        return false;
  return true;
}

}  // namespace

TEST(ClassifyPoints, Examples) {
  EXPECT_EQ(classify_points({0, 0}, {0, 5}).relation, CausalRelation::SpaceLike);
  EXPECT_EQ(classify_points({0, 0}, {5, 0}).relation, CausalRelation::TimeLikeFuture);
  EXPECT_EQ(classify_points({5, 0}, {0, 0}).relation, CausalRelation::TimeLikePast);
  const auto null = classify_points({0, 0}, {1, 1});
  EXPECT_EQ(null.relation, CausalRelation::Neither);
  EXPECT_TRUE(null.lightlike);
  EXPECT_FALSE(classify_points({0, 0}, {0, 5}).lightlike);
}

TEST(ClassifyRegions, DiamondExamples) {
  const Diamond o{{0, 0}, 1};
  EXPECT_EQ(classify_regions(o, Diamond{{0, 5}, 1}), CausalRelation::SpaceLike);
  EXPECT_EQ(classify_regions(o, Diamond{{5, 0}, 1}), CausalRelation::TimeLikeFuture);
  EXPECT_EQ(classify_regions(o, Diamond{{2, 2}, 1}), CausalRelation::Neither);
  // The witness pairs quoted for the last case.
  EXPECT_EQ(classify_points({-1, 0}, {3, 2}).relation, CausalRelation::TimeLikeFuture);
  EXPECT_EQ(classify_points({1, 0}, {2, 3}).relation, CausalRelation::SpaceLike);
}

TEST(ClassifyRegions, ClosedFormMatchesSamplingOracle) {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> c(-6.0, 6.0), r(0.2, 2.0);
  int non_neither = 0;
  for (int k = 0; k < 200; ++k) {
    const Diamond a{{c(rng), c(rng)}, r(rng)};
    const Diamond b{{c(rng), c(rng)}, r(rng)};
    const auto closed = classify_regions(a, b);
    EXPECT_EQ(closed, sampled_relation(a, b)) << k;
    non_neither += closed != CausalRelation::Neither;
  }
  EXPECT_GT(non_neither, 40);  // the sample exercises every branch, not just Neither
}

TEST(ClassifyRegions, SymmetryOverRandomPairs) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(-6.0, 6.0), r(0.1, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const Diamond a{{c(rng), c(rng)}, r(rng)};
    const Diamond b{{c(rng), c(rng)}, r(rng)};
    EXPECT_EQ(classify_regions(b, a), reversed(classify_regions(a, b)));
  }
  const LatticeModel m{5, 4, false};
  const auto regions = m.all_regions();
  for (const auto& a : regions)
    for (const auto& b : regions)
      ASSERT_EQ(classify_regions(b, a, m), reversed(classify_regions(a, b, m)));
}

TEST(ClassifyRegions, MixedKindsRejected) {
  const LatticeModel m{3, 2, false};
  EXPECT_THROW(classify_regions(Region{Diamond{{0, 0}, 1}}, Region{LatticeInterval{0, 0, 0}}, &m),
               ValidationError);
  EXPECT_THROW(classify_regions(Region{LatticeInterval{0, 0, 0}}, Region{LatticeInterval{1, 0, 0}}),
               ValidationError);
  EXPECT_THROW(validate(Diamond{{0, 0}, 0.0}), ValidationError);
}

TEST(Lattice, LightConeRule) {
  const LatticeModel m{4, 3, false};
  using LI = LatticeInterval;
  EXPECT_EQ(classify_regions(LI{0, 0, 0}, LI{0, 2, 3}, m), CausalRelation::SpaceLike);
  EXPECT_EQ(classify_regions(LI{0, 0, 0}, LI{1, 2, 2}, m), CausalRelation::SpaceLike);
  EXPECT_EQ(classify_regions(LI{0, 0, 0}, LI{1, 1, 1}, m), CausalRelation::TimeLikeFuture);
  EXPECT_EQ(classify_regions(LI{0, 0, 0}, LI{1, 0, 1}, m), CausalRelation::TimeLikeFuture);
  EXPECT_EQ(classify_regions(LI{0, 0, 1}, LI{0, 1, 2}, m), CausalRelation::Neither);  // overlap
  EXPECT_EQ(classify_regions(LI{0, 0, 0}, LI{1, 0, 2}, m), CausalRelation::Neither);  // partly outside cone
  EXPECT_EQ(classify_regions(LI{2, 0, 0}, LI{0, 0, 0}, m), CausalRelation::TimeLikePast);
  EXPECT_THROW(m.validate(LI{0, 2, 1}), ValidationError);
  EXPECT_THROW(m.validate(LI{0, 0, 4}), ValidationError);
  EXPECT_THROW(m.validate(LI{3, 0, 0}), ValidationError);
}

TEST(Lattice, PeriodicRingDistanceAndWrapping) {
  const LatticeModel m{4, 2, true};
  EXPECT_EQ(m.distance(0, 3), 1u);
  EXPECT_EQ(m.sites(LatticeInterval{0, 3, 0}), (std::vector<std::size_t>{3, 0}));
  EXPECT_EQ(classify_regions(LatticeInterval{0, 0, 0}, LatticeInterval{1, 3, 3}, m),
            CausalRelation::TimeLikeFuture);
}

TEST(CausalSort, Examples) {
  std::vector<Region> space{Diamond{{0, 0}, 1}, Diamond{{0, 5}, 1}, Diamond{{0, 10}, 1}};
  EXPECT_EQ(causal_sort(space), (std::vector<std::size_t>{0, 1, 2}));

  std::vector<Region> chain{Diamond{{10, 0}, 1}, Diamond{{5, 0}, 1}, Diamond{{0, 0}, 1}};
  EXPECT_EQ(causal_sort(chain), (std::vector<std::size_t>{2, 1, 0}));

  std::vector<Region> mixed{Diamond{{10, 2}, 1}, Diamond{{0, 0}, 1}, Diamond{{0, 4}, 1}};
  const auto order = causal_sort(mixed);
  EXPECT_EQ(order, (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_TRUE(respects_time_order(mixed, order, nullptr));
}

TEST(CausalSort, RefusesNeitherWithPair) {
  std::vector<Region> r{Diamond{{0, 0}, 1}, Diamond{{0, 9}, 1}, Diamond{{2, 2}, 1}};
  try {
    causal_sort(r);
    FAIL();
  } catch (const CausalConfigurationError& e) {
    EXPECT_EQ(e.offending_pair(), (std::array<std::size_t, 2>{0, 2}));
  }
}

TEST(CausalSort, RandomLatticeSetsRespectOrder) {
  const LatticeModel m{5, 4, false};
  const auto all = m.all_regions();
  Sampler s(2);
  int sorted = 0;
  for (int k = 0; k < 500; ++k) {
    std::vector<Region> pick;
    for (int n = 0; n < 3; ++n) pick.emplace_back(all[s.index(all.size())]);
    try {
      const auto order = causal_sort(pick, &m);
      ASSERT_TRUE(respects_time_order(pick, order, &m));
      ++sorted;
    } catch (const CausalConfigurationError&) {
    }
  }
  EXPECT_GT(sorted, 20);
}

TEST(Boost, Examples) {
  const Event e{1.5, -2.0};
  const Event same = boost_event(e, 0.0);
  EXPECT_EQ(same.t, e.t);
  EXPECT_EQ(same.x, e.x);
  const Event o = boost_event({0, 0}, 0.7);
  EXPECT_EQ(o.t, 0.0);
  EXPECT_EQ(o.x, 0.0);
  const Event b = boost_event({0, 10}, 0.5);
  EXPECT_NEAR(b.t, -5.773502691896258, 1e-12);
  EXPECT_NEAR(b.x, 11.547005383792516, 1e-12);
  EXPECT_THROW(boost_event(e, 1.0), ValidationError);
  EXPECT_THROW(lorentz_gamma(-1.5), ValidationError);
}

TEST(Boost, ClassificationInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-10.0, 10.0), vel(-0.95, 0.95);
  for (int k = 0; k < 500; ++k) {
    const Event p{c(rng), c(rng)};
    const Event q{c(rng), c(rng)};
    const double v = vel(rng);
    EXPECT_EQ(classify_points(boost_event(p, v), boost_event(q, v)).relation,
              classify_points(p, q).relation);
  }
}

TEST(Poincare, AffineCommutators) {
  const auto r = poincare_commutator_check();
  EXPECT_EQ(r.residual_KP_minus_H, 0.0);
  EXPECT_EQ(r.residual_KH_minus_P, 0.0);
  EXPECT_EQ(r.residual_HP, 0.0);
  EXPECT_EQ(r.KP_commutator, r.H);
  EXPECT_EQ(r.KH_commutator, r.P);
  EXPECT_TRUE(r.passed());
  // Explicit 3x3: H = e_{0,2}, P = e_{1,2}, K = e_{0,1} + e_{1,0}.
  EXPECT_EQ(r.H[0][2], 1);
  EXPECT_EQ(r.P[1][2], 1);
  EXPECT_EQ(r.K[0][1], 1);
  EXPECT_EQ(r.K[1][0], 1);
}

TEST(Poincare, ElementActsAsBoostThenTranslation) {
  const Event e = apply(PoincareElement{0.5, 1.0, -2.0}, {0, 10});
  EXPECT_NEAR(e.t, -5.773502691896258 + 1.0, 1e-12);
  EXPECT_NEAR(e.x, 11.547005383792516 - 2.0, 1e-12);
}
