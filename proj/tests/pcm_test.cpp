#include "conefix/pcm.hpp"

#include <gtest/gtest.h>

#include "conefix/catalog.hpp"
#include "test_support.hpp"

namespace conefix {
namespace {

Point<double> p1(double x) { return Point<double>::Constant(1, x); }

Point<double> pt(std::initializer_list<double> xs) {
  Point<double> p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

ConeVector<double> v2(double a, double b) {
  ConeVector<double> v(2);
  v << a, b;
  return v;
}

TEST(PcmEval, ExampleOneSpace) {
  const auto space = make_r2_max_space(3, 3.0);
  EXPECT_EQ(pcm_eval(space, p1(1), p1(2)), v2(2, 6));
  for (double k : {0.0, 0.5, 2.0}) {
    const auto s = make_r2_max_space(k, 3.0);
    for (double x : {0.0, 0.3, 2.5}) EXPECT_EQ(pcm_eval(s, p1(x), p1(x)), v2(x, k * x));
  }
}

TEST(PcmEval, L1SpaceIsCoordinatewiseJoin) {
  const auto space = make_l1_max_space(3, 3.0);
  EXPECT_EQ(pcm_eval(space, pt({1, 0, 2}), pt({0, 3, 2})), (pt({1, 3, 2})));
}

TEST(PcmEval, OutsideDomainIsDomainError) {
  const auto space = make_r2_max_space(1);
  EXPECT_THROW(pcm_eval(space, p1(1.0), p1(0.1)), DomainError);
  EXPECT_THROW(pcm_eval(space, p1(-0.5), p1(0.1)), DomainError);
  EXPECT_THROW(pcm_eval(space, pt({0.1, 0.1}), p1(0.1)), StructuralError);
}

TEST(PcmEval, MetricOutputDimensionChecked) {
  const Space bad("bad", AmbientSpace<double>(3), p1(0), p1(1),
                  [](const Point<double>& x, const Point<double>&) { return ConeVector<double>(x); });
  EXPECT_THROW(pcm_eval(bad, p1(0.5), p1(0.5)), StructuralError);
}

TEST(CheckAxioms, ExampleOneSpacePasses) {
  const auto space = make_r2_max_space(2);
  const auto report = check_axioms(space, 17, 10000);
  EXPECT_EQ(report.samples_checked, 10000);
  EXPECT_TRUE(report.pass());
}

// Oracle for the mutated metric: any pair x > y > 0 has p(x,x) = x > y = min{x,y}.
TEST(CheckAxioms, MinMetricViolatesPcm1) {
  const auto space = make_r2_min_space(2);
  const double x = 0.7, y = 0.2;
  ASSERT_GT(std::min(x, x), std::min(x, y));

  const auto report = check_axioms(space, 3, 10000);
  ASSERT_FALSE(report.pass());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.axiom != Axiom::pcm1) continue;
    found = true;
    // Witnesses are (a, b) with a > b, and the slack p(a,b) - p(a,a) is negative.
    EXPECT_GT(v.witnesses[0][0], v.witnesses[1][0]);
    EXPECT_LT(v.slack.minCoeff(), 0.0);
  }
  EXPECT_TRUE(found);
}

TEST(CheckAxioms, DiagonalTripleNeverViolates) {
  for (const auto& space : {make_r2_max_space(1), make_l1_max_space(4), make_r2_min_space(1)}) {
    auto sampler = space.sampler(5);
    for (int i = 0; i < 500; ++i) {
      const auto x = sampler.draw();
      std::vector<AxiomViolation<double>> out;
      check_axioms_at(space, x, x, x, out);
      EXPECT_TRUE(out.empty()) << space.name();
    }
  }
}

TEST(CheckAxioms, AsymmetricMetricViolatesPcm3) {
  const Space skew("skew", AmbientSpace<double>(2), p1(0), p1(1),
                   [](const Point<double>& x, const Point<double>& y) { return v2(std::max(x[0], y[0]), x[0]); });
  const auto report = check_axioms(skew, 1, 200);
  bool pcm3 = false;
  for (const auto& v : report.violations) pcm3 = pcm3 || v.axiom == Axiom::pcm3;
  EXPECT_TRUE(pcm3);
}

TEST(CheckAxioms, ConstantMetricViolatesPcm2) {
  const Space flat("flat", AmbientSpace<double>(2), p1(0), p1(1),
                   [](const Point<double>&, const Point<double>&) { return v2(1, 1); });
  const auto report = check_axioms(flat, 1, 200);
  bool pcm2 = false;
  for (const auto& v : report.violations) pcm2 = pcm2 || v.axiom == Axiom::pcm2;
  EXPECT_TRUE(pcm2);
}

TEST(CheckAxioms, SquaredDistanceViolatesPcm4) {
  // (x - y)^2 satisfies PCM1-3 but not the triangle law: x=0, y=1, z=1/2 gives 1 > 1/4 + 1/4.
  const Space sq("sq", AmbientSpace<double>(2), p1(0), p1(1), [](const Point<double>& x, const Point<double>& y) {
    const double d = (x[0] - y[0]) * (x[0] - y[0]);
    return v2(d, d);
  });
  const auto report = check_axioms(sq, 4, 2000);
  bool pcm4 = false;
  for (const auto& v : report.violations) pcm4 = pcm4 || v.axiom == Axiom::pcm4;
  EXPECT_TRUE(pcm4);
}

TEST(InducedMetric, Examples) {
  const auto r2 = make_r2_max_space(1, 3.0);
  EXPECT_EQ(induced_metric(r2, p1(1), p1(2)), v2(1, 1));
  EXPECT_EQ(induced_metric(r2, p1(0.4), p1(0.4)), v2(0, 0));
  const auto l1 = make_l1_max_space(2, 3.0);
  EXPECT_EQ(induced_metric(l1, pt({1, 0}), pt({0, 1})), (pt({1, 1})));
}

TEST(InducedMetric, PropertiesOnSampledTriples) {
  for (const auto& space : {make_r2_max_space(1), make_r2_max_space(2.5), make_l1_max_space(8)}) {
    const auto& amb = space.ambient();
    auto sampler = space.sampler(41);
    for (int i = 0; i < 10000; ++i) {
      const auto x = sampler.draw();
      const auto y = sampler.coin(0.1) ? x : sampler.draw();
      const auto z = sampler.draw();
      const auto dxy = induced_metric(space, x, y);
      EXPECT_TRUE(induced_metric(space, x, x).isZero(0.0));
      EXPECT_EQ(dxy, induced_metric(space, y, x));
      EXPECT_TRUE(cone_contains(amb, dxy));
      const ConeVector<double> tri = induced_metric(space, x, z) + induced_metric(space, z, y) - dxy;
      EXPECT_GE(tri.minCoeff(), -4 * amb.order_tolerance());
      // PCM1 + symmetry: p(x,y) dominates both self-distances.
      EXPECT_TRUE(leq(amb, pcm_eval(space, x, x), pcm_eval(space, x, y)));
      EXPECT_TRUE(leq(amb, pcm_eval(space, y, y), pcm_eval(space, x, y)));
    }
  }
}

TEST(IsConverged, Examples) {
  const auto space = make_r2_max_space(1);
  std::vector<Point<double>> tail{p1(0.3), p1(1e-12)};
  EXPECT_TRUE(is_converged<double>(space, tail, p1(0.0), 1e-8));
  EXPECT_TRUE(is_converged<double>(space, tail, tail.back(), 1e-300));
  std::vector<Point<double>> far{p1(0.5)};
  EXPECT_FALSE(is_converged<double>(space, far, p1(0.0), 1e-8));
  std::vector<Point<double>> none;
  EXPECT_THROW(is_converged<double>(space, none, p1(0.0), 1e-8), StructuralError);
}

TEST(IsConverged, CandidateEqualToLastPoint) {
  const auto space = make_l1_max_space(3);
  auto sampler = space.sampler(8);
  for (int i = 0; i < 100; ++i) {
    std::vector<Point<double>> tail{sampler.draw()};
    EXPECT_TRUE(is_converged<double>(space, tail, tail.back(), 1e-300));
  }
}

TEST(CauchyResidual, Examples) {
  const auto r2 = make_r2_max_space(1);
  EXPECT_EQ(cauchy_residual(r2, p1(0), p1(0)), 0.0);
  EXPECT_EQ(cauchy_residual(r2, p1(0.25), p1(0.5)), 0.5);
  const auto l1 = make_l1_max_space(2);
  EXPECT_NEAR(cauchy_residual(l1, pt({0, 0}), pt({0.1, 0.2})), 0.3, 1e-15);
}

}  // namespace
}  // namespace conefix
