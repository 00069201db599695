#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "support/oracles.hpp"
#include "z2h/asymptotics.hpp"
#include "z2h/errors.hpp"
#include "z2h/zharmonic.hpp"

namespace z2h {
namespace {

using testing::random_axes;
using testing::random_sheet_point;

const HarmonicFamily& family21() {
  static const HarmonicFamily fam(HalfAxes({2.0, 1.0}));
  return fam;
}

TEST(F0, ValuesAgainstIndependentOracles) {
  const HalfAxes h({2.0, 1.0});
  EXPECT_EQ(f0(h, 0.0), 0.0);
  const auto integrand = [](double u) { return 1 / std::sqrt((u * u + 4) * (u * u + 1)); };
  EXPECT_NEAR(f0(h, 1.0), testing::tanh_sinh(integrand, 0, 1), 1e-10);
  EXPECT_NEAR(f0(h, -1.0), -f0(h, 1.0), 0.0);
  EXPECT_NEAR(f0_limit(h), testing::elliptic_k_agm(std::sqrt(3.0) / 2) / 2, 1e-12);
  EXPECT_NEAR(f0_limit(h), 1.078258, 1e-6);
  EXPECT_LT(f0(h, 1e3), f0_limit(h));
}

TEST(F2, VanishesWhereExpected) {
  const auto& fam = family21();
  SheetPoint sp;
  sp.mu = {1.5, 0.4, 0.0};
  sp.signs = {1, 1};
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(fam.f2(i, sp).value, 0.0);
  sp.mu = {std::sqrt(fam.roots().p[0]), 0.4, 0.9};
  EXPECT_NEAR(fam.f2(0, sp).value, 0.0, 1e-14);
}

TEST(Eval, VanishesOnCutDisc) {
  const auto& fam = family21();
  EXPECT_NEAR(fam.eval(std::vector<double>{0.5, 0.5, 0.0}, Sheet::plus), 0.0, 1e-14);
  SeededSampler rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    SheetPoint sp = random_sheet_point(fam.axes(), rng, Sheet::plus);
    sp.mu.back() = 0.0;
    EXPECT_EQ(fam.eval(sp), 0.0);
  }
}

TEST(Eval, SheetSwapFlipsSign) {
  SeededSampler rng(10);
  for (std::size_t n = 3; n <= 5; ++n) {
    const HarmonicFamily fam(HalfAxes(random_axes(n - 1, rng)));
    for (int trial = 0; trial < 10; ++trial) {
      const auto sp = random_sheet_point(fam.axes(), rng, Sheet::plus);
      EXPECT_EQ(fam.eval(sp.involution()), -fam.eval(sp)) << "n=" << n;
      const auto x = to_cartesian(fam.axes(), sp);
      EXPECT_NEAR(fam.eval(x, Sheet::minus), -fam.eval(x, Sheet::plus), 1e-13);
    }
  }
}

TEST(Eval, MatchesFarFieldQuadric) {
  const auto& fam = family21();
  const auto q = coefficients(std::vector<double>{2.0, 1.0});
  const std::vector<double> x{3.0, 0.0, 0.5};
  const double r = testing::norm(x);
  const double asym = q.a0 - q.a[0] * x[0] * x[0] - q.a[2] * x[2] * x[2];
  const double f = fam.eval(x, Sheet::plus);
  EXPECT_LT(std::abs(f - asym), 2.0 / r);
  // The monopole removes the leading remainder.
  const double b = far_field_monopole(std::vector<double>{2.0, 1.0});
  EXPECT_LT(std::abs(f - asym - b / r), std::abs(f - asym));
}

TEST(EllipsoidalHarmonic, MatchesCartesianQuadric) {
  SeededSampler rng(14);
  for (std::size_t n = 3; n <= 6; ++n) {
    const auto hv = random_axes(n - 1, rng);
    const HarmonicFamily fam{HalfAxes(hv)};
    for (int trial = 0; trial < 10; ++trial) {
      const auto sp = random_sheet_point(fam.axes(), rng, trial % 2 ? Sheet::plus : Sheet::minus);
      const auto x = to_cartesian(fam.axes(), sp);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double p = fam.roots().p[i];
        const double expect = testing::cartesian_harmonic(hv, p, x);
        EXPECT_NEAR(ellipsoidal_harmonic(fam, i, sp), expect, 1e-10 * std::max(1.0, std::abs(expect)))
            << "n=" << n << " i=" << i;
      }
    }
  }
}

TEST(EllipsoidalHarmonic, CartesianQuadricIsHarmonic) {
  const std::vector<double> hv{3.0, 2.0, 1.0};
  const HarmonicFamily fam{HalfAxes(hv)};
  const std::vector<double> x{0.4, -1.2, 0.8, 2.0};
  for (double p : fam.roots().p) {
    const auto f = [&](std::span<const double> y) { return testing::cartesian_harmonic(hv, p, y); };
    EXPECT_NEAR(fd_laplacian(f, x, 1e-2), 0.0, 1e-8);
  }
}

TEST(QRecurrence, ClosesAtFocalRoots) {
  SeededSampler rng(15);
  for (std::size_t n = 3; n <= 6; ++n) {
    const HalfAxes h(random_axes(n - 1, rng));
    for (double p : focal_roots(h).p) {
      const auto r = q_recurrence(h, p);
      EXPECT_EQ(r.q.size(), n - 1);
      EXPECT_LE(std::abs(r.closure), 1e-12 * r.scale) << "n=" << n;
    }
  }
}

TEST(Gradient, FarFieldAndNonvanishing) {
  const auto& fam = family21();
  const auto q = coefficients(std::vector<double>{2.0, 1.0});
  const std::vector<double> x{20.0, -10.0, 15.0};
  const auto g = gradient(fam, x, Sheet::plus);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(g[i], -2 * q.a[i] * x[i], 5e-3) << i;

  SeededSampler rng(16);
  int tested = 0;
  while (tested < 50) {
    auto d = rng.unit_vector(3);
    const double r = rng.uniform(0.3, 4.0);
    std::vector<double> y{r * d[0], r * d[1], r * d[2]};
    SheetPoint sp;
    try {
      sp = from_cartesian(fam.axes(), y, Sheet::plus);
    } catch (const BranchProximityError&) {
      continue;
    }
    if (std::abs(branch_coordinate_z(fam.axes(), sp).z) < 0.05) continue;
    EXPECT_GT(testing::norm(gradient(fam, y, Sheet::plus)), 1e-6);
    ++tested;
  }
}

TEST(Gradient, TangentialDerivativesVanishOnCutDisc) {
  const auto g = gradient(family21(), std::vector<double>{0.5, 0.3, 0.0}, Sheet::plus, 1e-4);
  EXPECT_NEAR(g[0], 0.0, 1e-9);
  EXPECT_NEAR(g[1], 0.0, 1e-9);
  EXPECT_GT(std::abs(g[2]), 1e-3);
}

TEST(Harmonicity, ShellReport) {
  const auto rep = harmonicity_report(family21(), ShellRegion{1.5, 4.0}, 20, 1, 1e-3);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.get("max_residual"), 1e-5);
  EXPECT_GE(rep.get("ratio"), 3.5);
  EXPECT_EQ(rep.rows.size(), 20u);
}

TEST(Harmonicity, FourDimensional) {
  const HarmonicFamily fam(HalfAxes({3.0, 2.0, 1.0}));
  // Residuals at small delta sit at the quadrature noise floor; use a step
  // where truncation dominates so the delta^2 ratio is observable.
  const auto rep = harmonicity_report(fam, ShellRegion{2.0, 5.0}, 6, 3, 2e-2);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.get("max_residual"), 1e-5);
}

TEST(Harmonicity, DeterministicGivenSeed) {
  const auto a = harmonicity_report(family21(), ShellRegion{1.5, 4.0}, 3, 5, 1e-3);
  const auto b = harmonicity_report(family21(), ShellRegion{1.5, 4.0}, 3, 5, 1e-3);
  EXPECT_EQ(a.rows, b.rows);
}

TEST(BranchCoefficient, SpotValues) {
  const auto& fam = family21();
  SheetPoint sp;
  sp.mu = {1.0, 0.0, 0.0};
  sp.signs = {1, 1};
  EXPECT_NEAR(branch_coefficient(fam, sp).B, -2.0 / 3.0, 1e-15);
  sp.mu[0] = 2.0;
  EXPECT_NEAR(branch_coefficient(fam, sp).B, -2.0 * std::numbers::sqrt2 / 3.0, 1e-15);
  sp.mu[2] = 0.1;
  EXPECT_THROW(branch_coefficient(fam, sp), PreconditionError);
}

TEST(BranchCoefficient, NegativeEverywhere) {
  SeededSampler rng(17);
  for (std::size_t n = 3; n <= 6; ++n) {
    const HarmonicFamily fam(HalfAxes(random_axes(n - 1, rng)));
    for (int trial = 0; trial < 10; ++trial) {
      auto sp = random_sheet_point(fam.axes(), rng, Sheet::plus);
      sp.mu[n - 2] = 0.0;
      sp.mu[n - 1] = 0.0;
      EXPECT_LT(branch_coefficient(fam, sp).B, 0.0);
    }
  }
}

TEST(BranchCoefficient, LeadingNearBranchTerm) {
  const auto& fam = family21();
  for (double mu1 : {1.0, 1.4, 2.0}) {
    SheetPoint sp;
    sp.mu = {mu1, 0.0, 0.0};
    sp.signs = {1, 1};
    const double B = branch_coefficient(fam, sp).B;
    sp.mu[2] = 1e-3;
    const auto bc = branch_coordinate_z(fam.axes(), sp);
    const double lead = std::real(B * bc.zhalf * bc.zhalf * bc.zhalf);
    EXPECT_NEAR(fam.eval(sp) / lead, 1.0, 1e-2) << "mu1=" << mu1;
  }
}

TEST(Continuation, MonodromyAroundBranchLocus) {
  const auto& fam = family21();
  const std::vector<double> center{2.0, 0.0, 0.0};
  const auto loop = planar_loop(center, 0, 0.6, 200);
  ASSERT_EQ(loop.size(), 201u);
  const auto samples = continue_along_path(fam, loop, Sheet::plus);
  EXPECT_NEAR(samples.back().value, -samples.front().value, 1e-8);
  EXPECT_EQ(samples.back().sheet, Sheet::minus);
}

TEST(Continuation, ContractibleLoopIsTrivial) {
  const auto& fam = family21();
  const std::vector<double> center{0.0, 0.5, 2.5};
  const auto samples = continue_along_path(fam, planar_loop(center, 0, 0.6, 200), Sheet::plus);
  EXPECT_NEAR(samples.back().value, samples.front().value, 1e-8);
  EXPECT_EQ(samples.back().sheet, Sheet::plus);
}

TEST(Continuation, CrossingTheCutDiscIsContinuous) {
  const auto& fam = family21();
  std::vector<CartesianPoint> path;
  for (int k = 0; k <= 100; ++k) path.push_back({0.6, 0.3, -0.5 + 0.01 * k});
  const auto samples = continue_along_path(fam, path, Sheet::plus);
  double max_jump = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    max_jump = std::max(max_jump, std::abs(samples[k].value - samples[k - 1].value));
  }
  EXPECT_NEAR(samples[50].value, 0.0, 1e-12);
  EXPECT_LT(max_jump, 0.05);
  EXPECT_LT(samples.front().value * samples.back().value, 0.0);
}

TEST(Continuation, CoarsePathIsRejected) {
  const auto& fam = family21();
  const std::vector<double> center{2.0, 0.0, 0.0};
  EXPECT_THROW(continue_along_path(fam, planar_loop(center, 0, 0.6, 4), Sheet::plus), ContinuationError);
}

TEST(PrefixCache, AgreesWithDirectQuadrature) {
  FamilyOptions opts;
  opts.prefix_cache = true;
  const HarmonicFamily cached(HalfAxes({2.0, 1.0}), opts);
  SeededSampler rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sp = random_sheet_point(cached.axes(), rng, Sheet::plus);
    EXPECT_NEAR(cached.eval(sp), family21().eval(sp), 1e-10 * std::max(1.0, std::abs(family21().eval(sp))));
  }
}

}  // namespace
}  // namespace z2h
