#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "z2h/errors.hpp"
#include "z2h/numerics.hpp"

namespace z2h {
namespace {

using std::numbers::pi;

struct IntegrandCase {
  std::string name;
  ScalarFunction f;
  double a, b;  // b = inf for semi-infinite
  double exact;
};

std::vector<IntegrandCase> oracle_suite() {
  const double inf = INFINITY;
  return {
      {"linear", [](double u) { return u; }, 0, 1, 0.5},
      {"inv_sqrt_left", [](double u) { return 1 / std::sqrt(u); }, 0, 1, 2.0},
      {"inv_sqrt_right", [](double u) { return 1 / std::sqrt(1 - u); }, 0, 1, 2.0},
      {"arcsine_density", [](double u) { return 1 / std::sqrt(u * (1 - u)); }, 0, 1, pi},
      {"log", [](double u) { return std::log(u); }, 0, 1, -1.0},
      {"sine", [](double u) { return std::sin(u); }, 0, pi, 2.0},
      {"exp", [](double u) { return std::exp(u); }, 0, 1, std::exp(1.0) - 1},
      {"lorentz", [](double u) { return 1 / (1 + u * u); }, 0, 1, pi / 4},
      {"quintic", [](double u) { return std::pow(u, 5); }, -1, 2, 10.5},
      {"cos_squared", [](double u) { return std::cos(u) * std::cos(u); }, 0, 2 * pi, pi},
      {"semicircle", [](double u) { return std::sqrt(1 - u * u); }, -1, 1, pi / 2},
      {"narrow_peak", [](double u) { return 1 / (u * u + 0.01); }, -1, 1, 20 * std::atan(10.0)},
      {"gaussian", [](double u) { return std::exp(-u * u); }, 0, inf, std::sqrt(pi) / 2},
      {"arctan_tail", [](double u) { return 1 / (1 + u * u); }, 0, inf, pi / 2},
      {"power_three_halves", [](double u) { return std::pow(1 + u * u, -1.5); }, 0, inf, 1.0},
      {"power_five_halves", [](double u) { return std::pow(1 + u * u, -2.5); }, 0, inf, 2.0 / 3.0},
      {"exponential_tail", [](double u) { return std::exp(-u); }, 0, inf, 1.0},
      {"elliptic", [](double u) { return 1 / std::sqrt((u * u + 4) * (u * u + 1)); }, 0, inf,
       testing::elliptic_k_agm(std::sqrt(3.0) / 2) / 2},
      {"rational_moment", [](double u) { return u / ((1 + u * u) * (1 + u * u)); }, 0, inf, 0.5},
      {"quartic", [](double u) { return 1 / (1 + u * u * u * u); }, 0, inf, pi / (2 * std::sqrt(2.0))},
  };
}

TEST(Quadrature, OracleSuite) {
  const auto suite = oracle_suite();
  ASSERT_EQ(suite.size(), 20u);
  for (const auto& c : suite) {
    const auto r = std::isinf(c.b) ? integrate_semi_infinite(c.f) : integrate_finite(c.f, c.a, c.b);
    EXPECT_NEAR(r.value, c.exact, 1e-11 * std::max(1.0, std::abs(c.exact))) << c.name;
    EXPECT_GT(r.evaluations, 0u) << c.name;
  }
}

TEST(Quadrature, ErrorEstimateIsHonest) {
  for (const auto& c : oracle_suite()) {
    const auto r = std::isinf(c.b) ? integrate_semi_infinite(c.f) : integrate_finite(c.f, c.a, c.b);
    EXPECT_LE(std::abs(r.value - c.exact), 100 * r.error_estimate + 1e-13) << c.name;
  }
}

TEST(Quadrature, AgreesWithIndependentRule) {
  const auto f = [](double u) { return 1 / std::sqrt((u * u + 4) * (u * u + 1)); };
  const double a = integrate_finite(f, 0, 1).value;
  const double b = testing::tanh_sinh(f, 0, 1);
  EXPECT_NEAR(a, b, 1e-10);
  EXPECT_NEAR(a, 0.425612, 1e-6);
}

TEST(Quadrature, ReversedAndEmptyIntervals) {
  const auto f = [](double u) { return u * u; };
  EXPECT_THROW(integrate_finite(f, 1, 0), PreconditionError);
  EXPECT_EQ(integrate_finite(f, 2, 2).value, 0.0);
}

TEST(Quadrature, PiecewiseKink) {
  const auto f = [](double u) { return std::abs(u - 1.0 / 3); };
  const std::vector<double> knots{0, 1.0 / 3, 1};
  EXPECT_NEAR(integrate_piecewise(f, knots).value, 5.0 / 18, 1e-14);
}

TEST(Quadrature, NonFiniteIntegrandThrows) {
  EXPECT_THROW(integrate_finite([](double) { return NAN; }, 0, 1), NumericFailure);
}

TEST(Quadrature, BudgetExhaustionCarriesEstimate) {
  QuadratureOptions tight;
  tight.rel_tol = 1e-15;
  tight.abs_tol = 0;
  tight.max_intervals = 4;
  try {
    integrate_finite([](double u) { return std::sin(50 * u); }, 0, 3, tight);
    FAIL() << "expected NumericFailure";
  } catch (const NumericFailure& e) {
    ASSERT_TRUE(e.best_estimate().has_value());
    EXPECT_TRUE(std::isfinite(*e.best_estimate()));
  }
}

TEST(RootFinding, Examples) {
  EXPECT_NEAR(find_root_bracketed([](double y) { return y * y - 2; }, 1, 2), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(find_root_bracketed([](double y) { return 3 * y * y - 10 * y + 4; }, 0, 1), (5 - std::sqrt(13.0)) / 3,
              1e-15);
  EXPECT_NEAR(find_root_bracketed([](double y) { return y; }, -1, 1), 0.0, 1e-15);
}

TEST(RootFinding, RejectsMissingBracket) {
  EXPECT_THROW(find_root_bracketed([](double y) { return y * y + 1; }, -1, 1), PreconditionError);
}

TEST(RootFinding, StaysInsideBracket) {
  SeededSampler rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double r = rng.uniform(-3, 3);
    const double lo = r - rng.uniform(0.01, 2), hi = r + rng.uniform(0.01, 2);
    const auto g = [r](double y) { return std::tanh(5 * (y - r)) + 1e-3 * (y - r); };
    const double root = find_root_bracketed(g, lo, hi);
    EXPECT_GE(root, lo);
    EXPECT_LE(root, hi);
    EXPECT_NEAR(root, r, 1e-13);
  }
}

TEST(RootFinding, BisectWithSignsIgnoresEndpointZeros) {
  // g vanishes at both endpoints; the caller supplies the generic signs.
  const auto g = [](double y) { return y * (y - 1) * (y - 0.25); };
  EXPECT_NEAR(bisect_with_signs(g, 0, 1, 1, -1), 0.25, 1e-15);
}

TEST(FiniteDifferences, LaplacianExamples) {
  const std::vector<double> x{0.3, -0.7, 1.1};
  const auto quad = [](std::span<const double> p) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; };
  EXPECT_NEAR(fd_laplacian(quad, x, 1e-3), 6.0, 1e-6);
  const auto saddle = [](std::span<const double> p) { return p[0] * p[0] - p[1] * p[1]; };
  EXPECT_NEAR(fd_laplacian(saddle, x, 1e-3), 0.0, 1e-6);
  const auto newton = [](std::span<const double> p) { return 1 / testing::norm(p); };
  const std::vector<double> ones{1, 1, 1};
  EXPECT_NEAR(fd_laplacian(newton, ones, 1e-3), 0.0, 1e-5);
}

TEST(FiniteDifferences, LaplacianIsSecondOrder) {
  const auto f = [](std::span<const double> p) { return std::exp(p[0]) * std::cos(0.5 * p[1]); };
  const std::vector<double> x{0.2, 0.4};
  const double exact = 0.75 * std::exp(0.2) * std::cos(0.2);
  const double e1 = std::abs(fd_laplacian(f, x, 2e-2) - exact);
  const double e2 = std::abs(fd_laplacian(f, x, 1e-2) - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
  EXPECT_LT(std::abs(fd_laplacian_richardson(f, x, 2e-2) - exact), e2 / 10);
}

TEST(FiniteDifferences, Gradient) {
  const auto f = [](std::span<const double> p) { return std::sin(p[0]) * p[1] * p[1]; };
  const std::vector<double> x{0.4, 1.3};
  const auto g = fd_gradient(f, x, 1e-3);
  EXPECT_NEAR(g[0], std::cos(0.4) * 1.69, 1e-10);
  EXPECT_NEAR(g[1], std::sin(0.4) * 2.6, 1e-10);
}

TEST(LogLogSlope, RecoversPowerLaw) {
  const std::vector<double> x{1e-4, 1e-3, 1e-2};
  std::vector<double> y;
  for (double v : x) y.push_back(-7 * std::pow(v, 2.5));
  EXPECT_NEAR(loglog_slope(x, y), 2.5, 1e-12);
}

TEST(SeededSampler, DeterministicAndInRange) {
  SeededSampler a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(a.uniform(), c.uniform());
  const auto v = a.unit_vector(5);
  EXPECT_NEAR(testing::norm(v), 1.0, 1e-15);
}

}  // namespace
}  // namespace z2h
