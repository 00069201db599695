#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "z2h/ellipsoidal.hpp"
#include "z2h/numerics.hpp"
#include "z2h/report.hpp"

namespace z2h {

struct FamilyOptions {
  QuadratureOptions quadrature{};
  // Optional prefix-integral cache on a geometric mu grid. Off by default so
  // every value comes from a single quadrature call.
  bool prefix_cache = false;
  std::size_t cache_nodes = 96;
};

struct Evaluation {
  double value = 0.0;
  double quadrature_error = 0.0;
};

class HarmonicFamily {
 public:
  explicit HarmonicFamily(HalfAxes axes, FamilyOptions options = {});

  const HalfAxes& axes() const { return axes_; }
  const FocalRoots& roots() const { return roots_; }
  const std::vector<double>& denominators() const { return denom_; }
  double normalization() const { return norm_; }
  int combination_sign() const { return sign_; }
  std::size_t dim() const { return axes_.dim(); }
  const FamilyOptions& options() const { return options_; }

  // int_0^mu du / sqrt(S(u^2)), odd in mu.
  Evaluation f0(double mu) const;
  // int_0^mu du / ((u^2 + p_i)^2 sqrt(S(u^2))), odd in mu.
  Evaluation inner_integral(std::size_t i, double mu) const;
  Evaluation f2(std::size_t i, const SheetPoint& sp) const;

  Evaluation evaluate(const SheetPoint& sp) const;
  double eval(const SheetPoint& sp) const { return evaluate(sp).value; }
  double eval(std::span<const double> x, Sheet sheet) const;

 private:
  Evaluation integrate_from_zero(std::size_t slot, double mu) const;

  HalfAxes axes_;
  FamilyOptions options_;
  FocalRoots roots_;
  std::vector<double> denom_;
  double norm_ = 0.0;
  int sign_ = 1;
  std::vector<double> grid_;                 // cache nodes
  std::vector<std::vector<double>> prefix_;  // slot 0: f0, slot i+1: inner_integral(i)
};

// Stand-alone f0 for arbitrary axes and its mu -> infinity limit.
double f0(const HalfAxes& h, double mu, const QuadratureOptions& opts = {});
double f0_limit(const HalfAxes& h, const QuadratureOptions& opts = {});

// Degree-2 ellipsoidal harmonic (mu_n^2 + p_i) prod_j (mu_j^2 - p_i).
double ellipsoidal_harmonic(const HarmonicFamily& fam, std::size_t i, const SheetPoint& sp);

// Coefficients M_j (ascending) of 2S(-y) - 2yS'(-y).
std::vector<double> focal_M_coefficients(const HalfAxes& h);

struct QRecurrence {
  std::vector<double> q;  // Q_0..Q_{n-2}
  double closure = 0.0;   // M_0 - p Q_0
  double scale = 0.0;     // max_j |M_j p^j|
};
QRecurrence q_recurrence(const HalfAxes& h, double p);

// Evaluation on the local branch through x: stencil and path points are lifted
// to the representative nearest the lift of the reference point.
double eval_local(const HarmonicFamily& fam, std::span<const double> x, const SheetPoint& reference);

std::vector<double> gradient(const HarmonicFamily& fam, std::span<const double> x, Sheet sheet,
                             double delta = 0.0);
double laplacian(const HarmonicFamily& fam, std::span<const double> x, Sheet sheet, double delta);

struct BranchExpansion {
  double B = 0.0;
  std::complex<double> zhalf_frame;
};
BranchExpansion branch_coefficient(const HarmonicFamily& fam, const SheetPoint& sp);

struct PathSample {
  double value = 0.0;
  Sheet sheet = Sheet::plus;
  SheetPoint point;
};
std::vector<PathSample> continue_along_path(const HarmonicFamily& fam,
                                            const std::vector<CartesianPoint>& path, Sheet start);

// Closed loop of `steps` segments in the (x_axis, x_n) plane around `center`.
std::vector<CartesianPoint> planar_loop(std::span<const double> center, std::size_t axis, double radius,
                                        std::size_t steps);

struct ShellRegion {
  double r_min = 1.0;
  double r_max = 2.0;
  double branch_guard = 0.25;  // minimum |z| of accepted points
};

VerificationReport harmonicity_report(const HarmonicFamily& fam, const ShellRegion& region, std::size_t count,
                                      std::uint64_t seed, double delta);

}  // namespace z2h
