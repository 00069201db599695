#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "z2h/report.hpp"

namespace z2h {

enum class Sheet { plus, minus };

inline Sheet opposite(Sheet s) { return s == Sheet::plus ? Sheet::minus : Sheet::plus; }
inline int sheet_sign(Sheet s) { return s == Sheet::plus ? 1 : -1; }
std::string to_string(Sheet s);
Sheet parse_sheet(const std::string& text);

// Semi-axes h_1 > ... > h_{n-1} > 0 of the branching ellipsoid, n = count()+1.
class HalfAxes {
 public:
  static constexpr double kMinRelativeGap = 1e-9;

  explicit HalfAxes(std::vector<double> h);

  std::size_t dim() const { return h_.size() + 1; }
  std::size_t count() const { return h_.size(); }
  const std::vector<double>& values() const { return h_; }
  const std::vector<double>& squares() const { return h2_; }
  double operator[](std::size_t i) const { return h_[i]; }
  double product() const { return product_; }

  double S(double y) const;        // prod_j (y + h_j^2)
  double S_prime(double y) const;
  // sigma_k of the squared axes, k = 0..n-1.
  const std::vector<double>& sigma() const { return sigma_; }

 private:
  std::vector<double> h_, h2_, sigma_;
  double product_ = 1.0;
};

// Positive entries (any multiplicity) with at least min_count values.
void require_positive_axes(std::span<const double> h, std::size_t min_count);

struct FocalRoots {
  std::vector<double> p;  // descending
};

double focal_function(const HalfAxes& h, double y);  // S(-y) - y S'(-y)
FocalRoots focal_roots(const HalfAxes& h);

// Coefficients (ascending) of d/dy (y S(y)) and of n prod (y + p_l).
std::vector<double> focal_identity_lhs(const HalfAxes& h);
std::vector<double> focal_identity_rhs(const HalfAxes& h, const FocalRoots& roots);

using CartesianPoint = std::vector<double>;

// Double-cover coordinates. mu[0..n-3] lie in [h_{j+1}, h_j], mu[n-2] is the
// signed mu_{n-1}, mu[n-1] the signed mu_n. signs[i] = +-1 is the sign of x_i.
struct SheetPoint {
  std::vector<double> mu;
  std::vector<int> signs;

  std::size_t dim() const { return mu.size(); }
  double mu_n() const { return mu.back(); }
  double mu_nm1() const { return mu[mu.size() - 2]; }
  Sheet sheet() const;
  bool on_branch() const { return mu_n() == 0.0 && mu_nm1() == 0.0; }
  SheetPoint involution() const;
};

inline constexpr double kDefaultBranchTolerance = 1e-16;

CartesianPoint to_cartesian(const HalfAxes& h, const SheetPoint& sp);

// Monic polynomial (ascending coefficients) with roots mu_1^2, ..., mu_{n-1}^2,
// -mu_n^2, built from sigma_k(mu) as linear combinations of the x_i^2.
std::vector<double> confocal_polynomial(const HalfAxes& h, std::span<const double> x);

// Roots of confocal_polynomial in the order mu_1^2, ..., mu_{n-1}^2, -mu_n^2.
std::vector<double> confocal_roots(const HalfAxes& h, std::span<const double> x);

// Throws BranchProximityError when mu_n^2 + mu_{n-1}^2 < tol * h_1^2.
SheetPoint from_cartesian(const HalfAxes& h, std::span<const double> x, Sheet sheet,
                          double branch_tol = kDefaultBranchTolerance);

// Lift of x whose (mu_{n-1}, mu_n) is nearest to (ref_nm1, ref_n).
SheetPoint from_cartesian_near(const HalfAxes& h, std::span<const double> x, double ref_nm1,
                               double ref_n, double branch_tol = kDefaultBranchTolerance);

// sum_i (-1)^{m-1-k} y_i^l sigma_{i,m-1-k}(y) / prod_{j!=i}(y_i - y_j), m = y.size().
double sym_identity_check(std::span<const double> y, std::size_t k, std::size_t l);

struct BranchCoordinate {
  std::complex<double> z;
  std::complex<double> zhalf;
};
BranchCoordinate branch_coordinate_z(const HalfAxes& h, const SheetPoint& sp);

// Closed-form diagonal metric coefficient g_jj in mu coordinates.
double metric_coefficient(const HalfAxes& h, const SheetPoint& sp, std::size_t j);

VerificationReport metric_orthogonality(const HalfAxes& h, const SheetPoint& sp,
                                        double step = 1e-6);

}  // namespace z2h
