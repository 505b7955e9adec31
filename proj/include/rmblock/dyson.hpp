#pragma once
#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "rmblock/model.hpp"

namespace rmb {

using cplx = std::complex<double>;

struct DysonSolution {
  Eigen::VectorXcd a;
  cplx z;
  double residual = 0.0;
  int iterations = 0;
};

// max_i |a_i (sum_j s_ij a_j - i z) - 1|
double dyson_residual(const VarianceProfile& p, cplx z, const Eigen::VectorXcd& a);

// Solves 1/a_i = sum_j s_ij a_j - i z on the branch Re a_i > 0.
// Without a guess: damped fixed point a <- (1-d) a + d / (S a - i z), then Newton;
// falls back to a continuation in Im z when the damped map is too slow.
DysonSolution solve_dyson(const VarianceProfile& p, cplx z, double tol = 1e-13, int maxIter = 20000,
                          const std::optional<Eigen::VectorXcd>& guess = std::nullopt);

// (1/pi) Re mean_i a_i(E + i eps), no extrapolation.
double density_infinity(const VarianceProfile& p, double E, double eps);

struct DensityEstimate {
  double rho = 0.0;
  double err = 0.0;  // difference between the two Richardson estimates
  Eigen::VectorXcd a;  // solution at the smallest eps, for warm starts
};

// Richardson in eps over {eps, eps/2, eps/4}, assuming an error linear in eps.
DensityEstimate density_infinity_extrapolated(const VarianceProfile& p, double E, double eps,
                                              const std::optional<Eigen::VectorXcd>& guess = std::nullopt);

// rho_infinity(0) via eta -> 0 on the imaginary axis.
double density_at_origin(const VarianceProfile& p);

struct DensityPoint {
  double E, eps, rho;
};

// Sweep with warm starts; the grid is traversed in the order given.
std::vector<DensityPoint> density_curve(const VarianceProfile& p, const std::vector<double>& E_grid,
                                        double eps, bool extrapolate);

struct EpsSchedule {
  double relative = 1e-3;  // eps = relative * |E|
};

struct SingularityFit {
  double sigma_hat = 0.0;
  double theta_hat = 0.0;
  std::vector<double> E, rho;
  int failures = 0;
};

SingularityFit singularity_fit(const VarianceProfile& p, const std::vector<double>& E_grid,
                               EpsSchedule eps = {});

// Log-spaced 1e-10 .. 1e-6, 21 points.
std::vector<double> default_fit_grid();

}  // namespace rmb
