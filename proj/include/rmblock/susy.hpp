#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rmblock/error.hpp"
#include "rmblock/model.hpp"

namespace rmb {

using cplx = std::complex<double>;

// I(x) = 1/2 sum_ij s_ij x_i x_j - i z sum_i x_i - sum_i log x_i (principal log).
template <typename Derived>
typename Derived::Scalar action_I(const Eigen::MatrixBase<Derived>& x, cplx z, const VarianceProfile& p) {
  using Scalar = typename Derived::Scalar;
  Scalar q(0), lin(0), lg(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == Scalar(0)) throw Error(ErrorKind::ZeroComponent, "action_I needs nonzero components");
    for (Eigen::Index j = 0; j < x.size(); ++j) q += p.S(i, j) * x(i) * x(j);
    lin += x(i);
    lg += std::log(x(i));
  }
  return Scalar(0.5) * q - Scalar(0, 1) * z * lin - lg;
}

// dI/dx_i = sum_j s_ij x_j - i z - 1/x_i
Eigen::VectorXcd action_I_gradient(const Eigen::VectorXcd& x, cplx z, const VarianceProfile& p);

// det of the K x K matrix (K <= 3) by cofactor expansion.
template <typename Derived>
typename Derived::Scalar small_det(const Eigen::MatrixBase<Derived>& A) {
  const Eigen::Index n = A.rows();
  if (n == 0) return typename Derived::Scalar(1);
  if (n == 1) return A(0, 0);
  if (n == 2) return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  if (n == 3)
    return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) - A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
           A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
  throw Error(ErrorKind::UnsupportedK, "small_det handles K <= 3");
}

enum class RadialMap {
  // generalized Gauss-Laguerre in x = N a / scale
  Laguerre,
  // trapezoid in t with a = scale * exp(t - e^{-t}): double exponential decay towards a = 0
  LogExp,
};

struct QuadratureSpec {
  int radialNodes = 48;
  int angularNodes = 64;
  std::vector<double> contourRadii;
  std::vector<double> scales;
  std::vector<RadialMap> radialMap;
};

void validate_quadrature(const QuadratureSpec& q, int K);

// Radii and scales |a_i(z)| from the Dyson solution; radialNodes = max(48, 8 ceil(sqrt N)),
// angularNodes = max(64, 4N + 16).
QuadratureSpec default_quadrature(const VarianceProfile& p, long N, cplx z);

QuadratureSpec refined(const QuadratureSpec& q);

// E Tr (H - z)^{-1} from the exact integral representation
//   (i N^{K+1} / (2 pi i)^K) int da oint db e^{-N I(a) + N I(b)} det[S + diag(1/(a_i b_i))] sum_j a_j.
cplx finite_n_resolvent(const VarianceProfile& p, long N, cplx z, const QuadratureSpec& q);

struct SusyResult {
  cplx value;    // from the refined spec
  double est_err;  // |refined - base|
  QuadratureSpec spec;
};

// Evaluates at q and at refined(q). NotConverged when est_err > tol |value|.
SusyResult finite_n_resolvent_checked(const VarianceProfile& p, long N, cplx z, const QuadratureSpec& q,
                                      double tol = 1e-8);

// (1/(pi K N)) Im finite_n_resolvent(E + i eps)
double density_finite_n(const VarianceProfile& p, long N, double E, double eps, const QuadratureSpec& q);

}  // namespace rmb
