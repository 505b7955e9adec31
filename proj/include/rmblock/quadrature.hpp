#pragma once
#include <complex>
#include <functional>
#include <vector>

namespace rmb {

using cplx = std::complex<double>;
using CFun = std::function<cplx(double)>;

struct QuadResult {
  cplx value;
  double err = 0.0;
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b].
QuadResult integrate_gk(const CFun& f, double a, double b, double abstol, double reltol, int maxDepth = 50);

// Trapezoid rule on the whole line, summed outward from t0 until terms fall below
// 1e-18 of the running maximum, with the step halved until two levels agree to tol.
QuadResult integrate_line(const CFun& f, double t0, double h0, double tol, int maxLevel = 10);

// Double exponential rules: (0, inf) via x = exp(pi/2 sinh t), the real line via x = sinh(pi/2 sinh t).
QuadResult integrate_exp_sinh(const CFun& f, double tol = 1e-12);
QuadResult integrate_sinh_sinh(const CFun& f, double tol = 1e-12);
// [a, b] via tanh-sinh.
QuadResult integrate_tanh_sinh(const CFun& f, double a, double b, double tol = 1e-12);

// Generalized Gauss-Laguerre nodes and weights for the weight x^alpha e^{-x} (Golub-Welsch).
void gauss_laguerre(int n, double alpha, std::vector<double>& x, std::vector<double>& w);

}  // namespace rmb
