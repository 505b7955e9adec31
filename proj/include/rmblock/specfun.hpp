#pragma once
#include <complex>

namespace rmb {

using cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Modified Bessel functions of integer order |n| <= 2.
// I_n: power series for |x| <= 2, periodic trapezoid on (1/2pi) int e^{x cos t} cos(nt) dt up to |x| = 40,
// asymptotic expansion beyond. Entire in x.
cplx bessel_i(int n, cplx x);
// K_n: series with digamma terms for |x| <= 2, Steed's continued fraction up to |x| = 40, asymptotic beyond.
// Re x < 0 is a DomainError unless continuation is requested, in which case the principal branch
// (cut along the negative real axis) is returned.
cplx bessel_k(int n, cplx x, bool continuation = false);

// J_0, J_1 on the real line.
double bessel_j(int n, double x);

cplx log_gamma(cplx z);  // branch unspecified, exp(log_gamma) is Gamma
cplx gamma(cplx z);

struct Rational {
  int num = 0;
  int den = 1;
  double value() const { return double(num) / double(den); }
};

// 0F2(; b1, b2; x)
cplx hyper_0f2(Rational b1, Rational b2, cplx x);

enum class CutSide { None, Above, Below };

struct GParams {
  Rational b1, b2, b3;
  cplx argument;
  // Required when the argument lies on the negative real axis.
  CutSide side = CutSide::None;
};

// G^{3,0}_{0,3}(x | b1, b2, b3) = (1/2 pi i) int Gamma(b1-s) Gamma(b2-s) Gamma(b3-s) x^s ds.
cplx meijer_g_303(const GParams& g);
// Same, with log x given directly (any branch with |Im log x| < 3 pi / 2).
cplx meijer_g_303_log(Rational b1, Rational b2, Rational b3, cplx logx);

enum class LaplaceKind { Quadratic, Linear };

// int_0^inf exp(-(t1 v^p + t2 / v)) v^n dv with p = 2 (Quadratic) or p = 1 (Linear), evaluated by
// trapezoid quadrature along the ray through the saddle point.
cplx laplace_type_integral(cplx t1, cplx t2, int n, LaplaceKind kind);
// The same integral through G^{3,0}_{0,3} (Quadratic) or K_{n+1} (Linear).
cplx laplace_type_closed(cplx t1, cplx t2, int n, LaplaceKind kind);

}  // namespace rmb
