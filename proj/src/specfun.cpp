#include "rmblock/specfun.hpp"

#include <algorithm>
#include <cmath>

#include "rmblock/error.hpp"
#include "rmblock/quadrature.hpp"

namespace rmb {

namespace {

const cplx I1(0.0, 1.0);
constexpr double kPi = M_PI;

// Crossover radii; see the overlap tests.
constexpr double kSeriesRadius = 2.0;
constexpr double kAsymptoticRadius = 40.0;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void i_series(cplx x, cplx& i0, cplx& i1) {
  const cplx q = 0.25 * x * x;
  cplx t0 = 1.0, t1 = 1.0;
  i0 = 1.0;
  i1 = 1.0;
  for (int k = 1; k < 200; ++k) {
    t0 *= q / double(k * k);
    t1 *= q / double(k * (k + 1));
    i0 += t0;
    i1 += t1;
    if (std::abs(t0) <= 1e-17 * std::abs(i0) && std::abs(t1) <= 1e-17 * std::abs(i1)) break;
  }
  i1 *= 0.5 * x;
}

void i_trapezoid(cplx x, cplx& i0, cplx& i1) {
  const int M = 2 * static_cast<int>(std::ceil(std::abs(x))) + 40;
  i0 = 0.0;
  i1 = 0.0;
  for (int k = 0; k < M; ++k) {
    const double th = 2.0 * kPi * k / M;
    const cplx e = std::exp(x * std::cos(th));
    i0 += e;
    i1 += e * std::cos(th);
  }
  i0 /= double(M);
  i1 /= double(M);
}

// sqrt(pi/(2w)) e^{-w} sum_k a_k(nu) w^{-k}, with the factor sqrt(pi/(2w)) e^{-w} left to the caller.
cplx k_asymptotic_sum(int nu, cplx winv) {
  const double mu = 4.0 * nu * nu;
  cplx term = 1.0, sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= (mu - double((2 * k - 1) * (2 * k - 1))) / (8.0 * k) * winv;
    const double a = std::abs(term);
    if (a > last) break;
    sum += term;
    last = a;
    if (a <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

void k_series(cplx x, cplx& k0, cplx& k1) {
  cplx i0, i1;
  i_series(x, i0, i1);
  const cplx q = 0.25 * x * x;
  const cplx l = std::log(0.5 * x);
  cplx s0 = 0.0, s1 = 0.0;
  cplx t0 = 1.0;  // q^k / (k!)^2
  cplx t1 = 1.0;  // q^k / (k! (k+1)!)
  double H = 0.0;
  s1 = t1 * (2.0 * (-kEulerGamma) + 1.0);
  for (int k = 1; k < 200; ++k) {
    H += 1.0 / k;
    t0 *= q / double(k * k);
    t1 *= q / double(k * (k + 1));
    const cplx a = t0 * H;
    const cplx b = t1 * (2.0 * (H - kEulerGamma) + 1.0 / (k + 1));
    s0 += a;
    s1 += b;
    if (std::abs(a) <= 1e-17 * std::abs(s0) && std::abs(b) <= 1e-17 * std::abs(s1)) break;
  }
  k0 = -(l + kEulerGamma) * i0 + s0;
  k1 = 1.0 / x + l * i1 - 0.25 * x * s1;
}

// Steed's algorithm for K_0, K_1 (Temme's CF2), valid in the closed right half-plane away from 0.
void k_steed(cplx x, cplx& k0, cplx& k1) {
  const double a1 = 0.25;
  cplx b = 2.0 * (1.0 + x);
  cplx d = 1.0 / b;
  cplx h = d, delh = d;
  cplx q1 = 0.0, q2 = 1.0;
  cplx q = a1, c = a1;
  double a = -a1;
  cplx s = 1.0 + q * delh;
  for (int i = 1; i < 200000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const cplx qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const cplx dels = q * delh;
    s += dels;
    if (std::abs(dels) < 1e-17 * std::abs(s) && i > 2) {
      h *= a1;
      k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
      k1 = k0 * (x + 0.5 - h) / x;
      return;
    }
  }
  throw Error(ErrorKind::NonConvergent, "K continued fraction did not converge");
}

void k_asymptotic(cplx x, cplx& k0, cplx& k1) {
  const cplx pre = std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
  const cplx winv = 1.0 / x;
  k0 = pre * k_asymptotic_sum(0, winv);
  k1 = pre * k_asymptotic_sum(1, winv);
}

// Re x >= 0, x != 0
void k01(cplx x, cplx& k0, cplx& k1) {
  const double r = std::abs(x);
  if (r <= kSeriesRadius)
    k_series(x, k0, k1);
  else if (r <= kAsymptoticRadius)
    k_steed(x, k0, k1);
  else
    k_asymptotic(x, k0, k1);
}

// Re x >= 0
void i01(cplx x, cplx& i0, cplx& i1) {
  const double r = std::abs(x);
  if (r <= kSeriesRadius) {
    i_series(x, i0, i1);
  } else if (r <= kAsymptoticRadius) {
    i_trapezoid(x, i0, i1);
  } else {
    // I_nu(z) = (K_nu(z e^{-i pi}) - e^{i nu pi} K_nu(z)) / (i pi) for Im z >= 0, conjugate otherwise.
    const bool flip = x.imag() < 0.0;
    const cplx z = flip ? std::conj(x) : x;
    cplx k0, k1;
    k_asymptotic(z, k0, k1);
    const cplx pre = std::exp(z) / std::sqrt(2.0 * kPi * z);
    const cplx zinv = -1.0 / z;
    i0 = pre * k_asymptotic_sum(0, zinv) + I1 * k0 / kPi;
    i1 = pre * k_asymptotic_sum(1, zinv) - I1 * k1 / kPi;
    if (flip) {
      i0 = std::conj(i0);
      i1 = std::conj(i1);
    }
  }
}

cplx log_sin_pi(cplx z) {
  // log sin(pi z), any branch
  if (z.imag() > 20.0) return -I1 * kPi * z + std::log(1.0 - std::exp(2.0 * I1 * kPi * z)) - std::log(cplx(0.0, -2.0));
  if (z.imag() < -20.0) return I1 * kPi * z + std::log(1.0 - std::exp(-2.0 * I1 * kPi * z)) - std::log(cplx(0.0, 2.0));
  return std::log(std::sin(kPi * z));
}

}  // namespace

cplx bessel_i(int n, cplx x) {
  if (n < 0) n = -n;
  if (n > 2) throw Error(ErrorKind::InvalidArgument, "bessel_i supports |n| <= 2");
  const bool reflect = x.real() < 0.0;
  const cplx y = reflect ? -x : x;
  cplx i0, i1;
  i01(y, i0, i1);
  if (reflect) i1 = -i1;
  if (n == 0) return i0;
  if (n == 1) return i1;
  if (std::abs(x) <= kSeriesRadius) {
    // direct series avoids the cancellation in I_0 - (2/x) I_1
    const cplx q = 0.25 * x * x;
    cplx t = 1.0, s = 1.0;
    for (int k = 1; k < 200; ++k) {
      t *= q / double(k * (k + 2));
      s += t;
      if (std::abs(t) <= 1e-17 * std::abs(s)) break;
    }
    return 0.125 * x * x * s;
  }
  return i0 - 2.0 / x * i1;
}

cplx bessel_k(int n, cplx x, bool continuation) {
  if (n < 0) n = -n;
  if (n > 2) throw Error(ErrorKind::InvalidArgument, "bessel_k supports |n| <= 2");
  if (x == 0.0) throw Error(ErrorKind::DomainError, "K_n has a singularity at 0");
  cplx k0, k1;
  if (x.real() >= 0.0) {
    k01(x, k0, k1);
  } else {
    if (!continuation) throw Error(ErrorKind::DomainError, "K_n needs Re x >= 0 without a branch request");
    if (x.imag() == 0.0) throw Error(ErrorKind::DomainError, "K_n on its branch cut");
    // K_nu(z e^{+-i pi}) = e^{-+i nu pi} K_nu(z) -+ i pi I_nu(z), z = -x
    const cplx z = -x;
    const double s = x.imag() > 0.0 ? 1.0 : -1.0;
    cplx a0, a1, i0, i1;
    k01(z, a0, a1);
    i01(z, i0, i1);
    k0 = a0 - s * I1 * kPi * i0;
    k1 = -a1 - s * I1 * kPi * i1;
  }
  if (n == 0) return k0;
  if (n == 1) return k1;
  return k0 + 2.0 / x * k1;
}

double bessel_j(int n, double x) {
  if (n < 0) return (n % 2 ? -1.0 : 1.0) * bessel_j(-n, x);
  const double v = std::cyl_bessel_j(double(n), std::abs(x));
  return (x < 0.0 && n % 2) ? -v : v;
}

cplx log_gamma(cplx z) {
  static const double g = 7.0;
  static const double p[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
  z -= 1.0;
  cplx x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (z + double(i));
  const cplx t = z + g + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx hyper_0f2(Rational b1, Rational b2, cplx x) {
  for (Rational b : {b1, b2})
    if (b.num <= 0 && b.num % b.den == 0) throw Error(ErrorKind::PoleParameter, "0F2 parameter is a nonpositive integer");
  const double c1 = b1.value(), c2 = b2.value();
  cplx term = 1.0, sum = 1.0;
  int quiet = 0;
  for (int k = 0; k < 100000; ++k) {
    term *= x / ((c1 + k) * (c2 + k) * (k + 1.0));
    sum += term;
    if (std::abs(term) <= 1e-16 * std::abs(sum)) {
      if (++quiet >= 10) return sum;
    } else {
      quiet = 0;
    }
    if (!finite(sum)) break;
  }
  throw Error(ErrorKind::SeriesNotConverged, "0F2 series did not converge");
}

cplx meijer_g_303_log(Rational b1, Rational b2, Rational b3, cplx logx) {
  if (std::abs(logx.imag()) >= 1.5 * kPi)
    throw Error(ErrorKind::DomainError, "Mellin-Barnes integral needs |arg x| < 3 pi / 2");
  const double b[3] = {b1.value(), b2.value(), b3.value()};
  const double c = std::min({b[0], b[1], b[2]}) - 0.5;
  // Parabola s = c + alpha t^2 + i t opening to the right, enclosing every pole b_j + k.
  const double alpha = 0.1;
  auto f = [&](double t) -> cplx {
    const cplx s(c + alpha * t * t, t);
    const cplx e = log_gamma(b[0] - s) + log_gamma(b[1] - s) + log_gamma(b[2] - s) + s * logx;
    if (e.real() < -745.0) return 0.0;
    return std::exp(e) * cplx(2.0 * alpha * t, 1.0) / (2.0 * kPi * I1);
  };
  return integrate_line(f, 0.0, 0.1, 1e-14, 8).value;
}

cplx meijer_g_303(const GParams& g) {
  const cplx x = g.argument;
  if (x == 0.0) throw Error(ErrorKind::DomainError, "G^{3,0}_{0,3} needs a nonzero argument");
  cplx logx = std::log(x);
  if (x.imag() == 0.0 && x.real() < 0.0) {
    if (g.side == CutSide::None) throw Error(ErrorKind::BranchCut, "argument on the negative real axis needs a side");
    logx = cplx(std::log(-x.real()), g.side == CutSide::Above ? kPi : -kPi);
  }
  return meijer_g_303_log(g.b1, g.b2, g.b3, logx);
}

cplx laplace_type_integral(cplx t1, cplx t2, int n, LaplaceKind kind) {
  const int p = kind == LaplaceKind::Quadratic ? 2 : 1;
  const double a1 = std::arg(t1), a2 = std::arg(t2);
  // Ray through the saddle of t1 v^p + t2 / v.
  const double theta = (a2 - a1) / (p + 1);
  const cplx e1 = t1 * std::exp(I1 * (p * theta));
  const cplx e2 = t2 * std::exp(-I1 * theta);
  if (!(e1.real() > 0.0) || !(e2.real() > 0.0) || t1 == 0.0 || t2 == 0.0)
    throw Error(ErrorKind::DomainError, "integrand does not decay along any ray");
  const double r0 = std::pow(std::abs(t2) / (p * std::abs(t1)), 1.0 / (p + 1));
  const double u0 = std::log(r0);
  const double curv = p * (p + 1) * std::abs(t1) * std::pow(r0, p);
  const double h0 = std::min(0.5, 1.0 / std::sqrt(1.0 + curv));
  auto f = [&](double u) -> cplx {
    const cplx ex = -(e1 * std::exp(p * u) + e2 * std::exp(-u)) + double(n + 1) * u;
    if (ex.real() < -745.0) return 0.0;
    return std::exp(ex);
  };
  const cplx body = integrate_line(f, u0, h0, 1e-14, 12).value;
  return body * std::exp(I1 * ((n + 1) * theta));
}

cplx laplace_type_closed(cplx t1, cplx t2, int n, LaplaceKind kind) {
  const cplx l1 = std::log(t1), l2 = std::log(t2);
  if (kind == LaplaceKind::Quadratic) {
    const cplx logx = l1 + 2.0 * l2 - std::log(4.0);
    const cplx g = meijer_g_303_log({0, 1}, {1, 2}, {n + 1, 2}, logx);
    return g * std::exp(-0.5 * (n + 1) * l1) / (2.0 * std::sqrt(kPi));
  }
  if (n < -3 || n > 1) throw Error(ErrorKind::InvalidArgument, "closed Linear form supports -3 <= n <= 1");
  const cplx arg = 2.0 * std::exp(0.5 * (l1 + l2));
  return 2.0 * std::exp(0.5 * (n + 1) * (l2 - l1)) * bessel_k(n + 1, arg);
}

}  // namespace rmb
