#include "rmblock/limits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rmblock/error.hpp"
#include "rmblock/quadrature.hpp"

namespace rmb {

namespace {

const cplx I1(0.0, 1.0);
constexpr double kPi = M_PI;

// Closed-form K2 is used up to this |zeta|; the Mellin-Barnes G loses digits beyond it.
constexpr double kK2ClosedRadius = 6.0;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void require_upper(cplx zeta) {
  if (!finite(zeta)) throw Error(ErrorKind::DomainError, "zeta must be finite");
  if (zeta.imag() < 0.0) throw Error(ErrorKind::DomainError, "limits are defined for Im zeta >= 0");
}

// oint_{|w| = rho} e^{g(w)} w^r dw by the periodic trapezoid rule
template <typename G>
cplx circle_integral(G&& g, int r, double rho, int M) {
  cplx sum = 0.0;
  for (int m = 0; m < M; ++m) {
    const cplx w = std::polar(rho, 2.0 * kPi * m / M);
    sum += std::exp(g(w) + double(r + 1) * std::log(w));
  }
  return sum * I1 * (2.0 * kPi / M);
}

cplx bessel_pair_sum(cplx x) {
  // K_0 I_0 + K_1 I_1
  return bessel_k(0, x) * bessel_i(0, x) + bessel_k(1, x) * bessel_i(1, x);
}

// The branch of sqrt(-i zeta) continuous from Im zeta > 0 (Re >= 0 there).
cplx sqrt_mizeta(cplx zeta) { return std::sqrt(-I1 * zeta); }

const std::array<WeakK2Coefficient, 14> kWeakK2 = {{
    {-3, -1, 0.0, 0.0, 1.0},
    {-2, -1, -1.0, 0.0, 0.0},
    {-1, -1, 0.0, 0.0, 2.0},
    {0, -1, -1.0, 1.0, 0.0},
    {1, -1, 0.0, 0.0, 1.0},
    {2, -1, 0.0, 1.0, 0.0},
    {-2, -2, 0.0, 0.0, 1.0},
    {0, -2, 0.0, 0.0, 1.0},
    {-2, 0, 0.0, 0.0, 1.0},
    {0, 0, 0.0, 0.0, 1.0},
    {-2, 1, 0.0, 1.0, 0.0},
    {0, 1, 0.0, 1.0, 0.0},
    {-1, 0, 0.0, 2.0, 0.0},
    {1, 0, 0.0, 2.0, 0.0},
}};

// sum_{l >= max(0, -m)} x^{2l} / (l! (l + m)!)
cplx inner_series(cplx x, int m) {
  const int l0 = std::max(0, -m);
  const cplx x2 = x * x;
  cplx term = std::pow(x2, l0) / (std::tgamma(l0 + 1.0) * std::tgamma(l0 + m + 1.0));
  cplx sum = term;
  const double peak = std::abs(x) + 2.0;
  for (int l = l0; l < 100000; ++l) {
    term *= x2 / (double(l + 1) * double(l + 1 + m));
    sum += term;
    if (l > peak && std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
    if (!finite(sum)) break;
  }
  throw Error(ErrorKind::SeriesNotConverged, "double sum did not converge");
}

// S_r = sum_{k,l} (sigma/2)^k x^{2k+2l+1+r} / (k! l! (2k+l+1+r)!), x = -i zeta
cplx double_sum(double sigma, cplx x, int r) {
  cplx total = 0.0;
  double coef = 1.0;  // (sigma/2)^k / k!
  int quiet = 0;
  for (int k = 0; k < 10000; ++k) {
    if (k > 0) {
      if (sigma == 0.0) return total;
      coef *= 0.5 * sigma / k;
    }
    const int m = 2 * k + 1 + r;
    const cplx term = coef * std::pow(x, m) * inner_series(x, m);
    total += term;
    if (std::abs(term) <= 1e-14 * std::abs(total)) {
      if (++quiet >= 4) return total;
    } else {
      quiet = 0;
    }
    if (!finite(total)) break;
  }
  throw Error(ErrorKind::SeriesNotConverged, "double sum did not converge");
}

// int_0^inf e^{-sigma v^2 / 2 + i zeta (v + 1/v)} v^n dv along v = exp(t + i phi(t)), phi = theta0 tanh(t) s,
// which keeps both ends inside the sectors of decay for Im zeta >= 0, zeta != 0.
cplx weak_v_integral(double sigma, cplx zeta, int n) {
  const double s = zeta.real() < 0.0 ? -1.0 : 1.0;
  const double theta0 = kPi / 6.0;
  auto f = [&](double t) -> cplx {
    const double th = std::tanh(t);
    const double phi = theta0 * th * s;
    const double dphi = theta0 * (1.0 - th * th) * s;
    const cplx logv(t, phi);
    const cplx v = std::exp(logv);
    const cplx e = -0.5 * sigma * v * v + I1 * zeta * (v + 1.0 / v) + double(n + 1) * logv;
    if (e.real() < -745.0) return 0.0;
    return std::exp(e) * cplx(1.0, dphi);
  };
  return integrate_line(f, 0.0, 0.125, 1e-14, 12).value;
}

cplx k2_log_x(cplx zeta) {
  // log(-zeta^2 / 8) continued from Im zeta > 0
  if (zeta.imag() == 0.0) {
    const double xi = zeta.real();
    return cplx(std::log(xi * xi / 8.0), xi > 0.0 ? -kPi : kPi);
  }
  return std::log(-zeta * zeta / 8.0);
}

}  // namespace

std::string to_string(const LimitKind& k) {
  std::ostringstream os;
  os.precision(17);
  switch (k.family) {
    case LimitFamily::K1: return "k1";
    case LimitFamily::K2: return "k2";
    case LimitFamily::K3: return "k3";
    case LimitFamily::ChiralGUE: return "chiral";
    case LimitFamily::WeakK2: os << "weak-k2:" << k.sigma; return os.str();
    case LimitFamily::WeakK3: os << "weak-k3:" << k.sigma; return os.str();
  }
  return "?";
}

LimitKind parse_limit_kind(const std::string& text) {
  if (text == "k1") return LimitKind::k1();
  if (text == "k2") return LimitKind::k2();
  if (text == "k3") return LimitKind::k3();
  if (text == "chiral") return LimitKind::chiral();
  for (auto [prefix, fam] : {std::pair{"weak-k2:", LimitFamily::WeakK2}, std::pair{"weak-k3:", LimitFamily::WeakK3}}) {
    const std::string p(prefix);
    if (text.rfind(p, 0) == 0) {
      std::size_t used = 0;
      double s = 0.0;
      try {
        s = std::stod(text.substr(p.size()), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size() - p.size() || !std::isfinite(s) || s < 0.0)
        throw Error(ErrorKind::Config, "bad sigma in limit kind '" + text + "'");
      return {fam, s};
    }
  }
  throw Error(ErrorKind::Config, "unknown limit kind '" + text + "'");
}

const std::array<WeakK2Coefficient, 14>& weak_k2_coefficients() { return kWeakK2; }

cplx k2_closed(cplx zeta) {
  require_upper(zeta);
  // only the residue at s = 0 of the first G survives: G -> Gamma(1/2)^2 = pi
  if (zeta == 0.0) return I1 * std::sqrt(kPi / 2.0);
  const cplx lx = k2_log_x(zeta);
  const cplx x = -zeta * zeta / 8.0;
  const Rational h{1, 2}, one{1, 1}, th{3, 2}, two{2, 1}, zero{0, 1};
  const cplx t1 = 0.5 * meijer_g_303_log(zero, h, h, lx) * hyper_0f2(h, one, x);
  const cplx t2 = meijer_g_303_log(h, one, th, lx) * hyper_0f2(th, two, x);
  const cplx t3 = meijer_g_303_log(h, h, one, lx) * hyper_0f2(one, th, x);
  return I1 * std::sqrt(2.0 / kPi) * (t1 + t2 + t3);
}

cplx k2_direct(cplx zeta) {
  require_upper(zeta);
  if (zeta == 0.0) throw Error(ErrorKind::DomainError, "direct K2 route needs zeta != 0");
  const cplx t2 = -I1 * zeta;
  const double az = std::abs(zeta);
  const double rho = std::cbrt(az);
  const int M = std::max(128, 8 * int(std::ceil(std::pow(az, 2.0 / 3.0))) + 64);
  auto g = [&](cplx w) { return 0.5 * w * w - I1 * zeta / w; };
  auto V = [&](int n) { return laplace_type_integral(0.5, t2, n, LaplaceKind::Quadratic); };
  auto W = [&](int r) { return circle_integral(g, r, rho, M); };
  const cplx sum = V(0) * W(-1) - I1 * zeta * V(-3) * W(-1) - V(-2) * W(-1) + V(-2) * W(1) -
                   I1 * zeta * V(-2) * W(-2) + 2.0 * V(-1) * W(0);
  return sum / (4.0 * kPi);
}

cplx k3_closed(cplx zeta) {
  require_upper(zeta);
  if (zeta == 0.0) throw Error(ErrorKind::SingularAtZero, "K3 limit diverges at zeta = 0");
  return 2.0 * I1 * bessel_pair_sum(2.0 * sqrt_mizeta(zeta));
}

cplx k3_direct(cplx zeta) {
  require_upper(zeta);
  if (zeta == 0.0) throw Error(ErrorKind::SingularAtZero, "K3 limit diverges at zeta = 0");
  const cplx t2 = -I1 * zeta;
  const double az = std::abs(zeta);
  const double rho = std::sqrt(az);
  const int M = std::max(128, 8 * int(std::ceil(rho)) + 64);
  auto g = [&](cplx w) { return w - I1 * zeta / w; };
  auto V = [&](int n) { return laplace_type_integral(1.0, t2, n, LaplaceKind::Linear); };
  auto W = [&](int r) { return circle_integral(g, r, rho, M); };
  const cplx sum = V(-1) * W(-1) - I1 * zeta * V(-3) * W(-1) - V(-2) * W(-1) + V(-2) * W(0) -
                   I1 * zeta * V(-2) * W(-2);
  return sum / (4.0 * kPi);
}

cplx weak_k2(double sigma11, cplx zeta) {
  require_upper(zeta);
  if (!(sigma11 >= 0.0) || !std::isfinite(sigma11)) throw Error(ErrorKind::InvalidArgument, "sigma_11 must be >= 0");
  if (zeta == 0.0) throw Error(ErrorKind::DomainError, "weak K2 limit needs zeta != 0");
  const cplx x = -I1 * zeta;
  cplx V[6], S[4];
  for (int n = -3; n <= 2; ++n) V[n + 3] = weak_v_integral(sigma11, zeta, n);
  for (int r = -2; r <= 1; ++r) S[r + 2] = double_sum(sigma11, x, r);
  cplx sum = 0.0;
  for (const auto& c : kWeakK2) {
    const cplx coef = c.c_const + c.c_sigma * sigma11 + c.c_mizeta * x;
    sum += coef * V[c.n + 3] * S[c.r + 2];
  }
  return 0.5 * I1 * sum;
}

cplx weak_k3(double sigma12, cplx zeta) {
  require_upper(zeta);
  if (!(sigma12 >= 0.0) || !std::isfinite(sigma12)) throw Error(ErrorKind::InvalidArgument, "sigma_12 must be >= 0");
  if (zeta == 0.0) {
    if (sigma12 > 0.0) throw Error(ErrorKind::SingularAtZero, "weak K3 limit diverges at zeta = 0");
    return I1;  // sigma = 0: chiral part vanishes, the decoupled block contributes i
  }
  const cplx root = sqrt_mizeta(zeta) * std::sqrt(sigma12 - I1 * zeta);
  const cplx x = 2.0 * root;
  const cplx k0 = bessel_k(0, x), k1 = bessel_k(1, x), i0 = bessel_i(0, x), i1 = bessel_i(1, x);
  return 2.0 * I1 * ((sigma12 - 2.0 * I1 * zeta) * (k0 * i0 + k1 * i1) + root * (k1 * i0 + k0 * i1));
}

cplx chiral_gue(cplx zeta) {
  require_upper(zeta);
  if (zeta == 0.0) return 0.0;
  return 4.0 * zeta * bessel_pair_sum(-2.0 * I1 * zeta);
}

cplx limit_resolvent(const LimitKind& kind, cplx zeta, K2Route route) {
  switch (kind.family) {
    case LimitFamily::K1: require_upper(zeta); return I1;
    case LimitFamily::K2:
      if (route == K2Route::ClosedForm) return k2_closed(zeta);
      if (route == K2Route::Direct) return k2_direct(zeta);
      return std::abs(zeta) <= kK2ClosedRadius ? k2_closed(zeta) : k2_direct(zeta);
    case LimitFamily::K3: return k3_closed(zeta);
    case LimitFamily::WeakK2: return weak_k2(kind.sigma, zeta);
    case LimitFamily::WeakK3: return weak_k3(kind.sigma, zeta);
    case LimitFamily::ChiralGUE: return chiral_gue(zeta);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown limit kind");
}

double kappa(const LimitKind& kind) {
  switch (kind.family) {
    case LimitFamily::K1: return kPi;
    case LimitFamily::K2: return 2.0 * std::pow(2.0 * kPi / (3.0 * std::sqrt(3.0)), 1.5);
    case LimitFamily::K3: return kPi * kPi / 4.0;
    case LimitFamily::WeakK2:
    case LimitFamily::ChiralGUE: return kPi / 2.0;
    case LimitFamily::WeakK3: return kPi / 3.0;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown limit kind");
}

LimitKind limit_kind_for(const VarianceProfile& p) {
  const SingularityClass c = classify_singularity(p);
  if (p.K() == 1) return LimitKind::k1();
  if (c.ell == 2) return LimitKind::k2();
  if (c.ell == 3) return LimitKind::k3();
  throw Error(ErrorKind::InvalidArgument, "profile has no nontrivial origin limit");
}

double theorem_scale(const VarianceProfile& p, const LimitKind& kind, long N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  const double Nd = double(N);
  const auto& S = p.S;
  switch (kind.family) {
    case LimitFamily::K1:
      if (p.K() != 1) break;
      return std::sqrt(S(0, 0)) / Nd;
    case LimitFamily::K2:
      if (p.K() != 2) break;
      for (int d = 0; d < 2; ++d) {
        const int o = 1 - d;
        if (S(o, o) == 0.0 && S(d, d) > 0.0 && S(0, 1) > 0.0) return S(0, 1) / std::sqrt(S(d, d)) * std::pow(Nd, -1.5);
      }
      break;
    case LimitFamily::K3: {
      if (p.K() != 3) break;
      int perm[3] = {0, 1, 2};
      do {
        auto t = [&](int i, int j) { return S(perm[i], perm[j]); };
        if (t(1, 2) == 0.0 && t(2, 2) == 0.0 && t(0, 1) > 0.0 && t(0, 2) > 0.0 && t(1, 1) > 0.0)
          return t(0, 2) * std::sqrt(t(1, 1)) / t(0, 1) / (Nd * Nd);
      } while (std::next_permutation(perm, perm + 3));
      break;
    }
    case LimitFamily::WeakK2:
    case LimitFamily::WeakK3:
    case LimitFamily::ChiralGUE: return 1.0 / Nd;
  }
  throw Error(ErrorKind::InvalidArgument, "profile does not have the shape of " + to_string(kind));
}

double limit_density(const LimitKind& kind, double xi, DensityMethod method) {
  if (!std::isfinite(xi)) throw Error(ErrorKind::DomainError, "xi must be finite");
  const bool singular = kind.family == LimitFamily::K3 || (kind.family == LimitFamily::WeakK3 && kind.sigma > 0.0);
  if (xi == 0.0 && singular) throw Error(ErrorKind::SingularAtZero, "density diverges at the origin");
  const double k = kappa(kind);
  // The one-point function is even; evaluating at |xi| makes the symmetry exact.
  const double z = k * std::abs(xi);
  double im;
  if (method == DensityMethod::Boundary) {
    if (z == 0.0 && (kind.family == LimitFamily::WeakK2 || kind.family == LimitFamily::ChiralGUE)) return 0.0;
    im = limit_resolvent(kind, cplx(z, 0.0)).imag();
  } else {
    const double d = 1e-6;
    im = 2.0 * limit_resolvent(kind, cplx(z, 0.5 * d)).imag() - limit_resolvent(kind, cplx(z, d)).imag();
  }
  return std::max(0.0, k / kPi * im);
}

double asymptotic_density(const LimitKind& kind, double xi, Regime regime) {
  const double a = std::abs(xi);
  switch (kind.family) {
    case LimitFamily::K1: return 1.0;
    case LimitFamily::K2:
      if (regime == Regime::Origin) return 4.0 * kPi / std::pow(3.0, 2.25);
      return std::cbrt(4.0) / 3.0 * std::pow(a, -1.0 / 3.0);
    case LimitFamily::K3:
      if (regime == Regime::Origin)
        return -kPi / 4.0 * std::log(a) + kPi / 2.0 * (std::log(2.0 / kPi) - kEulerGamma + 0.5);
      return 1.0 / (2.0 * std::sqrt(2.0)) / std::sqrt(a);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "asymptotic densities exist for K1, K2 and K3");
}

double weak_k3_special(double sigma12, double xi) {
  if (sigma12 != 0.0) throw Error(ErrorKind::InvalidArgument, "the closed mixture holds for sigma_12 = 0");
  const double y = 2.0 * xi / 3.0;
  const double j0 = bessel_j(0, y), j1 = bessel_j(1, y);
  return 2.0 / 9.0 * std::abs(xi) * (j0 * j0 + j1 * j1) + 1.0 / (3.0 * kPi);
}

}  // namespace rmb
