#pragma once
#include <array>
#include <complex>
#include <string>

#include "rmblock/model.hpp"
#include "rmblock/specfun.hpp"

namespace rmb {

using cplx = std::complex<double>;

enum class LimitFamily { K1, K2, K3, WeakK2, WeakK3, ChiralGUE };

struct LimitKind {
  LimitFamily family = LimitFamily::K1;
  double sigma = 0.0;  // sigma_11 for WeakK2, sigma_12 for WeakK3, unused otherwise

  static LimitKind k1() { return {LimitFamily::K1, 0.0}; }
  static LimitKind k2() { return {LimitFamily::K2, 0.0}; }
  static LimitKind k3() { return {LimitFamily::K3, 0.0}; }
  static LimitKind weak_k2(double s) { return {LimitFamily::WeakK2, s}; }
  static LimitKind weak_k3(double s) { return {LimitFamily::WeakK3, s}; }
  static LimitKind chiral() { return {LimitFamily::ChiralGUE, 0.0}; }
};

std::string to_string(const LimitKind& k);
// k1, k2, k3, chiral, weak-k2:<sigma>, weak-k3:<sigma>
LimitKind parse_limit_kind(const std::string& text);

enum class K2Route { Auto, ClosedForm, Direct };

// Limit of tau E Tr (H - tau zeta)^{-1} with tau the theorem's scale (see theorem_scale).
// Real zeta is accepted where the boundary value is defined (all kinds except K2 via Direct at zeta = 0
// and the singular kinds at 0); Im zeta < 0 is a DomainError.
cplx limit_resolvent(const LimitKind& kind, cplx zeta, K2Route route = K2Route::Auto);

// Three-term G x 0F2 combination at x = -zeta^2 / 8. For real zeta the side of the cut is the one
// reached from Im zeta > 0.
cplx k2_closed(cplx zeta);
// (1/4pi) sum c V(n) W(r) with V(n) = int_0^inf e^{-v^2/2 + i zeta / v} v^n dv, W(r) = oint e^{w^2/2 - i zeta / w} w^r dw.
cplx k2_direct(cplx zeta);
cplx k3_closed(cplx zeta);
// (1/4pi) sum c V(n) W(r) with V(n) = int_0^inf e^{-v + i zeta / v} v^n dv, W(r) = oint e^{w - i zeta / w} w^r dw.
cplx k3_direct(cplx zeta);
cplx weak_k2(double sigma11, cplx zeta);
cplx weak_k3(double sigma12, cplx zeta);
cplx chiral_gue(cplx zeta);

// c_{n,r} = c_const + c_sigma sigma_11 + c_mizeta (-i zeta)
struct WeakK2Coefficient {
  int n, r;
  double c_const, c_sigma, c_mizeta;
};
const std::array<WeakK2Coefficient, 14>& weak_k2_coefficients();

// Ratio of the spacing scale to the theorem's scale, so that the one-point function in spacing units is
// m(xi) = (kappa / pi) Im R(kappa xi + i0).
double kappa(const LimitKind& kind);

// tau_N for a profile of the given family: sqrt(s)/N (K1), (s12/sqrt(s11)) N^{-3/2} (K2),
// (s13 sqrt(s22)/s12) N^{-2} (K3), 1/N for the weak and chiral families.
double theorem_scale(const VarianceProfile& p, const LimitKind& kind, long N);

// The family of Theorem 1 matching a profile with support, K <= 3; InvalidArgument otherwise.
LimitKind limit_kind_for(const VarianceProfile& p);

enum class DensityMethod {
  // evaluate on the real axis, choosing the cut side reached from above
  Boundary,
  // 2 f(delta/2) - f(delta) at delta = 1e-6
  Richardson,
};

// One-point function in spacing units.
double limit_density(const LimitKind& kind, double xi, DensityMethod method = DensityMethod::Boundary);

enum class Regime { Origin, Tail };
double asymptotic_density(const LimitKind& kind, double xi, Regime regime);

// The sigma_12 = 0 one-point function in the coordinates rho_N(xi / (3N)):
// (2/9)|xi| (J_0(2 xi / 3)^2 + J_1(2 xi / 3)^2) + 1 / (3 pi). In spacing units m(xi) = pi * special(pi xi).
double weak_k3_special(double sigma12, double xi);

}  // namespace rmb
