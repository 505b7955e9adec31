#include "rmblock/dyson.hpp"

#include <algorithm>
#include <cmath>

#include "rmblock/error.hpp"

namespace rmb {

namespace {

const cplx I1(0.0, 1.0);

Eigen::VectorXcd dyson_map(const VarianceProfile& p, cplx z, const Eigen::VectorXcd& a) {
  Eigen::VectorXcd d = p.S.cast<cplx>() * a;
  d.array() -= I1 * z;
  return d.cwiseInverse();
}

bool right_half(const Eigen::VectorXcd& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!(a(i).real() > 0.0) || !std::isfinite(a(i).imag())) return false;
  return true;
}

// Newton on F_i = a_i (S a - i z)_i - 1. Full steps are taken while they stay in Re a > 0; the residual
// is allowed to grow for a few steps, since the iterates near a singular point overshoot before settling.
bool newton(const VarianceProfile& p, cplx z, Eigen::VectorXcd& a, double tol, int maxIter, int& iters) {
  const Eigen::MatrixXcd S = p.S.cast<cplx>();
  const Eigen::Index K = a.size();
  double r = dyson_residual(p, z, a);
  for (int it = 0; it < maxIter; ++it) {
    if (r <= tol) return true;
    Eigen::VectorXcd d = S * a;
    d.array() -= I1 * z;
    Eigen::VectorXcd F = a.cwiseProduct(d).array() - 1.0;
    Eigen::MatrixXcd J = a.asDiagonal() * S;
    for (Eigen::Index i = 0; i < K; ++i) J(i, i) += d(i);
    Eigen::VectorXcd step = J.partialPivLu().solve(-F);
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, lambda *= 0.5) {
      Eigen::VectorXcd trial = a + lambda * step;
      if (!right_half(trial)) continue;
      double rt = dyson_residual(p, z, trial);
      if (std::isfinite(rt) && (rt < r || it < 8)) {
        a = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    ++iters;
    if (!accepted) return r <= tol;
  }
  return r <= tol;
}

bool damped(const VarianceProfile& p, cplx z, Eigen::VectorXcd& a, double target, int maxIter, int& iters) {
  double delta = 1.0;
  double r = dyson_residual(p, z, a);
  for (int it = 0; it < maxIter; ++it) {
    if (r <= target) return true;
    Eigen::VectorXcd next = (1.0 - delta) * a + delta * dyson_map(p, z, a);
    double rn = dyson_residual(p, z, next);
    ++iters;
    if (!(rn <= r) && delta > 1e-3) {
      delta = std::max(0.5 * delta, 1e-3);
      continue;
    }
    a = next;
    r = rn;
  }
  return r <= target;
}

}  // namespace

double dyson_residual(const VarianceProfile& p, cplx z, const Eigen::VectorXcd& a) {
  Eigen::VectorXcd d = p.S.cast<cplx>() * a;
  d.array() -= I1 * z;
  double r = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double v = std::abs(a(i) * d(i) - 1.0);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    r = std::max(r, v);
  }
  return r;
}

DysonSolution solve_dyson(const VarianceProfile& p, cplx z, double tol, int maxIter,
                          const std::optional<Eigen::VectorXcd>& guess) {
  if (!(z.imag() > 0.0)) throw Error(ErrorKind::InvalidArgument, "solve_dyson needs Im z > 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  const int K = p.K();
  DysonSolution sol;
  sol.z = z;
  int iters = 0;

  auto finish = [&](Eigen::VectorXcd a) {
    sol.a = std::move(a);
    sol.residual = dyson_residual(p, z, sol.a);
    sol.iterations = iters;
    if (!right_half(sol.a)) throw Error(ErrorKind::WrongBranch, "solution left the Re a > 0 half-space");
    return sol;
  };

  if (guess && guess->size() == K && right_half(*guess)) {
    Eigen::VectorXcd a = *guess;
    if (newton(p, z, a, tol, 60, iters)) return finish(a);
  }

  Eigen::VectorXcd a = Eigen::VectorXcd::Constant(K, I1 / z);
  // The damped map is slow near singular points of the density; give it a short budget only.
  if (damped(p, z, a, 1e-6, std::min(maxIter, 500), iters) && newton(p, z, a, tol, 60, iters))
    return finish(a);

  // Continuation from a comfortable height down to Im z; each step gets its own Newton budget.
  const double y_target = z.imag();
  double y = std::max({1.0, 2.0 * y_target, std::abs(z.real())});
  cplx zc(z.real(), y);
  a = Eigen::VectorXcd::Constant(K, I1 / zc);
  if (!damped(p, zc, a, 1e-8, maxIter, iters) || !newton(p, zc, a, 1e-14, 60, iters))
    throw Error(ErrorKind::NoConvergence, "Dyson iteration did not converge at the continuation start");
  // Secant predictor in (log y, log a): the components follow power laws near a singular point.
  Eigen::VectorXcd a_prev;
  double y_prev = 0.0;
  int steps = 0;
  while (y > y_target) {
    double step = 0.5;
    Eigen::VectorXcd base = a;
    bool ok = false;
    for (int tries = 0; tries < 30; ++tries) {
      double y_next = std::max(y * step, y_target);
      a = base;
      if (y_prev > 0.0) {
        const double t = std::log(y_next / y) / std::log(y / y_prev);
        Eigen::VectorXcd pred = (base.array().log() + t * (base.array().log() - a_prev.array().log())).exp();
        if (right_half(pred)) a = pred;
      }
      if (newton(p, cplx(z.real(), y_next), a, std::max(tol, 1e-14), 60, iters)) {
        a_prev = base;
        y_prev = y;
        y = y_next;
        ok = true;
        break;
      }
      step = std::sqrt(step);
    }
    if (!ok) throw Error(ErrorKind::NoConvergence, "continuation in Im z stalled");
    if (++steps > 4000) throw Error(ErrorKind::NoConvergence, "continuation needed too many steps");
  }
  if (dyson_residual(p, z, a) > tol && !newton(p, z, a, tol, 60, iters))
    throw Error(ErrorKind::NoConvergence, "Newton polish failed");
  return finish(a);
}

double density_infinity(const VarianceProfile& p, double E, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  DysonSolution s = solve_dyson(p, cplx(E, eps));
  return s.a.real().mean() / M_PI;
}

DensityEstimate density_infinity_extrapolated(const VarianceProfile& p, double E, double eps,
                                              const std::optional<Eigen::VectorXcd>& guess) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  double rho[3];
  std::optional<Eigen::VectorXcd> g = guess;
  Eigen::VectorXcd last;
  for (int k = 0; k < 3; ++k) {
    DysonSolution s = solve_dyson(p, cplx(E, eps / double(1 << k)), 1e-13, 20000, g);
    rho[k] = s.a.real().mean() / M_PI;
    g = s.a;
    last = s.a;
  }
  const double r1 = 2.0 * rho[1] - rho[0];
  const double r2 = 2.0 * rho[2] - rho[1];
  return {r2, std::abs(r2 - r1), last};
}

double density_at_origin(const VarianceProfile& p) {
  return density_infinity_extrapolated(p, 0.0, 1e-6).rho;
}

std::vector<DensityPoint> density_curve(const VarianceProfile& p, const std::vector<double>& E_grid,
                                        double eps, bool extrapolate) {
  std::vector<DensityPoint> out;
  out.reserve(E_grid.size());
  std::optional<Eigen::VectorXcd> warm;
  for (double E : E_grid) {
    if (extrapolate) {
      DensityEstimate d = density_infinity_extrapolated(p, E, eps, warm);
      warm = d.a;
      out.push_back({E, eps, d.rho});
    } else {
      DysonSolution s = solve_dyson(p, cplx(E, eps), 1e-13, 20000, warm);
      warm = s.a;
      out.push_back({E, eps, s.a.real().mean() / M_PI});
    }
  }
  return out;
}

std::vector<double> default_fit_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 20; ++k) g.push_back(std::pow(10.0, -6.0 - 4.0 * k / 20.0));
  return g;
}

SingularityFit singularity_fit(const VarianceProfile& p, const std::vector<double>& E_grid, EpsSchedule eps) {
  if (E_grid.size() < 3) throw Error(ErrorKind::InvalidArgument, "fit grid needs at least 3 points");
  double lo = std::abs(E_grid.front()), hi = lo;
  for (double E : E_grid) {
    if (!(E != 0.0)) throw Error(ErrorKind::InvalidArgument, "fit grid must avoid E = 0");
    lo = std::min(lo, std::abs(E));
    hi = std::max(hi, std::abs(E));
  }
  if (!(lo < 1e-2) || std::log10(std::min(hi, 1e-2) / lo) < 3.0 - 1e-9)
    throw Error(ErrorKind::InvalidArgument, "fit grid must span at least 3 decades below 1e-2");

  std::vector<double> grid(E_grid);
  std::sort(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  SingularityFit fit;
  std::optional<Eigen::VectorXcd> warm;
  for (double E : grid) {
    try {
      DensityEstimate d = density_infinity_extrapolated(p, E, eps.relative * std::abs(E), warm);
      warm = d.a;
      if (!(d.rho > 0.0)) {
        ++fit.failures;
        continue;
      }
      fit.E.push_back(std::abs(E));
      fit.rho.push_back(d.rho);
    } catch (const Error&) {
      ++fit.failures;
      warm.reset();
    }
  }
  if (fit.failures * 5 > static_cast<int>(grid.size()) || fit.E.size() < 3)
    throw Error(ErrorKind::FitDegenerate, "density vanished or solver failed on too much of the grid");

  const Eigen::Index n = static_cast<Eigen::Index>(fit.E.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    A(k, 0) = std::log(fit.E[k]);
    A(k, 1) = 1.0;
    b(k) = std::log(fit.rho[k]);
  }
  Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  fit.sigma_hat = -coef(0);
  fit.theta_hat = std::exp(coef(1));
  return fit;
}

}  // namespace rmb
