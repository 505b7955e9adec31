#include "rmblock/saddle.hpp"

#include <cmath>
#include <limits>

#include "rmblock/error.hpp"
#include "rmblock/quadrature.hpp"

namespace rmb {

namespace {

constexpr double kPi = M_PI;

Eigen::VectorXcd vec(std::initializer_list<cplx> v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (cplx x : v) out(i++) = x;
  return out;
}

SaddleProblem real_problem(int d) {
  SaddleProblem sp;
  sp.d = d;
  sp.ustar = Eigen::VectorXcd::Zero(d);
  sp.mu = Eigen::VectorXcd::Ones(d);
  sp.dJ = sp.d2J = sp.d3J = sp.dF = sp.dD = sp.d2D = Eigen::VectorXcd::Zero(d);
  return sp;
}

// int_R g(y) dy for a smooth integrand with Gaussian-like decay
cplx line(const std::function<cplx(double)>& g) { return integrate_line(g, 0.0, 0.25, 1e-15, 14).value; }

}  // namespace

void validate(const SaddleProblem& sp) {
  const Eigen::Index d = sp.d;
  if (d < 1) throw Error(ErrorKind::InvalidProblem, "dimension must be positive");
  for (const Eigen::VectorXcd* v : {&sp.ustar, &sp.mu, &sp.dJ, &sp.d2J, &sp.d3J, &sp.dF, &sp.dD, &sp.d2D})
    if (v->size() != d) throw Error(ErrorKind::InvalidProblem, "every derivative vector needs d entries");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(sp.dJ(i)) > 1e-10) throw Error(ErrorKind::InvalidProblem, "u* is not a critical point of J");
    if (std::abs(std::abs(sp.mu(i)) - 1.0) > 1e-12) throw Error(ErrorKind::InvalidProblem, "directions must have modulus 1");
    const cplx q = sp.mu(i) * sp.mu(i) * sp.d2J(i);
    if (!(q.real() > 0.0) || std::abs(q.imag()) > 1e-10 * std::abs(q))
      throw Error(ErrorKind::InvalidProblem, "mu_i^2 h_i must be real and positive");
  }
  if (sp.F0 == 0.0) throw Error(ErrorKind::InvalidProblem, "F(u*) must be nonzero");
}

cplx correction_c1(const SaddleProblem& sp) {
  cplx c = 0.0;
  for (int i = 0; i < sp.d; ++i) {
    const cplx h = sp.d2J(i);
    c += sp.dF(i) * sp.dD(i) / h + sp.F0 * sp.d2D(i) / (2.0 * h) - sp.F0 * sp.dD(i) * sp.d3J(i) / (2.0 * h * h);
  }
  return c;
}

cplx leading_term_scaled(const SaddleProblem& sp, long N) {
  validate(sp);
  if (N < 1) throw Error(ErrorKind::InvalidProblem, "N must be positive");
  const double Nd = double(N);
  cplx pre = std::pow(2.0 * kPi / Nd, 0.5 * sp.d);
  for (int i = 0; i < sp.d; ++i) pre *= sp.mu(i) / std::sqrt(std::abs(sp.d2J(i)));
  if (sp.D0 != 0.0) return pre * sp.F0 * sp.D0;
  return pre * correction_c1(sp) / Nd;
}

cplx leading_term(const SaddleProblem& sp, long N) { return std::exp(-double(N) * sp.J0) * leading_term_scaled(sp, N); }

ExpansionReport verify_expansion(const SaddleProblem& sp, const std::function<cplx(long)>& evaluator,
                                 const std::vector<long>& Ngrid) {
  ExpansionReport rep;
  rep.exact = true;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool zero = false;
  for (long N : Ngrid) {
    const cplx lead = leading_term_scaled(sp, N);
    const cplx ref = evaluator(N);
    if (!std::isfinite(ref.real()) || !std::isfinite(ref.imag()))
      throw Error(ErrorKind::QuadratureFailure, "reference integral is not finite");
    const double e = std::abs(ref - lead) / std::abs(lead);
    rep.rows.push_back({N, ref, lead, e});
    if (e > 1e-14) rep.exact = false;
    if (e == 0.0) {
      zero = true;
      continue;
    }
    const double x = std::log(double(N)), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(rep.rows.size());
  if (zero || n < 2)
    rep.exponent = std::numeric_limits<double>::quiet_NaN();
  else
    rep.exponent = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

std::vector<std::string> synthetic_case_names() {
  return {"gaussian", "gaussian-moment", "quartic-1d", "quartic-2d", "k2-shaped"};
}

SyntheticCase synthetic_case(const std::string& name) {
  SyntheticCase c;
  c.name = name;
  if (name == "gaussian") {
    // J = u^2/2, F = D = 1
    c.problem = real_problem(1);
    c.problem.d2J = vec({1.0});
    c.evaluator = [](long N) { return cplx(std::sqrt(2.0 * kPi / double(N))); };
    return c;
  }
  if (name == "gaussian-moment") {
    // J = u^2/2, F = 1, D = u^2
    c.problem = real_problem(1);
    c.problem.d2J = vec({1.0});
    c.problem.D0 = 0.0;
    c.problem.d2D = vec({2.0});
    c.evaluator = [](long N) { return cplx(std::sqrt(2.0 * kPi / double(N)) / double(N)); };
    return c;
  }
  if (name == "quartic-1d") {
    // J = u^2/2 + u^3/3 + u^4/4, F = 1 + u, D = 1
    c.problem = real_problem(1);
    c.problem.d2J = vec({1.0});
    c.problem.d3J = vec({2.0});
    c.problem.dF = vec({1.0});
    c.evaluator = [](long N) {
      const double s = 1.0 / std::sqrt(double(N));
      return line([&](double y) -> cplx {
               const double u = s * y;
               return std::exp(-double(N) * (u * u / 2 + u * u * u / 3 + u * u * u * u / 4)) * (1.0 + u);
             }) *
             s;
    };
    return c;
  }
  if (name == "quartic-2d") {
    // J = u1^2/2 + u1^3/3 + u1^4/4 + u2^2/2 + u2^4/4 + u1^2 u2^2 / 4, F = 1 + u1 + u2^2, D = u1 + u2^2 + u1 u2
    c.problem = real_problem(2);
    c.problem.d2J = vec({1.0, 1.0});
    c.problem.d3J = vec({2.0, 0.0});
    c.problem.dF = vec({1.0, 0.0});
    c.problem.D0 = 0.0;
    c.problem.dD = vec({1.0, 0.0});
    c.problem.d2D = vec({0.0, 2.0});
    c.evaluator = [](long N) {
      const double Nd = double(N), s = 1.0 / std::sqrt(Nd);
      auto outer = [&](double y1) -> cplx {
        const double u1 = s * y1;
        const double j1 = u1 * u1 / 2 + u1 * u1 * u1 / 3 + u1 * u1 * u1 * u1 / 4;
        return line([&](double y2) -> cplx {
          const double u2 = s * y2;
          const double J = j1 + u2 * u2 / 2 + u2 * u2 * u2 * u2 / 4 + u1 * u1 * u2 * u2 / 4;
          return std::exp(-Nd * J) * (1.0 + u1 + u2 * u2) * (u1 + u2 * u2 + u1 * u2);
        });
      };
      return line(outer) * s * s;
    };
    return c;
  }
  if (name == "k2-shaped") {
    // J = sum_i (u_i^2 - 2 log u_i) on (0, inf)^2, F = 1, D = 1/(u1^2 u2^2) - 1; u* = (1, 1), J(u*) = 2
    c.problem = real_problem(2);
    c.problem.ustar = vec({1.0, 1.0});
    c.problem.J0 = 2.0;
    c.problem.d2J = vec({4.0, 4.0});
    c.problem.d3J = vec({-4.0, -4.0});
    c.problem.D0 = 0.0;
    c.problem.dD = vec({-2.0, -2.0});
    c.problem.d2D = vec({6.0, 6.0});
    c.evaluator = [](long N) {
      // A = int e^{-N u^2} u^{2N-2} du = Gamma(N - 1/2) / (2 N^{N - 1/2}), B = A (N - 1/2) / N,
      // integral = A^2 - B^2 = A^2 (1/N - 1/(4N^2)); scaled by e^{2N}
      const double Nd = double(N);
      const double logA = std::lgamma(Nd - 0.5) - std::log(2.0) - (Nd - 0.5) * std::log(Nd) + Nd;
      return cplx(std::exp(2.0 * logA) * (1.0 / Nd - 0.25 / (Nd * Nd)));
    };
    return c;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown synthetic case '" + name + "'");
}

}  // namespace rmb
