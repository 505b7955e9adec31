#pragma once
#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace rmb {

using cplx = std::complex<double>;

// Data of int e^{-N J(u)} F(u) D(u) du at a nondegenerate critical point u* with diagonal Hessian.
struct SaddleProblem {
  int d = 1;
  Eigen::VectorXcd ustar;
  Eigen::VectorXcd mu;  // contour directions, |mu_i| = 1, mu_i^2 h_i > 0
  cplx J0 = 0.0;        // J(u*)
  Eigen::VectorXcd dJ, d2J, d3J;
  cplx F0 = 1.0;
  Eigen::VectorXcd dF;
  cplx D0 = 1.0;
  Eigen::VectorXcd dD, d2D;
};

// Throws InvalidProblem when an invariant is violated.
void validate(const SaddleProblem& sp);

// sum_i [dF dD / h + F d2D / (2h) - F dD d3J / (2 h^2)], the N^{-1} coefficient when D(u*) = 0.
cplx correction_c1(const SaddleProblem& sp);

// (2pi/N)^{d/2} prod(mu_i / sqrt|h_i|) times F D, or times c1 / N when D(u*) = 0; without e^{-N J(u*)}.
cplx leading_term_scaled(const SaddleProblem& sp, long N);
// The same including e^{-N J(u*)}.
cplx leading_term(const SaddleProblem& sp, long N);

struct ExpansionRow {
  long N;
  cplx reference;  // the evaluator's value, scaled like leading_term_scaled
  cplx leading;
  double rel_err;
};

struct ExpansionReport {
  std::vector<ExpansionRow> rows;
  // -slope of log rel_err against log N by least squares; NaN when an error is 0
  double exponent = 0.0;
  bool exact = false;  // every rel_err <= 1e-14
};

// evaluator(N) must return the integral divided by e^{-N J(u*)}.
ExpansionReport verify_expansion(const SaddleProblem& sp, const std::function<cplx(long)>& evaluator,
                                 const std::vector<long>& Ngrid);

struct SyntheticCase {
  std::string name;
  SaddleProblem problem;
  std::function<cplx(long)> evaluator;  // scaled like leading_term_scaled
};

// gaussian, gaussian-moment, quartic-1d, quartic-2d, k2-shaped
std::vector<std::string> synthetic_case_names();
SyntheticCase synthetic_case(const std::string& name);

}  // namespace rmb
