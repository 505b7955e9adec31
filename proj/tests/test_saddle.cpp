#include <cmath>

#include "doctest.h"
#include "rmblock/error.hpp"
#include "rmblock/saddle.hpp"
#include "support.hpp"

using namespace rmb;
using testing::rel;

TEST_CASE("gaussian cases are exact") {
  for (const char* name : {"gaussian", "gaussian-moment"}) {
    const SyntheticCase c = synthetic_case(name);
    const ExpansionReport r = verify_expansion(c.problem, c.evaluator, {50, 100, 200, 400});
    CHECK(r.exact);
    for (const auto& row : r.rows) CHECK(row.rel_err <= 1e-14);
  }
}

TEST_CASE("non-gaussian cases decay like 1/N") {
  for (const char* name : {"quartic-1d", "quartic-2d", "k2-shaped"}) {
    const SyntheticCase c = synthetic_case(name);
    const ExpansionReport r = verify_expansion(c.problem, c.evaluator, {50, 100, 200, 400});
    CHECK_FALSE(r.exact);
    CHECK(r.exponent == doctest::Approx(1.0).epsilon(0.2));
  }
  CHECK_THROWS_AS(synthetic_case("cubic"), Error);
}

TEST_CASE("constant shift of J scales the leading term") {
  SaddleProblem sp = synthetic_case("quartic-1d").problem;
  const cplx before = leading_term(sp, 30);
  sp.J0 += 0.25;
  CHECK(rel(leading_term(sp, 30), std::exp(-30 * 0.25) * before) < 1e-14);
  CHECK(rel(leading_term_scaled(sp, 30), leading_term_scaled(synthetic_case("quartic-1d").problem, 30)) < 1e-15);
}

TEST_CASE("rotated direction for a negative Hessian") {
  // J = -u^2/2 along the imaginary direction: int e^{N u^2/2} du over i R = i sqrt(2 pi / N)
  SaddleProblem sp = synthetic_case("gaussian").problem;
  sp.d2J(0) = -1.0;
  sp.mu(0) = cplx(0, 1);
  CHECK(rel(leading_term(sp, 8), cplx(0, std::sqrt(2 * M_PI / 8))) < 1e-15);
  // flipping the direction flips the sign
  sp.mu(0) = cplx(0, -1);
  CHECK(rel(leading_term(sp, 8), cplx(0, -std::sqrt(2 * M_PI / 8))) < 1e-15);
  sp.mu(0) = 1.0;
  CHECK_THROWS_AS(leading_term(sp, 8), Error);
}

TEST_CASE("c1 for a vanishing D") {
  // D = u^2: c1 = F d2D / (2h) = 1 for h = 1
  CHECK(rel(correction_c1(synthetic_case("gaussian-moment").problem), 1.0) < 1e-15);
  const SaddleProblem k2 = synthetic_case("k2-shaped").problem;
  // per coordinate: 6/8 - (-2)(-4)/(2*16) = 1/2
  CHECK(rel(correction_c1(k2), 1.0) < 1e-15);
}

TEST_CASE("invalid problems") {
  SaddleProblem sp = synthetic_case("quartic-2d").problem;
  sp.dJ(1) = 0.1;
  CHECK_THROWS_AS(validate(sp), Error);
  sp = synthetic_case("quartic-2d").problem;
  sp.mu(0) = 2.0;
  CHECK_THROWS_AS(validate(sp), Error);
  sp = synthetic_case("quartic-2d").problem;
  sp.F0 = 0.0;
  CHECK_THROWS_AS(validate(sp), Error);
  sp = synthetic_case("quartic-2d").problem;
  sp.d2D.resize(1);
  CHECK_THROWS_AS(validate(sp), Error);
  CHECK_THROWS_AS(leading_term(synthetic_case("gaussian").problem, 0), Error);
}
