#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rmblock/error.hpp"
#include "rmblock/susy.hpp"
#include "support.hpp"

using namespace rmb;
using testing::rel;

namespace {

VarianceProfile profile(std::initializer_list<std::initializer_list<double>> rows) {
  const Eigen::Index K = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd S(K, K);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) S(i, j++) = v;
    ++i;
  }
  return validate_profile(S);
}

cplx normalized(const VarianceProfile& p, long N, cplx z, double tol = 1e-8) {
  return finite_n_resolvent_checked(p, N, z, default_quadrature(p, N, z), tol).value / double(p.K() * N);
}

}  // namespace

TEST_CASE("K = 1 agrees with the GUE Hermite kernel") {
  for (double s : {1.0, 2.5})
    for (long N : {1, 2, 4, 7})
      for (cplx z : {cplx(0, 0.5), cplx(0.2, 0.5), cplx(-1.0, 0.2)}) {
        const VarianceProfile p = profile({{s}});
        const SusyResult r = finite_n_resolvent_checked(p, N, z, default_quadrature(p, N, z), 1e-4);
        const cplx o = oracle::gue_resolvent_trace(N, s, z);
        CHECK(rel(r.value, o) < 1e-12);
        // the estimate bounds the error of the base spec
        CHECK(std::abs(finite_n_resolvent(p, N, z, default_quadrature(p, N, z)) - o) <= 2 * r.est_err + 1e-12 * std::abs(o));
      }
}

TEST_CASE("frozen K = 2 and K = 3 values") {
  const VarianceProfile p2 = profile({{1, 1}, {1, 0}});
  CHECK(rel(normalized(p2, 1, cplx(0, 0.3)), cplx(0, 0.70241315074)) < 1e-10);
  CHECK(rel(normalized(p2, 4, cplx(0, 0.3)), cplx(0, 0.87043273080)) < 1e-10);
  CHECK(rel(normalized(p2, 16, cplx(0, 0.3)), cplx(0, 0.87871086397)) < 1e-9);
  const VarianceProfile p3 = profile({{0, 1, 1}, {1, 1, 0}, {1, 0, 0}});
  CHECK(rel(normalized(p3, 2, cplx(0, 0.3)), cplx(0, 0.82821111707)) < 1e-10);
  CHECK(rel(normalized(p3, 8, cplx(0.5, 0.3)), cplx(-0.2091965693, 0.6683094341)) < 1e-9);
}

TEST_CASE("reflection symmetry E -> -E") {
  const VarianceProfile p = profile({{1, 2}, {2, 0.5}});
  const cplx a = normalized(p, 3, cplx(0.4, 0.3));
  const cplx b = normalized(p, 3, cplx(-0.4, 0.3));
  CHECK(rel(a, -std::conj(b)) < 1e-10);
}

TEST_CASE("Laguerre radial map") {
  const VarianceProfile p = profile({{1, 0.5}, {0.5, 1}});
  QuadratureSpec q = default_quadrature(p, 4, cplx(0, 0.3));
  const cplx ref = finite_n_resolvent(p, 4, cplx(0, 0.3), refined(q));
  q.radialMap.assign(2, RadialMap::Laguerre);
  CHECK(rel(finite_n_resolvent(p, 4, cplx(0, 0.3), q), ref) < 1e-12);
  const VarianceProfile chiral = profile({{1, 1}, {1, 0}});
  CHECK_THROWS_AS(finite_n_resolvent(chiral, 4, cplx(0, 0.3), q), Error);
}

TEST_CASE("the density is the imaginary part over pi K N") {
  const VarianceProfile p = profile({{1}});
  const QuadratureSpec q = default_quadrature(p, 2, cplx(0.1, 0.05));
  CHECK(density_finite_n(p, 2, 0.1, 0.05, q) ==
        doctest::Approx(finite_n_resolvent(p, 2, cplx(0.1, 0.05), q).imag() / (2 * M_PI)).epsilon(1e-14));
}

TEST_CASE("quadrature specs are validated") {
  const VarianceProfile p = profile({{1, 1}, {1, 0}});
  QuadratureSpec q = default_quadrature(p, 4, cplx(0, 0.3));
  CHECK(q.radialNodes >= 48);
  CHECK(q.angularNodes >= 64);
  CHECK(refined(q).radialNodes == 2 * q.radialNodes);
  q.contourRadii.pop_back();
  CHECK_THROWS_AS(validate_quadrature(q, 2), Error);
  CHECK_THROWS_AS(finite_n_resolvent(profile({{1}}), 2, cplx(0, -1), default_quadrature(profile({{1}}), 2, cplx(0, 1))), Error);
  const VarianceProfile p4 = validate_profile(Eigen::MatrixXd::Ones(4, 4));
  CHECK_THROWS_AS(finite_n_resolvent(p4, 2, cplx(0, 1), default_quadrature(p4, 2, cplx(0, 1))), Error);
}

TEST_CASE("action and its gradient") {
  const VarianceProfile p = profile({{1, 2}, {2, 0}});
  const Eigen::Vector2cd x(cplx(0.7, 0.1), cplx(1.2, -0.3));
  const cplx z(0.2, 0.4);
  const double h = 1e-6;
  const Eigen::VectorXcd g = action_I_gradient(x, z, p);
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector2cd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    CHECK(rel((action_I(xp, z, p) - action_I(xm, z, p)) / (2 * h), g(i)) < 1e-8);
  }
  CHECK_THROWS_AS(action_I(Eigen::Vector2cd(0.0, 1.0), z, p), Error);
}

TEST_CASE("small determinants") {
  const Eigen::Matrix3d A = (Eigen::Matrix3d() << 2, -1, 0, 3, 1, 4, -2, 5, 1).finished();
  CHECK(small_det(A) == doctest::Approx(A.determinant()).epsilon(1e-14));
  CHECK(small_det(A.topLeftCorner(2, 2)) == doctest::Approx(5.0));
  CHECK_THROWS_AS(small_det(Eigen::Matrix4d::Identity()), Error);
}
