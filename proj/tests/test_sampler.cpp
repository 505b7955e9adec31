#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "rmblock/error.hpp"
#include "rmblock/hermitian_eig.hpp"
#include "rmblock/rng.hpp"
#include "rmblock/sampler.hpp"

using namespace rmb;

namespace {
const VarianceProfile kP = validate_profile((Eigen::MatrixXd(2, 2) << 1, 2, 2, 0.5).finished());
}

TEST_CASE("samples are Hermitian and reproducible") {
  const HermitianMatrix H = sample_block_matrix(kP, 7, 42);
  CHECK(H.rows() == 14);
  CHECK((H - H.adjoint()).norm() == 0.0);
  CHECK(H == sample_block_matrix(kP, 7, 42));
  CHECK(H != sample_block_matrix(kP, 7, 43));
}

TEST_CASE("block variances") {
  const long N = 40, trials = 400;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  for (long t = 0; t < trials; ++t) {
    const HermitianMatrix H = sample_block_matrix(kP, N, derive_seed(9, t));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) acc(i, j) += H.block(i * N, j * N, N, N).squaredNorm();
  }
  acc /= double(trials * N);  // N^2 entries of variance s_ij / N
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(acc(i, j) == doctest::Approx(kP.S(i, j)).epsilon(0.02));
}

TEST_CASE("eigenvalues agree with Eigen") {
  for (long N : {1, 3, 30}) {
    const HermitianMatrix H = sample_block_matrix(kP, N, 5);
    const Eigen::VectorXd ours = eigenvalues(H);
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H, Eigen::EigenvaluesOnly).eigenvalues();
    CHECK((ours - ref).cwiseAbs().maxCoeff() < 1e-12 * (1 + ref.cwiseAbs().maxCoeff()));
  }
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
  D.diagonal() << 3.0, -1.0, 2.0;
  CHECK(hermitian_eigenvalues<double>(D) == Eigen::Vector3d(-1, 2, 3));
  Eigen::MatrixXcd C(2, 2);
  C << 1.0, cplx(0, 1), cplx(0, -1), 1.0;
  const Eigen::Vector2d e = hermitian_eigenvalues<double>(C);
  CHECK(std::abs(e(0)) < 1e-15);
  CHECK(e(1) == doctest::Approx(2.0));
}

TEST_CASE("Monte Carlo matches the K = 1 oracle") {
  const VarianceProfile p = validate_profile((Eigen::MatrixXd(1, 1) << 1).finished());
  const cplx z(0.2, 0.5);
  const MCEstimate m = mc_resolvent_trace(p, 4, z, 20000, 11);
  const cplx o = oracle::gue_resolvent_trace(4, 1.0, z) / 4.0;
  CHECK(std::abs(m.mean - o) < 4 * m.stderr_);
  CHECK(m.trials == 20000);
}

TEST_CASE("results do not depend on the thread count") {
  SamplerOptions one, four;
  four.threads = 4;
  const MCEstimate a = mc_resolvent_trace(kP, 6, cplx(0.1, 0.3), 300, 77, one);
  const MCEstimate b = mc_resolvent_trace(kP, 6, cplx(0.1, 0.3), 300, 77, four);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  const auto s1 = sample_spectra(kP, 5, 50, 3, one);
  const auto s4 = sample_spectra(kP, 5, 50, 3, four);
  for (size_t t = 0; t < s1.size(); ++t) CHECK(s1[t] == s4[t]);
}

TEST_CASE("histograms") {
  std::vector<double> edges;
  for (int k = 0; k <= 40; ++k) edges.push_back(-3.0 + 6.0 * k / 40);
  const Histogram h = macroscopic_histogram(kP, 10, 200, edges, 8);
  const long inside = std::accumulate(h.counts.begin(), h.counts.end(), 0L);
  CHECK(inside + h.outside == 200 * 2 * 10);
  double mass = 0.0;
  const auto d = h.density();
  for (size_t k = 0; k < d.size(); ++k) mass += d[k] * (edges[k + 1] - edges[k]);
  CHECK(mass == doctest::Approx(double(inside) / (200 * 2 * 10)));
  const std::string csv = histogram_csv(h, {"note=x"});
  CHECK(csv.find("# note=x") != std::string::npos);
  CHECK(csv.find("xi_lo,xi_hi,count,density") != std::string::npos);
  CHECK_THROWS_AS(macroscopic_histogram(kP, 10, 5, {1.0, 0.0}, 8), Error);

  const VarianceProfile k2 = validate_profile((Eigen::MatrixXd(2, 2) << 1, 1, 1, 0).finished());
  const Histogram m = microscopic_histogram(k2, 16, 20, edges, 8);
  CHECK(m.normalization == Normalization::MicroscopicDensity);
  CHECK(m.eta == doctest::Approx(spacing_scale(classify_singularity(k2), k2, 16)));
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(sample_block_matrix(kP, 0, 1), Error);
  CHECK_THROWS_AS(mc_resolvent_trace(kP, 4, cplx(0, -1), 10, 1), Error);
  CHECK_THROWS_AS(mc_resolvent_trace(kP, 4, cplx(0, 1), 1, 1), Error);
}
