#pragma once
#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rmblock/model.hpp"

namespace rmb {

using cplx = std::complex<double>;
using HermitianMatrix = Eigen::MatrixXcd;

// H = sum_{i,j} sqrt(s_ij / 2) (E_ij (x) X_ij + E_ji (x) X_ij^*), one independent Ginibre X_ij
// (entry variance 1/N) per ordered pair (i, j).
HermitianMatrix sample_block_matrix(const VarianceProfile& p, long N, std::uint64_t seed);

// Ascending eigenvalues (Householder tridiagonalization + implicit QL).
Eigen::VectorXd eigenvalues(const HermitianMatrix& H);

struct MCEstimate {
  cplx mean;
  double stderr_ = 0.0;
  long trials = 0;
  long discarded = 0;
};

struct SamplerOptions {
  int threads = 1;
  bool log_discards = true;
};

// Eigenvalues of `trials` independent samples; trial t uses derive_seed(seed, t).
// Solver failures are resampled with a fresh derived seed, at most 1% of trials.
std::vector<Eigen::VectorXd> sample_spectra(const VarianceProfile& p, long N, long trials, std::uint64_t seed,
                                            const SamplerOptions& opt = {}, long* discarded = nullptr);

// Mean of (1/(KN)) Tr (H - z)^{-1}.
MCEstimate mc_resolvent_trace(const VarianceProfile& p, long N, cplx z, long trials, std::uint64_t seed,
                              const SamplerOptions& opt = {});
std::vector<MCEstimate> mc_resolvent_trace(const VarianceProfile& p, long N, const std::vector<cplx>& zs,
                                           long trials, std::uint64_t seed, const SamplerOptions& opt = {});

enum class Normalization { MacroscopicDensity, MicroscopicDensity };

struct Histogram {
  std::vector<double> edges;
  std::vector<long> counts;
  long trials = 0;
  Normalization normalization = Normalization::MacroscopicDensity;
  double eta = 1.0;  // spacing scale for the microscopic normalization
  long K = 1, N = 1;
  std::uint64_t seed = 0;
  bool emptyBins = false;
  long outside = 0;  // eigenvalues beyond the edges

  std::vector<double> density() const;
  std::vector<double> centers() const;
};

Histogram macroscopic_histogram(const VarianceProfile& p, long N, long trials, const std::vector<double>& edges,
                                std::uint64_t seed, const SamplerOptions& opt = {});
// Bins lambda / eta_N with the height estimating K N eta_N rho_N(eta_N xi).
Histogram microscopic_histogram(const VarianceProfile& p, long N, long trials, const std::vector<double>& xi_edges,
                                std::uint64_t seed, const SamplerOptions& opt = {});

// Bins precomputed spectra (already scaled into edge units).
void accumulate(Histogram& h, const std::vector<Eigen::VectorXd>& spectra, double scale);

// `xi_lo,xi_hi,count,density` with `#` metadata lines.
std::string histogram_csv(const Histogram& h, const std::vector<std::string>& extra_meta = {});

}  // namespace rmb
