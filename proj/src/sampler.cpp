#include "rmblock/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "rmblock/error.hpp"
#include "rmblock/hermitian_eig.hpp"
#include "rmblock/io.hpp"
#include "rmblock/parallel.hpp"
#include "rmblock/rng.hpp"

namespace rmb {

HermitianMatrix sample_block_matrix(const VarianceProfile& p, long N, std::uint64_t seed) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  const int K = p.K();
  const double sd = std::sqrt(0.5 / double(N));
  SplitMix64 rng(seed);
  HermitianMatrix H = HermitianMatrix::Zero(K * N, K * N);
  Eigen::MatrixXcd X(N, N);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      // draw every X_ij so the stream layout does not depend on which entries vanish
      for (long c = 0; c < N; ++c)
        for (long r = 0; r < N; ++r) X(r, c) = sd * rng.normal_pair();
      const double s = p.S(i, j);
      if (s == 0.0) continue;
      const double w = std::sqrt(0.5 * s);
      H.block(i * N, j * N, N, N) += w * X;
      H.block(j * N, i * N, N, N) += w * X.adjoint();
    }
  return H;
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& H) { return hermitian_eigenvalues<double>(H); }

std::vector<Eigen::VectorXd> sample_spectra(const VarianceProfile& p, long N, long trials, std::uint64_t seed,
                                            const SamplerOptions& opt, long* discarded) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  std::vector<Eigen::VectorXd> out(trials);
  std::vector<int> attempts(trials, 0);
  const long cap = trials / 100;
  parallel_for(trials, opt.threads, [&](long t) {
    for (int attempt = 0;; ++attempt) {
      try {
        out[t] = eigenvalues(sample_block_matrix(p, N, derive_seed(seed, std::uint64_t(t), std::uint64_t(attempt))));
        attempts[t] = attempt;
        return;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoConvergence || attempt >= 3) throw;
      }
    }
  });
  long total = 0;
  for (long t = 0; t < trials; ++t) {
    if (attempts[t] > 0 && opt.log_discards)
      std::cerr << "sampler: trial " << t << " resampled " << attempts[t] << " time(s) after NoConvergence\n";
    total += attempts[t];
  }
  if (total > cap && total > 0)
    throw Error(ErrorKind::TooManyDiscards, "more than 1% of trials failed to diagonalize");
  if (discarded) *discarded = total;
  return out;
}

std::vector<MCEstimate> mc_resolvent_trace(const VarianceProfile& p, long N, const std::vector<cplx>& zs,
                                           long trials, std::uint64_t seed, const SamplerOptions& opt) {
  if (trials < 2) throw Error(ErrorKind::InvalidArgument, "trials must be at least 2");
  for (cplx z : zs)
    if (!(z.imag() > 0.0)) throw Error(ErrorKind::InvalidArgument, "mc_resolvent_trace needs Im z > 0");
  const std::size_t nz = zs.size();
  const double dim = double(p.K()) * double(N);
  std::vector<cplx> values(std::size_t(trials) * nz);
  std::vector<int> attempts(trials, 0);
  parallel_for(trials, opt.threads, [&](long t) {
    for (int attempt = 0;; ++attempt) {
      try {
        Eigen::VectorXd ev =
            eigenvalues(sample_block_matrix(p, N, derive_seed(seed, std::uint64_t(t), std::uint64_t(attempt))));
        for (std::size_t k = 0; k < nz; ++k) {
          cplx s = 0.0;
          for (Eigen::Index i = 0; i < ev.size(); ++i) s += 1.0 / (ev(i) - zs[k]);
          values[std::size_t(t) * nz + k] = s / dim;
        }
        attempts[t] = attempt;
        return;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoConvergence || attempt >= 3) throw;
      }
    }
  });
  long discards = 0;
  for (long t = 0; t < trials; ++t) {
    if (attempts[t] > 0 && opt.log_discards)
      std::cerr << "sampler: trial " << t << " resampled after NoConvergence\n";
    discards += attempts[t];
  }
  if (discards > trials / 100 && discards > 0)
    throw Error(ErrorKind::TooManyDiscards, "more than 1% of trials failed to diagonalize");

  std::vector<MCEstimate> out(nz);
  for (std::size_t k = 0; k < nz; ++k) {
    cplx mean = 0.0;
    for (long t = 0; t < trials; ++t) mean += values[std::size_t(t) * nz + k];
    mean /= double(trials);
    double vr = 0.0, vi = 0.0;
    for (long t = 0; t < trials; ++t) {
      const cplx d = values[std::size_t(t) * nz + k] - mean;
      vr += d.real() * d.real();
      vi += d.imag() * d.imag();
    }
    const double denom = double(trials - 1) * double(trials);
    out[k] = {mean, std::sqrt(std::max(vr, vi) / denom), trials, discards};
  }
  return out;
}

MCEstimate mc_resolvent_trace(const VarianceProfile& p, long N, cplx z, long trials, std::uint64_t seed,
                              const SamplerOptions& opt) {
  return mc_resolvent_trace(p, N, std::vector<cplx>{z}, trials, seed, opt)[0];
}

std::vector<double> Histogram::density() const {
  std::vector<double> d(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double width = edges[b + 1] - edges[b];
    double denom = double(trials) * width;
    if (normalization == Normalization::MacroscopicDensity) denom *= double(K) * double(N);
    d[b] = double(counts[b]) / denom;
  }
  return d;
}

std::vector<double> Histogram::centers() const {
  std::vector<double> c(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) c[b] = 0.5 * (edges[b] + edges[b + 1]);
  return c;
}

namespace {

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw Error(ErrorKind::InvalidArgument, "histogram needs at least two edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(edges[i] < edges[i + 1])) throw Error(ErrorKind::InvalidArgument, "histogram edges must increase strictly");
}

}  // namespace

void accumulate(Histogram& h, const std::vector<Eigen::VectorXd>& spectra, double scale) {
  const double lo = h.edges.front(), hi = h.edges.back();
  for (const auto& ev : spectra)
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const double x = ev(i) / scale;
      if (x < lo || x > hi) {
        ++h.outside;
        continue;
      }
      auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
      std::size_t b = std::size_t(it - h.edges.begin());
      b = b == 0 ? 0 : std::min(b - 1, h.counts.size() - 1);
      ++h.counts[b];
    }
  h.emptyBins = std::any_of(h.counts.begin(), h.counts.end(), [](long c) { return c == 0; });
}

Histogram macroscopic_histogram(const VarianceProfile& p, long N, long trials, const std::vector<double>& edges,
                                std::uint64_t seed, const SamplerOptions& opt) {
  check_edges(edges);
  Histogram h;
  h.edges = edges;
  h.counts.assign(edges.size() - 1, 0);
  h.trials = trials;
  h.K = p.K();
  h.N = N;
  h.seed = seed;
  h.normalization = Normalization::MacroscopicDensity;
  accumulate(h, sample_spectra(p, N, trials, seed, opt), 1.0);
  return h;
}

Histogram microscopic_histogram(const VarianceProfile& p, long N, long trials, const std::vector<double>& xi_edges,
                                std::uint64_t seed, const SamplerOptions& opt) {
  check_edges(xi_edges);
  const SingularityClass c = classify_singularity(p);
  Histogram h;
  h.edges = xi_edges;
  h.counts.assign(xi_edges.size() - 1, 0);
  h.trials = trials;
  h.K = p.K();
  h.N = N;
  h.seed = seed;
  h.normalization = Normalization::MicroscopicDensity;
  h.eta = spacing_scale(c, p, N);
  accumulate(h, sample_spectra(p, N, trials, seed, opt), h.eta);
  return h;
}

std::string histogram_csv(const Histogram& h, const std::vector<std::string>& extra_meta) {
  std::ostringstream os;
  os << "# K=" << h.K << "\n# N=" << h.N << "\n# trials=" << h.trials << "\n# seed=" << h.seed
     << "\n# eta_N=" << fmt17(h.eta) << "\n# normalization="
     << (h.normalization == Normalization::MacroscopicDensity ? "macroscopic" : "microscopic") << "\n";
  for (const auto& m : extra_meta) os << "# " << m << "\n";
  os << "xi_lo,xi_hi,count,density\n";
  const auto d = h.density();
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    os << fmt17(h.edges[b]) << ',' << fmt17(h.edges[b + 1]) << ',' << h.counts[b] << ',' << fmt17(d[b]) << '\n';
  return os.str();
}

}  // namespace rmb
