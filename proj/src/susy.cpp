#include "rmblock/susy.hpp"

#include <algorithm>
#include <cmath>

#include "rmblock/dyson.hpp"
#include "rmblock/quadrature.hpp"

namespace rmb {

namespace {

const cplx I1(0.0, 1.0);

struct Nodes {
  std::vector<double> x, w;
};

// t - e^{-t} = u
double solve_logexp(double u) {
  double lo = -50.0, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid - std::exp(-mid) < u) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

Nodes radial_nodes(RadialMap map, int n, double scale, long N) {
  Nodes r;
  if (map == RadialMap::Laguerre) {
    gauss_laguerre(n, 0.0, r.x, r.w);
    const double c = scale / double(N);
    for (int k = 0; k < n; ++k) {
      r.w[k] *= c * std::exp(r.x[k]);
      r.x[k] *= c;
    }
    return r;
  }
  // a^{N} behaviour near 0 is resolved once u < -39/(N+1) - 1; the upper tail decays at least like e^{-N a}.
  const double tlo = solve_logexp(-39.0 / double(N + 1) - 1.0);
  const double thi = solve_logexp(4.0);
  const double h = (thi - tlo) / (n - 1);
  r.x.resize(n);
  r.w.resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = tlo + k * h;
    const double a = scale * std::exp(t - std::exp(-t));
    r.x[k] = a;
    r.w[k] = h * a * (1.0 + std::exp(-t)) * ((k == 0 || k == n - 1) ? 0.5 : 1.0);
  }
  return r;
}

// Sum over the tensor grid of weight * exp(expo - M) * prod_{i in T} inv_i * extra, for all subsets T.
struct GridSums {
  std::vector<cplx> sums;  // indexed by subset bitmask
  double peak = 0.0;
};

template <typename NodeFn>
GridSums grid_sums(int K, int n, NodeFn&& node) {
  // node(multi-index, point, weight, exponent, extra) fills the evaluation data
  long total = 1;
  for (int i = 0; i < K; ++i) total *= n;
  std::vector<cplx> expo(total), weight(total), extra(total);
  Eigen::MatrixXcd pts(K, total);
  Eigen::VectorXcd tmp(K);
  double M = -std::numeric_limits<double>::infinity();
  std::vector<int> idx(K, 0);
  for (long g = 0; g < total; ++g) {
    long r = g;
    for (int i = 0; i < K; ++i) {
      idx[i] = int(r % n);
      r /= n;
    }
    node(idx, tmp, weight[g], expo[g], extra[g]);
    pts.col(g) = tmp;
    if (std::isfinite(expo[g].real())) M = std::max(M, expo[g].real());
  }
  GridSums out;
  out.peak = M;
  out.sums.assign(std::size_t(1) << K, 0.0);
  for (long g = 0; g < total; ++g) {
    if (!std::isfinite(expo[g].real())) continue;
    const double re = expo[g].real() - M;
    if (re < -745.0) continue;
    const cplx base = weight[g] * std::exp(cplx(re, expo[g].imag())) * extra[g];
    for (std::size_t T = 0; T < out.sums.size(); ++T) {
      cplx v = base;
      for (int i = 0; i < K; ++i)
        if (T & (std::size_t(1) << i)) v /= pts(i, g);
      out.sums[T] += v;
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXcd action_I_gradient(const Eigen::VectorXcd& x, cplx z, const VarianceProfile& p) {
  Eigen::VectorXcd g = p.S.cast<cplx>() * x;
  for (Eigen::Index i = 0; i < x.size(); ++i) g(i) -= I1 * z + 1.0 / x(i);
  return g;
}

void validate_quadrature(const QuadratureSpec& q, int K) {
  if (q.radialNodes < 16) throw Error(ErrorKind::InvalidArgument, "radialNodes must be >= 16");
  if (q.angularNodes < 16 || q.angularNodes % 2) throw Error(ErrorKind::InvalidArgument, "angularNodes must be even and >= 16");
  if (int(q.contourRadii.size()) != K || int(q.scales.size()) != K || int(q.radialMap.size()) != K)
    throw Error(ErrorKind::InvalidArgument, "quadrature spec needs K radii, scales and maps");
  for (int i = 0; i < K; ++i)
    if (!(q.contourRadii[i] > 0.0) || !(q.scales[i] > 0.0))
      throw Error(ErrorKind::InvalidArgument, "radii and scales must be positive");
}

QuadratureSpec default_quadrature(const VarianceProfile& p, long N, cplx z) {
  if (!(z.imag() > 0.0)) throw Error(ErrorKind::InvalidArgument, "default_quadrature needs Im z > 0");
  const DysonSolution s = solve_dyson(p, z);
  QuadratureSpec q;
  q.radialNodes = std::max(48, 8 * int(std::ceil(std::sqrt(double(N)))));
  q.angularNodes = int(std::max<long>(64, 4 * N + 16));
  for (int i = 0; i < p.K(); ++i) {
    q.contourRadii.push_back(std::abs(s.a(i)));
    q.scales.push_back(std::abs(s.a(i)));
    q.radialMap.push_back(RadialMap::LogExp);
  }
  return q;
}

QuadratureSpec refined(const QuadratureSpec& q) {
  QuadratureSpec r = q;
  r.radialNodes *= 2;
  r.angularNodes *= 2;
  return r;
}

cplx finite_n_resolvent(const VarianceProfile& p, long N, cplx z, const QuadratureSpec& q) {
  const int K = p.K();
  if (K > 3) throw Error(ErrorKind::UnsupportedK, "finite_n_resolvent supports K <= 3");
  if (!(z.imag() > 0.0)) throw Error(ErrorKind::InvalidArgument, "finite_n_resolvent needs Im z > 0");
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  validate_quadrature(q, K);
  // With s_ii = 0 the a_i integrand decays only like e^{-N s_ij a_i a_j}; Laguerre nodes do not resolve it.
  for (int i = 0; i < K; ++i)
    if (q.radialMap[i] == RadialMap::Laguerre && !(p.S(i, i) > 0.0))
      throw Error(ErrorKind::InvalidArgument, "Laguerre radial map needs s_ii > 0");
  const double Nd = double(N);

  std::vector<Nodes> rad(K);
  for (int i = 0; i < K; ++i) rad[i] = radial_nodes(q.radialMap[i], q.radialNodes, q.scales[i], N);

  GridSums A = grid_sums(K, q.radialNodes, [&](const std::vector<int>& idx, Eigen::VectorXcd& a, cplx& w, cplx& e,
                                               cplx& extra) {
    a.resize(K);
    double wt = 1.0;
    for (int i = 0; i < K; ++i) {
      a(i) = rad[i].x[idx[i]];
      wt *= rad[i].w[idx[i]];
    }
    w = wt;
    e = -Nd * action_I(a, z, p);
    extra = a.sum();
  });

  const int M = q.angularNodes;
  std::vector<cplx> ring(M);
  for (int m = 0; m < M; ++m) ring[m] = std::exp(I1 * (2.0 * M_PI * m / M));
  GridSums B = grid_sums(K, M, [&](const std::vector<int>& idx, Eigen::VectorXcd& b, cplx& w, cplx& e, cplx& extra) {
    b.resize(K);
    w = 1.0;
    for (int i = 0; i < K; ++i) {
      b(i) = q.contourRadii[i] * ring[idx[i]];
      w *= I1 * b(i) * (2.0 * M_PI / M);
    }
    e = Nd * action_I(b, z, p);
    extra = 1.0;
  });

  cplx sum = 0.0;
  for (std::size_t T = 0; T < A.sums.size(); ++T) {
    std::vector<int> rest;
    for (int i = 0; i < K; ++i)
      if (!(T & (std::size_t(1) << i))) rest.push_back(i);
    Eigen::MatrixXd sub(rest.size(), rest.size());
    for (std::size_t r = 0; r < rest.size(); ++r)
      for (std::size_t c = 0; c < rest.size(); ++c) sub(r, c) = p.S(rest[r], rest[c]);
    sum += small_det(sub) * A.sums[T] * B.sums[T];
  }
  const double logscale = A.peak + B.peak;
  if (!std::isfinite(logscale) || logscale > 700.0 || logscale < -700.0)
    throw Error(ErrorKind::QuadratureOverflow, "integrand dynamic range exceeds double precision");
  const cplx pref = I1 * std::pow(Nd, K + 1) / std::pow(2.0 * M_PI * I1, K);
  const cplx v = pref * std::exp(logscale) * sum;
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(ErrorKind::QuadratureOverflow, "result is not finite");
  return v;
}

SusyResult finite_n_resolvent_checked(const VarianceProfile& p, long N, cplx z, const QuadratureSpec& q, double tol) {
  const cplx base = finite_n_resolvent(p, N, z, q);
  const QuadratureSpec r = refined(q);
  const cplx fine = finite_n_resolvent(p, N, z, r);
  SusyResult out{fine, std::abs(fine - base), r};
  if (out.est_err > tol * std::abs(fine))
    throw Error(ErrorKind::NotConverged, "quadrature refinement changed the value by more than the tolerance");
  return out;
}

double density_finite_n(const VarianceProfile& p, long N, double E, double eps, const QuadratureSpec& q) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  return finite_n_resolvent(p, N, cplx(E, eps), q).imag() / (M_PI * p.K() * double(N));
}

}  // namespace rmb
