#pragma once
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "rmblock/error.hpp"

namespace rmb {

// Reduces the Hermitian matrix A (lower triangle referenced, overwritten) to real symmetric
// tridiagonal form with Householder reflectors H = I - tau v v^*, chosen so the subdiagonal is real.
template <typename Real>
void hermitian_tridiagonalize(Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& A,
                              Eigen::Matrix<Real, Eigen::Dynamic, 1>& d, Eigen::Matrix<Real, Eigen::Dynamic, 1>& e) {
  using C = std::complex<Real>;
  using Vec = Eigen::Matrix<C, Eigen::Dynamic, 1>;
  const Eigen::Index n = A.rows();
  d.resize(n);
  e.resize(std::max<Eigen::Index>(n - 1, 0));
  Vec w(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const Eigen::Index m = n - i - 1;
    auto x = A.col(i).tail(m);
    C alpha = x(0);
    const Real xnorm = m > 1 ? x.tail(m - 1).norm() : Real(0);
    C tau(0);
    Real beta = alpha.real();
    if (xnorm != Real(0) || alpha.imag() != Real(0)) {
      beta = -std::copysign(std::hypot(std::hypot(alpha.real(), alpha.imag()), xnorm), alpha.real());
      tau = C((beta - alpha.real()) / beta, -alpha.imag() / beta);
      if (m > 1) x.tail(m - 1) *= C(1) / (alpha - beta);
      x(0) = C(1);
      auto v = x;
      auto A22 = A.bottomRightCorner(m, m);
      auto ww = w.head(m);
      ww.noalias() = tau * (A22.template selfadjointView<Eigen::Lower>() * v);
      const C s = Real(-0.5) * tau * ww.dot(v);
      ww += s * v;
      A22.template selfadjointView<Eigen::Lower>().rankUpdate(v, ww, C(-1));
    } else {
      A(i + 1, i + 1) = C(A(i + 1, i + 1).real());
    }
    e(i) = beta;
    d(i) = A(i, i).real();
  }
  if (n > 0) d(n - 1) = A(n - 1, n - 1).real();
}

// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix; eigenvalues only.
// Throws NoConvergence after 30 * n iterations in total.
template <typename Real>
void tridiagonal_ql(Eigen::Matrix<Real, Eigen::Dynamic, 1>& d, Eigen::Matrix<Real, Eigen::Dynamic, 1> e) {
  const Eigen::Index n = d.size();
  if (n == 0) return;
  e.conservativeResize(n);
  e(n - 1) = 0;
  long budget = 30 * static_cast<long>(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (;;) {
      Eigen::Index m = l;
      for (; m + 1 < n; ++m) {
        const Real dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= std::numeric_limits<Real>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (--budget < 0) throw Error(ErrorKind::NoConvergence, "tridiagonal QL exceeded its iteration cap");
      Real g = (d(l + 1) - d(l)) / (Real(2) * e(l));
      Real r = std::hypot(g, Real(1));
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      Real s = 1, c = 1, p = 0;
      Eigen::Index i = m;
      bool underflow = false;
      for (; i-- > l;) {
        Real f = s * e(i);
        const Real b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == Real(0)) {
          d(i + 1) -= p;
          e(m) = 0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + Real(2) * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0;
    }
  }
}

// All eigenvalues of a Hermitian matrix, ascending.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> hermitian_eigenvalues(
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> A) {
  Eigen::Matrix<Real, Eigen::Dynamic, 1> d, e;
  hermitian_tridiagonalize(A, d, e);
  tridiagonal_ql(d, e);
  std::sort(d.data(), d.data() + d.size());
  return d;
}

}  // namespace rmb
