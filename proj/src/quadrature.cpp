#include "rmblock/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rmblock/error.hpp"

namespace rmb {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cplx value;
  double err;
  int depth;
};

Segment gk15(const CFun& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx kron = fc * kWgk[7];
  cplx gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    cplx s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h), depth};
}

}  // namespace

QuadResult integrate_gk(const CFun& f, double a, double b, double abstol, double reltol, int maxDepth) {
  std::vector<Segment> done;
  std::vector<Segment> heap{gk15(f, a, b, 0)};
  int evals = 15;
  cplx total = heap[0].value;
  double err = heap[0].err;
  // Bisect the worst segment until the global estimate is small enough.
  auto cmp = [](const Segment& x, const Segment& y) { return x.err < y.err; };
  std::make_heap(heap.begin(), heap.end(), cmp);
  while (err > std::max(abstol, reltol * std::abs(total))) {
    if (heap.empty()) break;
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Segment s = heap.back();
    heap.pop_back();
    if (s.depth >= maxDepth) {
      done.push_back(s);
      if (heap.empty()) break;
      continue;
    }
    const double m = 0.5 * (s.a + s.b);
    Segment l = gk15(f, s.a, m, s.depth + 1), r = gk15(f, m, s.b, s.depth + 1);
    evals += 30;
    total += l.value + r.value - s.value;
    err += l.err + r.err - s.err;
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end(), cmp);
  }
  // Resum in a fixed order to limit drift from the running updates.
  for (const auto& s : heap) done.push_back(s);
  std::sort(done.begin(), done.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  cplx sum = 0.0;
  double esum = 0.0;
  for (const auto& s : done) {
    sum += s.value;
    esum += s.err;
  }
  return {sum, esum, evals};
}

QuadResult integrate_line(const CFun& f, double t0, double h0, double tol, int maxLevel) {
  // one-sided sum over t0 + sign*(offset + k*step), k >= 0
  int evals = 0;
  double l1 = 0.0;  // sum of |f| at all nodes
  auto side = [&](double offset, double step, double sign, double& peak) {
    cplx s = 0.0;
    int small = 0;
    for (long k = 0; k < 1000000; ++k) {
      cplx v = f(t0 + sign * (offset + k * step));
      ++evals;
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        if (k > 4) break;  // overflow in the far tail of a decaying integrand
        throw Error(ErrorKind::NonConvergent, "integrand not finite near the centre of the line");
      }
      s += v;
      l1 += std::abs(v);
      peak = std::max(peak, std::abs(v));
      if (std::abs(v) <= 1e-18 * peak) {
        if (++small >= 4) break;
      } else {
        small = 0;
      }
    }
    return s;
  };
  double peak = 0.0;
  double h = h0;
  cplx sum = f(t0);
  ++evals;
  peak = std::abs(sum);
  l1 = peak;
  sum += side(h, h, 1.0, peak) + side(h, h, -1.0, peak);
  cplx prev = sum * h;
  for (int level = 1; level <= maxLevel; ++level) {
    // new nodes sit at odd multiples of h/2
    cplx add = side(0.5 * h, h, 1.0, peak) + side(0.5 * h, h, -1.0, peak);
    sum += add;
    h *= 0.5;
    cplx cur = sum * h;
    double diff = std::abs(cur - prev);
    // with cancellation the attainable accuracy is set by rounding in sum |f|
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1 * h;
    if (diff <= tol * std::abs(cur) || diff <= floor || diff <= 1e-300) return {cur, diff, evals};
    prev = cur;
  }
  throw Error(ErrorKind::NonConvergent, "trapezoid refinement did not converge");
}

QuadResult integrate_exp_sinh(const CFun& f, double tol) {
  auto g = [&](double t) -> cplx {
    const double s = 0.5 * M_PI * std::sinh(t);
    if (s > 700.0 || s < -700.0) return 0.0;
    const double x = std::exp(s);
    if (x == 0.0 || !std::isfinite(x)) return 0.0;
    return f(x) * (0.5 * M_PI * std::cosh(t) * x);
  };
  return integrate_line(g, 0.0, 0.5, tol, 12);
}

QuadResult integrate_sinh_sinh(const CFun& f, double tol) {
  auto g = [&](double t) -> cplx {
    const double s = 0.5 * M_PI * std::sinh(t);
    if (std::abs(s) > 700.0) return 0.0;
    return f(std::sinh(s)) * (0.5 * M_PI * std::cosh(t) * std::cosh(s));
  };
  return integrate_line(g, 0.0, 0.5, tol, 12);
}

QuadResult integrate_tanh_sinh(const CFun& f, double a, double b, double tol) {
  const double half = 0.5 * (b - a);
  auto g = [&](double t) -> cplx {
    const double s = 0.5 * M_PI * std::sinh(t);
    if (std::abs(s) > 20.0) return 0.0;
    const double u = std::tanh(s);
    const double ch = std::cosh(s);
    // distance to the nearer endpoint, computed without cancellation
    const double d = half / (std::exp(std::abs(s)) * ch);
    const double x = u > 0 ? b - d : a + d;
    if (!(x > a && x < b)) return 0.0;
    return f(x) * (half * 0.5 * M_PI * std::cosh(t) / (ch * ch));
  };
  return integrate_line(g, 0.0, 0.5, tol, 12);
}

void gauss_laguerre(int n, double alpha, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1 || !(alpha > -1.0)) throw Error(ErrorKind::InvalidArgument, "gauss_laguerre needs n >= 1, alpha > -1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    J(k, k) = 2.0 * k + alpha + 1.0;
    if (k + 1 < n) J(k, k + 1) = J(k + 1, k) = std::sqrt((k + 1.0) * (k + 1.0 + alpha));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  const double mu0 = std::tgamma(alpha + 1.0);
  for (int k = 0; k < n; ++k) {
    x[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    w[k] = mu0 * v * v;
  }
}

}  // namespace rmb
