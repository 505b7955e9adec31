// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [output-dir]   (CSV artifacts are written there when given)
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rmblock/dyson.hpp"
#include "rmblock/error.hpp"
#include "rmblock/io.hpp"
#include "rmblock/limits.hpp"
#include "rmblock/parallel.hpp"
#include "rmblock/saddle.hpp"
#include "rmblock/sampler.hpp"
#include "rmblock/susy.hpp"

using namespace rmb;

namespace {

std::string out_dir;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void save(const std::string& name, const std::string& csv) {
  if (!out_dir.empty()) write_file_atomic((std::filesystem::path(out_dir) / name).string(), csv);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

VarianceProfile k2_profile() { return validate_profile((Eigen::MatrixXd(2, 2) << 1, 1, 1, 0).finished()); }
VarianceProfile k3_profile() { return validate_profile((Eigen::MatrixXd(3, 3) << 1, 1, 1, 1, 1, 0, 1, 0, 0).finished()); }

// ---- 1

std::string mc_table(int threads) {
  SamplerOptions opt;
  opt.threads = threads;
  const std::vector<cplx> zs = {{0, 0.3}, {0.5, 0.3}};
  std::ostringstream os;
  os << "K,N,Re_z,Im_z,mc_re,mc_im,mc_stderr\n";
  for (int K : {2, 3})
    for (long N : {2, 4, 8}) {
      const VarianceProfile p = K == 2 ? k2_profile() : k3_profile();
      const auto est = mc_resolvent_trace(p, N, zs, 100000, 1000 + 10 * K + N, opt);
      for (std::size_t k = 0; k < zs.size(); ++k)
        os << K << ',' << N << ',' << fmt17(zs[k].real()) << ',' << fmt17(zs[k].imag()) << ',' << fmt17(est[k].mean.real())
           << ',' << fmt17(est[k].mean.imag()) << ',' << fmt17(est[k].stderr_) << '\n';
    }
  return os.str();
}

Outcome criterion1(const std::string& mc) {
  Outcome o;
  double worst_oracle = 0.0;
  const VarianceProfile p1 = validate_profile((Eigen::MatrixXd(1, 1) << 1).finished());
  for (long N : {1, 2, 4})
    for (cplx z : {cplx(0, 0.5), cplx(0.2, 0.5)}) {
      const cplx v = finite_n_resolvent_checked(p1, N, z, default_quadrature(p1, N, z)).value;
      worst_oracle = std::max(worst_oracle, rel(v, oracle::gue_resolvent_trace(N, 1.0, z)));
    }
  if (!(worst_oracle <= 1e-8)) o.pass = false;

  std::istringstream in(mc);
  std::string line;
  std::getline(in, line);
  std::ostringstream table;
  table << "K,N,Re_z,Im_z,mc_re,mc_im,mc_stderr,susy_re,susy_im,sigmas\n";
  double worst_sigmas = 0.0;
  while (std::getline(in, line)) {
    double K, N, zr, zi, mr, mi, se;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &K, &N, &zr, &zi, &mr, &mi, &se) != 7) continue;
    const VarianceProfile p = K == 2 ? k2_profile() : k3_profile();
    const cplx z(zr, zi);
    const cplx s =
        finite_n_resolvent_checked(p, long(N), z, default_quadrature(p, long(N), z), 1e-6).value / (K * N);
    const double sig = std::abs(cplx(mr, mi) - s) / se;
    worst_sigmas = std::max(worst_sigmas, sig);
    table << line << ',' << fmt17(s.real()) << ',' << fmt17(s.imag()) << ',' << fmt17(sig) << '\n';
  }
  save("criterion1.csv", table.str());
  if (!(worst_sigmas <= 3.0)) o.pass = false;
  o.detail = "K=1 worst rel err vs Hermite-kernel oracle " + fmt("%.2e", worst_oracle) + " (<= 1e-8); K=2,3 worst |MC - exact| " +
             fmt("%.2f", worst_sigmas) + " stderr (<= 3)";
  return o;
}

// ---- 2

Outcome criterion2() {
  Outcome o;
  const SingularityFit f2 = singularity_fit(k2_profile(), default_fit_grid());
  const SingularityFit f3 = singularity_fit(k3_profile(), default_fit_grid());
  const double t2 = std::sqrt(3.0) / (4 * M_PI), t3 = 1 / (3 * M_PI * std::sqrt(2.0));
  o.pass = std::abs(f2.sigma_hat - 1.0 / 3) <= 0.02 && std::abs(f2.theta_hat / t2 - 1) <= 0.02 &&
           std::abs(f3.sigma_hat - 0.5) <= 0.02 && std::abs(f3.theta_hat / t3 - 1) <= 0.02;
  o.detail = "K=2 sigma " + fmt("%.5f", f2.sigma_hat) + " theta/ref " + fmt("%.5f", f2.theta_hat / t2) + "; K=3 sigma " +
             fmt("%.5f", f3.sigma_hat) + " theta/ref " + fmt("%.5f", f3.theta_hat / t3);
  return o;
}

// ---- 3

Outcome criterion3() {
  Outcome o;
  double w2 = 0, w3 = 0;
  for (cplx z : {cplx(0, 0.5), cplx(1, 0.5), cplx(0, 3)}) {
    w2 = std::max(w2, rel(k2_closed(z), k2_direct(z)));
    w3 = std::max(w3, rel(k3_closed(z), k3_direct(z)));
  }
  o.pass = w2 <= 1e-8 && w3 <= 1e-8;
  o.detail = "closed vs direct worst rel err K=2 " + fmt("%.2e", w2) + ", K=3 " + fmt("%.2e", w3) + " (<= 1e-8)";
  return o;
}

// ---- 4

Outcome criterion4() {
  Outcome o;
  const double d2 = std::abs(limit_density(LimitKind::k2(), 1e-4) - 4 * M_PI / std::pow(3.0, 2.25));
  const double xi = 1e-3;
  const double ref3 = -(M_PI / 4) * std::log(xi) + (M_PI / 2) * (std::log(2 / M_PI) - kEulerGamma + 0.5);
  const double d3 = std::abs(limit_density(LimitKind::k3(), xi) - ref3);
  const double t2 = limit_density(LimitKind::k2(), 1e3) / (std::pow(2.0, 2.0 / 3) / 3 * std::pow(1e3, -1.0 / 3)) - 1;
  const double t3 = limit_density(LimitKind::k3(), 1e3) / (1 / (2 * std::sqrt(2.0)) * std::pow(1e3, -0.5)) - 1;
  o.pass = d2 <= 1e-3 && d3 <= 1e-2 && std::abs(t2) <= 0.01 && std::abs(t3) <= 0.01;
  o.detail = "K=2 origin " + fmt("%.2e", d2) + " (<= 1e-3), K=3 origin " + fmt("%.2e", d3) + " (<= 1e-2), tails K=2 " +
             fmt("%+.4f", t2) + " K=3 " + fmt("%+.5f", t3) + " (|.| <= 0.01)";
  return o;
}

// ---- 5

struct Micro {
  std::string csv;
  double deviation = 0.0;
  int bins_used = 0;
};

Micro micro_run(long N, long trials, int threads) {
  SamplerOptions opt;
  opt.threads = threads;
  const VarianceProfile p = k2_profile();
  std::vector<double> edges;
  for (int k = 0; k <= 24; ++k) edges.push_back(-6.0 + 0.5 * k);
  const Histogram h = microscopic_histogram(p, N, trials, edges, 20240 + N, opt);
  Micro m;
  m.csv = histogram_csv(h);
  const auto d = h.density();
  const auto c = h.centers();
  double sum = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (h.counts[k] < 200) continue;
    const double ref = limit_density(LimitKind::k2(), c[k]);
    sum += std::abs(d[k] - ref) / ref;
    ++m.bins_used;
  }
  m.deviation = m.bins_used ? sum / m.bins_used : INFINITY;
  return m;
}

Outcome criterion5(const Micro& m128, const Micro& m256) {
  Outcome o;
  o.pass = m256.bins_used > 0 && m256.deviation <= 0.15 && m128.deviation > m256.deviation;
  o.detail = "mean rel deviation N=256 " + fmt("%.4f", m256.deviation) + " over " + std::to_string(m256.bins_used) +
             " bins (<= 0.15), N=128 " + fmt("%.4f", m128.deviation) + " (must exceed N=256)";
  save("criterion5_N128.csv", m128.csv);
  save("criterion5_N256.csv", m256.csv);
  return o;
}

// ---- 6

Outcome criterion6() {
  Outcome o;
  double w1 = 0, w2 = 0, w3 = 0;
  for (cplx z : {cplx(0, 0.5), cplx(1, 1)}) w1 = std::max(w1, rel(weak_k2(0.0, z), chiral_gue(z)));
  // rho_N(x / (3N)) -> (2/9)|x| (J0(2x/3)^2 + J1(2x/3)^2) + 1/(3 pi); spacing units m(xi) = pi * that at x = pi xi
  for (double xi : {0.05, 0.3, 1.0, 2.5, 7.0}) {
    const double x = M_PI * xi, u = 2 * x / 3;
    const double remark = (2.0 / 9) * x * (std::pow(std::cyl_bessel_j(0.0, u), 2) + std::pow(std::cyl_bessel_j(1.0, u), 2)) + 1 / (3 * M_PI);
    w2 = std::max(w2, std::abs(limit_density(LimitKind::weak_k3(0.0), xi) - M_PI * remark));
  }
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> U(0.05, 20.0);
  for (int k = 0; k < 5; ++k) {
    // sqrt(q) (K1 I0 + K0 I1)(2 sqrt(q)) with q = -i zeta (sigma - i zeta) at random sigma, zeta
    const double s = U(gen) / 4;
    const cplx zeta(U(gen) - 10.0, U(gen) / 2);
    const cplx r = std::sqrt(cplx(0, -1) * zeta) * std::sqrt(s - cplx(0, 1) * zeta);
    const cplx x = 2.0 * r;
    w3 = std::max(w3, std::abs(r * (bessel_k(1, x) * bessel_i(0, x) + bessel_k(0, x) * bessel_i(1, x)) - 0.5));
  }
  o.pass = w1 <= 1e-9 && w2 <= 1e-6 && w3 <= 1e-12;
  o.detail = "weak K2(0) vs chiral " + fmt("%.2e", w1) + " (<= 1e-9), weak K3(0) density vs remark " + fmt("%.2e", w2) +
             " (<= 1e-6), Wronskian term " + fmt("%.2e", w3) + " (<= 1e-12)";
  return o;
}

// ---- 7

Outcome criterion7() {
  Outcome o;
  double wr = 0, merge = 0, repr = 0, cont = 0;
  for (double x : {0.1, 1.0, 10.0, 50.0})
    wr = std::max(wr, std::abs((bessel_i(0, x) * bessel_k(1, x) + bessel_i(1, x) * bessel_k(0, x)) * x - 1.0));
  for (cplx x : {cplx(0.2), cplx(1.0), cplx(4.0), cplx(15.0), cplx(1.0, 2.0)}) {
    const cplx lhs = meijer_g_303({{1, 2}, {1, 1}, {-1, 2}, x}) - 0.5 * meijer_g_303({{0, 1}, {1, 2}, {-1, 2}, x});
    merge = std::max(merge, rel(lhs, meijer_g_303({{0, 1}, {1, 2}, {1, 2}, x})));
  }
  for (auto [t1, t2] : std::vector<std::pair<cplx, cplx>>{{0.5, 1.0}, {0.5, cplx(0.2, -1.5)}, {1.5, cplx(2.0, 1.0)}})
    for (int n = -3; n <= 1; ++n)
      for (LaplaceKind k : {LaplaceKind::Quadratic, LaplaceKind::Linear})
        repr = std::max(repr, rel(laplace_type_integral(t1, t2, n, k), laplace_type_closed(t1, t2, n, k)));
  for (double x : {-0.5, -3.0})
    for (auto b : std::vector<std::array<Rational, 3>>{{{{0, 1}, {1, 2}, {1, 2}}}, {{{1, 2}, {1, 1}, {3, 2}}}}) {
      const cplx above = meijer_g_303({b[0], b[1], b[2], x, CutSide::Above});
      const cplx below = meijer_g_303({b[0], b[1], b[2], x, CutSide::Below});
      cont = std::max(cont, std::abs(above.real() - below.real()) / std::abs(above));
      cont = std::max(cont, rel(meijer_g_303({b[0], b[1], b[2], cplx(x, 1e-10)}), above));
    }
  o.pass = wr <= 1e-12 && merge <= 1e-8 && repr <= 1e-8 && cont <= 1e-6;
  o.detail = "Wronskian " + fmt("%.2e", wr) + ", merge " + fmt("%.2e", merge) + ", v-integral G/K " + fmt("%.2e", repr) +
             ", Re-continuity " + fmt("%.2e", cont);
  return o;
}

// ---- 8

Outcome criterion8() {
  Outcome o;
  std::string d;
  const std::vector<long> Ns = {50, 100, 200, 400};
  for (const std::string& name : synthetic_case_names()) {
    const SyntheticCase c = synthetic_case(name);
    const ExpansionReport r = verify_expansion(c.problem, c.evaluator, Ns);
    if (name == "gaussian" || name == "gaussian-moment") {
      if (!r.exact) o.pass = false;
      d += name + " exact=" + (r.exact ? "yes" : "no") + "; ";
    } else {
      if (!(std::abs(r.exponent - 1.0) <= 0.2)) o.pass = false;
      d += name + " exponent " + fmt("%.4f", r.exponent) + "; ";
    }
  }
  o.detail = d.substr(0, d.size() - 2);
  return o;
}

void report(int id, const Outcome& o, double seconds) {
  std::printf("criterion %d: %s  %s  [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds);
  std::fflush(stdout);
}

template <typename F>
Outcome timed(int id, F&& f, double& secs) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, o, secs);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    out_dir = argv[1];
    std::filesystem::create_directories(out_dir);
  }
  const int t_a = resolve_threads(0);
  const int t_b = t_a + 3;
  bool all = true;
  double s;
  std::string mc_a;
  Micro m128a, m256a;

  all &= timed(1, [&] { mc_a = mc_table(t_a); return criterion1(mc_a); }, s).pass;
  all &= timed(2, criterion2, s).pass;
  all &= timed(3, criterion3, s).pass;
  all &= timed(4, criterion4, s).pass;
  all &= timed(5, [&] {
           m128a = micro_run(128, 2000, t_a);
           m256a = micro_run(256, 2000, t_a);
           return criterion5(m128a, m256a);
         }, s).pass;
  all &= timed(6, criterion6, s).pass;
  all &= timed(7, criterion7, s).pass;
  all &= timed(8, criterion8, s).pass;
  all &= timed(9, [&] {
           const std::string mc_b = mc_table(t_b);
           const Micro m128b = micro_run(128, 2000, t_b), m256b = micro_run(256, 2000, t_b);
           Outcome o;
           o.pass = !mc_a.empty() && mc_a == mc_b && m128a.csv == m128b.csv && m256a.csv == m256b.csv;
           o.detail = "criterion 1 and 5 CSV with " + std::to_string(t_a) + " vs " + std::to_string(t_b) +
                      " threads: " + (o.pass ? "bit-identical" : "differ");
           return o;
         }, s).pass;
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
