#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rmblock/dyson.hpp"
#include "rmblock/error.hpp"
#include "rmblock/io.hpp"
#include "rmblock/limits.hpp"
#include "rmblock/model.hpp"
#include "rmblock/parallel.hpp"
#include "rmblock/saddle.hpp"
#include "rmblock/sampler.hpp"
#include "rmblock/specfun.hpp"
#include "rmblock/susy.hpp"

using namespace rmb;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return 1;
    case ErrorKind::Io: return 3;
    default: return 2;
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Config, what);
}

// Header lines shared by every output: version, subcommand and the resolved options. Thread count and
// output path do not change results and are left out, so reruns compare byte for byte.
std::string metadata(const CLI::App* sub) {
  std::ostringstream os;
  os << "# " << kVersion << "\n# subcommand=" << sub->get_name() << "\n";
  std::istringstream cfg(sub->config_to_str(true, false));
  for (std::string line; std::getline(cfg, line);) {
    if (line.empty() || line.rfind("threads=", 0) == 0 || line.rfind("out=", 0) == 0) continue;
    os << "# " << line << "\n";
  }
  return os.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text << std::flush;
  else
    write_file_atomic(path, text);
}

std::string derived_path(const std::string& path, const std::string& suffix) {
  if (path.empty() || path == "-") return "";
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

cplx parse_complex(const std::string& s) {
  // "re,im" or "re"
  const auto comma = s.find(',');
  try {
    std::size_t u1 = 0, u2 = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(s, &u1);
      if (u1 != s.size()) throw std::invalid_argument(s);
      return {re, 0.0};
    }
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    const double re = std::stod(a, &u1), im = std::stod(b, &u2);
    if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, "bad complex number '" + s + "', expected re,im");
  }
}

Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    std::size_t u = 0;
    if (slash == std::string::npos) {
      const int n = std::stoi(s, &u);
      if (u != s.size()) throw std::invalid_argument(s);
      return {n, 1};
    }
    std::size_t u2 = 0;
    const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    const int n = std::stoi(a, &u), d = std::stoi(b, &u2);
    if (u != a.size() || u2 != b.size() || d <= 0) throw std::invalid_argument(s);
    return {n, d};
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, "bad rational '" + s + "'");
  }
}

// The origin limit that a microscopic histogram of this profile approaches.
std::optional<LimitKind> origin_limit(const VarianceProfile& p) {
  if (p.K() == 2 && p.S(0, 0) == 0.0 && p.S(1, 1) == 0.0) return LimitKind::chiral();
  try {
    return limit_kind_for(p);
  } catch (const Error&) {
    return std::nullopt;
  }
}

double limit_scale(const VarianceProfile& p, const LimitKind& kind, long N) {
  if (kind.family == LimitFamily::ChiralGUE) return std::sqrt(p.S(0, 1)) / double(N);
  return theorem_scale(p, kind, N);
}

struct Common {
  int threads = 0;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "worker threads (0: RMBLOCK_THREADS or 1)");
  sub->add_option("-o,--out", c.out, "output file, stdout when omitted");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block random matrices with variance profiles: sampling, Dyson equation, exact finite-N and limit formulas"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  // sample
  Common sc;
  std::string s_profile, s_mode = "micro", s_curve, s_dump;
  long s_n = 0, s_trials = 0;
  std::uint64_t s_seed = 1;
  double s_xi_max = 8.0, s_e_max = 0.0, s_eps = 1e-6;
  int s_bins = 64;
  auto* sample = app.add_subcommand("sample", "histogram of eigenvalues with the matching limit curve");
  sample->add_option("--profile", s_profile, "profile JSON")->required();
  sample->add_option("--n", s_n, "block size N")->required();
  sample->add_option("--trials", s_trials, "number of samples")->required();
  sample->add_option("--seed", s_seed, "base seed");
  sample->add_option("--mode", s_mode, "micro or macro")->check(CLI::IsMember({"micro", "macro"}));
  sample->add_option("--xi-max", s_xi_max, "micro: bins cover [-xi_max, xi_max]");
  sample->add_option("--e-max", s_e_max, "macro: bins cover [-e_max, e_max] (default from the row sums)");
  sample->add_option("--bins", s_bins, "number of bins");
  sample->add_option("--eps", s_eps, "macro: eps of the Dyson curve");
  sample->add_option("--curve-out", s_curve, "limit curve file (default <out>_curve.csv)");
  sample->add_option("--dump-eigenvalues", s_dump, "write every eigenvalue to this file");
  add_common(sample, sc);

  // dyson
  Common dc;
  std::string d_profile, d_grid;
  double d_eps = 1e-8;
  bool d_extrapolate = false, d_fit = false;
  auto* dyson = app.add_subcommand("dyson", "asymptotic density from the vector Dyson equation");
  dyson->add_option("--profile", d_profile, "profile JSON")->required();
  dyson->add_option("--E-grid", d_grid, "log:a:b:n or lin:a:b:n")->required();
  dyson->add_option("--eps", d_eps, "imaginary part of the spectral parameter");
  dyson->add_flag("--extrapolate", d_extrapolate, "Richardson in eps");
  dyson->add_flag("--fit", d_fit, "fit |E|^{-sigma} theta on the grid and report it in a footer");
  add_common(dyson, dc);

  // susy
  Common uc;
  std::string u_profile, u_z, u_map = "logexp";
  long u_n = 0;
  int u_radial = 0, u_angular = 0;
  double u_tol = 1e-8;
  auto* susy = app.add_subcommand("susy", "E Tr (H - z)^{-1} from the exact finite-N integral");
  susy->add_option("--profile", u_profile, "profile JSON")->required();
  susy->add_option("--n", u_n, "block size N")->required();
  susy->add_option("--z", u_z, "spectral parameter re,im with im > 0")->required();
  susy->add_option("--radial-nodes", u_radial, "override the radial node count");
  susy->add_option("--angular-nodes", u_angular, "override the angular node count");
  susy->add_option("--radial-map", u_map, "logexp or laguerre")->check(CLI::IsMember({"logexp", "laguerre"}));
  susy->add_option("--tol", u_tol, "relative tolerance of the refinement check");
  add_common(susy, uc);

  // limit
  Common lc;
  std::string l_kind, l_grid, l_zeta, l_method = "boundary";
  auto* limit = app.add_subcommand("limit", "scaling limits at the origin");
  limit->add_option("--kind", l_kind, "k1, k2, k3, chiral, weak-k2:<sigma>, weak-k3:<sigma>")->required();
  limit->add_option("--xi-grid", l_grid, "one-point function on this grid (spacing units)");
  limit->add_option("--zeta", l_zeta, "limit of the resolvent at this re,im instead");
  limit->add_option("--method", l_method, "boundary or richardson")->check(CLI::IsMember({"boundary", "richardson"}));
  add_common(limit, lc);

  // compare
  Common cc;
  std::string c_profile;
  std::vector<long> c_ns;
  std::vector<std::string> c_zs, c_zetas;
  long c_trials = 10000;
  std::uint64_t c_seed = 1;
  auto* compare = app.add_subcommand("compare", "Monte Carlo vs exact finite N vs limit");
  compare->add_option("--profile", c_profile, "profile JSON")->required();
  compare->add_option("--n", c_ns, "block sizes")->required();
  compare->add_option("--z", c_zs, "spectral parameters re,im (unscaled)");
  compare->add_option("--zeta", c_zetas, "microscopic parameters re,im; z = tau_N zeta");
  compare->add_option("--trials", c_trials, "Monte Carlo samples per N");
  compare->add_option("--seed", c_seed, "base seed");
  add_common(compare, cc);

  // saddle-check
  Common kc;
  std::string k_case = "all";
  std::vector<long> k_ns{50, 100, 200, 400};
  auto* saddle = app.add_subcommand("saddle-check", "error of the leading saddle-point term");
  saddle->add_option("--case", k_case, "synthetic case or all");
  saddle->add_option("--n", k_ns, "values of N");
  add_common(saddle, kc);

  // specfun eval
  Common fc;
  std::string f_fn, f_x, f_params;
  int f_order = 0;
  auto* specfun = app.add_subcommand("specfun", "special function evaluation");
  specfun->require_subcommand(1);
  auto* feval = specfun->add_subcommand("eval", "print one value with 17 digits");
  feval->add_option("--fn", f_fn, "bessel_i, bessel_k, bessel_j, gamma, log_gamma, hyper_0f2, meijer_g")
      ->required()
      ->check(CLI::IsMember({"bessel_i", "bessel_k", "bessel_j", "gamma", "log_gamma", "hyper_0f2", "meijer_g"}));
  feval->add_option("--x", f_x, "argument re,im")->required();
  feval->add_option("--order", f_order, "Bessel order");
  feval->add_option("--params", f_params, "b1,b2 (0F2) or b1,b2,b3 (G) as rationals like 1/2");
  add_common(feval, fc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string partial;  // a path to remove if the run fails after creating it
  try {
    if (*sample) {
      require(s_n >= 1, "--n must be positive");
      require(s_trials >= 1, "--trials must be positive");
      require(s_bins >= 1, "--bins must be positive");
      const VarianceProfile p = read_profile(s_profile);
      SamplerOptions opt;
      opt.threads = resolve_threads(sc.threads);
      long discarded = 0;
      const auto spectra = sample_spectra(p, s_n, s_trials, s_seed, opt, &discarded);
      const std::string meta = metadata(sample);
      Histogram h;
      h.K = p.K();
      h.N = s_n;
      h.trials = s_trials;
      h.seed = s_seed;
      std::ostringstream curve;
      curve << meta;
      if (s_mode == "micro") {
        require(s_xi_max > 0.0, "--xi-max must be positive");
        const SingularityClass c = classify_singularity(p);
        h.normalization = Normalization::MicroscopicDensity;
        h.eta = spacing_scale(c, p, s_n);
        h.edges = parse_grid("lin:" + fmt17(-s_xi_max) + ":" + fmt17(s_xi_max) + ":" + std::to_string(s_bins + 1));
        h.counts.assign(s_bins, 0);
        accumulate(h, spectra, h.eta);
        const auto kind = origin_limit(p);
        curve << "# limit=" << (kind ? to_string(*kind) : "constant") << "\nxi,density\n";
        for (double x : h.centers()) {
          double v = 1.0;
          if (kind) v = x == 0.0 && kind->family == LimitFamily::K3 ? INFINITY : limit_density(*kind, x);
          curve << fmt17(x) << ',' << fmt17(v) << '\n';
        }
      } else {
        double emax = s_e_max;
        if (!(emax > 0.0)) emax = 2.0 * std::sqrt(p.S.rowwise().sum().maxCoeff()) + 1.0;
        h.normalization = Normalization::MacroscopicDensity;
        h.edges = parse_grid("lin:" + fmt17(-emax) + ":" + fmt17(emax) + ":" + std::to_string(s_bins + 1));
        h.counts.assign(s_bins, 0);
        accumulate(h, spectra, 1.0);
        curve << "# eps=" << fmt17(s_eps) << "\nE,eps,rho\n";
        for (const auto& pt : density_curve(p, h.centers(), s_eps, true))
          curve << fmt17(pt.E) << ',' << fmt17(pt.eps) << ',' << fmt17(pt.rho) << '\n';
      }
      std::vector<std::string> extra{"discarded=" + std::to_string(discarded), "outside=" + std::to_string(h.outside)};
      const std::string hist = meta + histogram_csv(h, extra);
      const std::string cpath = s_curve.empty() ? derived_path(sc.out, "_curve") : s_curve;
      if (!s_dump.empty()) {
        std::ostringstream ev;
        char buf[40];
        for (const auto& s : spectra)
          for (Eigen::Index i = 0; i < s.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.16e\n", s(i));
            ev << buf;
          }
        write_file_atomic(s_dump, ev.str());
        partial = s_dump;
      }
      emit(sc.out, hist);
      if (!sc.out.empty() && sc.out != "-") partial = sc.out;
      emit(cpath, curve.str());
      return 0;
    }

    if (*dyson) {
      const VarianceProfile p = read_profile(d_profile);
      const auto grid = parse_grid(d_grid);
      require(d_eps > 0.0, "--eps must be positive");
      std::ostringstream os;
      os << metadata(dyson) << "E,eps,rho\n";
      for (const auto& pt : density_curve(p, grid, d_eps, d_extrapolate))
        os << fmt17(pt.E) << ',' << fmt17(pt.eps) << ',' << fmt17(pt.rho) << '\n';
      if (d_fit) {
        const SingularityFit f = singularity_fit(p, grid);
        os << "# sigma_hat=" << fmt17(f.sigma_hat) << "\n# theta_hat=" << fmt17(f.theta_hat)
           << "\n# fit_failures=" << f.failures << '\n';
      }
      emit(dc.out, os.str());
      return 0;
    }

    if (*susy) {
      require(u_n >= 1, "--n must be positive");
      const VarianceProfile p = read_profile(u_profile);
      const cplx z = parse_complex(u_z);
      require(z.imag() > 0.0, "--z needs a positive imaginary part");
      QuadratureSpec q = default_quadrature(p, u_n, z);
      if (u_radial > 0) q.radialNodes = u_radial;
      if (u_angular > 0) q.angularNodes = u_angular;
      for (auto& m : q.radialMap) m = u_map == "laguerre" ? RadialMap::Laguerre : RadialMap::LogExp;
      const SusyResult r = finite_n_resolvent_checked(p, u_n, z, q, u_tol);
      std::ostringstream os;
      os << metadata(susy) << "K,N,Re_z,Im_z,Re_val,Im_val,est_err\n"
         << p.K() << ',' << u_n << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(r.value.real())
         << ',' << fmt17(r.value.imag()) << ',' << fmt17(r.est_err) << '\n';
      emit(uc.out, os.str());
      return 0;
    }

    if (*limit) {
      const LimitKind kind = parse_limit_kind(l_kind);
      require(l_grid.empty() != l_zeta.empty(), "give exactly one of --xi-grid and --zeta");
      std::ostringstream os;
      os << metadata(limit) << "# parsed_kind=" << to_string(kind) << "\n# kappa=" << fmt17(kappa(kind)) << '\n';
      if (!l_zeta.empty()) {
        const cplx zeta = parse_complex(l_zeta);
        const cplx v = limit_resolvent(kind, zeta);
        os << "Re_zeta,Im_zeta,Re_val,Im_val\n"
           << fmt17(zeta.real()) << ',' << fmt17(zeta.imag()) << ',' << fmt17(v.real()) << ',' << fmt17(v.imag()) << '\n';
      } else {
        const auto method = l_method == "richardson" ? DensityMethod::Richardson : DensityMethod::Boundary;
        os << "xi,density\n";
        for (double x : parse_grid(l_grid)) os << fmt17(x) << ',' << fmt17(limit_density(kind, x, method)) << '\n';
      }
      emit(lc.out, os.str());
      return 0;
    }

    if (*compare) {
      require(c_trials >= 2, "--trials must be at least 2");
      require(c_zs.empty() != c_zetas.empty(), "give --z or --zeta, not both");
      for (long n : c_ns) require(n >= 1, "--n values must be positive");
      const VarianceProfile p = read_profile(c_profile);
      const bool micro = !c_zetas.empty();
      const auto kind = origin_limit(p);
      require(!micro || kind.has_value(), "--zeta needs a profile with a known origin limit");
      std::vector<cplx> params;
      for (const auto& s : micro ? c_zetas : c_zs) params.push_back(parse_complex(s));
      SamplerOptions opt;
      opt.threads = resolve_threads(cc.threads);
      const double KN = p.K();
      std::ostringstream os;
      os << metadata(compare) << "# limit=" << (kind ? to_string(*kind) : "none")
         << "\n# values are " << (micro ? "tau_N E Tr (H - tau_N zeta)^{-1}" : "(1/(KN)) E Tr (H - z)^{-1}") << '\n'
         << "N,Re_z,Im_z,mc_re,mc_im,mc_stderr,susy_re,susy_im,susy_err,limit_re,limit_im,mc_susy_sigmas,susy_limit_abs,"
            "agree\n";
      for (long N : c_ns) {
        const double tau = kind ? limit_scale(p, *kind, N) : NAN;
        std::vector<cplx> zs;
        for (cplx w : params) zs.push_back(micro ? tau * w : w);
        for (cplx z : zs) require(z.imag() > 0.0, "spectral parameters need a positive imaginary part");
        const auto mc = mc_resolvent_trace(p, N, zs, c_trials, c_seed, opt);
        for (std::size_t k = 0; k < zs.size(); ++k) {
          const double toOut = micro ? tau * KN * double(N) : 1.0;  // mc is (1/(KN)) Tr
          const cplx m = mc[k].mean * toOut;
          const double mse = mc[k].stderr_ * toOut;
          cplx s(NAN, NAN);
          double serr = NAN;
          try {
            const auto r = finite_n_resolvent_checked(p, N, zs[k], default_quadrature(p, N, zs[k]));
            const double sc = micro ? tau : 1.0 / (KN * double(N));
            s = r.value * sc;
            serr = r.est_err * sc;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotConverged && e.kind() != ErrorKind::QuadratureOverflow) throw;
          }
          cplx l(NAN, NAN);
          if (kind) {
            const double t = limit_scale(p, *kind, N);
            const cplx R = limit_resolvent(*kind, zs[k] / t);
            l = micro ? R : R / (t * KN * double(N));
          }
          const double sig = std::abs(s - m) / mse;
          os << N << ',' << fmt17(zs[k].real()) << ',' << fmt17(zs[k].imag()) << ',' << fmt17(m.real()) << ','
             << fmt17(m.imag()) << ',' << fmt17(mse) << ',' << fmt17(s.real()) << ',' << fmt17(s.imag()) << ','
             << fmt17(serr) << ',' << fmt17(l.real()) << ',' << fmt17(l.imag()) << ',' << fmt17(sig) << ','
             << fmt17(std::abs(s - l)) << ',' << (sig <= 3.0 ? "pass" : "fail") << '\n';
        }
      }
      emit(cc.out, os.str());
      return 0;
    }

    if (*saddle) {
      std::vector<std::string> names = k_case == "all" ? synthetic_case_names() : std::vector<std::string>{k_case};
      for (long n : k_ns) require(n >= 1, "--n values must be positive");
      std::ostringstream os;
      os << metadata(saddle) << "case,N,rel_err\n";
      std::ostringstream footer;
      for (const auto& name : names) {
        SyntheticCase c;
        try {
          c = synthetic_case(name);
        } catch (const Error& e) {
          throw Error(ErrorKind::Config, e.what());
        }
        const ExpansionReport r = verify_expansion(c.problem, c.evaluator, k_ns);
        for (const auto& row : r.rows) os << name << ',' << row.N << ',' << fmt17(row.rel_err) << '\n';
        footer << "# " << name << ": exponent=" << (r.exact ? std::string("exact") : fmt17(r.exponent)) << '\n';
      }
      emit(kc.out, os.str() + footer.str());
      return 0;
    }

    if (*feval) {
      const cplx x = parse_complex(f_x);
      std::vector<Rational> b;
      if (!f_params.empty()) {
        std::stringstream ss(f_params);
        for (std::string t; std::getline(ss, t, ',');) b.push_back(parse_rational(t));
      }
      cplx v;
      if (f_fn == "bessel_i") v = bessel_i(f_order, x);
      else if (f_fn == "bessel_k") v = bessel_k(f_order, x);
      else if (f_fn == "bessel_j") {
        require(x.imag() == 0.0, "bessel_j takes a real argument");
        v = bessel_j(f_order, x.real());
      } else if (f_fn == "gamma") v = gamma(x);
      else if (f_fn == "log_gamma") v = log_gamma(x);
      else if (f_fn == "hyper_0f2") {
        require(b.size() == 2, "hyper_0f2 needs --params b1,b2");
        v = hyper_0f2(b[0], b[1], x);
      } else {
        require(b.size() == 3, "meijer_g needs --params b1,b2,b3");
        v = meijer_g_303({b[0], b[1], b[2], x, CutSide::None});
      }
      std::ostringstream os;
      os << metadata(feval) << "re,im\n" << fmt17(v.real()) << ',' << fmt17(v.imag()) << '\n';
      emit(fc.out, os.str());
      return 0;
    }
  } catch (const Error& e) {
    if (!partial.empty()) std::filesystem::remove(partial);
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    if (!partial.empty()) std::filesystem::remove(partial);
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
