#include "rmblock/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "rmblock/dyson.hpp"
#include "rmblock/error.hpp"

namespace rmb {

VarianceProfile validate_profile(const Eigen::MatrixXd& raw) {
  if (raw.rows() != raw.cols() || raw.rows() == 0)
    throw Error(ErrorKind::NonSquare, "profile must be a nonempty square matrix");
  const Eigen::Index K = raw.rows();
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) {
      if (!std::isfinite(raw(i, j)))
        throw Error(ErrorKind::InvalidArgument, "profile entries must be finite");
      if (raw(i, j) < 0.0) throw Error(ErrorKind::NegativeEntry, "profile entries must be >= 0");
    }
  VarianceProfile p{raw};
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = i + 1; j < K; ++j) {
      const double a = raw(i, j), b = raw(j, i);
      if (a == b) continue;
      const double scale = std::max(std::abs(a), std::abs(b));
      if (std::abs(a - b) > 1e-12 * scale)
        throw Error(ErrorKind::AsymmetricBeyondTolerance, "profile is not symmetric");
      p.S(i, j) = p.S(j, i) = 0.5 * (a + b);
    }
  return p;
}

namespace {

std::vector<std::vector<int>> permutations(int K) {
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

bool has_support(const Eigen::MatrixXd& S) {
  const int K = static_cast<int>(S.rows());
  for (const auto& perm : permutations(K)) {
    bool ok = true;
    for (int i = 0; i < K && ok; ++i) ok = S(i, perm[i]) > 0.0;
    if (ok) return true;
  }
  return false;
}

bool is_irreducible(const Eigen::MatrixXd& S) {
  const int K = static_cast<int>(S.rows());
  std::vector<bool> seen(K, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < K; ++j)
      if (!seen[j] && S(i, j) > 0.0) {
        seen[j] = true;
        stack.push_back(j);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

SingularityClass classify_singularity(const VarianceProfile& p) {
  const int K = p.K();
  if (K > 3) throw Error(ErrorKind::UnsupportedK, "classification is only available for K <= 3");
  SingularityClass c;
  c.hasSupport = has_support(p.S);
  c.reducible = !is_irreducible(p.S);
  if (!c.hasSupport) throw Error(ErrorKind::NoSupport, "profile has no support; atom at the origin");
  if (c.reducible) throw Error(ErrorKind::Reducible, "profile is reducible");

  const double pi = M_PI;
  auto set_ell = [&c](int ell) {
    c.ell = ell;
    c.sigma = double(ell - 1) / double(ell + 1);
  };

  if (K == 1) {
    set_ell(1);
    c.theta = 1.0 / (pi * std::sqrt(p.S(0, 0)));
    return c;
  }
  if (K == 2) {
    for (int d = 0; d < 2; ++d) {
      const int o = 1 - d;
      if (p.S(o, o) == 0.0 && p.S(d, d) > 0.0 && p.S(0, 1) > 0.0) {
        set_ell(2);
        c.theta = std::sqrt(3.0) / (4.0 * pi) * std::cbrt(p.S(d, d)) / std::cbrt(p.S(0, 1) * p.S(0, 1));
        return c;
      }
    }
  }
  if (K == 3) {
    for (const auto& perm : permutations(3)) {
      auto t = [&](int i, int j) { return p.S(perm[i], perm[j]); };
      if (t(1, 2) == 0.0 && t(2, 2) == 0.0 && t(0, 1) > 0.0 && t(0, 2) > 0.0 && t(1, 1) > 0.0) {
        set_ell(3);
        c.theta = std::sqrt(t(0, 1)) / (3.0 * pi * std::pow(t(1, 1), 0.25) * std::sqrt(2.0 * t(0, 2)));
        return c;
      }
    }
  }
  set_ell(1);
  c.theta = density_at_origin(p);
  c.thetaFitted = true;
  return c;
}

double spacing_scale(const SingularityClass& c, const VarianceProfile& p, long N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  const double e = 0.5 * (c.ell + 1);
  return 2.0 * std::pow(c.theta * p.K() * double(N) * (c.ell + 1), -e);
}

VarianceProfile parse_profile(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("profile is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("K") || !j.contains("S"))
    throw Error(ErrorKind::Config, "profile needs keys K and S");
  for (const auto& [key, _] : j.items())
    if (key != "K" && key != "S") throw Error(ErrorKind::Config, "unknown profile key '" + key + "'");
  if (!j["K"].is_number_integer() || j["K"].get<long>() < 1)
    throw Error(ErrorKind::Config, "K must be a positive integer");
  const long K = j["K"].get<long>();
  const json& rows = j["S"];
  if (!rows.is_array() || static_cast<long>(rows.size()) != K)
    throw Error(ErrorKind::Config, "S must have exactly K rows");
  Eigen::MatrixXd S(K, K);
  for (long i = 0; i < K; ++i) {
    if (!rows[i].is_array() || static_cast<long>(rows[i].size()) != K)
      throw Error(ErrorKind::Config, "every row of S must have exactly K entries");
    for (long k = 0; k < K; ++k) {
      if (!rows[i][k].is_number()) throw Error(ErrorKind::Config, "S entries must be numbers");
      S(i, k) = rows[i][k].get<double>();
    }
  }
  return validate_profile(S);
}

VarianceProfile read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open profile '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_profile(ss.str());
}

std::string profile_to_json(const VarianceProfile& p) {
  nlohmann::json j;
  j["K"] = p.K();
  j["S"] = nlohmann::json::array();
  for (int i = 0; i < p.K(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < p.K(); ++k) row.push_back(p.S(i, k));
    j["S"].push_back(row);
  }
  return j.dump();
}

}  // namespace rmb
