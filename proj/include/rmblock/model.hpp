#pragma once
#include <Eigen/Dense>
#include <string>

namespace rmb {

// Block variance profile. s_ij is N times the variance of an entry in block (i,j).
struct VarianceProfile {
  Eigen::MatrixXd S;
  int K() const { return static_cast<int>(S.rows()); }
};

struct SingularityClass {
  int ell = 1;
  double sigma = 0.0;
  double theta = 0.0;
  bool hasSupport = true;
  bool reducible = false;
  // true when theta came from the Dyson solver instead of a closed form
  bool thetaFitted = false;
};

VarianceProfile validate_profile(const Eigen::MatrixXd& raw);

// Any permutation p with s_{i,p(i)} > 0 for all i.
bool has_support(const Eigen::MatrixXd& S);
// Connectivity of the graph whose edges are the nonzero entries of S.
bool is_irreducible(const Eigen::MatrixXd& S);

SingularityClass classify_singularity(const VarianceProfile& p);

// eta_N = 2 (theta K N (ell+1))^{-(ell+1)/2}
double spacing_scale(const SingularityClass& c, const VarianceProfile& p, long N);

VarianceProfile read_profile(const std::string& path);
VarianceProfile parse_profile(const std::string& text);
std::string profile_to_json(const VarianceProfile& p);

}  // namespace rmb
