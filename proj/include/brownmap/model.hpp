#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace brownmap {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Discretized model data: K atoms with probability weights, a complex
/// deformation value per atom and a nonnegative variance kernel s(i,j).
/// The covariance operators act as
///   (S u)_i  = sum_j s_ij mu_j u_j,      (S* u)_i = sum_j s_ji mu_j u_j.
/// Immutable after construction; all member data may be read concurrently.
struct AtomicProfile {
  Vec weights;       // mu, positive, sums to one
  CVec deformation;  // a
  Mat kernel;        // s, nonnegative K x K

  // kernel * diag(mu) and kernel^T * diag(mu), cached for the solvers
  Mat S_weighted;
  Mat S_star_weighted;

  AtomicProfile(Vec weights_, CVec deformation_, Mat kernel_);

  int size() const { return static_cast<int>(weights.size()); }

  /// True if s is constant; the constant is written to t_out when given.
  bool scalar_kernel(double* t_out = nullptr) const;

  double max_abs_deformation() const { return deformation.cwiseAbs().maxCoeff(); }
  double max_kernel_row_sum() const { return (kernel * weights).maxCoeff(); }

  /// |a_i - zeta|^2 per atom.
  Vec abs2_a_minus(Complex zeta) const;

  static AtomicProfile from_json_file(const std::string& path);
  static AtomicProfile from_json_text(const std::string& text);
  std::string to_json_text() const;

 private:
  mutable int scalar_cache_ = -1;  // -1 unknown, 0 no, 1 yes
  mutable double scalar_t_ = 0.0;
};

/// Finitely supported measure on C with positive masses summing to one.
struct AtomMeasure {
  CVec atoms;
  Vec masses;

  AtomMeasure(CVec atoms_, Vec masses_);
  int size() const { return static_cast<int>(masses.size()); }
};

Vec apply_S(const AtomicProfile& p, const Vec& u);
CVec apply_S(const AtomicProfile& p, const CVec& u);
Vec apply_S_star(const AtomicProfile& p, const Vec& u);
CVec apply_S_star(const AtomicProfile& p, const CVec& u);

double weighted_avg(const AtomicProfile& p, const Vec& u);
Complex weighted_avg(const AtomicProfile& p, const CVec& u);

struct ValidationReport {
  bool primitive = false;
  int witness_power = 0;  // L with Z^L > 0, at most K
  bool diag_positive = false;
  bool weights_normalized = false;
  std::string message;
  bool ok() const { return primitive && diag_positive && weights_normalized; }
};

/// Checks the structural assumptions on the zero pattern Z_ij = 1(s_ij > 0):
/// positive diagonal and primitivity. Report-only, never throws.
ValidationReport validate(const AtomicProfile& p);

}  // namespace brownmap
