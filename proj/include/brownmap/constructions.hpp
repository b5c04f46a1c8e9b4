#pragma once

#include <string>
#include <vector>

#include "brownmap/geometry.hpp"
#include "brownmap/model.hpp"

namespace brownmap {

/// Moment-problem output: first-quadrant nodes with positive coefficients.
/// Not a probability measure; the odd-case constraints fix the scale.
struct MomentSolution {
  CVec atoms;
  Vec coeffs;
  int n = 0;         // requested order
  bool even = false;
  int tau = 0;       // prescribed sign (even case)
};

/// f(zeta) = sum_i m_i / |zeta - a_i|^2, +inf at atoms.
double f_eval(const AtomMeasure& nu, Complex zeta);

/// Exact d^k f / dy^k at 0 for k = 1..order_max (no atom may sit at 0).
std::vector<double> f_axis_derivatives(const AtomMeasure& nu, int order_max);

/// Laplacian of f at 0: sum 4 m_i / |a_i|^4.
double f_laplacian0(const AtomMeasure& nu);

/// Even-order construction: nodes z_i in the open first quadrant with
/// Re sum c z^{2k+1} = 0 for k = 1..n-1 and the order-2n axis derivative of
/// the assembled f carrying the prescribed sign tau.
MomentSolution construct_even(int n, int tau);

/// Odd-order construction: 2n+2 nodes satisfying the mixed identities
/// (-1)^{k+1} Im sum c z^{2k} = 2k, (-1)^{k+1} Re sum c z^{2k+1} = 2k+1
/// for k = 1..n plus the strict top-order inequality.
MomentSolution construct_odd(int n);

/// Residuals of the defining constraints, for verification reports.
std::vector<double> moment_residuals(const MomentSolution& sol);

/// Measure realizing f = sum c_i (Re z_i/|z_i|^2) f_{z_i} (even case) or
/// f = sum c_i (Re z_i/|z_i|^2) g_{z_i} + |zeta + i|^{-2} (odd case),
/// with masses normalized to a probability measure.
AtomMeasure assemble_nu(const MomentSolution& sol);

/// Profile for a standard circular deformation by nu: scalar kernel with
/// t = 1/f(0) folded in so that beta(0) = 0.
AtomicProfile profile_from_nu(const AtomMeasure& nu);

struct ExpectedSingularity {
  Complex location;
  SingKind kind;
  int order;
  int K;
  int tau;  // 0 when either sign is acceptable (odd K)
};

struct ExampleSpec {
  std::string name;
  AtomMeasure nu;
  double t = 1.0;  // scalar variance
  Window window;
  std::vector<ExpectedSingularity> expected;
};

/// Named catalog entries: circular, x2_minus_y2, x2_plus_y2, x2_y3, x2_y4,
/// x2_infinity. Curve-backed entries are discretized with `curve_atoms`
/// equal-weight atoms.
std::pair<AtomicProfile, ExampleSpec> make_example(const std::string& name, int curve_atoms = 256);

std::vector<std::string> example_names();

}  // namespace brownmap
