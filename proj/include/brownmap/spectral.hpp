#pragma once

#include "brownmap/model.hpp"

namespace brownmap {

/// beta(zeta) with the spectral data of B_zeta = D_{|a-zeta|^2} - S.
/// beta is the eigenvalue of B_zeta with positive left/right eigenvectors
/// (the branch selected by the min-max characterisation); b and ell are
/// normalized to unit weighted average.
struct BetaEval {
  Complex zeta{0.0, 0.0};
  double beta = 0.0;
  double lambda_pf = 0.0;  // Perron-Frobenius eigenvalue of S D^{-1}
  Vec b, ell;
  Complex grad{0.0, 0.0};  // d beta / d zeta
  double eig_residual = 0.0;
  bool has_vectors = false;
  bool at_atom = false;    // zeta coincides with a deformation atom
  bool far_field = false;  // bound used instead of an eigensolve
};

BetaEval beta_eval(const AtomicProfile& p, Complex zeta);

/// First-order perturbation formula -<ell b conj(a - zeta)> / <ell b>.
Complex grad_beta(const AtomicProfile& p, const BetaEval& eval);

/// Density value on the edge: |<(a-zeta0) ell b>|^2 / (pi <|a-zeta0|^4 ell^2 b^2>).
/// Requires |beta(zeta0)| < 1e-6.
double edge_sigma(const AtomicProfile& p, Complex zeta0);

/// Laplacian of the density extension at a singular boundary point
/// (beta and grad beta both ~ 0). Positive by construction.
double delta_sigma_at_singular(const AtomicProfile& p, Complex zeta0);

/// Unique positive root of c3 x^3 + beta c1 x - eta = 0 (c3, eta > 0).
double solve_edge_cubic(double c3, double c1, double beta, double eta);

/// Coefficients of the edge cubic at zeta: c3 = <ell b (S* ell)(S b)>,
/// c1 = <ell b>. Convenience for the edge-expansion consistency checks.
struct EdgeCubicCoeffs {
  double c3 = 0.0;
  double c1 = 0.0;
};
EdgeCubicCoeffs edge_cubic_coeffs(const AtomicProfile& p, const BetaEval& eval);

}  // namespace brownmap
