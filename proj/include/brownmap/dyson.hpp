#pragma once

#include <stdexcept>

#include "brownmap/model.hpp"

namespace brownmap {

struct SolverOptions {
  double tol = 1e-12;          // sup-norm fixed-point defect target
  int max_iter = 100000;       // iteration budget per (zeta, eta) solve
  double eta_floor = 1e-10;    // continuation floor
  double eta_factor = 0.5;     // geometric ladder factor
  double bulk_threshold = 1e-4;  // <v1> cutoff for the inside flag
};

/// Solution pair of the coupled fixed-point system at (zeta, eta).
/// `residual` is the sup-norm defect of the fixed-point form
///   v1 = (eta + S*v1) / (|a-zeta|^2 + (eta + S*v1)(eta + S v2)),
/// and likewise for v2; the defect of the reciprocal form scales with
/// 1/v and is not representable at points far outside the support.
struct DysonState {
  Complex zeta{0.0, 0.0};
  double eta = 0.0;
  Vec v1, v2;
  CVec y;  // filled on demand via compute_y
  double residual = 0.0;
  int iterations = 0;
  bool inside = false;  // set by eta_continuation
};

struct DysonNonConvergence : std::runtime_error {
  DysonNonConvergence(const std::string& msg, double residual_, int iterations_)
      : std::runtime_error(msg), residual(residual_), iterations(iterations_) {}
  double residual;
  int iterations;
};

/// Solves the coupled system at eta > 0. Damped fixed-point iteration with a
/// Newton phase once the iteration stalls near the spectral edge.
DysonState solve_dyson(const AtomicProfile& p, Complex zeta, double eta,
                       const SolverOptions& opts = {},
                       const DysonState* warm = nullptr);

/// Geometric eta ladder down to opts.eta_floor with warm starts. Returns the
/// floor state flagged "inside" when <v1> exceeds opts.bulk_threshold, else
/// the zero extension (v = 0, eta = 0) flagged outside.
DysonState eta_continuation(const AtomicProfile& p, Complex zeta,
                            const SolverOptions& opts = {});

/// Scalar-kernel shortcut at eta = 0: the unique kappa > 0 with
/// t <1/(kappa^2 + |a-zeta|^2)> = 1 when it exists, else 0.
double solve_kappa(const AtomicProfile& p, Complex zeta);

/// Off-diagonal resolvent component y_i = v1_i conj(a_i - zeta)/(eta + (S*v1)_i);
/// for the zero extension outside the support this is 1/(a - zeta).
CVec compute_y(const AtomicProfile& p, const DysonState& s);

/// Sup-norm defect of the per-atom 2x2 matrix self-consistency equation.
double mde_check(const AtomicProfile& p, const DysonState& s);

}  // namespace brownmap
