#pragma once

#include <array>
#include <vector>

#include "brownmap/density.hpp"

namespace brownmap {

enum class SingKind { regular_edge, edge, internal, internal_infinity };

const char* to_string(SingKind k);

/// A located zero of (beta, grad beta) with its local type. `K` is the first
/// non-degenerate order of -beta transverse to the x^2 direction, `tau` its
/// sign; `order` is the k of edge(k)/internal(k).
struct SingularPoint {
  Complex location{0.0, 0.0};
  SingKind kind = SingKind::regular_edge;
  int order = 0;
  int K = 0;  // 0 while unresolved
  int tau = 0;
  std::array<double, 2> hessian_eigs{0.0, 0.0};  // of -beta, descending
  std::vector<double> probe_derivatives;         // normalized coefficients, order 3 up
  double newton_residual = 0.0;                  // |grad beta| at location
  double beta_residual = 0.0;                    // |beta| at location
  bool tentative = false;                        // unresolved beyond k_max
};

struct Polyline {
  std::vector<Complex> points;
  bool closed = false;
};

struct BoundarySet {
  std::vector<Polyline> curves;
  int ambiguous_cells = 0;  // saddle cells resolved by the center value
};

/// Marching-squares zero contours of the beta field with linear interpolation.
BoundarySet trace_boundary(const DensityGrid& grid);

struct SeedOptions {
  int grid_n = 81;
  double beta_window = 0.05;  // restrict seeds to |beta| below this
  int newton_max_iter = 60;
  double accept_beta = 1e-8;
  double accept_grad = 1e-6;
  double dedupe_dist = 1e-6;
};

std::vector<SingularPoint> find_singular_points(const AtomicProfile& p, const Window& window,
                                                const SeedOptions& opts = {},
                                                const std::vector<Complex>& extra_seeds = {});

struct ClassifyOptions {
  double tol_hessian = 1e-6;  // |second Hessian eigenvalue| above this ends at K = 2
  double tol_deriv = 1e-5;    // normalized coefficient threshold for K > 2
  int k_max = 8;
  double probe_h = 0.0;  // base probe step; 0 = auto from the atom distances
};

/// Completes kind/K/tau of a located singular point from finite differences
/// of -beta: Hessian eigen-split, then 1-D derivative probes along the
/// degenerate axis (following the ridge where the transverse slope vanishes).
SingularPoint classify_singularity(const AtomicProfile& p, const SingularPoint& point,
                                   const ClassifyOptions& opts = {});

struct SymmetricClass {
  int K = 0;  // 0 when unresolved up to the cap
  int tau = 0;
  bool resolved = false;
  std::vector<double> derivatives;  // d^k f/dy^k at 0, k = 1..cap
};

/// Exact (K, tau) at 0 for a measure symmetric about the imaginary axis,
/// from closed-form axis derivatives of f(zeta) = sum m_i/|zeta - a_i|^2.
/// `threshold` is the required value of f(0) (= 1/t for the scalar kernel).
SymmetricClass symmetric_classify(const AtomMeasure& nu, double threshold, int k_cap = 16);

}  // namespace brownmap
