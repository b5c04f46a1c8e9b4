#pragma once

#include <cstdint>
#include <vector>

#include "brownmap/dyson.hpp"
#include "brownmap/spectral.hpp"

namespace brownmap {

struct Window {
  double re_min = -2.0, re_max = 2.0, im_min = -2.0, im_max = 2.0;
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  double diameter() const { return std::hypot(width(), height()); }
  bool empty() const { return !(re_max > re_min) || !(im_max > im_min); }
};

/// Rectangular field of density and beta values at cell centers.
struct DensityGrid {
  Window window;
  int nx = 0, ny = 0;
  std::vector<double> sigma;      // row-major, index iy * nx + ix
  std::vector<double> beta;       // same layout
  std::vector<std::uint8_t> mask; // beta < 0
  int clamp_count = 0;            // negative FD values clamped to zero
  double mass = 0.0;              // refined cell-sum of sigma over the window

  double dx() const { return window.width() / nx; }
  double dy() const { return window.height() / ny; }
  Complex node(int ix, int iy) const {
    return {window.re_min + (ix + 0.5) * dx(), window.im_min + (iy + 0.5) * dy()};
  }
  double at_sigma(int ix, int iy) const { return sigma[static_cast<size_t>(iy) * nx + ix]; }
  double at_beta(int ix, int iy) const { return beta[static_cast<size_t>(iy) * nx + ix]; }
};

struct SigmaDiagnostics {
  bool clamped = false;    // raw value was negative
  bool edge_cell = false;  // FD stencil straddled the edge
  double raw = 0.0;
};

/// Pointwise density. Scalar kernels use the closed form
///   sigma = <1/(|a-zeta|^2 - beta)^2> (-beta + |grad beta|^2) / pi,
/// general kernels differentiate <y(.,0)> by central differences over
/// eta-continued states. fd_step <= 0 picks the default.
double sigma_at(const AtomicProfile& p, Complex zeta, const SolverOptions& opts = {},
                double fd_step = -1.0, SigmaDiagnostics* diag = nullptr);

DensityGrid density_grid(const AtomicProfile& p, const Window& window, int nx, int ny,
                         const SolverOptions& opts = {}, int threads = 0);

struct LogPotentialInfo {
  double tail_bound = 0.0;
  bool warning = false;
};

/// L(zeta) = int_0^inf (<v1(zeta,eta)> - 1/(1+eta)) d eta via a fixed
/// logarithmic quadrature mesh plus an analytic large-eta tail.
double log_potential(const AtomicProfile& p, Complex zeta, const SolverOptions& opts = {},
                     LogPotentialInfo* info = nullptr);

/// -Laplacian(L)/(2 pi) by a 5-point stencil with a shared quadrature mesh;
/// agrees with sigma_at in the bulk.
double laplacian_check(const AtomicProfile& p, Complex zeta, double h = 1e-3,
                       const SolverOptions& opts = {});

}  // namespace brownmap
