#include "brownmap/density.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace brownmap {

namespace {

double scalar_sigma(const AtomicProfile& p, Complex zeta) {
  BetaEval ev = beta_eval(p, zeta);
  if (ev.beta >= 0.0) return 0.0;
  const Vec D = p.abs2_a_minus(zeta);
  double quad = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    double d = D[i] - ev.beta;
    quad += p.weights[i] / (d * d);
  }
  return quad * (-ev.beta + std::norm(ev.grad)) / M_PI;
}

Complex avg_y_at(const AtomicProfile& p, Complex zeta, const SolverOptions& opts, bool* inside) {
  DysonState st = eta_continuation(p, zeta, opts);
  if (inside) *inside = st.inside;
  return weighted_avg(p, compute_y(p, st));
}

double general_sigma(const AtomicProfile& p, Complex zeta, const SolverOptions& opts,
                     double h, SigmaDiagnostics* diag) {
  BetaEval ev = beta_eval(p, zeta);
  if (ev.beta > 0.01) return 0.0;
  if (h <= 0.0) h = 4e-4 * (1.0 + std::abs(zeta));
  // y is only Lipschitz across the edge; shrink the stencil there
  if (std::abs(ev.beta) < 0.01) h *= std::max(std::abs(ev.beta) / 0.01, 1e-2);

  bool in[4] = {};
  Complex yE = avg_y_at(p, zeta + h, opts, &in[0]);
  Complex yW = avg_y_at(p, zeta - h, opts, &in[1]);
  Complex yN = avg_y_at(p, zeta + Complex(0, h), opts, &in[2]);
  Complex yS = avg_y_at(p, zeta - Complex(0, h), opts, &in[3]);

  bool straddle = !(in[0] == in[1] && in[1] == in[2] && in[2] == in[3]);
  if (straddle) {
    // one-sided differences toward the inside
    bool inside_c = false;
    Complex yC = avg_y_at(p, zeta, opts, &inside_c);
    if (in[0] != in[1]) {
      if (in[0] == inside_c) yW = yC + (yC - yE);  // mirror across center
      else yE = yC + (yC - yW);
    }
    if (in[2] != in[3]) {
      if (in[2] == inside_c) yS = yC + (yC - yN);
      else yN = yC + (yC - yS);
    }
  }

  Complex ddx = (yE - yW) / (2.0 * h);
  Complex ddy = (yN - yS) / (2.0 * h);
  Complex dbar = 0.5 * (ddx + Complex(0, 1) * ddy);
  double raw = -dbar.real() / M_PI;
  if (diag) {
    diag->raw = raw;
    diag->edge_cell = straddle;
    diag->clamped = raw < 0.0;
  }
  return std::max(raw, 0.0);
}

}  // namespace

double sigma_at(const AtomicProfile& p, Complex zeta, const SolverOptions& opts, double fd_step,
                SigmaDiagnostics* diag) {
  if (p.scalar_kernel(nullptr)) {
    double v = scalar_sigma(p, zeta);
    if (diag) *diag = SigmaDiagnostics{false, false, v};
    return v;
  }
  return general_sigma(p, zeta, opts, fd_step, diag);
}

DensityGrid density_grid(const AtomicProfile& p, const Window& window, int nx, int ny,
                         const SolverOptions& opts, int threads) {
  if (window.empty()) throw std::invalid_argument("density_grid: empty window");
  if (nx < 8 || ny < 8) throw std::invalid_argument("density_grid: resolution must be >= 8");
  DensityGrid g;
  g.window = window;
  g.nx = nx;
  g.ny = ny;
  g.sigma.assign(static_cast<size_t>(nx) * ny, 0.0);
  g.beta.assign(static_cast<size_t>(nx) * ny, 0.0);
  g.mask.assign(static_cast<size_t>(nx) * ny, 0);

  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  std::vector<int> clamps(threads, 0);

  auto run_rows = [&](int tid) {
    SigmaDiagnostics diag;
    for (int iy = tid; iy < ny; iy += threads) {
      for (int ix = 0; ix < nx; ++ix) {
        Complex z = g.node(ix, iy);
        BetaEval ev = beta_eval(p, z);
        size_t idx = static_cast<size_t>(iy) * nx + ix;
        g.beta[idx] = ev.beta;
        g.mask[idx] = ev.beta < 0.0;
        diag = SigmaDiagnostics{};
        g.sigma[idx] = sigma_at(p, z, opts, -1.0, &diag);
        if (diag.clamped) ++clamps[tid];
      }
    }
  };

  if (threads == 1) {
    run_rows(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(run_rows, t);
    for (auto& th : pool) th.join();
  }
  for (int c : clamps) g.clamp_count += c;

  // cell-sum mass; cells adjacent to a mask change get 4x4 subsampling so the
  // edge jump does not bias the total
  const double area = g.dx() * g.dy();
  double mass = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      size_t idx = static_cast<size_t>(iy) * nx + ix;
      bool boundary = false;
      for (int d = 0; d < 4 && !boundary; ++d) {
        int jx = ix + (d == 0) - (d == 1);
        int jy = iy + (d == 2) - (d == 3);
        if (jx < 0 || jy < 0 || jx >= nx || jy >= ny) continue;
        boundary = g.mask[static_cast<size_t>(jy) * nx + jx] != g.mask[idx];
      }
      if (!boundary) {
        mass += g.sigma[idx] * area;
        continue;
      }
      double acc = 0.0;
      for (int sy = 0; sy < 4; ++sy)
        for (int sx = 0; sx < 4; ++sx) {
          Complex z(g.window.re_min + (ix + (sx + 0.5) / 4.0) * g.dx(),
                    g.window.im_min + (iy + (sy + 0.5) / 4.0) * g.dy());
          acc += sigma_at(p, z, opts);
        }
      mass += acc / 16.0 * area;
    }
  }
  g.mass = mass;
  return g;
}

namespace {

// 4-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGL4x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                             0.8611363115940526};
constexpr double kGL4w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                             0.3478548451374538};

}  // namespace

double log_potential(const AtomicProfile& p, Complex zeta, const SolverOptions& opts,
                     LogPotentialInfo* info) {
  const double eta_min = 1e-8;
  const double T = 2e3 * (1.0 + 0.5 * std::abs(zeta));
  const int panels = 24;

  const double u_lo = std::log(eta_min), u_hi = std::log(T);
  const double du = (u_hi - u_lo) / panels;

  // march the mesh from large eta down, warm-starting each solve
  std::vector<double> nodes;
  nodes.reserve(4 * panels);
  for (int pi = 0; pi < panels; ++pi)
    for (int q = 0; q < 4; ++q)
      nodes.push_back(u_lo + (pi + 0.5 * (1.0 + kGL4x[q])) * du);

  std::vector<double> integrand(nodes.size());
  DysonState warm;
  const DysonState* warm_ptr = nullptr;
  for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; --i) {
    double eta = std::exp(nodes[i]);
    warm = solve_dyson(p, zeta, eta, opts, warm_ptr);
    warm_ptr = &warm;
    integrand[i] = (weighted_avg(p, warm.v1) - 1.0 / (1.0 + eta)) * eta;  // d eta = eta du
  }

  double value = 0.0;
  for (int pi = 0; pi < panels; ++pi)
    for (int q = 0; q < 4; ++q) value += 0.5 * du * kGL4w[q] * integrand[4 * pi + q];

  // analytic tail: <v1> - 1/(1+eta) = 1/(eta(1+eta)) - <S1 + D>/eta^3 + ...
  const double c2 = weighted_avg(p, Vec(p.kernel * p.weights)) +
                    weighted_avg(p, p.abs2_a_minus(zeta));
  value += std::log1p(1.0 / T) - 0.5 * c2 / (T * T);

  // small-eta stub: integrand is bounded there
  double head = (weighted_avg(p, warm.v1) - 1.0 / (1.0 + eta_min)) * eta_min;
  value += head;

  if (info) {
    info->tail_bound = (1.0 + std::abs(zeta)) / (T * T) + std::abs(head);
    info->warning = info->tail_bound > 1e-6;
  }
  return value;
}

double laplacian_check(const AtomicProfile& p, Complex zeta, double h, const SolverOptions& opts) {
  double lc = log_potential(p, zeta, opts);
  double le = log_potential(p, zeta + h, opts);
  double lw = log_potential(p, zeta - h, opts);
  double ln = log_potential(p, zeta + Complex(0, h), opts);
  double ls = log_potential(p, zeta - Complex(0, h), opts);
  double lap = (le + lw + ln + ls - 4.0 * lc) / (h * h);
  return -lap / (2.0 * M_PI);
}

}  // namespace brownmap
