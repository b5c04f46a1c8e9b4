#include "brownmap/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace brownmap {

const char* to_string(SingKind k) {
  switch (k) {
    case SingKind::regular_edge: return "regular_edge";
    case SingKind::edge: return "edge";
    case SingKind::internal: return "internal";
    case SingKind::internal_infinity: return "internal_infinity";
  }
  return "?";
}

namespace {

struct EdgeKey {
  bool horizontal;
  int ix, iy;
  bool operator<(const EdgeKey& o) const {
    return std::tie(horizontal, ix, iy) < std::tie(o.horizontal, o.ix, o.iy);
  }
};

struct Segment {
  EdgeKey a, b;
};

Complex edge_point(const DensityGrid& g, const EdgeKey& e) {
  double v0, v1;
  Complex p0 = g.node(e.ix, e.iy);
  Complex p1;
  if (e.horizontal) {
    v0 = g.at_beta(e.ix, e.iy);
    v1 = g.at_beta(e.ix + 1, e.iy);
    p1 = g.node(e.ix + 1, e.iy);
  } else {
    v0 = g.at_beta(e.ix, e.iy);
    v1 = g.at_beta(e.ix, e.iy + 1);
    p1 = g.node(e.ix, e.iy + 1);
  }
  double t = v0 / (v0 - v1);
  t = std::clamp(t, 0.0, 1.0);
  return p0 + t * (p1 - p0);
}

}  // namespace

BoundarySet trace_boundary(const DensityGrid& g) {
  BoundarySet out;
  std::vector<Segment> segs;

  for (int iy = 0; iy + 1 < g.ny; ++iy) {
    for (int ix = 0; ix + 1 < g.nx; ++ix) {
      double v0 = g.at_beta(ix, iy);       // bottom-left
      double v1 = g.at_beta(ix + 1, iy);   // bottom-right
      double v2 = g.at_beta(ix + 1, iy + 1);  // top-right
      double v3 = g.at_beta(ix, iy + 1);   // top-left
      int code = (v0 < 0) | ((v1 < 0) << 1) | ((v2 < 0) << 2) | ((v3 < 0) << 3);
      if (code == 0 || code == 15) continue;

      EdgeKey bottom{true, ix, iy}, top{true, ix, iy + 1};
      EdgeKey left{false, ix, iy}, right{false, ix + 1, iy};
      auto add = [&](EdgeKey a, EdgeKey b) { segs.push_back({a, b}); };

      switch (code) {
        case 1: case 14: add(left, bottom); break;
        case 2: case 13: add(bottom, right); break;
        case 4: case 11: add(right, top); break;
        case 8: case 7: add(top, left); break;
        case 3: case 12: add(left, right); break;
        case 6: case 9: add(bottom, top); break;
        case 5: case 10: {
          // code 5: corners c0, c2 inside; code 10: corners c1, c3 inside
          ++out.ambiguous_cells;
          bool center_inside = 0.25 * (v0 + v1 + v2 + v3) < 0;
          if (code == 5) {
            if (center_inside) { add(bottom, right); add(top, left); }
            else { add(left, bottom); add(right, top); }
          } else {
            if (center_inside) { add(left, bottom); add(right, top); }
            else { add(bottom, right); add(top, left); }
          }
          break;
        }
      }
    }
  }

  // chain segments into polylines; every grid edge carries at most one
  // crossing so adjacency degree is at most two
  std::map<EdgeKey, std::vector<int>> touch;
  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    touch[segs[i].a].push_back(i);
    touch[segs[i].b].push_back(i);
  }

  std::vector<bool> used(segs.size(), false);
  auto walk = [&](int start_seg, EdgeKey start_edge) {
    Polyline pl;
    pl.points.push_back(edge_point(g, start_edge));
    int seg = start_seg;
    EdgeKey at = start_edge;
    while (true) {
      used[seg] = true;
      EdgeKey next = (segs[seg].a < at || at < segs[seg].a) ? segs[seg].a : segs[seg].b;
      pl.points.push_back(edge_point(g, next));
      at = next;
      int cont = -1;
      for (int cand : touch[at])
        if (!used[cand]) cont = cand;
      if (cont < 0) {
        pl.closed = touch[at].size() == 2 && std::abs(pl.points.front() - pl.points.back()) < 1e-14;
        if (pl.points.size() > 2 &&
            std::abs(pl.points.front() - pl.points.back()) <
                1e-12 * (1.0 + std::abs(pl.points.front())))
          pl.closed = true;
        return pl;
      }
      seg = cont;
    }
  };

  // open chains first (endpoints of degree one), then remaining loops
  for (const auto& [key, ids] : touch) {
    if (ids.size() == 1 && !used[ids[0]]) out.curves.push_back(walk(ids[0], key));
  }
  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    if (!used[i]) {
      Polyline pl = walk(i, segs[i].a);
      pl.closed = true;
      out.curves.push_back(std::move(pl));
    }
  }
  return out;
}

namespace {

// real gradient of beta as a 2-vector
Eigen::Vector2d real_grad(const BetaEval& ev) {
  return {2.0 * ev.grad.real(), -2.0 * ev.grad.imag()};
}

std::optional<Complex> newton_critical_point(const AtomicProfile& p, Complex z0,
                                             const SeedOptions& opts) {
  Complex z = z0;
  const double scale = 1.0 + std::abs(z0);
  for (int it = 0; it < opts.newton_max_iter; ++it) {
    BetaEval ev = beta_eval(p, z);
    if (!ev.has_vectors) return std::nullopt;
    Eigen::Vector2d grad = real_grad(ev);
    if (grad.norm() < 1e-13 * scale) break;

    const double h = 1e-6 * scale;
    auto grad_at = [&](Complex w) { return real_grad(beta_eval(p, w)); };
    Eigen::Vector2d gx = (grad_at(z + h) - grad_at(z - h)) / (2.0 * h);
    Eigen::Vector2d gy = (grad_at(z + Complex(0, h)) - grad_at(z - Complex(0, h))) / (2.0 * h);
    Eigen::Matrix2d H;
    H << gx[0], gy[0], gx[1], gy[1];
    H = 0.5 * (H + H.transpose()).eval();

    Eigen::Vector2d step;
    if (std::abs(H.determinant()) > 1e-14 * scale) {
      step = -H.inverse() * grad;
    } else {
      step = -H.completeOrthogonalDecomposition().solve(grad);
      if (step.norm() < 1e-16) step = -grad;  // plain descent as last resort
    }
    double cap = 0.25 * scale;
    if (step.norm() > cap) step *= cap / step.norm();
    z += Complex(step[0], step[1]);
  }
  BetaEval ev = beta_eval(p, z);
  if (std::abs(ev.beta) < 1e-8 && std::abs(ev.grad) < 1e-6) return z;
  return std::nullopt;
}

}  // namespace

std::vector<SingularPoint> find_singular_points(const AtomicProfile& p, const Window& window,
                                                const SeedOptions& opts,
                                                const std::vector<Complex>& extra_seeds) {
  if (window.empty()) throw std::invalid_argument("find_singular_points: empty window");
  const int n = std::max(opts.grid_n, 8);
  std::vector<double> beta(static_cast<size_t>(n) * n), gnorm(static_cast<size_t>(n) * n);
  auto node = [&](int ix, int iy) {
    return Complex(window.re_min + (ix + 0.5) * window.width() / n,
                   window.im_min + (iy + 0.5) * window.height() / n);
  };
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      BetaEval ev = beta_eval(p, node(ix, iy));
      beta[static_cast<size_t>(iy) * n + ix] = ev.beta;
      gnorm[static_cast<size_t>(iy) * n + ix] = ev.has_vectors ? std::norm(ev.grad) : 1e9;
    }

  std::vector<Complex> seeds(extra_seeds);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      size_t idx = static_cast<size_t>(iy) * n + ix;
      if (std::abs(beta[idx]) > opts.beta_window) continue;
      bool is_min = true;
      for (int dy = -1; dy <= 1 && is_min; ++dy)
        for (int dx = -1; dx <= 1 && is_min; ++dx) {
          int jx = ix + dx, jy = iy + dy;
          if (jx < 0 || jy < 0 || jx >= n || jy >= n || (dx == 0 && dy == 0)) continue;
          is_min = gnorm[idx] <= gnorm[static_cast<size_t>(jy) * n + jx];
        }
      if (is_min) seeds.push_back(node(ix, iy));
    }

  std::vector<SingularPoint> found;
  for (Complex s : seeds) {
    auto z = newton_critical_point(p, s, opts);
    if (!z) continue;
    bool dup = false;
    for (const auto& q : found)
      if (std::abs(q.location - *z) < opts.dedupe_dist) dup = true;
    if (dup) continue;
    BetaEval ev = beta_eval(p, *z);
    SingularPoint pt;
    pt.location = *z;
    pt.newton_residual = std::abs(ev.grad);
    pt.beta_residual = std::abs(ev.beta);
    found.push_back(pt);
  }
  std::sort(found.begin(), found.end(), [](const SingularPoint& a, const SingularPoint& b) {
    return std::array<double, 2>{a.location.real(), a.location.imag()} <
           std::array<double, 2>{b.location.real(), b.location.imag()};
  });
  return found;
}

namespace {

double beta_at(const AtomicProfile& p, Complex z) { return beta_eval(p, z).beta; }

// Hessian of -beta by Richardson-extrapolated central differences.
Eigen::Matrix2d neg_beta_hessian(const AtomicProfile& p, Complex z0, double h) {
  auto hess = [&](double s) {
    auto f = [&](Complex z) { return -beta_at(p, z); };
    double f0 = f(z0);
    Eigen::Matrix2d H;
    H(0, 0) = (f(z0 + s) - 2 * f0 + f(z0 - s)) / (s * s);
    H(1, 1) = (f(z0 + Complex(0, s)) - 2 * f0 + f(z0 - Complex(0, s))) / (s * s);
    H(0, 1) = H(1, 0) = (f(z0 + Complex(s, s)) - f(z0 + Complex(s, -s)) -
                         f(z0 + Complex(-s, s)) + f(z0 + Complex(-s, -s))) /
                        (4 * s * s);
    return H;
  };
  Eigen::Matrix2d h1 = hess(h), h2 = hess(0.5 * h);
  return (4.0 * h2 - h1) / 3.0;
}

// -beta along the ridge: at offset s from z0 in direction e2, move along e1
// to the point where the e1-slope vanishes.
double ridge_value(const AtomicProfile& p, Complex z0, Complex e1, Complex e2, double s) {
  Complex base = z0 + s * e2;
  double u = 0.0;
  const double tiny = 1e-7 * (1.0 + std::abs(z0));
  auto slope = [&](double uu) {
    BetaEval ev = beta_eval(p, base + uu * e1);
    return -2.0 * (ev.grad * e1).real();
  };
  for (int it = 0; it < 12; ++it) {
    double f = slope(u);
    if (std::abs(f) < 1e-12) break;
    double fp = (slope(u + tiny) - slope(u - tiny)) / (2.0 * tiny);
    if (!(std::abs(fp) > 0.0)) break;
    double du = -f / fp;
    du = std::clamp(du, -10.0 * std::abs(s) - tiny, 10.0 * std::abs(s) + tiny);
    u += du;
    if (std::abs(du) < 1e-14 * (1.0 + std::abs(u))) break;
  }
  return -beta_at(p, base + u * e1);
}

}  // namespace

SingularPoint classify_singularity(const AtomicProfile& p, const SingularPoint& point,
                                   const ClassifyOptions& opts) {
  SingularPoint out = point;
  const Complex z0 = point.location;
  const double scale = 1.0 + std::abs(z0);

  double h_hess = 1e-3 * scale;
  Eigen::Matrix2d H = neg_beta_hessian(p, z0, h_hess);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
  double l_small = es.eigenvalues()[0], l_big = es.eigenvalues()[1];
  Eigen::Vector2d dir_big = es.eigenvectors().col(1), dir_small = es.eigenvectors().col(0);
  out.hessian_eigs = {l_big, l_small};

  if (l_big <= opts.tol_hessian)
    throw std::runtime_error(
        "classify_singularity: Hessian of -beta has no clearly positive eigenvalue "
        "(both eigenvalues near zero signals a numerics problem)");

  if (std::abs(l_small) > opts.tol_hessian) {
    out.K = 2;
    out.tau = l_small > 0 ? 1 : -1;
  } else {
    Complex e1(dir_big[0], dir_big[1]), e2(dir_small[0], dir_small[1]);
    double atom_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.size(); ++i)
      atom_dist = std::min(atom_dist, std::abs(p.deformation[i] - z0));
    double h_base = opts.probe_h > 0.0 ? opts.probe_h
                                       : std::min(0.08 * scale, atom_dist / 5.0);

    out.K = 0;
    out.tau = 0;
    out.probe_derivatives.clear();
    for (int k = 3; k <= opts.k_max && out.K == 0; ++k) {
      // Richardson-extrapolated k-th central difference of the ridge values;
      // computed at two base steps, since a genuine Taylor coefficient is
      // step-invariant while leakage from higher orders is not.
      auto coeff_at = [&](double hk, double* norm_out) {
        const double delta = hk / 4.0;  // half-step of the finer level
        const int half_span = 2 * k;    // offsets up to k * hk / 2
        std::vector<double> g(2 * half_span + 1);
        for (int j = -half_span; j <= half_span; ++j)
          g[j + half_span] = ridge_value(p, z0, e1, e2, j * delta);
        auto diff_at = [&](int m_half) {
          double acc = 0.0, binom = 1.0;
          for (int j = 0; j <= k; ++j) {
            int off = m_half * (k - 2 * j) / 2;
            acc += ((j % 2) ? -binom : binom) * g[half_span + off];
            binom = binom * (k - j) / (j + 1);
          }
          return acc / std::pow(m_half * delta, k);
        };
        double deriv = (4.0 * diff_at(2) - diff_at(4)) / 3.0;
        double coeff = deriv / std::tgamma(k + 1.0);
        if (norm_out) {
          double mag = 0.0;
          for (double v : g) mag = std::max(mag, std::abs(v));
          *norm_out = coeff * std::pow(k * hk / 2.0, k) / std::max(mag, 1e-300);
        }
        return coeff;
      };

      double hk = h_base * (1.0 + 0.2 * (k - 3));
      double normalized = 0.0;
      double c1v = coeff_at(hk, &normalized);
      out.probe_derivatives.push_back(normalized);
      // round-off floor of the k-th difference: 2^k amplification of the
      // beta evaluation noise over spacing (hk/2)^k
      double noise = 3e-15 * scale * std::pow(2.0, k) /
                     (std::pow(hk / 2.0, k) * std::tgamma(k + 1.0));
      if (std::abs(normalized) > opts.tol_deriv && std::abs(c1v) > 10.0 * noise) {
        double c2v = coeff_at(0.6 * hk, nullptr);
        bool stable = std::abs(c2v - c1v) <= 0.5 * std::max(std::abs(c1v), std::abs(c2v));
        if (stable) {
          out.K = k;
          out.tau = c1v > 0 ? 1 : -1;
        }
      }
    }
    if (out.K == 0) {
      out.tentative = true;
      out.kind = SingKind::internal_infinity;
      out.order = 0;
      return out;
    }
  }

  if (out.tau == -1 || (out.tau == 1 && out.K % 2 == 1)) {
    out.kind = SingKind::edge;
    out.order = out.K - 1;
  } else {
    out.kind = SingKind::internal;
    out.order = out.K / 2;
  }
  return out;
}

SymmetricClass symmetric_classify(const AtomMeasure& nu, double threshold, int k_cap) {
  const int n = nu.size();
  // symmetry about the imaginary axis: atoms closed under z -> -conj(z)
  for (int i = 0; i < n; ++i) {
    Complex mirror = -std::conj(nu.atoms[i]);
    bool matched = false;
    for (int j = 0; j < n && !matched; ++j)
      matched = std::abs(nu.atoms[j] - mirror) <= 1e-12 * (1.0 + std::abs(mirror)) &&
                std::abs(nu.masses[j] - nu.masses[i]) <= 1e-12;
    if (!matched)
      throw std::invalid_argument("symmetric_classify: measure is not symmetric about the imaginary axis");
  }

  double f0 = 0.0;
  for (int i = 0; i < n; ++i) {
    double d2 = std::norm(nu.atoms[i]);
    if (d2 == 0.0) throw std::invalid_argument("symmetric_classify: atom at 0");
    f0 += nu.masses[i] / d2;
  }
  if (std::abs(f0 - threshold) > 1e-8 * std::max(1.0, std::abs(threshold)))
    throw std::invalid_argument("symmetric_classify: f(0) does not match the threshold");

  SymmetricClass res;
  const Complex I(0.0, 1.0);
  for (int k = 1; k <= k_cap; ++k) {
    // d^k/dy^k (1/|z|^2) = (-i)^k k! sum_l (-1)^l / (conj(z)^{l+1} z^{k-l+1}),
    // evaluated at z = -a_i and summed with the masses
    double deriv = 0.0, mag = 0.0;
    double kfac = std::tgamma(k + 1.0);
    for (int i = 0; i < n; ++i) {
      Complex z = -nu.atoms[i];
      Complex zc = std::conj(z);
      Complex acc(0.0, 0.0);
      Complex zpow = 1.0 / std::pow(z, k + 1);
      Complex cpow = 1.0 / zc;
      double term_mag = 0.0;
      for (int l = 0; l <= k; ++l) {
        Complex term = cpow * zpow;
        acc += (l % 2) ? -term : term;
        term_mag += std::abs(term);
        cpow /= zc;
        zpow *= z;
      }
      deriv += (std::pow(-I, k) * kfac * acc).real() * nu.masses[i];
      mag += kfac * term_mag * nu.masses[i];  // cancellation scale of the l-sum
    }
    res.derivatives.push_back(deriv);
    if (std::abs(deriv) > 1e-10 * std::max(mag, 1e-300)) {
      if (k == 1)
        throw std::invalid_argument("symmetric_classify: 0 is not a critical point of f");
      res.K = k;
      res.tau = deriv > 0 ? 1 : -1;
      res.resolved = true;
      return res;
    }
  }
  return res;  // unresolved: candidate for an infinite-order singularity
}

}  // namespace brownmap
