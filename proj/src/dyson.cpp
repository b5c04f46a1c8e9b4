#include "brownmap/dyson.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace brownmap {

namespace {

struct Work {
  const AtomicProfile& p;
  Vec D;  // |a - zeta|^2
  double eta;

  Vec x, y, den;  // x = eta + S*v1, y = eta + S v2, den = D + x.*y

  explicit Work(const AtomicProfile& p_, Complex zeta, double eta_)
      : p(p_), D(p_.abs2_a_minus(zeta)), eta(eta_) {}

  void refresh(const Vec& v1, const Vec& v2) {
    x = (p.S_star_weighted * v1).array() + eta;
    y = (p.S_weighted * v2).array() + eta;
    den = D.array() + x.array() * y.array();
  }

  double residual(const Vec& v1, const Vec& v2) {
    refresh(v1, v2);
    double r1 = (v1.array() - x.array() / den.array()).abs().maxCoeff();
    double r2 = (v2.array() - y.array() / den.array()).abs().maxCoeff();
    return std::max(r1, r2);
  }
};

// One damped sweep: v1 update, refresh, v2 update.
void sweep(Work& w, Vec& v1, Vec& v2, double omega) {
  w.refresh(v1, v2);
  v1 = (1.0 - omega) * v1.array() + omega * (w.x.array() / w.den.array());
  w.refresh(v1, v2);
  v2 = (1.0 - omega) * v2.array() + omega * (w.y.array() / w.den.array());
}

// Newton step on F1 = v1.*(D + x.*y) - x, F2 = v2.*(D + x.*y) - y.
// Returns true if the backtracked step reduced the fixed-point residual.
bool newton_step(Work& w, Vec& v1, Vec& v2, double& res) {
  const int k = static_cast<int>(v1.size());
  w.refresh(v1, v2);

  Vec f1 = v1.array() * w.den.array() - w.x.array();
  Vec f2 = v2.array() * w.den.array() - w.y.array();

  Mat J(2 * k, 2 * k);
  const Mat& A = w.p.S_weighted;        // d(S v2)/dv2
  const Mat& As = w.p.S_star_weighted;  // d(S* v1)/dv1
  J.topLeftCorner(k, k) = (v1.array() * w.y.array() - 1.0).matrix().asDiagonal() * As;
  J.topLeftCorner(k, k) += w.den.asDiagonal();
  J.topRightCorner(k, k) = (v1.array() * w.x.array()).matrix().asDiagonal() * A;
  J.bottomLeftCorner(k, k) = (v2.array() * w.y.array()).matrix().asDiagonal() * As;
  J.bottomRightCorner(k, k) = (v2.array() * w.x.array() - 1.0).matrix().asDiagonal() * A;
  J.bottomRightCorner(k, k) += w.den.asDiagonal();

  Vec rhs(2 * k);
  rhs << -f1, -f2;
  Vec delta = J.partialPivLu().solve(rhs);
  if (!delta.allFinite()) return false;

  double alpha = 1.0;
  for (int attempt = 0; attempt < 10; ++attempt, alpha *= 0.5) {
    Vec c1 = v1 + alpha * delta.head(k);
    Vec c2 = v2 + alpha * delta.tail(k);
    if (c1.minCoeff() <= 0.0 || c2.minCoeff() <= 0.0) continue;
    double cand = w.residual(c1, c2);
    if (cand < res) {
      v1 = std::move(c1);
      v2 = std::move(c2);
      res = cand;
      return true;
    }
  }
  return false;
}

}  // namespace

DysonState solve_dyson(const AtomicProfile& p, Complex zeta, double eta,
                       const SolverOptions& opts, const DysonState* warm) {
  if (!(eta > 0.0)) throw std::invalid_argument("solve_dyson: eta must be positive");
  const int k = p.size();

  Vec v1, v2;
  if (warm && warm->v1.size() == k && warm->v1.minCoeff() > 0.0 && warm->v2.minCoeff() > 0.0) {
    v1 = warm->v1;
    v2 = warm->v2;
  } else {
    v1 = Vec::Constant(k, 1.0 / (1.0 + eta));
    v2 = v1;
  }

  Work w(p, zeta, eta);
  double omega = 1.0;
  double res = w.residual(v1, v2);
  double res_checkpoint = res;
  int streak = 0;
  bool newton_ok = true;
  int iter = 0;

  for (; iter < opts.max_iter && res > opts.tol; ++iter) {
    sweep(w, v1, v2, omega);
    double next = w.residual(v1, v2);
    if (next > res) {
      omega = std::max(omega * 0.5, 1.0 / 64.0);
      streak = 0;
    } else if (++streak >= 10) {
      omega = std::min(1.0, omega * 2.0);
      streak = 0;
    }
    res = next;

    // Slow geometric decay near the edge: hand over to Newton.
    if (newton_ok && (iter % 25) == 24) {
      if (res > opts.tol && res > 0.5 * res_checkpoint) {
        int guard = 0;
        while (res > opts.tol && guard++ < 50) {
          if (!newton_step(w, v1, v2, res)) break;
        }
        if (res > opts.tol && guard <= 1) newton_ok = false;  // made no progress
      }
      res_checkpoint = res;
    }
  }

  if (res > opts.tol)
    throw DysonNonConvergence("solve_dyson: no convergence, residual " + std::to_string(res),
                              res, iter);

  DysonState s;
  s.zeta = zeta;
  s.eta = eta;
  s.v1 = std::move(v1);
  s.v2 = std::move(v2);
  s.residual = res;
  s.iterations = iter;
  return s;
}

DysonState eta_continuation(const AtomicProfile& p, Complex zeta, const SolverOptions& opts) {
  double eta = 1.0;
  DysonState state = solve_dyson(p, zeta, eta, opts);
  while (eta > opts.eta_floor) {
    eta *= opts.eta_factor;
    if (eta < opts.eta_floor) eta = opts.eta_floor;
    state = solve_dyson(p, zeta, eta, opts, &state);
  }
  state.inside = weighted_avg(p, state.v1) > opts.bulk_threshold;
  if (!state.inside) {
    state.v1.setZero();
    state.v2.setZero();
    state.eta = 0.0;
  }
  return state;
}

double solve_kappa(const AtomicProfile& p, Complex zeta) {
  double t = 0.0;
  if (!p.scalar_kernel(&t))
    throw std::invalid_argument("solve_kappa: kernel is not scalar");
  const Vec D = p.abs2_a_minus(zeta);

  auto g = [&](double u) {  // t <1/(u + D)>, decreasing in u
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) acc += p.weights[i] / (u + D[i]);
    return t * acc;
  };

  const double at_zero = (D.minCoeff() <= 0.0) ? std::numeric_limits<double>::infinity() : g(0.0);
  if (at_zero <= 1.0) return 0.0;

  double lo = 0.0, hi = t;  // g(t) <= t * <1>/t = 1
  while (g(hi) > 1.0) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(hi, 1e-300); ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 1.0 ? lo : hi) = mid;
  }
  return std::sqrt(0.5 * (lo + hi));
}

CVec compute_y(const AtomicProfile& p, const DysonState& s) {
  const int k = p.size();
  CVec y(k);
  if (s.eta == 0.0 && s.v1.size() == k && s.v1.isZero(0.0)) {
    for (int i = 0; i < k; ++i) {
      Complex d = p.deformation[i] - s.zeta;
      y[i] = (d == Complex(0.0, 0.0)) ? Complex(std::numeric_limits<double>::infinity(), 0.0)
                                      : 1.0 / d;
    }
    return y;
  }
  if (s.v1.size() != k) throw std::invalid_argument("compute_y: state/profile mismatch");
  Vec x = (p.S_star_weighted * s.v1).array() + s.eta;
  for (int i = 0; i < k; ++i)
    y[i] = s.v1[i] * std::conj(p.deformation[i] - s.zeta) / x[i];
  return y;
}

double mde_check(const AtomicProfile& p, const DysonState& s) {
  if (!(s.eta > 0.0)) throw std::invalid_argument("mde_check: eta must be positive");
  const int k = p.size();
  CVec y = compute_y(p, s);
  Vec sv2 = (p.S_weighted * s.v2).array() + s.eta;
  Vec ssv1 = (p.S_star_weighted * s.v1).array() + s.eta;

  const Complex I(0.0, 1.0);
  double defect = 0.0;
  for (int i = 0; i < k; ++i) {
    double block = s.v1[i] * s.v2[i] + std::norm(y[i]);
    if (block <= 0.0) throw std::runtime_error("mde_check: singular 2x2 block");
    Complex m11 = I * s.v2[i] / block;
    Complex m12 = -std::conj(y[i]) / block;
    Complex m21 = -y[i] / block;
    Complex m22 = I * s.v1[i] / block;
    Complex za = s.zeta - p.deformation[i];
    defect = std::max(defect, std::abs(m11 - I * sv2[i]));
    defect = std::max(defect, std::abs(m12 - za));
    defect = std::max(defect, std::abs(m21 - std::conj(za)));
    defect = std::max(defect, std::abs(m22 - I * ssv1[i]));
  }
  return defect;
}

}  // namespace brownmap
