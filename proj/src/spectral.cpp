#include "brownmap/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace brownmap {

namespace {

// Matrix of B_zeta acting on coordinate vectors: diag(D) - s_ij mu_j.
Mat b_matrix(const AtomicProfile& p, const Vec& D) {
  Mat B = -p.S_weighted;
  B.diagonal() += D;
  return B;
}

// beta from the scalar-kernel root equation t <1/(D - beta)> = 1 on
// (-inf, min D). The root always exists since spec(D_a) stays inside
// the support.
double scalar_beta_root(const AtomicProfile& p, double t, const Vec& D) {
  const double dmin = D.minCoeff();
  auto g = [&](double beta) {
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) acc += p.weights[i] / (D[i] - beta);
    return t * acc;
  };
  double lo = dmin - t - 1.0;
  while (g(lo) > 1.0) lo = dmin - 2.0 * (dmin - lo);
  double hi = dmin;
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * (1.0 + std::abs(hi) + std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 1.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct PFResult {
  double value = 0.0;
  Vec vector;
  bool converged = false;
};

// Perron-Frobenius eigenpair of a nonnegative matrix by power iteration.
PFResult power_iteration(const Mat& C, int max_iter = 5000, double tol = 1e-9) {
  PFResult r;
  r.vector = Vec::Constant(C.rows(), 1.0 / static_cast<double>(C.rows()));
  double lam = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec next = C * r.vector;
    double nrm = next.norm();
    if (!(nrm > 0.0) || !next.allFinite()) return r;
    next /= nrm;
    double delta = (next - r.vector).norm();
    lam = next.dot(C * next);
    r.vector = std::move(next);
    if (delta < tol) {
      r.value = lam;
      r.converged = true;
      return r;
    }
  }
  r.value = lam;
  return r;
}

// Inverse-iteration polish of an eigenpair of B near shift sigma.
bool polish(const Mat& B, double& sigma, Vec& v, double scale, double target) {
  for (int it = 0; it < 8; ++it) {
    double res = (B * v - sigma * v).cwiseAbs().maxCoeff();
    if (res < target) return true;
    Mat shifted = B;
    shifted.diagonal().array() -= sigma;
    Vec next = shifted.partialPivLu().solve(v);
    if (!next.allFinite()) {
      // exactly singular shift: nudge off the eigenvalue
      shifted.diagonal().array() -= 1e-13 * scale;
      next = shifted.partialPivLu().solve(v);
      if (!next.allFinite()) return false;
    }
    next /= next.norm();
    if (next[0] < 0) next = -next;
    sigma = next.dot(B * next);
    v = next;
  }
  return (B * v - sigma * v).cwiseAbs().maxCoeff() < std::max(target, 1e-10 * scale);
}

// Dense fallback: eigenvalue of B with minimal real part (the positive-
// eigenvector branch for primitive patterns).
bool dense_min_real(const Mat& B, double scale, double& beta, Vec& v) {
  Eigen::EigenSolver<Mat> es(B);
  if (es.info() != Eigen::Success) return false;
  int best = -1;
  double best_re = std::numeric_limits<double>::infinity();
  for (int i = 0; i < B.rows(); ++i) {
    double re = es.eigenvalues()[i].real();
    if (re < best_re) {
      best_re = re;
      best = i;
    }
  }
  if (best < 0) return false;
  if (std::abs(es.eigenvalues()[best].imag()) > 1e-8 * scale) return false;
  beta = best_re;
  CVec cv = es.eigenvectors().col(best);
  v = cv.real();
  if (v.cwiseAbs().maxCoeff() <= 0.0) return false;
  if (v.sum() < 0) v = -v;
  if (v.minCoeff() <= 0.0) {
    // eigenvector of the PF branch must be positive; tolerate round-off
    if (v.minCoeff() < -1e-10 * v.cwiseAbs().maxCoeff()) return false;
    v = v.cwiseMax(1e-300);
  }
  return true;
}

// Positive eigenvector of the minimal-real-part eigenvalue of B, computed by
// power iteration on c - B (nonnegative, primitive) plus inverse-iteration
// polish. Throws on a genuinely degenerate spectrum.
void pf_branch(const Mat& B, const Vec& D, double scale, double& beta, Vec& v) {
  const double c = D.maxCoeff();
  Mat C = -B;
  C.diagonal().array() += c;
  PFResult pr = power_iteration(C);
  double sigma = pr.converged ? (c - pr.value) : B.diagonal().minCoeff();
  Vec vec = pr.vector;
  if (!polish(B, sigma, vec, scale, 1e-12 * scale)) {
    if (!dense_min_real(B, scale, sigma, vec))
      throw std::runtime_error("beta_eval: degenerate eigenvalue, no positive branch found");
    polish(B, sigma, vec, scale, 1e-12 * scale);
  }
  beta = sigma;
  v = vec;
}

double pf_lambda(const AtomicProfile& p, const Vec& D) {
  if (D.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
  Mat G = p.S_weighted * D.cwiseInverse().asDiagonal();
  PFResult pr = power_iteration(G, 20000, 1e-12);
  return pr.value;
}

void normalize_avg(const AtomicProfile& p, Vec& v) {
  double avg = weighted_avg(p, v);
  if (avg <= 0.0) throw std::runtime_error("beta_eval: eigenvector with nonpositive average");
  v /= avg;
}

}  // namespace

BetaEval beta_eval(const AtomicProfile& p, Complex zeta) {
  BetaEval ev;
  ev.zeta = zeta;
  const Vec D = p.abs2_a_minus(zeta);
  const double dmin = D.minCoeff();
  ev.at_atom = dmin == 0.0;
  const double scale = std::max(1.0, D.maxCoeff()) + p.max_kernel_row_sum();

  double t = 0.0;
  if (p.scalar_kernel(&t)) {
    ev.beta = scalar_beta_root(p, t, D);
    ev.b = (D.array() - ev.beta).inverse().matrix();
    normalize_avg(p, ev.b);
    ev.ell = ev.b;  // S = S* for constant kernels
    ev.has_vectors = true;
    ev.lambda_pf = ev.at_atom ? std::numeric_limits<double>::infinity()
                              : t * (p.weights.array() / D.array()).sum();
  } else {
    const double far = p.max_abs_deformation() + 2.0 * std::sqrt(p.kernel.maxCoeff());
    if (std::abs(zeta) > far) {
      // support bound: beta is positive out here; report a cheap lower bound
      ev.beta = dmin - p.max_kernel_row_sum();
      ev.lambda_pf = pf_lambda(p, D);
      ev.far_field = true;
      return ev;
    }
    const Mat B = b_matrix(p, D);
    pf_branch(B, D, scale, ev.beta, ev.b);
    normalize_avg(p, ev.b);

    Mat Bstar = -p.S_star_weighted;
    Bstar.diagonal() += D;
    double beta_left = ev.beta;
    pf_branch(Bstar, D, scale, beta_left, ev.ell);
    normalize_avg(p, ev.ell);
    ev.beta = 0.5 * (ev.beta + beta_left);
    ev.has_vectors = true;
    ev.lambda_pf = pf_lambda(p, D);

    double r_right = (B * ev.b - ev.beta * ev.b).cwiseAbs().maxCoeff() / ev.b.cwiseAbs().maxCoeff();
    double r_left =
        (Bstar * ev.ell - ev.beta * ev.ell).cwiseAbs().maxCoeff() / ev.ell.cwiseAbs().maxCoeff();
    ev.eig_residual = std::max(r_right, r_left);
  }

  if (ev.has_vectors) {
    if (p.scalar_kernel(nullptr)) {
      Vec Bb = D.array() * ev.b.array();
      Bb -= p.S_weighted * ev.b;
      ev.eig_residual = (Bb - ev.beta * ev.b).cwiseAbs().maxCoeff() / ev.b.cwiseAbs().maxCoeff();
    }
    ev.grad = grad_beta(p, ev);
  }
  return ev;
}

Complex grad_beta(const AtomicProfile& p, const BetaEval& eval) {
  if (!eval.has_vectors)
    throw std::invalid_argument("grad_beta: evaluation has no eigenvectors (use FD fallback)");
  Complex num(0.0, 0.0);
  double den = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    double lb = p.weights[i] * eval.ell[i] * eval.b[i];
    num += lb * std::conj(p.deformation[i] - eval.zeta);
    den += lb;
  }
  return -num / den;
}

double edge_sigma(const AtomicProfile& p, Complex zeta0) {
  BetaEval ev = beta_eval(p, zeta0);
  if (std::abs(ev.beta) >= 1e-6)
    throw std::invalid_argument("edge_sigma: zeta0 is not on the edge (|beta| too large)");
  Complex num(0.0, 0.0);
  double den = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    double d2 = std::norm(p.deformation[i] - zeta0);
    num += p.weights[i] * (p.deformation[i] - zeta0) * ev.ell[i] * ev.b[i];
    den += p.weights[i] * d2 * d2 * ev.ell[i] * ev.ell[i] * ev.b[i] * ev.b[i];
  }
  return std::norm(num) / (M_PI * den);
}

namespace {

double fd_laplacian_beta(const AtomicProfile& p, Complex zeta0, double h) {
  auto b = [&](Complex z) { return beta_eval(p, z).beta; };
  double c = b(zeta0);
  double lap = (b(zeta0 + h) + b(zeta0 - h) + b(zeta0 + Complex(0, h)) + b(zeta0 - Complex(0, h)) -
                4.0 * c) /
               (h * h);
  return lap;
}

}  // namespace

double delta_sigma_at_singular(const AtomicProfile& p, Complex zeta0) {
  BetaEval ev = beta_eval(p, zeta0);
  if (std::abs(ev.beta) >= 1e-6 || std::abs(ev.grad) >= 1e-6)
    throw std::invalid_argument("delta_sigma_at_singular: not a singular point");

  const int k = p.size();
  const Vec D = p.abs2_a_minus(zeta0);
  const Mat B = b_matrix(p, D);
  double ellb = 0.0;
  for (int i = 0; i < k; ++i) ellb += p.weights[i] * ev.ell[i] * ev.b[i];

  // B is singular along b; shift by the spectral projection to invert on the
  // complement of the null direction, then remove any residual b component.
  Mat Bt = B;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) Bt(i, j) += ev.b[i] * p.weights[j] * ev.ell[j] / ellb;
  Eigen::PartialPivLU<Mat> lu(Bt);

  CVec u(k);
  for (int i = 0; i < k; ++i) u[i] = ev.b[i] * (p.deformation[i] - zeta0);
  Vec xr = lu.solve(Vec(u.real()));
  Vec xi = lu.solve(Vec(u.imag()));
  CVec x = xr.cast<Complex>() + Complex(0.0, 1.0) * xi.cast<Complex>();
  Complex coeff = weighted_avg(p, CVec((ev.ell.cast<Complex>().array() * x.array()))) / ellb;
  x -= coeff * ev.b.cast<Complex>();

  // residual check in place of a condition estimate
  CVec resid = B.cast<Complex>() * x - u;
  Complex proj = weighted_avg(p, CVec(ev.ell.cast<Complex>().array() * u.array())) / ellb;
  resid += proj * (B.cast<Complex>() * ev.b.cast<Complex>());
  double rel = resid.cwiseAbs().maxCoeff() / std::max(1e-300, u.cwiseAbs().maxCoeff());
  if (rel > 1e-6)
    throw std::runtime_error("delta_sigma_at_singular: ill-conditioned linear solve, residual " +
                             std::to_string(rel));

  Complex r_aa(0.0, 0.0);
  double den = 0.0;
  for (int i = 0; i < k; ++i) {
    r_aa += p.weights[i] * ev.ell[i] * (p.deformation[i] - zeta0) * x[i];
    double d2 = std::norm(p.deformation[i] - zeta0);
    den += p.weights[i] * d2 * d2 * ev.ell[i] * ev.ell[i] * ev.b[i] * ev.b[i];
  }

  double lap_beta = fd_laplacian_beta(p, zeta0, 1e-4 * (1.0 + std::abs(zeta0)));
  double value = (32.0 * std::norm(r_aa) + ellb * ellb * lap_beta * lap_beta) / (2.0 * M_PI * den);
  if (!(value > 0.0))
    throw std::runtime_error("delta_sigma_at_singular: nonpositive result");
  return value;
}

double solve_edge_cubic(double c3, double c1, double beta, double eta) {
  if (!(c3 > 0.0) || !(eta > 0.0))
    throw std::invalid_argument("solve_edge_cubic: need c3 > 0 and eta > 0");
  // x^3 + 3A x = 2B with A = beta c1 / (3 c3), B = eta / (2 c3)
  const double A = beta * c1 / (3.0 * c3);
  const double B = eta / (2.0 * c3);
  double x;
  if (A >= 0.0) {
    x = (A == 0.0) ? std::cbrt(2.0 * B)
                   : 2.0 * std::sqrt(A) * std::sinh(std::asinh(B / std::pow(A, 1.5)) / 3.0);
  } else {
    const double m = std::pow(-A, 1.5);
    if (B > m) {
      x = 2.0 * std::sqrt(-A) * std::cosh(std::acosh(B / m) / 3.0);
    } else {
      x = 2.0 * std::sqrt(-A) * std::cos(std::acos(B / m) / 3.0);
    }
  }
  for (int it = 0; it < 4; ++it) {  // Newton polish
    double f = x * x * x + 3.0 * A * x - 2.0 * B;
    double fp = 3.0 * x * x + 3.0 * A;
    if (fp <= 0.0) break;
    x -= f / fp;
  }
  return x;
}

EdgeCubicCoeffs edge_cubic_coeffs(const AtomicProfile& p, const BetaEval& eval) {
  if (!eval.has_vectors) throw std::invalid_argument("edge_cubic_coeffs: no eigenvectors");
  Vec Sb = p.S_weighted * eval.b;
  Vec Sl = p.S_star_weighted * eval.ell;
  EdgeCubicCoeffs c;
  for (int i = 0; i < p.size(); ++i) {
    double lb = p.weights[i] * eval.ell[i] * eval.b[i];
    c.c1 += lb;
    c.c3 += lb * Sl[i] * Sb[i];
  }
  return c;
}

}  // namespace brownmap
