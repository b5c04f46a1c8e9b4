#include <cstdio>
#include "brownmap/constructions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

namespace brownmap {

double f_eval(const AtomMeasure& nu, Complex zeta) {
  double acc = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    double d2 = std::norm(zeta - nu.atoms[i]);
    if (d2 == 0.0) return std::numeric_limits<double>::infinity();
    acc += nu.masses[i] / d2;
  }
  return acc;
}

std::vector<double> f_axis_derivatives(const AtomMeasure& nu, int order_max) {
  const Complex I(0.0, 1.0);
  std::vector<double> out(order_max);
  for (int i = 0; i < nu.size(); ++i)
    if (nu.atoms[i] == Complex(0.0, 0.0))
      throw std::invalid_argument("f_axis_derivatives: atom at 0");
  for (int k = 1; k <= order_max; ++k) {
    double kfac = std::tgamma(k + 1.0);
    double acc = 0.0;
    for (int i = 0; i < nu.size(); ++i) {
      Complex z = -nu.atoms[i];
      Complex zc = std::conj(z);
      Complex sum(0.0, 0.0);
      Complex zpow = 1.0 / std::pow(z, k + 1);
      Complex cpow = 1.0 / zc;
      for (int l = 0; l <= k; ++l) {
        sum += (l % 2 ? -cpow * zpow : cpow * zpow);
        cpow /= zc;
        zpow *= z;
      }
      acc += (std::pow(-I, k) * kfac * sum).real() * nu.masses[i];
    }
    out[k - 1] = acc;
  }
  return out;
}

double f_laplacian0(const AtomMeasure& nu) {
  double acc = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    double d2 = std::norm(nu.atoms[i]);
    if (d2 == 0.0) throw std::invalid_argument("f_laplacian0: atom at 0");
    acc += 4.0 * nu.masses[i] / (d2 * d2);
  }
  return acc;
}

namespace {

using Eigen::VectorXcd;

Complex moment(const CVec& z, const Vec& c, int k) {
  Complex acc(0.0, 0.0);
  for (int i = 0; i < z.size(); ++i) acc += c[i] * std::pow(z[i], k);
  return acc;
}

bool first_quadrant(const CVec& z) {
  for (int i = 0; i < z.size(); ++i)
    if (!(z[i].real() > 0.0 && z[i].imag() > 0.0)) return false;
  return true;
}

bool pairwise_distinct(const CVec& z, double tol) {
  for (int i = 0; i < z.size(); ++i)
    for (int j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) < tol) return false;
  return true;
}

// mid-angle of the widest arc in (0, pi/2) on which pred holds
double mid_arc(const std::function<bool(double)>& pred) {
  const int n = 4000;
  double best_lo = -1, best_hi = -1, cur_lo = -1;
  for (int i = 1; i <= n; ++i) {
    double phi = i * (M_PI / 2) / (n + 1);
    if (pred(phi)) {
      if (cur_lo < 0) cur_lo = phi;
      if (i == n && cur_lo >= 0 && phi - cur_lo > best_hi - best_lo) {
        best_lo = cur_lo;
        best_hi = phi;
      }
    } else if (cur_lo >= 0) {
      double prev = (i - 1) * (M_PI / 2) / (n + 1);
      if (prev - cur_lo > best_hi - best_lo) {
        best_lo = cur_lo;
        best_hi = prev;
      }
      cur_lo = -1;
    }
  }
  if (best_lo < 0) throw std::runtime_error("construction: empty admissible arc");
  return 0.5 * (best_lo + best_hi);
}

// Newton solve of F_k(w) = target_k, k = 1..m, with F_k(w) = sum c_i w_i^{2k+1}
// and fixed coefficients. Square complex system, Jacobian is Vandermonde-like.
bool newton_even_system(const Vec& c, CVec& w, const std::vector<Complex>& target) {
  const int m = static_cast<int>(w.size());
  for (int it = 0; it < 50; ++it) {
    VectorXcd F(m);
    double resid = 0.0;
    for (int k = 1; k <= m; ++k) {
      F[k - 1] = moment(w, c, 2 * k + 1) - target[k - 1];
      resid = std::max(resid, std::abs(F[k - 1]));
    }
    if (resid < 1e-13 * (1.0 + std::abs(target.back()))) return true;
    Eigen::MatrixXcd J(m, m);
    for (int k = 1; k <= m; ++k)
      for (int i = 0; i < m; ++i) J(k - 1, i) = double(2 * k + 1) * c[i] * std::pow(w[i], 2 * k);
    VectorXcd delta = J.partialPivLu().solve(-F);
    if (!delta.allFinite()) return false;
    double alpha = 1.0;
    bool ok = false;
    for (int bt = 0; bt < 8 && !ok; ++bt, alpha *= 0.5) {
      CVec cand = w + alpha * delta;
      if (first_quadrant(cand)) {
        w = cand;
        ok = true;
      }
    }
    if (!ok) return false;
  }
  return false;
}

}  // namespace

MomentSolution construct_even(int n, int tau) {
  if (n < 1 || (tau != 1 && tau != -1))
    throw std::invalid_argument("construct_even: need n >= 1 and tau = +-1");
  // the assembled f has d^{2n}f/dy^{2n}(0) = (-1)^n (2n)! Re sum c z^{2n+1},
  // so the top moment sign target absorbs a factor (-1)^n
  const int tau_m = (n % 2 == 0) ? tau : -tau;

  CVec z(1);
  Vec c(1);
  {
    int s1 = (n == 1) ? tau_m : 1;
    double phi = mid_arc([&](double a) { return (std::cos(3 * a) > 0) == (s1 > 0); });
    z[0] = std::polar(1.0, phi);
    c[0] = 1.0 / std::abs(std::real(std::pow(z[0], 3)));
  }
  int top_sign = (n == 1) ? tau_m : 1;

  for (int m = 2; m <= n; ++m) {
    const int want_top = (m == n) ? tau_m : 1;
    const int need_omega_low = -top_sign;  // cancels the previous top moment
    double phi = mid_arc([&](double a) {
      return (std::cos((2 * m - 1) * a) > 0) == (need_omega_low > 0) &&
             (std::cos((2 * m + 1) * a) > 0) == (want_top > 0);
    });
    Complex omega = std::polar(1.0, phi);
    double omega_low = std::abs(std::real(std::pow(omega, 2 * m - 1)));

    bool placed = false;
    for (double r = 0.5; r > 1e-14 && !placed; r *= 0.7) {
      std::vector<Complex> target(m - 1);
      for (int k = 1; k <= m - 1; ++k) {
        Complex shift = (k == m - 1)
                            ? Complex(0.0, 0.0)
                            : std::pow(r, 2 * (m - 1 - k)) * std::pow(omega, 2 * k + 1) / omega_low;
        target[k - 1] = moment(z, c, 2 * k + 1) - shift;
      }
      CVec w = z;
      if (!newton_even_system(c, w, target)) continue;
      Complex znew = omega / r;
      double cnew = std::pow(r, 2 * m - 1) / omega_low;
      CVec z2(m);
      z2 << w, znew;
      if (!pairwise_distinct(z2, 1e-10)) continue;
      Vec c2(m);
      c2 << c, cnew;
      double top = std::real(moment(z2, c2, 2 * m + 1));
      if ((top > 0) != (want_top > 0)) continue;
      // renormalize the top moment to +-1 for the next step
      c2 /= std::abs(top);
      z = std::move(z2);
      c = std::move(c2);
      placed = true;
    }
    if (!placed) throw std::runtime_error("construct_even: induction step failed to place a node");
    top_sign = want_top;
  }

  MomentSolution sol;
  sol.atoms = z;
  sol.coeffs = c;
  sol.n = n;
  sol.even = true;
  sol.tau = tau;
  return sol;
}

namespace {

// Gauss-Newton least-norm solve of the odd-case constraints. Unknowns are the
// movable nodes (as real pairs) plus optionally (alpha, phi) of the large
// node z_big = e^{i phi}/r with coefficient alpha r^{2N}. Fixed nodes/coeffs
// are carried in full_z/full_c beyond the movable prefix.
struct OddSystem {
  int N;          // target order
  double r;       // scale of the large node (0 = no large node)
  int movable;    // leading nodes of full_z that may move
  CVec full_z;
  Vec full_c;
  bool tune_alpha_phi = false;
  double alpha = 0.0, phi = 0.0;
  int big_index = -1;  // position of the large node in full_z
  double soft_weight = 0.0;  // when > 0, also pull the order 2N+2, 2N+3 moments to 0

  void apply_big() {
    if (big_index >= 0) {
      full_z[big_index] = std::polar(1.0, phi) / r;
      full_c[big_index] = alpha * std::pow(r, 2 * N);
    }
  }

  int rows() const { return 2 * N + (soft_weight > 0.0 ? 2 : 0); }

  Eigen::VectorXd residual() {
    apply_big();
    Eigen::VectorXd R(rows());
    for (int k = 1; k <= N; ++k) {
      double sgn = (k % 2 == 1) ? 1.0 : -1.0;
      R[2 * (k - 1)] = sgn * moment(full_z, full_c, 2 * k).imag() - 2.0 * k;
      R[2 * (k - 1) + 1] = sgn * moment(full_z, full_c, 2 * k + 1).real() - (2.0 * k + 1.0);
    }
    if (soft_weight > 0.0) {
      R[2 * N] = soft_weight * moment(full_z, full_c, 2 * N + 2).imag();
      R[2 * N + 1] = soft_weight * moment(full_z, full_c, 2 * N + 3).real();
    }
    return R;
  }

  bool solve() {
    const int unknowns = 2 * movable + (tune_alpha_phi ? 2 : 0);
    double lambda = 1e-10;
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd R = residual();
      if (std::getenv("BM_DEBUG_GN")) std::fprintf(stderr, "  it=%d |R|=%.3e\n", it, R.norm());
      double hard = R.head(2 * N).cwiseAbs().maxCoeff();
      if (soft_weight > 0.0 ? (hard < 1e-11 && it > 0) : (hard < 1e-11)) return true;
      Eigen::MatrixXd J(rows(), unknowns);
      auto fill_row = [&](int row, int power, bool imag_part, double sgn) {
        for (int i = 0; i < movable; ++i) {
          Complex d = double(power) * full_c[i] * std::pow(full_z[i], power - 1);
          J(row, 2 * i) = sgn * (imag_part ? d.imag() : d.real());
          Complex di = Complex(0, 1) * d;
          J(row, 2 * i + 1) = sgn * (imag_part ? di.imag() : di.real());
        }
        if (tune_alpha_phi) {
          Complex zb = std::polar(1.0, phi) / r;
          Complex mom = std::pow(r, 2 * N) * std::pow(zb, power);
          Complex dphi = alpha * Complex(0, double(power)) * mom;
          J(row, unknowns - 2) = sgn * (imag_part ? mom.imag() : mom.real());
          J(row, unknowns - 1) = sgn * (imag_part ? dphi.imag() : dphi.real());
        }
      };
      for (int k = 1; k <= N; ++k) {
        double sgn = (k % 2 == 1) ? 1.0 : -1.0;
        fill_row(2 * (k - 1), 2 * k, true, sgn);
        fill_row(2 * (k - 1) + 1, 2 * k + 1, false, sgn);
      }
      if (soft_weight > 0.0) {
        fill_row(2 * N, 2 * N + 2, true, soft_weight);
        fill_row(2 * N + 1, 2 * N + 3, false, soft_weight);
      }
      // trust-region metric: nodes may move proportionally to their size
      Eigen::VectorXd metric(unknowns);
      for (int i = 0; i < movable; ++i)
        metric[2 * i] = metric[2 * i + 1] = std::max(1e-3, std::abs(full_z[i]));
      if (tune_alpha_phi) {
        metric[unknowns - 2] = std::max(1e-3, std::abs(alpha));
        metric[unknowns - 1] = 0.3;
      }
      Eigen::MatrixXd Js = J * metric.asDiagonal();

      // Levenberg-Marquardt on the underdetermined system:
      // delta = M Js^T (Js Js^T + lambda)^{-1} (-R)
      bool accepted = false;
      for (int tries = 0; tries < 25 && !accepted; ++tries) {
        Eigen::MatrixXd G = Js * Js.transpose();
        G.diagonal().array() += lambda * (1.0 + G.diagonal().maxCoeff());
        Eigen::VectorXd step = metric.asDiagonal() * (Js.transpose() * G.ldlt().solve(-R));
        if (!step.allFinite()) return false;

        OddSystem trial = *this;
        for (int i = 0; i < movable; ++i)
          trial.full_z[i] += Complex(step[2 * i], step[2 * i + 1]);
        bool feasible = true;
        if (tune_alpha_phi) {
          trial.alpha = alpha + step[unknowns - 2];
          trial.phi = phi + step[unknowns - 1];
          feasible = trial.alpha > 0.0 && trial.phi > 0.0 && trial.phi < M_PI / 2;
        }
        for (int i = 0; i < movable && feasible; ++i)
          feasible = trial.full_z[i].real() > 0.0 && trial.full_z[i].imag() > 0.0;
        if (feasible && trial.residual().norm() < R.norm()) {
          *this = trial;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
        } else {
          lambda *= 8.0;
        }
      }
      if (!accepted) return false;
    }
    return residual().cwiseAbs().maxCoeff() < 1e-9;
  }
};

bool odd_inequality(const CVec& z, const Vec& c, int N) {
  double lhs = ((N % 2 == 0) ? 1.0 : -1.0) * moment(z, c, 2 * N + 2).imag();
  return lhs < 2.0 * (N + 1);
}

}  // namespace

MomentSolution construct_odd(int n) {
  if (n < 1) throw std::invalid_argument("construct_odd: need n >= 1");

  // base level: z = (3/4) sqrt(2) e^{i pi/12}, c = 32/9 solves
  // c Im z^2 = 2, c Re z^3 = 3 with -c Im z^4 < 4
  CVec z(4);
  Vec c(4);
  z[0] = 0.75 * std::sqrt(2.0) * std::polar(1.0, M_PI / 12.0);
  c[0] = 32.0 / 9.0;
  z[1] = 0.8 * std::polar(1.0, M_PI / 6.0);
  z[2] = 1.0 * std::polar(1.0, M_PI / 4.0);
  z[3] = 1.2 * std::polar(1.0, M_PI / 3.0);

  bool seeded = false;
  for (double delta = 0.05; delta > 1e-10 && !seeded; delta *= 0.25) {
    OddSystem sys;
    sys.N = 1;
    sys.movable = 1;
    sys.full_z = z;
    sys.full_c = c;
    sys.full_c[1] = sys.full_c[2] = sys.full_c[3] = delta;
    sys.r = 0.0;
    if (sys.solve() && first_quadrant(sys.full_z) && pairwise_distinct(sys.full_z, 1e-10) &&
        odd_inequality(sys.full_z, sys.full_c, 1)) {
      z = sys.full_z;
      c = sys.full_c;
      seeded = true;
    }
  }
  if (!seeded) throw std::runtime_error("construct_odd: base case failed");

  for (int N = 2; N <= n; ++N) {
    const int m = static_cast<int>(z.size());
    const double phi_star = M_PI / 2 - M_PI / (2 * N + 1);
    const double sign_even = (N % 2 == 1) ? 1.0 : -1.0;   // (-1)^{N+1}
    const double im_gap = 2.0 * N - sign_even * moment(z, c, 2 * N).imag();
    const double re_f = sign_even * moment(z, c, 2 * N + 1).real();

    // for fixed r, alpha(phi) pins the order-2N identity; phi is then a root
    // of the order-(2N+1) identity
    auto alpha_of = [&](double phi) { return im_gap / (sign_even * std::sin(2 * N * phi)); };
    auto re_resid = [&](double phi, double r) {
      return re_f + sign_even * (alpha_of(phi) / r) * std::cos((2 * N + 1) * phi) -
             (2.0 * N + 1.0);
    };
    auto seed_phis = [&](double r) {
      std::vector<double> roots;
      const int grid = 2400;
      double prev_phi = 0.0, prev_val = 0.0;
      bool have_prev = false;
      for (int i = 1; i < grid; ++i) {
        double phi = i * (M_PI / 2) / grid;
        if (!(alpha_of(phi) > 0.0)) {
          have_prev = false;
          continue;
        }
        double val = re_resid(phi, r);
        if (have_prev && ((val > 0) != (prev_val > 0))) {
          double lo = prev_phi, hi = phi, flo = prev_val;
          for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = re_resid(mid, r);
            if ((fm > 0) == (flo > 0)) lo = mid, flo = fm;
            else hi = mid;
          }
          roots.push_back(0.5 * (lo + hi));
        }
        prev_phi = phi;
        prev_val = val;
        have_prev = true;
      }
      return roots;
    };

    bool placed = false;
    for (double r = 0.5; r > 1e-12 && !placed; r *= 0.7) {
      // the lower moments see the new node as alpha r^{2(N-k)} e^{2ik phi};
      // among the exact (alpha, phi) seeds, take the least perturbing one
      OddSystem best;
      double best_norm = std::numeric_limits<double>::infinity();
      for (double phi0 : seed_phis(r)) {
        OddSystem sys;
        sys.N = N;
        sys.r = r;
        sys.movable = m;
        sys.full_z.resize(m + 1);
        sys.full_z << z, Complex(0.0, 0.0);
        sys.full_c.resize(m + 1);
        sys.full_c << c, 0.0;
        sys.big_index = m;
        sys.tune_alpha_phi = true;
        sys.alpha = alpha_of(phi0);
        sys.phi = phi0;
        double norm = sys.residual().norm();
        if (norm < best_norm) {
          best_norm = norm;
          best = sys;
        }
      }
      if (!std::isfinite(best_norm)) continue;
      OddSystem sys = best;
      if (!sys.solve()) { std::fprintf(stderr, "N=%d r=%.3f solve-fail\n", N, r); continue; }
      {
        OddSystem polish = sys;
        polish.soft_weight = 0.2;
        if (polish.solve() && polish.residual().head(2 * N).cwiseAbs().maxCoeff() < 1e-10)
          sys = polish;
        sys.soft_weight = 0.0;
        if (!sys.solve()) continue;
      }
      sys.apply_big();
      if (!first_quadrant(sys.full_z) || !pairwise_distinct(sys.full_z, 1e-10)) { std::fprintf(stderr, "N=%d r=%.3f quadrant\n", N, r); continue; }
      if (!(sys.full_c.minCoeff() > 0.0)) { std::fprintf(stderr, "N=%d r=%.3f negcoef\n", N, r); continue; }
      if (!odd_inequality(sys.full_z, sys.full_c, N)) { std::fprintf(stderr, "N=%d r=%.3f ineq\n", N, r); continue; }

      // add one more small node to reach 2N + 2, re-solving the same system
      OddSystem ext;
      ext.N = N;
      ext.r = 0.0;
      ext.movable = m;
      ext.full_z.resize(m + 2);
      ext.full_c.resize(m + 2);
      double extra_c = 1e-3 * sys.full_c.head(m).minCoeff();
      Complex extra_z = 0.9 * std::polar(1.0, M_PI / 5 + 0.03 * N);
      int guard = 0;
      while (guard++ < 8) {
        bool clash = false;
        for (int i = 0; i <= m; ++i)
          if (std::abs(sys.full_z[i] - extra_z) < 1e-6) clash = true;
        if (!clash) break;
        extra_z *= std::polar(1.0, 0.05);
      }
      ext.full_z << sys.full_z, extra_z;
      ext.full_c << sys.full_c, extra_c;
      if (!ext.solve()) { std::fprintf(stderr, "N=%d r=%.3f ext-solve\n", N, r); continue; }
      if (!first_quadrant(ext.full_z) || !pairwise_distinct(ext.full_z, 1e-10)) { std::fprintf(stderr, "N=%d r=%.3f ext-quadrant\n", N, r); continue; }
      if (!odd_inequality(ext.full_z, ext.full_c, N)) { std::fprintf(stderr, "N=%d r=%.3f ext-ineq\n", N, r); continue; }

      z = ext.full_z;
      c = ext.full_c;
      placed = true;
    }
    if (!placed) throw std::runtime_error("construct_odd: induction step failed");
  }

  MomentSolution sol;
  sol.atoms = z;
  sol.coeffs = c;
  sol.n = n;
  sol.even = false;
  return sol;
}

std::vector<double> moment_residuals(const MomentSolution& sol) {
  std::vector<double> res;
  if (sol.even) {
    for (int k = 1; k <= sol.n - 1; ++k)
      res.push_back(std::abs(moment(sol.atoms, sol.coeffs, 2 * k + 1).real()));
  } else {
    for (int k = 1; k <= sol.n; ++k) {
      double sgn = (k % 2 == 1) ? 1.0 : -1.0;
      res.push_back(std::abs(sgn * moment(sol.atoms, sol.coeffs, 2 * k).imag() - 2.0 * k));
      res.push_back(std::abs(sgn * moment(sol.atoms, sol.coeffs, 2 * k + 1).real() - (2.0 * k + 1.0)));
    }
  }
  return res;
}

AtomMeasure assemble_nu(const MomentSolution& sol) {
  std::vector<Complex> atoms;
  std::vector<double> masses;
  for (int i = 0; i < sol.atoms.size(); ++i) {
    Complex a = sol.atoms[i];
    double w = sol.coeffs[i] * a.real() / std::norm(a);
    if (sol.even) {
      // f_a places quarter masses at -1/a, 1/conj(a), -1/conj(a), 1/a
      for (Complex q : {-1.0 / a, 1.0 / std::conj(a), -1.0 / std::conj(a), 1.0 / a}) {
        atoms.push_back(q);
        masses.push_back(0.25 * w);
      }
    } else {
      for (Complex q : {-1.0 / a, 1.0 / std::conj(a)}) {
        atoms.push_back(q);
        masses.push_back(0.5 * w);
      }
    }
  }
  if (!sol.even) {
    atoms.push_back(Complex(0.0, -1.0));
    masses.push_back(1.0);
  }
  double total = 0.0;
  for (double m : masses) total += m;
  CVec av(atoms.size());
  Vec mv(masses.size());
  for (size_t i = 0; i < atoms.size(); ++i) {
    av[static_cast<int>(i)] = atoms[i];
    mv[static_cast<int>(i)] = masses[i] / total;
  }
  return AtomMeasure(std::move(av), std::move(mv));
}

AtomicProfile profile_from_nu(const AtomMeasure& nu) {
  double f0 = f_eval(nu, Complex(0.0, 0.0));
  if (!std::isfinite(f0) || f0 <= 0.0)
    throw std::invalid_argument("profile_from_nu: f(0) must be finite and positive");
  const int k = nu.size();
  Mat kernel = Mat::Constant(k, k, 1.0 / f0);
  return AtomicProfile(nu.masses, nu.atoms, std::move(kernel));
}

namespace {

AtomMeasure measure(std::vector<Complex> atoms, std::vector<double> masses) {
  CVec a(atoms.size());
  Vec m(masses.size());
  for (size_t i = 0; i < atoms.size(); ++i) {
    a[static_cast<int>(i)] = atoms[i];
    m[static_cast<int>(i)] = masses[i];
  }
  return AtomMeasure(std::move(a), std::move(m));
}

AtomicProfile profile_with_t(const AtomMeasure& nu, double t) {
  const int k = nu.size();
  return AtomicProfile(nu.masses, nu.atoms, Mat::Constant(k, k, t));
}

}  // namespace

std::vector<std::string> example_names() {
  return {"circular", "x2_minus_y2", "x2_plus_y2", "x2_y3", "x2_y4", "x2_infinity"};
}

std::pair<AtomicProfile, ExampleSpec> make_example(const std::string& name, int curve_atoms) {
  const double s2 = std::sqrt(2.0);
  if (name == "circular" || name == "x2") {
    AtomMeasure nu = measure({0.0}, {1.0});
    ExampleSpec spec{name, nu, 1.0, Window{-2.0, 2.0, -2.0, 2.0}, {}};
    return {profile_with_t(nu, 1.0), std::move(spec)};
  }
  if (name == "x2_minus_y2") {
    AtomMeasure nu = measure({1.0, -1.0}, {0.5, 0.5});
    ExampleSpec spec{name, nu, 1.0, Window{-2.2, 2.2, -1.6, 1.6},
                     {{0.0, SingKind::edge, 1, 2, -1}}};
    return {profile_with_t(nu, 1.0), std::move(spec)};
  }
  if (name == "x2_plus_y2") {
    Complex a(1.0 / s2, 1.0 / s2);
    AtomMeasure nu = measure({a, std::conj(a), -std::conj(a), -a}, {0.25, 0.25, 0.25, 0.25});
    ExampleSpec spec{name, nu, 1.0, Window{-2.2, 2.2, -2.2, 2.2},
                     {{0.0, SingKind::internal, 1, 2, 1}}};
    return {profile_with_t(nu, 1.0), std::move(spec)};
  }
  if (name == "x2_y3") {
    const double s7 = std::sqrt(7.0);
    const double delta = (-17.0 + 7.0 * s7) / 8.0;
    const double t = (2.0 / 3.0) * (20.0 - 7.0 * s7);
    const double w = 1.0 / (2.0 + delta);
    AtomMeasure nu = measure({1.0, -1.0, Complex(0.0, 1.0)}, {w, w, delta * w});
    Complex y0(0.0, (s7 - 2.0) / 3.0);
    ExampleSpec spec{name, nu, t, Window{-2.2, 2.2, -1.8, 2.0},
                     {{y0, SingKind::edge, 2, 3, 0}}};
    return {profile_with_t(nu, t), std::move(spec)};
  }
  if (name == "x2_y4") {
    const double s3 = std::sqrt(3.0);
    AtomMeasure nu = measure({Complex(s3, 1.0), Complex(s3, -1.0), Complex(-s3, 1.0),
                              Complex(-s3, -1.0)},
                             {0.25, 0.25, 0.25, 0.25});
    ExampleSpec spec{name, nu, 4.0, Window{-3.4, 3.4, -2.6, 2.6},
                     {{0.0, SingKind::edge, 3, 4, -1}}};
    return {profile_with_t(nu, 4.0), std::move(spec)};
  }
  if (name == "x2_infinity") {
    if (curve_atoms < 8) throw std::invalid_argument("make_example: curve needs >= 8 atoms");
    std::vector<Complex> atoms{0.0};
    std::vector<double> masses{0.5};
    for (int k = 0; k < curve_atoms; ++k) {
      atoms.push_back(s2 * std::polar(1.0, 2.0 * M_PI * k / curve_atoms));
      masses.push_back(0.5 / curve_atoms);
    }
    AtomMeasure nu = measure(std::move(atoms), std::move(masses));
    ExampleSpec spec{name, nu, 1.0, Window{-2.0, 2.0, -2.0, 2.0}, {}};
    return {profile_with_t(nu, 1.0), std::move(spec)};
  }
  throw std::invalid_argument("make_example: unknown example '" + name + "'");
}

}  // namespace brownmap
