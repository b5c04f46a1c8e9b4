#include "brownmap/rmt.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <lapacke.h>

#include "brownmap/spectral.hpp"

namespace brownmap {

namespace {

// deterministic N(0,1) stream: Box-Muller over mt19937_64 uniforms
struct GaussianStream {
  std::mt19937_64 rng;
  bool have_spare = false;
  double spare = 0.0;

  explicit GaussianStream(std::uint64_t seed) : rng(seed) {}

  double uniform() {  // (0, 1]
    return 1.0 - (rng() >> 11) * 0x1.0p-53;
  }

  double next() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare = r * std::sin(a);
    have_spare = true;
    return r * std::cos(a);
  }
};

std::vector<int> apportion(const Vec& weights, int n) {
  const int k = static_cast<int>(weights.size());
  std::vector<int> counts(k);
  std::vector<std::pair<double, int>> frac(k);
  int assigned = 0;
  for (int i = 0; i < k; ++i) {
    double exact = weights[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    frac[i] = {exact - counts[i], i};
    assigned += counts[i];
  }
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (int r = 0; r < n - assigned; ++r) counts[frac[r % k].second] += 1;
  for (int i = 0; i < k; ++i)
    if (counts[i] == 0)
      throw std::invalid_argument("sample_matrix: apportionment leaves atom " +
                                  std::to_string(i) + " with zero rows (n too small)");
  return counts;
}

}  // namespace

CMat sample_matrix(const AtomicProfile& p, int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_matrix: n must be at least 2");
  std::vector<int> counts = apportion(p.weights, n);

  CMat m(n, n);
  GaussianStream g(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = g.next() * scale;
  int row = 0;
  for (int a = 0; a < p.size(); ++a)
    for (int r = 0; r < counts[a]; ++r) m(row, row) += p.deformation[a], ++row;
  return m;
}

namespace {

std::vector<Complex> eig_complex(CMat a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Complex> w(n);
  int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n,
                           reinterpret_cast<lapack_complex_double*>(a.data()), n,
                           reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
                           nullptr, 1);
  if (info != 0)
    throw std::runtime_error("eigenvalues: zgeev failed to converge, info=" + std::to_string(info));
  return w;
}

std::vector<Complex> eig_real(Mat a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> wr(n), wi(n);
  int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(),
                           nullptr, 1, nullptr, 1);
  if (info != 0)
    throw std::runtime_error("eigenvalues: dgeev failed to converge, info=" + std::to_string(info));
  std::vector<Complex> w(n);
  for (int i = 0; i < n; ++i) w[i] = Complex(wr[i], wi[i]);
  return w;
}

void verify_eigenpairs(const CMat& m, const std::vector<Complex>& w) {
  const int n = static_cast<int>(m.rows());
  const double norm = m.norm();  // Frobenius
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  const int checks = std::min<int>(10, n);
  for (int c = 0; c < checks; ++c) {
    Complex lambda = w[rng() % n];
    CMat shifted = m;
    shifted.diagonal().array() -= lambda;
    CVec x(n);
    for (int i = 0; i < n; ++i) x[i] = Complex((rng() >> 11) * 0x1.0p-53 - 0.5, 0.0);
    Eigen::PartialPivLU<CMat> lu(shifted);
    for (int it = 0; it < 2; ++it) {
      x = lu.solve(x);
      double nx = x.norm();
      if (!(nx > 0.0) || !x.allFinite()) break;  // landed on an exact null vector
      x /= nx;
    }
    if (!x.allFinite()) continue;
    double resid = (m * x - lambda * x).norm();
    if (resid > 1e-8 * norm)
      throw std::runtime_error("eigenvalues: eigenpair verification failed, residual " +
                               std::to_string(resid / norm));
  }
}

}  // namespace

std::vector<Complex> eigenvalues(const CMat& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
    throw std::invalid_argument("eigenvalues: matrix must be square and nonempty");
  if (!matrix.allFinite()) throw std::invalid_argument("eigenvalues: entries must be finite");

  std::vector<Complex> w = matrix.imag().isZero(0.0) ? eig_real(matrix.real()) : eig_complex(matrix);
  verify_eigenpairs(matrix, w);
  return w;
}

SpectrumSample sample_spectrum(const AtomicProfile& p, int n, std::uint64_t seed,
                               const std::string& profile_ref) {
  SpectrumSample s;
  s.n = n;
  s.seed = seed;
  s.profile_ref = profile_ref;
  s.eigenvalues = eigenvalues(sample_matrix(p, n, seed));
  return s;
}

CompareReport compare(const AtomicProfile& p, const SpectrumSample& sample,
                      const DensityGrid& grid, const CompareOptions& opts) {
  CompareReport rep;
  if (sample.eigenvalues.empty()) return rep;

  int inside = 0;
  for (Complex lambda : sample.eigenvalues)
    if (beta_eval(p, lambda).beta < opts.tol_out) ++inside;
  rep.inside_fraction = static_cast<double>(inside) / sample.eigenvalues.size();

  const Window& w = grid.window;
  const int nc = std::max(2, opts.cells);
  const double cw = w.width() / nc, ch = w.height() / nc;
  const double cell_area = grid.dx() * grid.dy();

  for (int cy = 0; cy < nc; ++cy) {
    for (int cx = 0; cx < nc; ++cx) {
      double re0 = w.re_min + cx * cw, re1 = re0 + cw;
      double im0 = w.im_min + cy * ch, im1 = im0 + ch;

      double expected = 0.0, beta_max = -1e300;
      int covered = 0;
      for (int iy = 0; iy < grid.ny; ++iy) {
        double y = w.im_min + (iy + 0.5) * grid.dy();
        if (y < im0 || y >= im1) continue;
        for (int ix = 0; ix < grid.nx; ++ix) {
          double x = w.re_min + (ix + 0.5) * grid.dx();
          if (x < re0 || x >= re1) continue;
          expected += grid.at_sigma(ix, iy) * cell_area;
          beta_max = std::max(beta_max, grid.at_beta(ix, iy));
          ++covered;
        }
      }
      if (covered == 0 || beta_max > -opts.bulk_margin) continue;
      expected *= sample.n;
      if (expected < opts.min_expected) continue;

      int observed = 0;
      for (Complex lambda : sample.eigenvalues)
        if (lambda.real() >= re0 && lambda.real() < re1 && lambda.imag() >= im0 &&
            lambda.imag() < im1)
          ++observed;

      ++rep.bulk_cells;
      if (std::abs(observed - expected) <= 3.0 * std::sqrt(expected)) ++rep.cells_within_3sigma;
    }
  }
  rep.pass_fraction = rep.bulk_cells ? static_cast<double>(rep.cells_within_3sigma) / rep.bulk_cells
                                     : 1.0;
  return rep;
}

}  // namespace brownmap
