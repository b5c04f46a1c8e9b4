#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brownmap/density.hpp"
#include "brownmap/geometry.hpp"

namespace brownmap {

struct SpectrumSample {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<Complex> eigenvalues;
  std::string profile_ref;
};

/// A + X/sqrt(n): A diagonal with atom values repeated by largest-remainder
/// apportionment of the weights, X independent real N(0,1). Deterministic per
/// seed. Throws when the apportionment leaves an atom without rows.
CMat sample_matrix(const AtomicProfile& p, int n, std::uint64_t seed);

/// All eigenvalues of a dense matrix. Ten sampled eigenvalues are verified by
/// inverse iteration to backward error 1e-8 * ||matrix||_F.
std::vector<Complex> eigenvalues(const CMat& matrix);

SpectrumSample sample_spectrum(const AtomicProfile& p, int n, std::uint64_t seed,
                               const std::string& profile_ref = "");

struct CompareOptions {
  double tol_out = 0.05;   // beta threshold counting an eigenvalue as inside
  int cells = 12;          // coarse partition per axis
  double bulk_margin = 0.02;  // cells need beta < -margin throughout
  double min_expected = 1.0;  // skip cells with tiny expected counts
};

struct CompareReport {
  double inside_fraction = 0.0;
  int bulk_cells = 0;
  int cells_within_3sigma = 0;
  double pass_fraction = 0.0;  // bulk cells within the 3-sigma Poisson band
};

/// Eigenvalue cloud versus the computed density: inside fraction by the sign
/// of beta and binned counts against n * integral of sigma per coarse cell.
CompareReport compare(const AtomicProfile& p, const SpectrumSample& sample,
                      const DensityGrid& grid, const CompareOptions& opts = {});

}  // namespace brownmap
