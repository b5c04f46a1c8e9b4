#pragma once

#include <random>

#include "brownmap/constructions.hpp"
#include "brownmap/model.hpp"

namespace brownmap::test {

// constant profile: K equal atoms at `a`, kernel identically t
inline AtomicProfile constant_profile(int k, Complex a = {0.0, 0.0}, double t = 1.0) {
  Vec w = Vec::Constant(k, 1.0 / k);
  // one-atom weights must still sum to one exactly
  w[k - 1] = 1.0 - w.head(k - 1).sum();
  CVec d = CVec::Constant(k, a);
  return AtomicProfile(w, d, Mat::Constant(k, k, t));
}

inline AtomicProfile random_profile(std::mt19937_64& rng, int k, bool scalar) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec w(k);
  for (int i = 0; i < k; ++i) w[i] = 0.2 + u(rng);
  w /= w.sum();
  w[k - 1] = 1.0 - w.head(k - 1).sum();
  CVec a(k);
  for (int i = 0; i < k; ++i) a[i] = Complex(2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0);
  Mat s;
  if (scalar) {
    s = Mat::Constant(k, k, 0.5 + u(rng));
  } else {
    s.resize(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) s(i, j) = 0.3 + 1.7 * u(rng);
  }
  return AtomicProfile(w, a, s);
}

}  // namespace brownmap::test
