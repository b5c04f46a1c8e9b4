#include "brownmap/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace brownmap {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool all_finite(const Vec& v) { return v.allFinite(); }
bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace

AtomicProfile::AtomicProfile(Vec weights_, CVec deformation_, Mat kernel_)
    : weights(std::move(weights_)),
      deformation(std::move(deformation_)),
      kernel(std::move(kernel_)) {
  const int k = static_cast<int>(weights.size());
  require(k >= 1, "profile needs at least one atom");
  require(deformation.size() == k, "deformation length mismatch");
  require(kernel.rows() == k && kernel.cols() == k, "kernel shape mismatch");
  require(all_finite(weights) && deformation.allFinite() && all_finite(kernel),
          "profile entries must be finite");
  require(weights.minCoeff() > 0.0, "weights must be positive");
  require(std::abs(weights.sum() - 1.0) <= 1e-12, "weights must sum to one");
  require(kernel.minCoeff() >= 0.0, "kernel must be nonnegative");

  S_weighted = kernel * weights.asDiagonal();
  S_star_weighted = kernel.transpose() * weights.asDiagonal();
}

bool AtomicProfile::scalar_kernel(double* t_out) const {
  if (scalar_cache_ < 0) {
    const double t = kernel(0, 0);
    const double spread = (kernel.array() - t).abs().maxCoeff();
    scalar_cache_ = (spread <= 1e-14 * std::max(1.0, std::abs(t)) && t > 0.0) ? 1 : 0;
    scalar_t_ = t;
  }
  if (scalar_cache_ == 1 && t_out) *t_out = scalar_t_;
  return scalar_cache_ == 1;
}

Vec AtomicProfile::abs2_a_minus(Complex zeta) const {
  return (deformation.array() - zeta).abs2().matrix();
}

AtomMeasure::AtomMeasure(CVec atoms_, Vec masses_)
    : atoms(std::move(atoms_)), masses(std::move(masses_)) {
  const int k = static_cast<int>(masses.size());
  require(k >= 1 && atoms.size() == k, "measure atom/mass length mismatch");
  require(masses.allFinite() && atoms.allFinite(), "measure entries must be finite");
  require(masses.minCoeff() > 0.0, "masses must be positive");
  require(std::abs(masses.sum() - 1.0) <= 1e-12, "masses must sum to one");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      require(atoms[i] != atoms[j], "atoms must be pairwise distinct");
}

namespace {

template <typename V>
V apply_weighted(const Mat& sw, const V& u, const char* what) {
  if (u.size() != sw.cols())
    throw std::invalid_argument(std::string(what) + ": length mismatch");
  return sw * u;
}

}  // namespace

Vec apply_S(const AtomicProfile& p, const Vec& u) { return apply_weighted(p.S_weighted, u, "apply_S"); }
CVec apply_S(const AtomicProfile& p, const CVec& u) { return apply_weighted(p.S_weighted, u, "apply_S"); }
Vec apply_S_star(const AtomicProfile& p, const Vec& u) { return apply_weighted(p.S_star_weighted, u, "apply_S_star"); }
CVec apply_S_star(const AtomicProfile& p, const CVec& u) { return apply_weighted(p.S_star_weighted, u, "apply_S_star"); }

double weighted_avg(const AtomicProfile& p, const Vec& u) {
  if (u.size() != p.weights.size()) throw std::invalid_argument("weighted_avg: length mismatch");
  return p.weights.dot(u);
}

Complex weighted_avg(const AtomicProfile& p, const CVec& u) {
  if (u.size() != p.weights.size()) throw std::invalid_argument("weighted_avg: length mismatch");
  return (p.weights.cast<Complex>().array() * u.array()).sum();
}

ValidationReport validate(const AtomicProfile& p) {
  const int k = p.size();
  ValidationReport rep;
  rep.weights_normalized = std::abs(p.weights.sum() - 1.0) <= 1e-12;

  std::vector<std::vector<int>> adj(k);
  rep.diag_positive = true;
  for (int i = 0; i < k; ++i) {
    if (p.kernel(i, i) <= 0.0) rep.diag_positive = false;
    for (int j = 0; j < k; ++j)
      if (p.kernel(i, j) > 0.0) adj[i].push_back(j);
  }

  if (!rep.diag_positive) {
    rep.message = "zero pattern lacks positive diagonal";
    return rep;
  }

  // With z_ii = 1, Z^L is positive iff every node reaches every other within
  // L steps, so the witness power is the graph diameter.
  int diameter = 0;
  std::vector<int> dist(k);
  for (int s = 0; s < k; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::vector<int> queue{s};
    dist[s] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (int w : adj[u])
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
    }
    for (int i = 0; i < k; ++i) {
      if (dist[i] < 0) {
        rep.message = "zero pattern is not strongly connected";
        return rep;
      }
      diameter = std::max(diameter, dist[i]);
    }
  }
  rep.primitive = true;
  rep.witness_power = std::max(1, diameter);
  rep.message = "ok";
  return rep;
}

namespace {

double checked_number(const nlohmann::json& v, const char* what, bool nonneg) {
  if (!v.is_number()) throw std::invalid_argument(std::string(what) + ": expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
  if (nonneg && x < 0.0) throw std::invalid_argument(std::string(what) + ": negative entry");
  return x;
}

}  // namespace

AtomicProfile AtomicProfile::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("weights") || !j.contains("deformation"))
    throw std::invalid_argument("model JSON needs 'weights' and 'deformation'");

  const auto& jw = j["weights"];
  const auto& jd = j["deformation"];
  if (!jw.is_array() || !jd.is_array() || jw.size() != jd.size() || jw.empty())
    throw std::invalid_argument("model JSON: weights/deformation must be equal-length arrays");
  const int k = static_cast<int>(jw.size());

  Vec w(k);
  CVec a(k);
  for (int i = 0; i < k; ++i) {
    w[i] = checked_number(jw[i], "weights", true);
    const auto& e = jd[i];
    if (e.is_array() && e.size() == 2)
      a[i] = Complex(checked_number(e[0], "deformation", false), checked_number(e[1], "deformation", false));
    else if (e.is_number())
      a[i] = Complex(checked_number(e, "deformation", false), 0.0);
    else
      throw std::invalid_argument("model JSON: deformation entries must be [re,im] pairs");
  }

  Mat s;
  const bool has_kernel = j.contains("kernel");
  const bool has_scalar = j.contains("scalar_variance");
  if (has_kernel == has_scalar)
    throw std::invalid_argument("model JSON needs exactly one of 'kernel' or 'scalar_variance'");
  if (has_scalar) {
    double t = checked_number(j["scalar_variance"], "scalar_variance", true);
    s = Mat::Constant(k, k, t);
  } else {
    const auto& jk = j["kernel"];
    if (!jk.is_array() || static_cast<int>(jk.size()) != k)
      throw std::invalid_argument("model JSON: kernel must be a K x K array");
    s.resize(k, k);
    for (int i = 0; i < k; ++i) {
      const auto& row = jk[i];
      if (!row.is_array() || static_cast<int>(row.size()) != k)
        throw std::invalid_argument("model JSON: kernel must be a K x K array");
      for (int c = 0; c < k; ++c) s(i, c) = checked_number(row[c], "kernel", true);
    }
  }
  return AtomicProfile(std::move(w), std::move(a), std::move(s));
}

AtomicProfile AtomicProfile::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string AtomicProfile::to_json_text() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["weights"] = std::vector<double>(weights.data(), weights.data() + size());
  auto& jd = j["deformation"] = nlohmann::json::array();
  for (int i = 0; i < size(); ++i) jd.push_back({deformation[i].real(), deformation[i].imag()});
  double t = 0.0;
  if (scalar_kernel(&t)) {
    j["scalar_variance"] = t;
  } else {
    auto& jk = j["kernel"] = nlohmann::json::array();
    for (int i = 0; i < size(); ++i) {
      std::vector<double> row(size());
      for (int c = 0; c < size(); ++c) row[c] = kernel(i, c);
      jk.push_back(row);
    }
  }
  return j.dump(2);
}

}  // namespace brownmap
