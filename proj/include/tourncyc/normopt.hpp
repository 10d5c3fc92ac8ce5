#pragma once

// Normalised q-norm minimisation on the probability simplex:
//
//   minimise sum w_i^q  subject to  w >= 0, sum w_i = 1, sum w_i^p = C,
//
// for reals q > p > 1.  The optimum has m equal entries z, one remainder
// 1 - m z in [0, z), and zeros; its value is f_{p,q}(C).  The oracle below
// searches the same problem without assuming that structure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tourncyc/extremal.hpp"
#include "tourncyc/rng.hpp"
#include "tourncyc/tolerances.hpp"

namespace tourncyc {

struct SimplexSolution {
  double p = 0, q = 0, C = 0;
  long m = 0;
  double z = 0;
  double r = 0;  // 1 - m z
  double value = 0;

  /// (z, ..., z, r, 0, ...) padded with zeros to at least `k` entries.
  std::vector<double> materialize(std::size_t k = 0) const {
    std::vector<double> w(static_cast<std::size_t>(m), z);
    if (r > 0.0) w.push_back(r);
    if (w.size() < k) w.resize(k, 0.0);
    return w;
  }
};

inline SimplexSolution minimize_qnorm(double p, double q, double C) {
  check_pq(p, q);
  if (!(C > 0.0 && C <= 1.0))
    throw std::invalid_argument("infeasible C = " + std::to_string(C) + ": need 0 < C <= 1");
  const auto s = solve_z(p, C);
  SimplexSolution sol;
  sol.p = p;
  sol.q = q;
  sol.C = C;
  sol.m = s.m;
  sol.z = s.z;
  sol.r = std::max(0.0, 1.0 - static_cast<double>(s.m) * s.z);
  sol.value = power_profile(q, s.z, s.m);
  return sol;
}

// ── Capped p-power maximiser ────────────────────────────────────────

struct CappedMaximizer {
  std::size_t n = 0;
  int p = 0;
  double t = 0;
  std::vector<double> weights;  // floor(1/t) entries at t, one remainder, zeros
  double value = 0;
};

/// max sum w_i^p over w in [0,t]^n with sum w_i = 1: fill entries to the cap.
inline CappedMaximizer maximize_p_capped(std::size_t n, int p, double t) {
  if (p < 2) throw std::invalid_argument("maximize_p_capped needs an integer p >= 2");
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("cap t must lie in (0,1)");
  if (static_cast<double>(n) * t < 1.0 - 1e-12)
    throw std::invalid_argument("infeasible: n t = " + std::to_string(static_cast<double>(n) * t) + " < 1");

  auto m = static_cast<std::size_t>(std::floor(1.0 / t));
  while (m > 0 && static_cast<double>(m) * t > 1.0 + 1e-15) --m;
  m = std::min(m, n);
  double rem = 1.0 - static_cast<double>(m) * t;
  if (rem < 1e-15) rem = 0.0;

  CappedMaximizer out{n, p, t, std::vector<double>(n, 0.0), 0.0};
  for (std::size_t i = 0; i < m; ++i) out.weights[i] = t;
  if (rem > 0.0 && m < n) out.weights[m] = rem;
  for (double w : out.weights) out.value += std::pow(w, p);
  return out;
}

// ── Structure-free oracle ───────────────────────────────────────────

struct OracleOptions {
  int restarts = 24;       // uniformly random simplex starts
  int resolution = 12;     // grid starts: partitions of `resolution` into <= k parts
  bool structured_seeds = true;  // also start from (1,..,1,1/2,0,..)/norm shapes
  std::uint64_t seed = 1;
  double min_step = 1e-13;
};

struct OracleResult {
  double value = 0;
  std::vector<double> vector;  // sorted descending
  int starts = 0;
  double sum_residual = 0;    // |sum w - 1|
  double power_residual = 0;  // |sum w^p - C|
};

namespace detail {

inline double power_sum(const std::vector<double>& w, double p) {
  double s = 0.0;
  for (double x : w) s += pow0(x, p);
  return s;
}

// Move a simplex point along a segment until sum w^p = C.  Segments end at
// a vertex (power sum 1) or the barycentre (power sum k^(1-p)), so the
// target is always bracketed.
inline bool project_to_level(std::vector<double>& w, double p, double C) {
  const std::size_t k = w.size();
  const double P0 = power_sum(w, p);
  std::vector<double> end(k);
  if (P0 < C) {
    const auto top = static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
    std::fill(end.begin(), end.end(), 0.0);
    end[top] = 1.0;
  } else {
    std::fill(end.begin(), end.end(), 1.0 / static_cast<double>(k));
  }
  auto at = [&](double lam) {
    std::vector<double> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = (1.0 - lam) * w[i] + lam * end[i];
    return v;
  };
  const bool increasing = P0 < C;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double P = power_sum(at(mid), p);
    if ((P < C) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  w = at(0.5 * (lo + hi));
  return std::abs(power_sum(w, p) - C) < 1e-10;
}

// Solve x^p + (S - x)^p = P for the larger root x in [S/2, S].
inline bool solve_pair(double S, double P, double p, double guess, double& x) {
  if (S < 0.0) return false;
  if (S == 0.0) {
    if (P > 1e-300) return false;
    x = 0.0;
    return true;
  }
  const double pmin = 2.0 * std::pow(0.5 * S, p);
  const double pmax = std::pow(S, p);
  if (P < pmin || P > pmax) return false;
  double lo = 0.5 * S, hi = S;
  x = std::clamp(guess, lo, hi);
  for (int it = 0; it < 80; ++it) {
    const double y = S - x;
    const double h = std::pow(x, p) + pow0(y, p) - P;
    if (h < 0.0)
      lo = x;
    else
      hi = x;
    const double dh = p * (std::pow(x, p - 1.0) - pow0(y, p - 1.0));
    double nx = (dh > 0.0) ? x - h / dh : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 1e-17 * S || hi - lo <= 1e-16 * S) {
      x = nx;
      break;
    }
    x = nx;
  }
  return true;
}

// Pattern search over three-coordinate moves: coordinate i shifts by +-h,
// coordinates (j, l) are re-solved so that both the sum and the p-power
// sum are unchanged.  The step halves whenever no move improves.
inline double local_descent(std::vector<double>& w, double p, double q, double min_step) {
  const std::size_t k = w.size();
  double obj = power_sum(w, q);
  if (k < 3) return obj;  // feasible set is finite up to permutation
  int sweeps = 0;
  for (double h = 0.25; h >= min_step;) {
    bool improved = false;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        for (std::size_t l = j + 1; l < k; ++l) {
          if (l == i) continue;
          for (double d : {h, -h}) {
            const double wi = w[i] + d;
            if (wi < 0.0 || wi > 1.0) continue;
            const double S = w[j] + w[l] - d;
            const double P = pow0(w[j], p) + pow0(w[l], p) - (pow0(wi, p) - pow0(w[i], p));
            double x;
            if (!solve_pair(S, P, p, std::max(w[j], w[l]), x)) continue;
            const double y = std::max(0.0, S - x);
            const double before = pow0(w[i], q) + pow0(w[j], q) + pow0(w[l], q);
            const double after = pow0(wi, q) + pow0(x, q) + pow0(y, q);
            if (after < before - 1e-14 * before) {
              // keep the larger value where the larger entry was
              const bool j_big = w[j] >= w[l];
              w[i] = wi;
              w[j] = j_big ? x : y;
              w[l] = j_big ? y : x;
              obj += after - before;
              improved = true;
            }
          }
        }
      }
    // Rounding-level gains can otherwise cycle at a fixed step.
    if (!improved || ++sweeps >= 200) {
      h *= 0.5;
      sweeps = 0;
    }
  }
  return power_sum(w, q);
}

inline void partitions(int total, std::size_t parts, int max_part, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
  if (total == 0) {
    out.push_back(cur);
    return;
  }
  if (cur.size() == parts) return;
  for (int v = std::min(total, max_part); v >= 1; --v) {
    cur.push_back(v);
    partitions(total - v, parts, v, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Independent, structure-free minimiser in dimension k: many feasible
/// starts (random simplex points, grid partitions, optional structured
/// shapes) each refined by constraint-preserving local descent.  Returns the
/// best point found.
inline OracleResult oracle_min_qnorm(double p, double q, double C, std::size_t k,
                                     const OracleOptions& opt = {}) {
  check_pq(p, q);
  if (k == 0) throw std::invalid_argument("oracle dimension k must be >= 1");
  const double cmin = std::pow(static_cast<double>(k), 1.0 - p);
  if (!(C <= 1.0 + 1e-12) || C < cmin - 1e-12)
    throw std::invalid_argument("infeasible: need k^(1-p) = " + std::to_string(cmin) +
                                " <= C <= 1, got C = " + std::to_string(C));

  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](std::vector<double> w) {
    ++best.starts;
    const double v = detail::local_descent(w, p, q, opt.min_step);
    if (v < best.value) {
      best.value = v;
      best.vector = w;
    }
  };

  // Degenerate feasible sets: a single point up to permutation.
  if (C >= 1.0 - 1e-15 || k == 1) {
    if (k == 1 && std::abs(C - 1.0) > 1e-12)
      throw std::invalid_argument("infeasible: k = 1 forces C = 1");
    std::vector<double> w(k, 0.0);
    w[0] = 1.0;
    best.value = 1.0;
    best.vector = w;
    best.starts = 1;
    return best;
  }
  if (C <= cmin + 1e-15) {
    best.vector.assign(k, 1.0 / static_cast<double>(k));
    best.value = detail::power_sum(best.vector, q);
    best.starts = 1;
    return best;
  }

  auto try_start = [&](std::vector<double> w) {
    if (detail::project_to_level(w, p, C)) consider(std::move(w));
  };

  if (opt.structured_seeds)
    for (std::size_t m = 1; m < k; ++m) {
      std::vector<double> w(k, 0.0);
      for (std::size_t i = 0; i < m; ++i) w[i] = 1.0;
      w[m] = 0.5;
      const double s = static_cast<double>(m) + 0.5;
      for (auto& x : w) x /= s;
      try_start(std::move(w));
    }

  if (opt.resolution > 0) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    detail::partitions(opt.resolution, k, opt.resolution, cur, parts);
    for (const auto& part : parts) {
      std::vector<double> w(k, 0.0);
      for (std::size_t i = 0; i < part.size(); ++i)
        w[i] = static_cast<double>(part[i]) / static_cast<double>(opt.resolution);
      try_start(std::move(w));
    }
  }

  auto rng = make_rng(opt.seed);
  for (int r = 0; r < opt.restarts; ++r) {
    std::vector<double> w(k);
    double s = 0.0;
    for (auto& x : w) {
      x = -std::log(1.0 - uniform01(rng));  // exponential => uniform on the simplex
      s += x;
    }
    for (auto& x : w) x /= s;
    try_start(std::move(w));
  }

  if (best.vector.empty()) throw std::runtime_error("oracle found no feasible start");
  std::sort(best.vector.begin(), best.vector.end(), std::greater<>());
  best.sum_residual = std::abs(std::accumulate(best.vector.begin(), best.vector.end(), 0.0) - 1.0);
  best.power_residual = std::abs(detail::power_sum(best.vector, p) - C);
  return best;
}

struct ValueCluster {
  double value = 0;  // mean of members
  std::size_t count = 0;
};

/// Positive value clusters of `w`, largest first.  Entries within `tol` of
/// the cluster's first member join it; entries <= tol count as zero.
inline std::vector<ValueCluster> positive_clusters(std::vector<double> w, double tol) {
  std::sort(w.begin(), w.end(), std::greater<>());
  std::vector<ValueCluster> out;
  double anchor = 0.0, sum = 0.0;
  for (double x : w) {
    if (x <= tol) break;
    if (out.empty() || anchor - x > tol) {
      if (!out.empty()) out.back().value = sum / static_cast<double>(out.back().count);
      out.push_back({x, 0});
      anchor = x;
      sum = 0.0;
    }
    ++out.back().count;
    sum += x;
  }
  if (!out.empty()) out.back().value = sum / static_cast<double>(out.back().count);
  return out;
}

// ── Generalised Vandermonde rank ────────────────────────────────────

/// Whether the matrix a_ij = c_j^(s_i) is numerically of full rank
/// (smallest singular value > 1e-10 times the largest, after row and
/// column equilibration, which leaves rank unchanged).
inline bool vandermonde_rank_check(const std::vector<double>& c, const std::vector<double>& s) {
  if (c.size() != s.size() || c.empty()) throw std::invalid_argument("c and s must be non-empty and equally long");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0.0)) throw std::invalid_argument("c entries must be positive");
    if (i > 0 && !(c[i] > c[i - 1])) throw std::invalid_argument("c must be strictly ascending");
    if (i > 0 && !(s[i] > s[i - 1])) throw std::invalid_argument("s must be strictly ascending");
  }
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = std::pow(c[static_cast<std::size_t>(j)], s[static_cast<std::size_t>(i)]);
  for (Eigen::Index i = 0; i < n; ++i) a.row(i) /= a.row(i).cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) /= a.col(j).cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  return sv(n - 1) > 1e-10 * sv(0);
}

// ── Power-sum lower bound ───────────────────────────────────────────

/// For x >= 0 with sum x = 1/2: sum x^ell >= g_ell(sum x^3).  Returns
/// whether the bound holds up to 1e-10.
inline bool two_level_bound_check(const std::vector<double>& x, int ell) {
  double s1 = 0.0, s3 = 0.0, sl = 0.0;
  for (double v : x) {
    if (v < 0.0) throw std::invalid_argument("entries must be non-negative");
    s1 += v;
    s3 += v * v * v;
    sl += std::pow(v, ell);
  }
  if (std::abs(s1 - 0.5) > 1e-12) throw std::invalid_argument("entries must sum to 1/2, got " + std::to_string(s1));
  return sl >= g_ell(ell, std::min(s3, 0.125)) - 1e-10;
}

}  // namespace tourncyc
