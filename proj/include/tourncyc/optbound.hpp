#pragma once

// Eigenvalue-surrogate minimisation behind the C_ell lower bound.
//
// Parameters: ell >= 5, sigma in [0,1/8], rho in [0,1/2], t real and s
// complex-pair slots.  Variables r_1..r_t, (a_1,b_1)..(a_s,b_s) with
//
//   rho + sum r_i + sum a_j                      = 1/2
//   rho^3 + sum r_i^3 + sum (a_j^3 - 3 a_j b_j^2) = sigma
//   0 <= r_i <= rho,  a_j >= 0,  a_j^2 + b_j^2 <= rho^2,  b_j^2 <= 1/8
//
// and objective rho^ell + sum r_i^ell + sum Re (a_j + b_j i)^ell.  For
// ell != 2 (mod 4) and sigma above star_threshold(ell) the minimum is at
// least g_ell(sigma).  Nothing here certifies a global minimum: the sampler
// and refinement exist to look for counterexamples.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tourncyc/extremal.hpp"
#include "tourncyc/rng.hpp"
#include "tourncyc/tolerances.hpp"

namespace tourncyc {

struct OptInstance {
  int ell = 5;
  double sigma = 0.125;
  double rho = 0.5;
  int s = 0;  // complex pairs
  int t = 1;  // real slots

  void validate() const {
    if (ell < 5) throw std::invalid_argument("OPT needs ell >= 5");
    if (!(sigma >= 0.0 && sigma <= 0.125)) throw std::invalid_argument("OPT needs sigma in [0,1/8]");
    if (!(rho >= 0.0 && rho <= 0.5)) throw std::invalid_argument("OPT needs rho in [0,1/2]");
    if (s < 0 || t < 0 || s + t < 1) throw std::invalid_argument("OPT needs s, t >= 0 with s + t >= 1");
  }
};

struct OptPoint {
  std::vector<double> r;
  std::vector<double> a;
  std::vector<double> b;
};

/// ell = 4k + mu with mu in {-1, 0, 1}; ell = 2 (mod 4) has no such form.
struct EllDecomposition {
  int k = 0;
  int mu = 0;
};

inline EllDecomposition decompose_ell(int ell) {
  switch (ell % 4) {
    case 0: return {ell / 4, 0};
    case 1: return {(ell - 1) / 4, 1};
    case 3: return {(ell + 1) / 4, -1};
    default: throw std::invalid_argument("ell = " + std::to_string(ell) + " is 2 mod 4");
  }
}

/// (1/2 - 1/(80k^2))^3 + (1/(80k^2))^3.
inline double star_threshold(int ell) {
  const double k = decompose_ell(ell).k;
  const double e = 1.0 / (80.0 * k * k);
  return std::pow(0.5 - e, 3) + std::pow(e, 3);
}

/// Re (a + b i)^ell by the binomial expansion over even powers of b.
inline double re_power_binomial(double a, double b, int ell) {
  double sum = 0.0, coeff = 1.0;  // coeff = C(ell, j)
  for (int j = 0; j <= ell; ++j) {
    if (j % 2 == 0) {
      const double sign = (j / 2) % 2 == 0 ? 1.0 : -1.0;
      sum += sign * coeff * std::pow(a, ell - j) * std::pow(b, j);
    }
    coeff = coeff * (ell - j) / (j + 1);
  }
  return sum;
}

/// Re (a + b i)^ell = |z|^ell cos(ell arg z).
inline double re_power_polar(double a, double b, int ell) {
  return std::pow(std::hypot(a, b), ell) * std::cos(ell * std::atan2(b, a));
}

inline double objective_unchecked(const OptInstance& in, const OptPoint& pt) {
  double v = std::pow(in.rho, in.ell);
  for (double r : pt.r) v += std::pow(r, in.ell);
  for (std::size_t j = 0; j < pt.a.size(); ++j) v += re_power_binomial(pt.a[j], pt.b[j], in.ell);
  return v;
}

/// Name of the first violated constraint, or nullopt if feasible.
inline std::optional<std::string> violated_constraint(const OptInstance& in, const OptPoint& pt,
                                                      double tol = 1e-9) {
  if (pt.r.size() != static_cast<std::size_t>(in.t)) return "expected " + std::to_string(in.t) + " real entries";
  if (pt.a.size() != static_cast<std::size_t>(in.s) || pt.b.size() != static_cast<std::size_t>(in.s))
    return "expected " + std::to_string(in.s) + " complex pairs";
  double s1 = in.rho, s3 = std::pow(in.rho, 3);
  for (std::size_t i = 0; i < pt.r.size(); ++i) {
    const double r = pt.r[i];
    if (r < -tol || r > in.rho + tol) return "0 <= r_" + std::to_string(i + 1) + " <= rho";
    s1 += r;
    s3 += r * r * r;
  }
  for (std::size_t j = 0; j < pt.a.size(); ++j) {
    const double a = pt.a[j], b = pt.b[j];
    if (a < -tol) return "a_" + std::to_string(j + 1) + " >= 0";
    if (a * a + b * b > in.rho * in.rho + tol) return "a_" + std::to_string(j + 1) + "^2 + b_" + std::to_string(j + 1) + "^2 <= rho^2";
    if (b * b > 0.125 + tol) return "b_" + std::to_string(j + 1) + "^2 <= 1/8";
    s1 += a;
    s3 += a * a * a - 3.0 * a * b * b;
  }
  if (std::abs(s1 - 0.5) > tol) return "rho + sum r + sum a = 1/2";
  if (std::abs(s3 - in.sigma) > tol) return "rho^3 + sum r^3 + sum (a^3 - 3ab^2) = sigma";
  return std::nullopt;
}

class InfeasiblePoint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double objective(const OptInstance& in, const OptPoint& pt, double tol = 1e-9) {
  in.validate();
  if (auto v = violated_constraint(in, pt, tol)) throw InfeasiblePoint("infeasible point violates " + *v);
  return objective_unchecked(in, pt);
}

// ── Sampling ────────────────────────────────────────────────────────

class FeasibleSetEmpty : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct SlotState {
  double cube = 0;      // sum r^3 + sum a^3
  double capacity = 0;  // 3 sum a_j min(1/8, rho^2 - a_j^2): largest 3 sum a b^2
};

inline SlotState slot_state(const std::vector<double>& x, int t, double rho) {
  SlotState st;
  for (std::size_t i = 0; i < x.size(); ++i) {
    st.cube += x[i] * x[i] * x[i];
    if (static_cast<int>(i) >= t) st.capacity += 3.0 * x[i] * std::max(0.0, std::min(0.125, rho * rho - x[i] * x[i]));
  }
  return st;
}

// One randomized attempt: split 1/2 - rho over the t + s slots under the
// cap rho, then slide along a segment (toward the capped maximiser or the
// even split) until the b's can absorb exactly the cubic excess with
// b_j^2 = theta * cap_j.
inline std::optional<OptPoint> sample_once(const OptInstance& in, Rng& rng) {
  const int N = in.s + in.t;
  const double R = 0.5 - in.rho;
  const double S3 = in.sigma - std::pow(in.rho, 3);
  const double theta = uniform01(rng);
  if (R > static_cast<double>(N) * in.rho + 1e-15) return std::nullopt;

  std::vector<double> u(static_cast<std::size_t>(N));
  double tot = 0.0;
  for (auto& x : u) {
    x = -std::log(1.0 - uniform01(rng));
    tot += x;
  }
  for (auto& x : u) x = R * x / tot;
  const double even = R / N;
  const double umax = *std::max_element(u.begin(), u.end());
  if (umax > in.rho) {
    const double mu = (umax - in.rho) / (umax - even);
    for (auto& x : u) x = (1.0 - mu) * x + mu * even;
  }

  auto phi = [&](const std::vector<double>& x) {
    const auto st = slot_state(x, in.t, in.rho);
    return (st.cube - S3) - theta * st.capacity;
  };

  std::vector<double> x = u;
  const double f0 = phi(u);
  if (std::abs(f0) > 1e-15) {
    std::vector<double> end(u.size(), even);
    if (f0 < 0.0) {
      // Capped maximiser, caps assigned in the order of u.
      std::vector<std::size_t> order(u.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto i, auto j) { return u[i] > u[j]; });
      double left = R;
      for (auto i : order) {
        end[i] = std::min(in.rho, std::max(0.0, left));
        left -= end[i];
      }
    }
    auto at = [&](double lam) {
      std::vector<double> v(u.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 - lam) * u[i] + lam * end[i];
      return v;
    };
    const double f1 = phi(end);
    // No sign change: keep u and let the rescale below decide.
    if ((f0 < 0.0) != (f1 < 0.0) || std::abs(f1) <= 1e-15) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((phi(at(mid)) < 0.0) == (f0 < 0.0))
          lo = mid;
        else
          hi = mid;
      }
      x = at(0.5 * (lo + hi));
    }
  }

  OptPoint pt;
  pt.r.assign(x.begin(), x.begin() + in.t);
  pt.a.assign(x.begin() + in.t, x.end());
  const auto st = slot_state(x, in.t, in.rho);
  // Rescale theta against the final point so the cubic equality is exact.
  const double need = st.cube - S3;
  const double th = st.capacity > 0.0 ? need / st.capacity : 0.0;
  if (th < -1e-12 || th > 1.0 + 1e-12) return std::nullopt;
  for (double a : pt.a) {
    const double cap = std::max(0.0, std::min(0.125, in.rho * in.rho - a * a));
    const double b = std::sqrt(std::clamp(th, 0.0, 1.0) * cap);
    pt.b.push_back((rng() & 1U) ? b : -b);
  }
  return pt;
}

}  // namespace detail

/// `count` feasible points for the instance.  Throws FeasibleSetEmpty when
/// the first 2000 attempts all fail, or when the attempt budget runs out.
inline std::vector<OptPoint> sample_feasible(const OptInstance& in, std::uint64_t seed, std::size_t count,
                                             const Tolerances& tol = default_tolerances()) {
  in.validate();
  std::vector<OptPoint> out;
  if (count == 0) return out;
  out.reserve(count);
  auto rng = make_rng(seed);
  const std::size_t budget = 2000 + 200 * count;
  for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
    if (attempt == 2000 && out.empty()) break;
    auto pt = detail::sample_once(in, rng);
    if (pt && !violated_constraint(in, *pt, tol.feasibility)) out.push_back(std::move(*pt));
  }
  if (out.size() < count)
    throw FeasibleSetEmpty("OPT(ell=" + std::to_string(in.ell) + ", sigma=" + std::to_string(in.sigma) +
                           ", rho=" + std::to_string(in.rho) + ", s=" + std::to_string(in.s) +
                           ", t=" + std::to_string(in.t) + "): feasible set appears empty (" +
                           std::to_string(out.size()) + "/" + std::to_string(count) + " points found)");
  return out;
}

// ── Local refinement ────────────────────────────────────────────────

namespace detail {

// Flattened variables: r (t), a (s), b (s).
inline std::vector<double> flatten(const OptPoint& p) {
  std::vector<double> v = p.r;
  v.insert(v.end(), p.a.begin(), p.a.end());
  v.insert(v.end(), p.b.begin(), p.b.end());
  return v;
}

inline OptPoint unflatten(const std::vector<double>& v, int t, int s) {
  OptPoint p;
  p.r.assign(v.begin(), v.begin() + t);
  p.a.assign(v.begin() + t, v.begin() + t + s);
  p.b.assign(v.begin() + t + s, v.end());
  return p;
}

inline void project_box(std::vector<double>& v, const OptInstance& in) {
  for (int i = 0; i < in.t; ++i) v[static_cast<std::size_t>(i)] = std::clamp(v[static_cast<std::size_t>(i)], 0.0, in.rho);
  const double bmax = std::sqrt(0.125);
  for (int j = 0; j < in.s; ++j) {
    double& a = v[static_cast<std::size_t>(in.t + j)];
    double& b = v[static_cast<std::size_t>(in.t + in.s + j)];
    a = std::max(0.0, a);
    b = std::clamp(b, -bmax, bmax);
    const double r = std::hypot(a, b);
    if (r > in.rho) {
      a *= in.rho / r;
      b *= in.rho / r;
    }
  }
}

// Equality residuals and their gradients.
inline void constraints(const std::vector<double>& v, const OptInstance& in, double h[2],
                        std::vector<double>& g1, std::vector<double>& g2) {
  const std::size_t n = v.size();
  g1.assign(n, 0.0);
  g2.assign(n, 0.0);
  h[0] = in.rho - 0.5;
  h[1] = std::pow(in.rho, 3) - in.sigma;
  for (int i = 0; i < in.t; ++i) {
    const double r = v[static_cast<std::size_t>(i)];
    h[0] += r;
    h[1] += r * r * r;
    g1[static_cast<std::size_t>(i)] = 1.0;
    g2[static_cast<std::size_t>(i)] = 3.0 * r * r;
  }
  for (int j = 0; j < in.s; ++j) {
    const auto ia = static_cast<std::size_t>(in.t + j), ib = static_cast<std::size_t>(in.t + in.s + j);
    const double a = v[ia], b = v[ib];
    h[0] += a;
    h[1] += a * a * a - 3.0 * a * b * b;
    g1[ia] = 1.0;
    g2[ia] = 3.0 * a * a - 3.0 * b * b;
    g2[ib] = -6.0 * a * b;
  }
}

// Minimum-norm Newton steps onto {h = 0} alternated with box projection.
inline bool restore(std::vector<double>& v, const OptInstance& in) {
  std::vector<double> g1, g2;
  for (int it = 0; it < 60; ++it) {
    double h[2];
    constraints(v, in, h, g1, g2);
    if (std::abs(h[0]) < 1e-15 && std::abs(h[1]) < 1e-15) return true;
    double m11 = 0, m12 = 0, m22 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      m11 += g1[i] * g1[i];
      m12 += g1[i] * g2[i];
      m22 += g2[i] * g2[i];
    }
    const double det = m11 * m22 - m12 * m12;
    if (!(std::abs(det) > 1e-30 * std::max(1.0, m11 * m22))) {
      // Gradients parallel: correct the linear constraint alone.
      if (m11 == 0.0) return false;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= h[0] / m11 * g1[i];
    } else {
      const double y1 = (m22 * h[0] - m12 * h[1]) / det;
      const double y2 = (m11 * h[1] - m12 * h[0]) / det;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= y1 * g1[i] + y2 * g2[i];
    }
    project_box(v, in);
  }
  double h[2];
  constraints(v, in, h, g1, g2);
  return std::abs(h[0]) < 1e-13 && std::abs(h[1]) < 1e-13;
}

inline std::vector<double> objective_gradient(const std::vector<double>& v, const OptInstance& in) {
  std::vector<double> g(v.size(), 0.0);
  const int l = in.ell;
  for (int i = 0; i < in.t; ++i) g[static_cast<std::size_t>(i)] = l * std::pow(v[static_cast<std::size_t>(i)], l - 1);
  for (int j = 0; j < in.s; ++j) {
    const auto ia = static_cast<std::size_t>(in.t + j), ib = static_cast<std::size_t>(in.t + in.s + j);
    std::complex<double> z{v[ia], v[ib]}, w{1.0, 0.0};
    for (int e = 0; e < l - 1; ++e) w *= z;
    g[ia] = l * w.real();   // d/da Re z^l
    g[ib] = -l * w.imag();  // d/db Re z^l
  }
  return g;
}

}  // namespace detail

/// Projected-gradient descent that stays feasible: each trial step is
/// projected onto the tangent of the two equalities, then restored by
/// Newton steps and box projection, and kept only if the restored point is
/// feasible and strictly better.
inline OptPoint refine(const OptInstance& in, OptPoint start, int max_iter = 400,
                       const Tolerances& tol = default_tolerances()) {
  std::vector<double> v = detail::flatten(start);
  double best = objective_unchecked(in, start);
  double step = 1e-2;
  std::vector<double> g1, g2;
  for (int it = 0; it < max_iter && step > 1e-14; ++it) {
    auto g = detail::objective_gradient(v, in);
    double h[2];
    detail::constraints(v, in, h, g1, g2);
    // Remove the components of g along span{g1, g2}.
    double m11 = 0, m12 = 0, m22 = 0, c1 = 0, c2 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      m11 += g1[i] * g1[i];
      m12 += g1[i] * g2[i];
      m22 += g2[i] * g2[i];
      c1 += g1[i] * g[i];
      c2 += g2[i] * g[i];
    }
    const double det = m11 * m22 - m12 * m12;
    if (std::abs(det) > 1e-30 * std::max(1.0, m11 * m22)) {
      const double y1 = (m22 * c1 - m12 * c2) / det, y2 = (m11 * c2 - m12 * c1) / det;
      for (std::size_t i = 0; i < v.size(); ++i) g[i] -= y1 * g1[i] + y2 * g2[i];
    } else if (m11 > 0.0) {
      for (std::size_t i = 0; i < v.size(); ++i) g[i] -= c1 / m11 * g1[i];
    }
    double gn = 0.0;
    for (double x : g) gn += x * x;
    gn = std::sqrt(gn);
    if (gn < 1e-300) break;

    std::vector<double> trial(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] - step * g[i] / gn;
    detail::project_box(trial, in);
    bool accepted = false;
    if (detail::restore(trial, in)) {
      const OptPoint cand = detail::unflatten(trial, in.t, in.s);
      if (!violated_constraint(in, cand, tol.feasibility)) {
        const double val = objective_unchecked(in, cand);
        if (val < best) {
          best = val;
          v = std::move(trial);
          accepted = true;
        }
      }
    }
    step = accepted ? step * 2.0 : step * 0.5;
  }
  return detail::unflatten(v, in.t, in.s);
}

// ── (star) check ────────────────────────────────────────────────────

struct StarCheck {
  double min_found = std::numeric_limits<double>::infinity();
  double g_ell = 0;
  double margin = 0;       // min_found - g_ell
  bool in_regime = false;  // ell != 2 mod 4 and sigma >= star_threshold(ell)
  std::string notice;      // set when the run is exploratory
  std::size_t samples = 0;
  std::size_t refined = 0;
};

inline bool star_in_regime(int ell, double sigma) {
  return ell >= 5 && ell % 4 != 2 && sigma >= star_threshold(ell);
}

/// Minimum objective over the samples (the `refine_top` best ones refined
/// when `local_refine` is set), compared with g_ell(sigma).
inline StarCheck check_star(const OptInstance& in, const std::vector<OptPoint>& samples, bool local_refine,
                            std::size_t refine_top = 16, const Tolerances& tol = default_tolerances()) {
  in.validate();
  StarCheck out;
  out.in_regime = star_in_regime(in.ell, in.sigma);
  if (!out.in_regime)
    out.notice = in.ell % 4 == 2 ? "ell = 2 (mod 4): exploratory run, no proven bound to test"
                                 : "sigma below the threshold: exploratory run, no proven bound to test";
  out.g_ell = g_ell(in.ell, in.sigma);
  out.samples = samples.size();

  std::vector<std::pair<double, std::size_t>> vals;
  vals.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = objective(in, samples[i], tol.feasibility);
    vals.emplace_back(v, i);
    out.min_found = std::min(out.min_found, v);
  }
  if (local_refine && !vals.empty()) {
    const std::size_t top = std::min(refine_top, vals.size());
    std::partial_sort(vals.begin(), vals.begin() + static_cast<long>(top), vals.end());
    for (std::size_t i = 0; i < top; ++i) {
      const auto pt = refine(in, samples[vals[i].second], 400, tol);
      out.min_found = std::min(out.min_found, objective(in, pt, tol.feasibility));
      ++out.refined;
    }
  }
  out.margin = out.min_found - out.g_ell;
  return out;
}

/// Interval of rho outside which OPT(s, t, rho) is certainly empty when
/// the b-caps equal 1/8 (rho^2 - a^2 >= 1/8).  The low end is
/// min_feasible_rho; at the high end even the even split of 1/2 - rho
/// with full |b| cannot bring the cubic sum down to sigma.
struct RhoRange {
  double lo = 0;
  double hi = 0;
};

inline double min_feasible_rho(double sigma);

inline RhoRange feasible_rho_range(double sigma, int s, int t) {
  if (s < 0 || t < 0 || s + t < 1) throw std::invalid_argument("need s, t >= 0 with s + t >= 1");
  const double lo = min_feasible_rho(sigma);
  auto min_cube = [&](double rho) {
    const double R = 0.5 - rho;
    if (s == 0) return std::pow(rho, 3) + std::pow(R, 3) / (static_cast<double>(t) * t);
    const double a = R / s;
    return std::pow(rho, 3) + s * (a * a * a - 3.0 * a * std::min(0.125, rho * rho - a * a));
  };
  if (min_cube(0.5) <= sigma) return {lo, 0.5};
  double a = lo, b = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (min_cube(mid) <= sigma)
      a = mid;
    else
      b = mid;
  }
  return {lo, std::max(lo, a)};
}

/// Largest rho with rho^3 + (1/2 - rho)^3 = sigma: below it the first two
/// constraints cannot both hold.
inline double min_feasible_rho(double sigma) {
  if (!(sigma >= 1.0 / 32.0 && sigma <= 0.125)) throw std::invalid_argument("sigma must lie in [1/32,1/8]");
  double lo = 0.25, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::pow(mid, 3) + std::pow(0.5 - mid, 3) < sigma)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace tourncyc
