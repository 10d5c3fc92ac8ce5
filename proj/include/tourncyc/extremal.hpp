#pragma once

// Extremal functions for cycle densities.
//
// For reals q > p > 1 the profile  phi_p(z) = m z^p + (1 - m z)^p  with
// m = floor(1/z) is a strictly increasing continuous bijection of (0,1]
// onto itself, and f_{p,q}(phi_p(z)) = phi_q(z), f_{p,q}(0) = 0.
// g_l(s) = f_{3,l}(8s) / 2^l is the conjectured minimum of t(C_l) given
// t(C_3) = s, and alpha_l is the limiting C_l density of carousel
// tournaments when l = 2 (mod 4).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tourncyc {

namespace detail {

// x^p with 0^p := 0 and tiny negative rounding noise clamped to 0.
inline double pow0(double x, double p) { return x <= 0.0 ? 0.0 : std::pow(x, p); }

}  // namespace detail

/// m z^p + (1 - m z)^p for a given part count m.
inline double power_profile(double p, double z, long m) {
  return static_cast<double>(m) * detail::pow0(z, p) + detail::pow0(1.0 - static_cast<double>(m) * z, p);
}

/// Same with m = floor(1/z).
inline double power_profile(double p, double z) {
  if (!(z > 0.0 && z <= 1.0)) throw std::invalid_argument("z must lie in (0,1]");
  return power_profile(p, z, static_cast<long>(std::floor(1.0 / z)));
}

struct ZSolution {
  double z = 1.0;
  long m = 1;           // floor(1/z)
  double residual = 0;  // |phi_p(z) - C|
};

/// Solves phi_p(z) = C for z in (0,1].  On (1/(m+1), 1/m] the profile runs
/// from (m+1)^(1-p) up to m^(1-p), so m is fixed first and z is found by
/// bisection inside that interval.  C = m^(1-p) gives z = 1/m exactly.
inline ZSolution solve_z(double p, double C, double tol = 1e-12) {
  if (!(p > 1.0)) throw std::invalid_argument("solve_z needs p > 1");
  if (!(C > 0.0 && C <= 1.0)) throw std::invalid_argument("solve_z needs C in (0,1], got " + std::to_string(C));

  const double e = 1.0 - p;
  const double guess = std::floor(std::pow(C, -1.0 / (p - 1.0)));
  if (!(guess < 9.0e15)) throw std::domain_error("C too small: part count overflows");
  long m = std::max(1L, static_cast<long>(guess));
  while (m > 1 && std::pow(static_cast<double>(m), e) < C) --m;
  while (std::pow(static_cast<double>(m + 1), e) >= C) ++m;

  ZSolution s;
  s.m = m;
  const double upper = 1.0 / static_cast<double>(m);
  if (std::pow(static_cast<double>(m), e) == C) {
    s.z = upper;
  } else {
    double lo = 1.0 / static_cast<double>(m + 1), hi = upper;
    for (int it = 0; it < 200 && lo < hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (power_profile(p, mid, m) < C)
        lo = mid;
      else
        hi = mid;
    }
    const double rl = std::abs(power_profile(p, lo, m) - C);
    const double rh = std::abs(power_profile(p, hi, m) - C);
    s.z = rl < rh ? lo : hi;
  }
  s.residual = std::abs(power_profile(p, s.z, m) - C);
  if (s.residual > tol)
    throw std::runtime_error("solve_z: residual " + std::to_string(s.residual) + " above tolerance");
  return s;
}

struct ExtremalCurvePoint {
  double p = 0, q = 0, C = 0;
  double z = 0;
  long m = 0;
  double value = 0;
};

inline void check_pq(double p, double q) {
  if (!(p > 1.0 && q > p)) throw std::invalid_argument("need reals q > p > 1");
}

inline ExtremalCurvePoint f_pq_point(double p, double q, double C) {
  check_pq(p, q);
  if (!(C >= 0.0 && C <= 1.0)) throw std::invalid_argument("f_pq needs C in [0,1], got " + std::to_string(C));
  ExtremalCurvePoint pt{p, q, C, 0.0, 0, 0.0};
  if (C == 0.0) return pt;
  const auto s = solve_z(p, C);
  pt.z = s.z;
  pt.m = s.m;
  pt.value = power_profile(q, s.z, s.m);
  return pt;
}

inline double f_pq(double p, double q, double C) { return f_pq_point(p, q, C).value; }

namespace detail {

inline void check_g_args(int ell, double s) {
  if (ell < 4) throw std::invalid_argument("g_ell needs ell >= 4, got " + std::to_string(ell));
  if (!(s >= 0.0 && s <= 0.125 + 1e-15))
    throw std::invalid_argument("g_ell needs s in [0,1/8], got " + std::to_string(s));
}

}  // namespace detail

/// g_ell(s) = f_{3,ell}(8s) / 2^ell together with the solved z and m.
inline ExtremalCurvePoint g_ell_point(int ell, double s) {
  detail::check_g_args(ell, s);
  const double C = std::min(1.0, 8.0 * s);
  auto pt = f_pq_point(3.0, static_cast<double>(ell), C);
  pt.value = std::ldexp(pt.value, -ell);
  return pt;
}

inline double g_ell(int ell, double s) { return g_ell_point(ell, s).value; }

/// lambda(sigma) = sqrt(6 sigma - 3/16) / 3; ranges over [0, 1/4] on
/// sigma in [1/32, 1/8], the regime where floor(1/z) = 1.
inline double lambda_of_sigma(double sigma) {
  if (!(sigma >= 1.0 / 32.0 - 1e-15 && sigma <= 0.125 + 1e-15))
    throw std::invalid_argument("lambda(sigma) needs sigma in [1/32,1/8], got " + std::to_string(sigma));
  return std::sqrt(std::max(0.0, 6.0 * sigma - 3.0 / 16.0)) / 3.0;
}

/// (1/4 - lambda)^ell + (1/4 + lambda)^ell, equal to g_ell(sigma) on [1/32,1/8].
inline double g_ell_closed_form(int ell, double sigma) {
  if (ell < 4) throw std::invalid_argument("g_ell_closed_form needs ell >= 4");
  const double lam = lambda_of_sigma(sigma);
  return std::pow(0.25 - lam, ell) + std::pow(0.25 + lam, ell);
}

// ── alpha_ell ───────────────────────────────────────────────────────

inline void check_alpha_ell(int ell) {
  if (ell < 6 || ell % 4 != 2)
    throw std::invalid_argument("alpha_ell is defined for ell >= 6 with ell = 2 (mod 4), got " +
                                std::to_string(ell));
}

struct SeriesSum {
  double value = 0;
  long terms = 0;
  double tail_bound = 0;  // integral bound on the dropped terms
};

/// Sum over k >= 1 of ((2k-1) pi)^(-ell), truncated once the next term is
/// below 1e-18 and the integral tail bound confirms it.  Accumulated from
/// the smallest term up in long double.
inline SeriesSum odd_reciprocal_pi_series(int ell, long double cutoff = 1e-18L) {
  if (ell < 2) throw std::invalid_argument("series diverges for ell < 2");
  const long double pi = std::numbers::pi_v<long double>;
  auto term = [&](long k) { return std::pow(static_cast<long double>(2 * k - 1) * pi, -ell); };
  // Tail bound: sum_{k > K} f(k) <= int_K^inf ((2x-1) pi)^(-ell) dx.
  auto tail = [&](long K) {
    return std::pow(static_cast<long double>(2 * K - 1) * pi, 1 - ell) / (2.0L * pi * (ell - 1));
  };
  long K = 1;
  while (term(K + 1) >= cutoff || tail(K) >= cutoff) ++K;
  long double sum = 0.0L;
  for (long k = K; k >= 1; --k) sum += term(k);
  return {static_cast<double>(sum), K, static_cast<double>(tail(K))};
}

/// alpha_ell = 2^-ell - 2 sum_k ((2k-1) pi)^-ell by direct summation.
inline double alpha_ell(int ell) {
  check_alpha_ell(ell);
  const auto s = odd_reciprocal_pi_series(ell);
  return static_cast<double>(std::ldexp(1.0L, -ell) - 2.0L * static_cast<long double>(s.value));
}

/// Bernoulli number B_n as an exact rational (Akiyama-Tanigawa).
inline boost::multiprecision::cpp_rational bernoulli(int n) {
  using Q = boost::multiprecision::cpp_rational;
  std::vector<Q> a(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    a[static_cast<std::size_t>(m)] = Q(1, m + 1);
    for (int j = m; j >= 1; --j)
      a[static_cast<std::size_t>(j - 1)] = j * (a[static_cast<std::size_t>(j - 1)] - a[static_cast<std::size_t>(j)]);
  }
  return a[0];  // this recursion yields B_1 = +1/2; only even n are used
}

/// Exact alpha_ell from the odd-zeta identity
/// sum_{odd j} j^-ell = (1 - 2^-ell) zeta(ell) with
/// zeta(ell) = |B_ell| (2 pi)^ell / (2 ell!), giving
/// alpha_ell = 2^-ell - (2^ell - 1) |B_ell| / ell!.
inline boost::multiprecision::cpp_rational alpha_ell_exact(int ell) {
  check_alpha_ell(ell);
  using boost::multiprecision::cpp_int;
  using Q = boost::multiprecision::cpp_rational;
  Q b = bernoulli(ell);
  if (b < 0) b = -b;
  cpp_int fact = 1;
  for (int i = 2; i <= ell; ++i) fact *= i;
  const cpp_int two_l = cpp_int(1) << ell;
  return Q(1, two_l) - Q(two_l - 1) * b / Q(fact);
}

/// 2^ell alpha_ell g_ell(s): the limiting C_ell density of a balanced
/// carousel blow-up whose C_3 density is s.
inline double carousel_blowup_bound(int ell, double s) {
  check_alpha_ell(ell);
  return std::ldexp(alpha_ell(ell), ell) * g_ell(ell, s);
}

/// Limiting t(C_ell) of a balanced random blow-up with part ratio z.
inline double random_blowup_limit(int ell, double z) {
  return std::ldexp(power_profile(static_cast<double>(ell), z), -ell);
}

}  // namespace tourncyc
