#pragma once

// Spectral view of a tournament.  The tournament matrix A = (I/2 + M)/n
// satisfies A + A^T = J (all entries 1/n), so tr(A) = 1/2, and
// tr(A^l) approximates t(C_l, T) up to O(1/n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "tourncyc/tolerances.hpp"
#include "tourncyc/tournament.hpp"

namespace tourncyc {

using Complex = std::complex<double>;

class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TournamentMatrix {
  Eigen::MatrixXd a;

  std::size_t size() const { return static_cast<std::size_t>(a.rows()); }
};

inline TournamentMatrix tournament_matrix(const Tournament& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  const double inv = 1.0 / static_cast<double>(n);
  TournamentMatrix m{Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    m.a(i, i) = 0.5 * inv;
    t.for_each_out(static_cast<std::size_t>(i),
                   [&](std::size_t j) { m.a(i, static_cast<Eigen::Index>(j)) = inv; });
  }
  return m;
}

/// max |(A + A^T - J)_ij|.
inline double sum_identity_error(const TournamentMatrix& m) {
  const auto n = m.a.rows();
  const double inv = 1.0 / static_cast<double>(n);
  return ((m.a + m.a.transpose()).array() - inv).abs().maxCoeff();
}

/// Eigenvalues sorted by descending modulus, then descending real part,
/// then descending imaginary part.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  double rho = 0.0;
  double residual = 0.0;  // max ||Av - lv|| / ||v|| over computed pairs
};

namespace detail {

inline void canonical_sort(std::vector<Complex>& ev) {
  // Quantised keys keep the order stable under last-bit noise between
  // conjugates and equal-modulus eigenvalues.
  auto key = [](const Complex& z) {
    return std::make_tuple(-std::round(std::abs(z) * 1e12), -std::round(z.real() * 1e12), -z.imag());
  };
  std::sort(ev.begin(), ev.end(), [&](const Complex& x, const Complex& y) { return key(x) < key(y); });
}

}  // namespace detail

inline Spectrum spectrum(const Eigen::MatrixXd& a, const Tolerances& tol = default_tolerances()) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw std::invalid_argument("spectrum needs a non-empty square matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, true);
  if (es.info() != Eigen::Success)
    throw EigenSolverError("real Schur iteration did not converge for a " + std::to_string(a.rows()) +
                           "x" + std::to_string(a.rows()) + " matrix (Eigen info code " +
                           std::to_string(static_cast<int>(es.info())) + ")");

  const Eigen::VectorXcd vals = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  const Eigen::MatrixXcd ac = a.cast<Complex>();

  Spectrum s;
  s.eigenvalues.assign(vals.data(), vals.data() + vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    const Eigen::VectorXcd v = vecs.col(k);
    const double vn = v.norm();
    if (vn == 0.0) continue;
    s.residual = std::max(s.residual, (ac * v - vals(k) * v).norm() / vn);
    s.rho = std::max(s.rho, std::abs(vals(k)));
  }
  const double bound = tol.eigen * std::max(1.0, a.norm());
  if (!(s.residual <= bound))
    throw EigenSolverError("eigen-pair residual " + std::to_string(s.residual) + " exceeds " +
                           std::to_string(bound));
  detail::canonical_sort(s.eigenvalues);
  return s;
}

inline Spectrum spectrum(const TournamentMatrix& m, const Tolerances& tol = default_tolerances()) {
  return spectrum(m.a, tol);
}

/// z^ell by repeated squaring; avoids the polar round trip of std::pow.
inline Complex ipow(Complex z, int ell) {
  Complex r{1.0, 0.0};
  while (ell > 0) {
    if (ell & 1) r *= z;
    z *= z;
    ell >>= 1;
  }
  return r;
}

/// Re sum_k lambda_k^ell, i.e. tr(A^ell) through the spectrum.
inline double trace_power_via_spectrum(const Spectrum& s, int ell) {
  Complex sum{0.0, 0.0};
  for (const auto& z : s.eigenvalues) sum += ipow(z, ell);
  return sum.real();
}

/// tr(A^ell) by direct matrix powers.
inline double trace_power(const Eigen::MatrixXd& a, int ell) {
  if (ell < 1) throw std::invalid_argument("ell must be >= 1");
  Eigen::MatrixXd p = a;
  for (int i = 1; i < ell; ++i) p = p * a;
  return p.trace();
}

inline double trace_power(const TournamentMatrix& m, int ell) { return trace_power(m.a, ell); }

/// Structural facts every tournament-matrix spectrum must satisfy.
struct SpectralChecks {
  double min_real = 0.0;           // Re(lambda) >= 0 for every eigenvalue
  double trace_error = 0.0;        // |sum lambda - 1/2|
  double conjugate_error = 0.0;    // worst unmatched conjugate distance
  double max_imag_sq = 0.0;        // Im(lambda)^2 <= 1/8
  double cube_error = 0.0;         // |Re sum lambda^3 - tr(A^3)|
  double square_trace = 0.0;       // tr(A^2) >= 0

  bool ok(const Tolerances& tol = default_tolerances()) const {
    return min_real >= -tol.structural && trace_error <= tol.structural &&
           conjugate_error <= tol.structural && max_imag_sq <= 0.125 + tol.structural &&
           cube_error <= tol.structural && square_trace >= -tol.structural;
  }
};

inline SpectralChecks check_spectrum(const Spectrum& s, const TournamentMatrix& m) {
  SpectralChecks c;
  c.min_real = std::numeric_limits<double>::infinity();
  Complex sum{0.0, 0.0};
  for (const auto& z : s.eigenvalues) {
    c.min_real = std::min(c.min_real, z.real());
    c.max_imag_sq = std::max(c.max_imag_sq, z.imag() * z.imag());
    sum += z;
  }
  c.trace_error = std::abs(sum - Complex{0.5, 0.0});

  // Greedy conjugate matching.
  std::vector<bool> used(s.eigenvalues.size(), false);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    if (used[i]) continue;
    const Complex target = std::conj(s.eigenvalues[i]);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = i;
    for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
      if (used[j] || (j == i && s.eigenvalues[i].imag() != 0.0)) continue;
      const double d = std::abs(s.eigenvalues[j] - target);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[i] = used[best_j] = true;
    c.conjugate_error = std::max(c.conjugate_error, best);
  }

  c.cube_error = std::abs(trace_power_via_spectrum(s, 3) - trace_power(m, 3));
  c.square_trace = trace_power(m, 2);
  return c;
}

/// |tr(M^ell)/n^ell - tr(A^ell)| given the exact density.
inline double trace_gap(double density, const TournamentMatrix& m, int ell) {
  return std::abs(density - trace_power(m, ell));
}

/// D_n: skew-symmetric, +1 above the diagonal, -1 below.
inline Eigen::MatrixXd dn_matrix(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = i + 1; j < N; ++j) {
      d(i, j) = 1.0;
      d(j, i) = -1.0;
    }
  return d;
}

/// Spectral radius of D_n.  D_n is normal, so its spectral radius is its
/// largest singular value: sqrt of the top eigenvalue of D_n^T D_n.
inline double dn_spectral_radius(std::size_t n) {
  if (n == 0) throw std::invalid_argument("D_n needs n >= 1");
  const Eigen::MatrixXd d = dn_matrix(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.transpose() * d, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenSolverError("symmetric eigensolver failed for D_n");
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Spectral radius of an arbitrary real square matrix.
inline double spectral_radius(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) throw EigenSolverError("eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Re z^ell <= ell |z|^(ell-1) Re z for odd ell and Re z >= 0.  Returns
/// whether it holds (up to rounding); meant as a property-test oracle.
inline bool check_re_inequality(Complex z, int ell) {
  if (ell < 1 || ell % 2 == 0)
    throw std::invalid_argument("check_re_inequality needs an odd positive ell, got " + std::to_string(ell));
  if (z.real() < 0.0) throw std::invalid_argument("check_re_inequality needs Re z >= 0");
  const double mod = std::abs(z);
  const double lhs = ipow(z, ell).real();
  const double rhs = ell * std::pow(mod, ell - 1) * z.real();
  return lhs <= rhs + 64.0 * ell * std::numeric_limits<double>::epsilon() * std::pow(mod, ell);
}

}  // namespace tourncyc
