#pragma once

namespace tourncyc {

/// Numerical tolerances shared across the library.  Every check that
/// compares floating-point quantities takes one of these so callers can
/// override them in one place (the CLI exposes --tolerance).
struct Tolerances {
  /// Structural identities: conjugate closure, trace sums, A + A^T = J.
  double structural = 1e-9;
  /// Eigenvalue locations and eigen-pair residuals (relative to ||A||).
  double eigen = 1e-8;
  /// Residual of the defining equation when solving for z.
  double solve_z = 1e-12;
  /// Feasibility of an optimisation point.
  double feasibility = 1e-9;
  /// Entries closer than this are treated as one value when clustering.
  double cluster = 1e-3;
  /// Finite-size allowance c in slack(n) = c / n.
  double slack_constant = 2.0;

  double slack(long n) const { return n > 0 ? slack_constant / static_cast<double>(n) : 0.0; }
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace tourncyc
