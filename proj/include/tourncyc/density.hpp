#pragma once

// Homomorphism densities t(C_l, T): the number of closed directed walks of
// length l divided by n^l.  Counts are exact integers; the accumulator
// width is chosen from n^l so that no intermediate can overflow.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tourncyc/tournament.hpp"

namespace tourncyc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct DensityRecord {
  int ell = 0;
  std::size_t n = 0;
  BigInt hom_count = 0;
  Rational density = 0;  // hom_count / n^ell, exact

  double value() const { return static_cast<double>(density); }
};

/// Refusal from the enumeration oracle; it never truncates silently.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline BigInt big_pow(std::size_t base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

inline void check_ell(int ell) {
  if (ell < 1) throw std::invalid_argument("cycle length must be >= 1, got " + std::to_string(ell));
}

inline DensityRecord make_record(std::size_t n, int ell, BigInt count) {
  DensityRecord r;
  r.ell = ell;
  r.n = n;
  r.hom_count = count;
  r.density = Rational(count, big_pow(n, ell));
  return r;
}

}  // namespace detail

/// tr(M^ell) accumulated in `Int`.  The caller guarantees n^ell fits in Int:
/// every entry of M^a is at most n^(a-1) and the trace is at most n^ell.
template <typename Int>
Int closed_walk_count(const Tournament& t, int ell) {
  detail::check_ell(ell);
  const std::size_t n = t.size();
  if (ell <= 2) return Int(0);  // no loops, no 2-cycles

  // tr(M^ell) = sum_ij (M^a)_ij (M^b)_ji with a = ceil(ell/2), b = ell - a.
  const int a = (ell + 1) / 2;
  const int b = ell - a;

  std::vector<Int> cur(n * n, Int(0)), prev;
  for (std::size_t i = 0; i < n; ++i) t.for_each_out(i, [&](std::size_t j) { cur[i * n + j] = 1; });

  for (int step = 2; step <= a; ++step) {
    std::vector<Int> next(n * n, Int(0));
    for (std::size_t i = 0; i < n; ++i) {
      Int* out = next.data() + i * n;
      const Int* in = cur.data() + i * n;
      for (std::size_t k = 0; k < n; ++k) {
        const Int w = in[k];
        if (w == 0) continue;
        t.for_each_out(k, [&](std::size_t j) { out[j] += w; });
      }
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  const std::vector<Int>& pb = (b == a) ? cur : prev;

  Int total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Int x = cur[i * n + j];
      if (x != 0) total += x * pb[j * n + i];
    }
  return total;
}

/// Exact closed-walk count with the narrowest safe integer type.
inline BigInt closed_walks(const Tournament& t, int ell) {
  detail::check_ell(ell);
  const BigInt bound = detail::big_pow(t.size(), ell);
  if (bound < (BigInt(1) << 63)) return BigInt(closed_walk_count<std::uint64_t>(t, ell));
  if (bound < (BigInt(1) << 127)) {
    const unsigned __int128 v = closed_walk_count<unsigned __int128>(t, ell);
    BigInt r = static_cast<std::uint64_t>(v >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(v);
    return r;
  }
  return closed_walk_count<BigInt>(t, ell);
}

/// t(C_ell, T) = tr(M^ell) / n^ell.  ell = 1, 2 are accepted and always 0.
inline DensityRecord density_trace(const Tournament& t, int ell) {
  return detail::make_record(t.size(), ell, closed_walks(t, ell));
}

struct EnumerationBudget {
  std::size_t max_n = 12;
  int max_ell = 7;
};

/// Independent oracle: enumerates vertex sequences (v_1..v_ell) with
/// v_i -> v_{i+1} cyclically, extending only along arcs.
inline DensityRecord density_bruteforce(const Tournament& t, int ell,
                                        const EnumerationBudget& budget = {}) {
  detail::check_ell(ell);
  const std::size_t n = t.size();
  if (n > budget.max_n || ell > budget.max_ell)
    throw BudgetExceeded("enumeration of " + std::to_string(n) + "^" + std::to_string(ell) +
                         " sequences exceeds the budget (n <= " + std::to_string(budget.max_n) +
                         ", ell <= " + std::to_string(budget.max_ell) + ")");

  std::uint64_t count = 0;
  std::vector<std::size_t> seq(static_cast<std::size_t>(ell));
  auto extend = [&](auto&& self, int depth) -> void {
    const std::size_t last = seq[static_cast<std::size_t>(depth - 1)];
    if (depth == ell) {
      if (t.arc(last, seq[0])) ++count;
      return;
    }
    for (std::size_t v = 0; v < n; ++v)
      if (t.arc(last, v)) {
        seq[static_cast<std::size_t>(depth)] = v;
        self(self, depth + 1);
      }
  };
  for (std::size_t v0 = 0; v0 < n; ++v0) {
    seq[0] = v0;
    if (ell == 1) {
      if (t.arc(v0, v0)) ++count;
    } else {
      extend(extend, 1);
    }
  }
  return detail::make_record(n, ell, BigInt(count));
}

/// Number of vertex triples inducing a directed 3-cycle, from the score
/// sequence: C(n,3) minus the transitive triples sum_i C(d_i, 2).
inline std::uint64_t cyclic_triangles(const Tournament& t) {
  const std::uint64_t n = t.size();
  std::uint64_t transitive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t d = t.out_degree(i);
    transitive += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  const std::uint64_t all = n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
  return all - transitive;
}

}  // namespace tourncyc
