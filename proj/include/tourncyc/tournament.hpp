#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tourncyc/rng.hpp"

namespace tourncyc {

/// Where a tournament came from: a family tag plus the construction
/// parameters, kept in insertion order so reports are stable.
struct Provenance {
  std::string family;
  std::vector<std::pair<std::string, std::string>> params;

  std::string param(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    return {};
  }

  /// `k1=v1;k2=v2` rendering used in CSV output.
  std::string params_string() const {
    std::string out;
    for (const auto& [k, v] : params) {
      if (!out.empty()) out += ';';
      out += k + '=' + v;
    }
    return out;
  }

  bool operator==(const Provenance&) const = default;
};

class TournamentBuilder;

/// Orientation of the complete graph on vertices 0..n-1, stored as
/// bit-packed rows: bit j of row i is set iff i -> j.  Immutable once built;
/// only TournamentBuilder can produce one, and every pair is oriented
/// exactly once by construction.
class Tournament {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  std::size_t size() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return wpr_; }

  bool arc(std::size_t from, std::size_t to) const noexcept {
    return (bits_[from * wpr_ + to / kWordBits] >> (to % kWordBits)) & 1U;
  }

  std::span<const Word> row(std::size_t i) const noexcept {
    return {bits_.data() + i * wpr_, wpr_};
  }

  std::size_t out_degree(std::size_t i) const noexcept {
    std::size_t d = 0;
    for (Word w : row(i)) d += static_cast<std::size_t>(std::popcount(w));
    return d;
  }

  /// Calls f(j) for each out-neighbour j of i in increasing order.
  template <typename F>
  void for_each_out(std::size_t i, F&& f) const {
    const auto r = row(i);
    for (std::size_t w = 0; w < wpr_; ++w) {
      Word bits = r[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(w * kWordBits + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::size_t> out_neighbours(std::size_t i) const {
    std::vector<std::size_t> out;
    out.reserve(out_degree(i));
    for_each_out(i, [&](std::size_t j) { out.push_back(j); });
    return out;
  }

  const Provenance& provenance() const noexcept { return provenance_; }

  /// Relabel vertices: vertex v becomes perm[v].
  Tournament permuted(std::span<const std::size_t> perm) const;

  bool operator==(const Tournament& o) const { return n_ == o.n_ && bits_ == o.bits_; }

 private:
  friend class TournamentBuilder;
  Tournament(std::size_t n, std::vector<Word> bits, Provenance prov)
      : n_(n), wpr_((n + kWordBits - 1) / kWordBits), bits_(std::move(bits)),
        provenance_(std::move(prov)) {}

  std::size_t n_;
  std::size_t wpr_;
  std::vector<Word> bits_;
  Provenance provenance_;
};

/// Mutable staging area.  Starts transitive (i -> j for i < j); set_arc
/// re-orients a pair, so the result is always a tournament.
class TournamentBuilder {
 public:
  explicit TournamentBuilder(std::size_t n) : n_(n), wpr_((n + 63) / 64), bits_(n * wpr_, 0) {
    if (n == 0) throw std::invalid_argument("tournament needs at least one vertex");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) set_bit(i, j, true);
  }

  std::size_t size() const noexcept { return n_; }

  TournamentBuilder& set_arc(std::size_t from, std::size_t to) {
    if (from >= n_ || to >= n_) throw std::out_of_range("vertex index out of range");
    if (from == to) throw std::invalid_argument("loops are not allowed in a tournament");
    set_bit(from, to, true);
    set_bit(to, from, false);
    return *this;
  }

  bool arc(std::size_t from, std::size_t to) const noexcept {
    return (bits_[from * wpr_ + to / 64] >> (to % 64)) & 1U;
  }

  TournamentBuilder& family(std::string tag) {
    prov_.family = std::move(tag);
    return *this;
  }

  template <typename V>
  TournamentBuilder& param(std::string key, const V& value) {
    std::ostringstream os;
    os.precision(17);
    os << value;
    prov_.params.emplace_back(std::move(key), os.str());
    return *this;
  }

  TournamentBuilder& provenance(Provenance p) {
    prov_ = std::move(p);
    return *this;
  }

  Tournament build() && { return Tournament(n_, std::move(bits_), std::move(prov_)); }
  Tournament build() const& { return Tournament(n_, bits_, prov_); }

 private:
  void set_bit(std::size_t i, std::size_t j, bool v) {
    auto& w = bits_[i * wpr_ + j / 64];
    const std::uint64_t mask = std::uint64_t{1} << (j % 64);
    w = v ? (w | mask) : (w & ~mask);
  }

  std::size_t n_;
  std::size_t wpr_;
  std::vector<std::uint64_t> bits_;
  Provenance prov_;
};

inline Tournament Tournament::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != n_) throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> seen(n_, false);
  for (auto p : perm) {
    if (p >= n_ || seen[p]) throw std::invalid_argument("not a permutation");
    seen[p] = true;
  }
  TournamentBuilder b(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (arc(i, j))
        b.set_arc(perm[i], perm[j]);
      else
        b.set_arc(perm[j], perm[i]);
    }
  b.provenance(provenance_);
  return std::move(b).build();
}

// ── Generators ──────────────────────────────────────────────────────

inline Tournament make_transitive(std::size_t n) {
  return TournamentBuilder(n).family("transitive").param("n", n).build();
}

/// Carousel (rotational) tournament on 2k+1 vertices: i -> i+d (mod 2k+1)
/// for d = 1..k.  Regular with every out-degree k.
inline Tournament make_carousel(std::size_t k) {
  const std::size_t N = 2 * k + 1;
  TournamentBuilder b(N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t d = 1; d <= k; ++d) b.set_arc(i, (i + d) % N);
  return std::move(b.family("carousel").param("k", k).param("n", N)).build();
}

namespace detail {

// Fair coin per unordered pair inside [lo, hi), one draw per 64 pairs.
inline void fill_random(TournamentBuilder& b, std::size_t lo, std::size_t hi, Rng& rng) {
  std::uint64_t pool = 0;
  int left = 0;
  for (std::size_t i = lo; i < hi; ++i)
    for (std::size_t j = i + 1; j < hi; ++j) {
      if (left == 0) {
        pool = rng();
        left = 64;
      }
      const bool forward = pool & 1U;
      pool >>= 1;
      --left;
      if (forward)
        b.set_arc(i, j);
      else
        b.set_arc(j, i);
    }
}

// Carousel on the largest odd count c <= size; a leftover vertex (size even)
// sits first in the block and beats every carousel vertex.
inline void fill_carousel(TournamentBuilder& b, std::size_t lo, std::size_t size) {
  if (size == 0) return;
  const std::size_t c = (size % 2 == 1) ? size : size - 1;
  const std::size_t base = lo + (size - c);
  for (std::size_t v = lo; v < base; ++v)
    for (std::size_t j = base; j < lo + size; ++j) b.set_arc(v, j);
  const std::size_t k = (c - 1) / 2;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t d = 1; d <= k; ++d) b.set_arc(base + i, base + (i + d) % c);
}

}  // namespace detail

inline Tournament make_random(std::size_t n, std::uint64_t seed) {
  TournamentBuilder b(n);
  auto rng = make_rng(seed);
  detail::fill_random(b, 0, n, rng);
  return std::move(b.family("random").param("n", n).param("seed", seed)).build();
}

enum class Fill { Random, Carousel };

inline const char* to_string(Fill f) { return f == Fill::Random ? "random" : "carousel"; }

inline Fill parse_fill(const std::string& s) {
  if (s == "random") return Fill::Random;
  if (s == "carousel") return Fill::Carousel;
  throw std::invalid_argument("unknown blow-up fill '" + s + "' (expected random|carousel)");
}

/// Blow-up of a transitive tournament: floor(1/z) parts of about z*n
/// vertices followed by one smaller remainder part, all cross arcs forward.
struct BlowUpSpec {
  double z = 1.0;
  std::size_t n = 1;
  Fill fill = Fill::Random;
  std::uint64_t seed = 0;
};

/// Smallest part size a carousel fill accepts for the equal parts.
inline constexpr std::size_t kMinCarouselPart = 3;

/// Part sizes for a blow-up.  Equal parts get floor(z*n); if that leaves a
/// remainder larger than a part, the surplus is spread one vertex at a time
/// over the leading parts.  A zero remainder part is omitted.
inline std::vector<std::size_t> blowup_part_sizes(double z, std::size_t n) {
  if (!(z > 0.0 && z <= 1.0)) throw std::invalid_argument("blow-up ratio z must lie in (0,1]");
  const auto m = static_cast<std::size_t>(std::floor(1.0 / z));
  if (n < m)
    throw std::invalid_argument("blow-up needs n >= floor(1/z) = " + std::to_string(m) +
                                " vertices, got " + std::to_string(n));
  const auto base = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(z * static_cast<double>(n))));
  if (m * base > n) throw std::invalid_argument("blow-up parts do not fit in n vertices");
  std::vector<std::size_t> sizes(m, base);
  std::size_t rem = n - m * base;
  for (std::size_t i = 0; rem > base && i < m; ++i, --rem) ++sizes[i];
  if (rem > 0) sizes.push_back(rem);
  return sizes;
}

inline Tournament make_blowup(const BlowUpSpec& spec) {
  const auto sizes = blowup_part_sizes(spec.z, spec.n);
  const std::size_t m = static_cast<std::size_t>(std::floor(1.0 / spec.z));
  if (spec.fill == Fill::Carousel)
    for (std::size_t i = 0; i < m; ++i)
      if (sizes[i] < kMinCarouselPart)
        throw std::invalid_argument("blow-up parts of size " + std::to_string(sizes[i]) +
                                    " are too small for a carousel fill");

  TournamentBuilder b(spec.n);  // transitive start: every cross arc already forward
  auto rng = make_rng(spec.seed);
  std::size_t lo = 0;
  for (auto sz : sizes) {
    if (spec.fill == Fill::Random)
      detail::fill_random(b, lo, lo + sz, rng);
    else
      detail::fill_carousel(b, lo, sz);
    lo += sz;
  }
  b.family("blowup").param("z", spec.z).param("n", spec.n).param("fill", to_string(spec.fill));
  if (spec.fill == Fill::Random) b.param("seed", spec.seed);
  return std::move(b).build();
}

}  // namespace tourncyc
