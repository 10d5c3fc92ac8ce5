#pragma once

// Sweeps over tournament families and the bound checks they feed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "tourncyc/density.hpp"
#include "tourncyc/extremal.hpp"
#include "tourncyc/spectral.hpp"
#include "tourncyc/tolerances.hpp"
#include "tourncyc/tournament.hpp"

namespace tourncyc {

// ── Verdicts ────────────────────────────────────────────────────────

enum class VerdictKind { Pass, Fail, Skip };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Pass: return "pass";
    case VerdictKind::Fail: return "fail";
    default: return "skip";
  }
}

struct Verdict {
  VerdictKind kind = VerdictKind::Skip;
  double margin = 0;  // signed distance to the bound being tested
  std::string detail;

  bool failed() const { return kind == VerdictKind::Fail; }
};

/// Densities a check needs; computed once and shared across checks.
struct DensityPair {
  double t3 = 0;
  double tl = 0;
};

inline DensityPair densities(const Tournament& t, int ell) {
  return {density_trace(t, 3).value(), density_trace(t, ell).value()};
}

/// t(C_3) threshold above which the lower bound for ell != 2 (mod 4) applies.
inline double lower_bound_regime_threshold(int ell) { return 0.125 - 1.0 / (10.0 * ell * ell); }

/// t(C_ell) >= g_ell(t(C_3)) - allowance whenever t(C_3) >= 1/8 - 1/(10 ell^2)
/// - slack(n).  `allowance` defaults to slack(n).
inline Verdict check_lower_bound(const Tournament& t, int ell, const Tolerances& tol = default_tolerances(),
                                 std::optional<double> allowance = std::nullopt,
                                 std::optional<DensityPair> known = std::nullopt) {
  if (ell < 4) throw std::invalid_argument("check_lower_bound needs ell >= 4");
  if (ell % 4 == 2) throw std::invalid_argument("ell = 2 (mod 4): use check_carousel_blowup");
  const auto d = known ? *known : densities(t, ell);
  const double slack = tol.slack(t.size());
  Verdict v;
  if (d.t3 < lower_bound_regime_threshold(ell) - slack) {
    v.kind = VerdictKind::Skip;
    v.detail = "out of regime: t3 below 1/8 - 1/(10 ell^2) - slack(n)";
    v.margin = d.tl - g_ell(ell, std::min(d.t3, 0.125));
    return v;
  }
  v.margin = d.tl - g_ell(ell, std::min(d.t3, 0.125));
  v.kind = v.margin >= -allowance.value_or(slack) ? VerdictKind::Pass : VerdictKind::Fail;
  v.detail = "t_ell - g_ell(t3)";
  return v;
}

/// For a carousel blow-up and ell = 2 (mod 4): t(C_ell) is within `tol`
/// (default slack(n)) of 2^ell alpha_ell g_ell(t3) and strictly below g_ell(t3).
inline Verdict check_carousel_blowup(const Tournament& t, int ell, std::optional<double> tol = std::nullopt,
                              const Tolerances& tols = default_tolerances(),
                              std::optional<DensityPair> known = std::nullopt) {
  const auto& p = t.provenance();
  const bool single_carousel = p.family == "carousel";
  if (!single_carousel && !(p.family == "blowup" && p.param("fill") == "carousel"))
    throw std::invalid_argument("check_carousel_blowup needs a carousel blow-up, got family '" + p.family + "'" +
                                (p.family == "blowup" ? " with fill=" + p.param("fill") : std::string{}));
  check_alpha_ell(ell);
  const auto d = known ? *known : densities(t, ell);
  const double g = g_ell(ell, std::min(d.t3, 0.125));
  const double bound = carousel_blowup_bound(ell, std::min(d.t3, 0.125));
  const double eps = tol.value_or(tols.slack(t.size()));
  Verdict v;
  v.margin = d.tl - bound;
  if (d.t3 <= 0.0) {
    v.detail = "t3 = 0";
    return v;
  }
  const bool close = std::abs(v.margin) <= eps;
  const bool below = d.tl < g;
  v.kind = close && below ? VerdictKind::Pass : VerdictKind::Fail;
  v.detail = !close ? "t_ell differs from 2^ell alpha_ell g_ell(t3) by more than the tolerance"
                    : (!below ? "t_ell is not below g_ell(t3)" : "within tolerance and below g_ell");
  return v;
}

struct SandwichInterval {
  double lower = 0;
  double upper = 0;
};

/// [1/2^ell - 2.5/pi^ell, 1/2^ell - 2/pi^ell].
inline SandwichInterval regular_sandwich(int ell) {
  const double base = std::ldexp(1.0, -ell);
  const double pil = std::pow(std::numbers::pi, -ell);
  return {base - 2.5 * pil, base - 2.0 * pil};
}

/// Carousel on N (odd) vertices: t(C_ell) inside the sandwich widened by `tol`
/// (default slack(N)).
inline Verdict check_regular_sandwich(int ell, std::size_t N, std::optional<double> tol = std::nullopt,
                              const Tolerances& tols = default_tolerances()) {
  check_alpha_ell(ell);
  if (N < 3 || N % 2 == 0)
    throw std::invalid_argument("check_regular_sandwich needs an odd N >= 3 (regular tournaments), got " + std::to_string(N));
  const auto t = make_carousel((N - 1) / 2);
  const double tl = density_trace(t, ell).value();
  const auto box = regular_sandwich(ell);
  const double eps = tol.value_or(tols.slack(N));
  Verdict v;
  v.margin = std::min(tl - (box.lower - eps), (box.upper + eps) - tl);
  v.kind = v.margin >= 0.0 ? VerdictKind::Pass : VerdictKind::Fail;
  v.detail = "distance to the nearer end of the widened interval";
  return v;
}

/// Closed-walk density against the spectral route of M/n:
/// |tr(M^ell)/n^ell - Re sum mu^ell|.
inline double trace_spectral_gap(const Tournament& t, double tl, int ell, const Tolerances& tol = default_tolerances()) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    t.for_each_out(static_cast<std::size_t>(i), [&](std::size_t j) { m(i, static_cast<Eigen::Index>(j)) = 1.0; });
  m /= static_cast<double>(n);
  return std::abs(tl - trace_power_via_spectrum(spectrum(m, tol), ell));
}

// ── Sweep configuration ─────────────────────────────────────────────

struct FamilyGrid {
  std::string family;  // transitive | carousel | random | blowup
  std::vector<std::size_t> n;
  std::vector<double> z;
  std::vector<Fill> fill;
  std::vector<std::uint64_t> seeds;
};

struct SweepConfig {
  std::vector<FamilyGrid> families;
  std::vector<int> ell;
  std::string output;  // empty: caller decides
  Tolerances tolerances;
  std::size_t spectral_max_n = 200;  // cross-check with the spectrum up to this size
  unsigned threads = 0;              // 0: hardware concurrency
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
std::vector<T> list_of(const nlohmann::json& j, const std::string& where) {
  std::vector<T> out;
  try {
    if (j.is_array())
      for (const auto& x : j) out.push_back(x.get<T>());
    else
      out.push_back(j.get<T>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return out;
}

inline std::vector<std::uint64_t> seed_list(const nlohmann::json& j, const std::string& where) {
  if (j.is_object()) {
    reject_unknown(j, {"from", "to"}, where);
    if (!j.contains("from") || !j.contains("to")) throw ConfigError(where + ": seed range needs 'from' and 'to'");
    const auto a = j["from"].get<std::uint64_t>(), b = j["to"].get<std::uint64_t>();
    if (b < a) throw ConfigError(where + ": empty seed range");
    std::vector<std::uint64_t> s;
    for (auto x = a; x <= b; ++x) s.push_back(x);
    return s;
  }
  return list_of<std::uint64_t>(j, where);
}

}  // namespace detail

inline SweepConfig parse_sweep_config(const nlohmann::json& j) {
  detail::reject_unknown(j, {"families", "ell", "output", "tolerances", "spectral_max_n", "threads"}, "config");
  SweepConfig c;
  if (!j.contains("families") || !j["families"].is_array() || j["families"].empty())
    throw ConfigError("config: 'families' must be a non-empty array");
  if (!j.contains("ell")) throw ConfigError("config: 'ell' is required");
  c.ell = detail::list_of<int>(j["ell"], "config.ell");
  if (c.ell.empty()) throw ConfigError("config.ell: empty");
  for (int l : c.ell)
    if (l < 4) throw ConfigError("config.ell: every ell must be >= 4, got " + std::to_string(l));
  if (j.contains("output")) c.output = j["output"].get<std::string>();
  if (j.contains("spectral_max_n")) c.spectral_max_n = j["spectral_max_n"].get<std::size_t>();
  if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    detail::reject_unknown(t, {"structural", "eigen", "solve_z", "feasibility", "cluster", "slack_constant"},
                           "config.tolerances");
    auto set = [&](const char* k, double& dst) {
      if (t.contains(k)) dst = t[k].get<double>();
    };
    set("structural", c.tolerances.structural);
    set("eigen", c.tolerances.eigen);
    set("solve_z", c.tolerances.solve_z);
    set("feasibility", c.tolerances.feasibility);
    set("cluster", c.tolerances.cluster);
    set("slack_constant", c.tolerances.slack_constant);
  }

  for (std::size_t i = 0; i < j["families"].size(); ++i) {
    const auto& f = j["families"][i];
    const std::string where = "config.families[" + std::to_string(i) + "]";
    detail::reject_unknown(f, {"family", "n", "z", "fill", "seeds"}, where);
    if (!f.contains("family")) throw ConfigError(where + ": 'family' is required");
    FamilyGrid g;
    g.family = f["family"].get<std::string>();
    if (!f.contains("n")) throw ConfigError(where + ": 'n' is required");
    g.n = detail::list_of<std::size_t>(f["n"], where + ".n");
    auto forbid = [&](const char* k) {
      if (f.contains(k)) throw ConfigError(where + ": key '" + k + "' does not apply to family " + g.family);
    };
    if (g.family == "transitive") {
      forbid("z"), forbid("fill"), forbid("seeds");
    } else if (g.family == "carousel") {
      forbid("z"), forbid("fill"), forbid("seeds");
      for (auto n : g.n)
        if (n % 2 == 0) throw ConfigError(where + ": carousel sizes must be odd, got " + std::to_string(n));
    } else if (g.family == "random") {
      forbid("z"), forbid("fill");
      if (!f.contains("seeds")) throw ConfigError(where + ": random family needs 'seeds'");
      g.seeds = detail::seed_list(f["seeds"], where + ".seeds");
    } else if (g.family == "blowup") {
      if (!f.contains("z")) throw ConfigError(where + ": blowup family needs 'z'");
      g.z = detail::list_of<double>(f["z"], where + ".z");
      for (const auto& s : detail::list_of<std::string>(f.contains("fill") ? f["fill"] : nlohmann::json("random"),
                                                         where + ".fill")) {
        try {
          g.fill.push_back(parse_fill(s));
        } catch (const std::exception& e) {
          throw ConfigError(where + ".fill: " + e.what());
        }
      }
      g.seeds = f.contains("seeds") ? detail::seed_list(f["seeds"], where + ".seeds") : std::vector<std::uint64_t>{1};
    } else {
      throw ConfigError(where + ": unknown family '" + g.family + "'");
    }
    c.families.push_back(std::move(g));
  }
  return c;
}

inline SweepConfig parse_sweep_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_sweep_config(j);
}

// ── Sweep ───────────────────────────────────────────────────────────

struct SweepRecord {
  std::string family;
  std::string params;
  std::size_t n = 0;
  int ell = 0;
  double t3 = 0;
  double tl = 0;
  double g_bound = 0;
  std::optional<double> carousel_bound;
  double margin_g = 0;
  std::optional<double> margin_c;
  std::string verdict;  // "<check>:<pass|fail|skip>" or "none"
  bool invariant_violation = false;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<std::string> errors;  // per-record failures and invariant violations

  std::size_t violations() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) {
             return r.invariant_violation || r.verdict.ends_with(":fail");
           })) +
           errors.size();
  }
};

struct SweepJob {
  std::string family;
  std::size_t n = 0;
  double z = 0;
  Fill fill = Fill::Random;
  std::uint64_t seed = 0;

  Tournament build() const {
    if (family == "transitive") return make_transitive(n);
    if (family == "carousel") return make_carousel((n - 1) / 2);
    if (family == "random") return make_random(n, seed);
    return make_blowup({z, n, fill, seed});
  }

  std::string label() const {
    std::ostringstream os;
    os << family << " n=" << n;
    if (family == "blowup") os << " z=" << z << " fill=" << to_string(fill);
    if (family == "random" || (family == "blowup" && fill == Fill::Random)) os << " seed=" << seed;
    return os.str();
  }
};

inline std::vector<SweepJob> expand_jobs(const SweepConfig& c) {
  std::vector<SweepJob> jobs;
  for (const auto& g : c.families) {
    for (auto n : g.n) {
      if (g.family == "transitive" || g.family == "carousel") {
        jobs.push_back({g.family, n, 0, Fill::Random, 0});
      } else if (g.family == "random") {
        for (auto s : g.seeds) jobs.push_back({g.family, n, 0, Fill::Random, s});
      } else {
        for (double z : g.z)
          for (auto f : g.fill) {
            if (f == Fill::Carousel)
              jobs.push_back({g.family, n, z, f, 0});  // deterministic: seeds do not apply
            else
              for (auto s : g.seeds) jobs.push_back({g.family, n, z, f, s});
          }
      }
    }
  }
  return jobs;
}

namespace detail {

inline std::vector<SweepRecord> evaluate_job(const SweepJob& job, const SweepConfig& c,
                                             std::vector<std::string>& errors) {
  std::vector<SweepRecord> out;
  const Tournament t = job.build();
  const auto& tol = c.tolerances;
  const double slack = tol.slack(t.size());
  const double t3 = density_trace(t, 3).value();
  std::optional<Spectrum> spec;
  if (t.size() <= c.spectral_max_n) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      t.for_each_out(static_cast<std::size_t>(i), [&](std::size_t j) { m(i, static_cast<Eigen::Index>(j)) = 1.0; });
    spec = spectrum(m / static_cast<double>(n), tol);
  }

  for (int ell : c.ell) {
    SweepRecord r;
    r.family = t.provenance().family;
    r.params = t.provenance().params_string();
    r.n = t.size();
    r.ell = ell;
    r.t3 = t3;
    r.tl = density_trace(t, ell).value();
    const double s = std::min(t3, 0.125);
    r.g_bound = g_ell(ell, s);
    r.margin_g = r.tl - r.g_bound;
    if (ell >= 6 && ell % 4 == 2) {
      r.carousel_bound = carousel_blowup_bound(ell, s);
      r.margin_c = r.tl - *r.carousel_bound;
    }

    if (t3 < 0.0 || t3 > 0.125 + slack) {
      r.invariant_violation = true;
      errors.push_back(job.label() + " ell=" + std::to_string(ell) + ": t3 outside [0, 1/8 + slack(n)]");
    }
    if (r.tl < 0.0 || r.tl > 1.0) {
      r.invariant_violation = true;
      errors.push_back(job.label() + " ell=" + std::to_string(ell) + ": t_ell outside [0,1]");
    }
    if (spec) {
      const double gap = std::abs(r.tl - trace_power_via_spectrum(*spec, ell));
      if (gap > 1e-6) {
        r.invariant_violation = true;
        errors.push_back(job.label() + " ell=" + std::to_string(ell) + ": trace and spectral routes differ by " +
                         std::to_string(gap));
      }
    }

    const DensityPair d{t3, r.tl};
    if (ell % 4 != 2) {
      r.verdict = std::string("lower_bound:") + to_string(check_lower_bound(t, ell, tol, std::nullopt, d).kind);
    } else if (r.family == "carousel" || (r.family == "blowup" && job.fill == Fill::Carousel)) {
      r.verdict = std::string("carousel-blowup:") + to_string(check_carousel_blowup(t, ell, std::nullopt, tol, d).kind);
    } else {
      r.verdict = "none";
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

/// Evaluates every (tournament, ell) pair.  Jobs run on worker threads;
/// the output order is canonical (family, n, params, ell) regardless.
inline SweepResult run_sweep(const SweepConfig& c) {
  const auto jobs = expand_jobs(c);
  std::vector<std::vector<SweepRecord>> slots(jobs.size());
  std::vector<std::vector<std::string>> errs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        slots[i] = detail::evaluate_job(jobs[i], c, errs[i]);
      } catch (const std::exception& e) {
        errs[i].push_back(jobs[i].label() + ": " + e.what());
      }
    }
  };
  unsigned nt = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, std::max<std::size_t>(1, jobs.size())));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < nt; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult res;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (auto& r : slots[i]) res.records.push_back(std::move(r));
    for (auto& e : errs[i]) res.errors.push_back(std::move(e));
  }
  std::sort(res.records.begin(), res.records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tie(a.family, a.n, a.params, a.ell) < std::tie(b.family, b.n, b.params, b.ell);
  });
  std::sort(res.errors.begin(), res.errors.end());
  return res;
}

// ── CSV ─────────────────────────────────────────────────────────────

inline constexpr const char* kSweepCsvVersion = "# tourncyc-sweep v1";
inline constexpr const char* kSweepCsvColumns =
    "family,params,n,ell,t3,tl,g_bound,carousel_bound,margin_g,margin_c,verdict";

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out = std::string(kSweepCsvVersion) + "\n" + kSweepCsvColumns + "\n";
  for (const auto& r : records) {
    out += r.family + "," + r.params + "," + std::to_string(r.n) + "," + std::to_string(r.ell) + "," +
           format_real(r.t3) + "," + format_real(r.tl) + "," + format_real(r.g_bound) + "," +
           (r.carousel_bound ? format_real(*r.carousel_bound) : "") + "," + format_real(r.margin_g) + "," +
           (r.margin_c ? format_real(*r.margin_c) : "") + "," + r.verdict + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const SweepRecord& r) {
  nlohmann::json j{{"family", r.family}, {"params", r.params}, {"n", r.n},         {"ell", r.ell},
                   {"t3", r.t3},         {"tl", r.tl},         {"g_bound", r.g_bound}, {"margin_g", r.margin_g},
                   {"verdict", r.verdict}};
  j["carousel_bound"] = r.carousel_bound ? nlohmann::json(*r.carousel_bound) : nlohmann::json(nullptr);
  j["margin_c"] = r.margin_c ? nlohmann::json(*r.margin_c) : nlohmann::json(nullptr);
  return j;
}

}  // namespace tourncyc
