// tourncyc: command-line front end for the cycle-density library.
//
// Exit codes: 0 clean, 1 invariant violation, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tourncyc/tourncyc.hpp"

using nlohmann::json;
using namespace tourncyc;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  double tolerance = -1;  // < 0: library defaults
  std::string format;
  std::string out;

  Tolerances tolerances() const {
    Tolerances t;
    if (tolerance >= 0) {
      t.structural = tolerance;
      t.feasibility = tolerance;
    }
    return t;
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + g.out + "'");
  f << text;
}

void emit(const Globals& g, const json& j) { emit(g, j.dump(2) + "\n"); }

Tournament load(const std::string& path) {
  try {
    return parse_any(read_file(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string rational_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle densities in tournaments: constructions, counts, spectra and extremal bounds"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--tolerance", g.tolerance, "Structural and feasibility tolerance override");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--out", g.out, "Write output to PATH instead of stdout");

  int rc = 0;

  // generate
  std::string family = "random";
  std::size_t n = 10;
  double z = 0.5;
  std::string fill = "random";
  auto* gen = app.add_subcommand("generate", "Build a tournament (text format, or JSON with --format json)");
  gen->add_option("--family", family)->check(CLI::IsMember({"transitive", "carousel", "random", "blowup"}));
  gen->add_option("--n", n, "Vertex count (odd for carousel)")->required();
  gen->add_option("--z", z, "Blow-up part ratio");
  gen->add_option("--fill", fill, "Blow-up fill")->check(CLI::IsMember({"random", "carousel"}));
  gen->callback([&] {
    Tournament t = [&] {
      if (family == "transitive") return make_transitive(n);
      if (family == "carousel") {
        if (n % 2 == 0) throw UsageError("carousel needs an odd --n");
        return make_carousel((n - 1) / 2);
      }
      if (family == "random") return make_random(n, g.seed);
      return make_blowup({z, n, parse_fill(fill), g.seed});
    }();
    if (g.format == "json")
      emit(g, to_json(t).dump() + "\n");
    else
      emit(g, to_text(t));
  });

  // density
  std::string input;
  int ell = 3;
  bool oracle = false;
  auto* den = app.add_subcommand("density", "Exact t(C_ell, T)");
  den->add_option("--input", input)->required();
  den->add_option("--ell", ell)->required();
  den->add_flag("--oracle", oracle, "Cross-check with brute-force enumeration");
  den->callback([&] {
    const auto t = load(input);
    const auto r = density_trace(t, ell);
    json j{{"n", r.n}, {"ell", r.ell}, {"hom_count", r.hom_count.str()}, {"density", rational_string(r.density)},
           {"value", r.value()}};
    if (oracle) {
      const auto b = density_bruteforce(t, ell);
      j["oracle_hom_count"] = b.hom_count.str();
      j["agree"] = b.hom_count == r.hom_count;
      if (b.hom_count != r.hom_count) rc = 1;
    }
    emit(g, j);
  });

  // spectrum
  auto* spc = app.add_subcommand("spectrum", "Eigenvalues of the tournament matrix (I/2 + M)/n");
  spc->add_option("--input", input)->required();
  spc->callback([&] {
    const auto m = tournament_matrix(load(input));
    const auto s = spectrum(m, g.tolerances());
    json arr = json::array();
    for (const auto& ev : s.eigenvalues) arr.push_back({{"re", ev.real()}, {"im", ev.imag()}});
    if (!check_spectrum(s, m).ok(g.tolerances())) {
      std::cerr << "spectrum violates a structural constraint\n";
      rc = 1;
    }
    emit(g, arr);
  });

  // dn-radius
  std::size_t dn = 2;
  auto* dnr = app.add_subcommand("dn-radius", "Spectral radius of the skew matrix D_n");
  dnr->add_option("--n", dn)->required()->check(CLI::PositiveNumber);
  dnr->callback([&] {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g\n", dn_spectral_radius(dn));
    emit(g, std::string(buf));
  });

  // extremal
  double p = 3, q = 4, C = 0.5, s = 0.125;
  bool use_g = false, use_alpha = false;
  auto* ext = app.add_subcommand("extremal", "f_{p,q}(C), g_ell(s) or alpha_ell");
  ext->add_option("--p", p);
  ext->add_option("--q", q);
  ext->add_option("--C", C);
  ext->add_flag("--g", use_g, "Evaluate g_ell(s)");
  ext->add_flag("--alpha", use_alpha, "Evaluate alpha_ell");
  ext->add_option("--ell", ell);
  ext->add_option("--s", s);
  ext->callback([&] {
    if (use_alpha) {
      const auto exact = alpha_ell_exact(ell);
      emit(g, json{{"ell", ell}, {"series", alpha_ell(ell)}, {"exact", rational_string(exact)},
                   {"value", static_cast<double>(exact)}});
      return;
    }
    const auto pt = use_g ? g_ell_point(ell, s) : f_pq_point(p, q, C);
    emit(g, json{{"z", pt.z}, {"m", pt.m}, {"value", pt.value}});
  });

  // normopt
  std::size_t oracle_k = 0;
  auto* nop = app.add_subcommand("normopt", "min sum w^q on the simplex subject to sum w^p = C");
  nop->add_option("--p", p)->required();
  nop->add_option("--q", q)->required();
  nop->add_option("--C", C)->required();
  nop->add_option("--oracle", oracle_k, "Also run the structure-free oracle in dimension k");
  nop->callback([&] {
    const auto sol = minimize_qnorm(p, q, C);
    json j{{"m", sol.m}, {"z", sol.z}, {"r", sol.r}, {"value", sol.value}};
    if (oracle_k > 0) {
      OracleOptions opt;
      opt.seed = g.seed;
      const auto o = oracle_min_qnorm(p, q, C, oracle_k, opt);
      j["oracle_value"] = o.value;
      j["gap"] = o.value - sol.value;
    }
    emit(g, j);
  });

  // optstar
  OptInstance inst;
  std::size_t samples = 10000;
  bool no_refine = false;
  auto* opt = app.add_subcommand("optstar", "Search OPT for points below g_ell(sigma)");
  opt->add_option("--ell", inst.ell)->required();
  opt->add_option("--sigma", inst.sigma)->required();
  opt->add_option("--s", inst.s)->required();
  opt->add_option("--t", inst.t)->required();
  opt->add_option("--rho", inst.rho)->required();
  opt->add_option("--samples", samples)->capture_default_str();
  opt->add_flag("--no-refine", no_refine, "Skip local refinement");
  opt->callback([&] {
    const auto tol = g.tolerances();
    json j;
    try {
      const auto pts = sample_feasible(inst, g.seed, samples, tol);
      const auto c = check_star(inst, pts, !no_refine, 16, tol);
      j = {{"min_found", c.min_found}, {"g_ell", c.g_ell}, {"margin", c.margin}, {"in_regime", c.in_regime}};
      if (!c.notice.empty()) j["notice"] = c.notice;
      if (c.in_regime && c.margin < -1e-9) rc = 1;
    } catch (const FeasibleSetEmpty& e) {
      j = {{"min_found", nullptr}, {"g_ell", g_ell(inst.ell, inst.sigma)}, {"margin", nullptr},
           {"notice", e.what()}};
    }
    emit(g, j);
  });

  // sweep
  std::string config_path;
  auto* swp = app.add_subcommand("sweep", "Evaluate a sweep configuration (JSON) and write CSV");
  swp->add_option("--config", config_path)->required();
  swp->callback([&] {
    SweepConfig cfg;
    try {
      cfg = parse_sweep_config_text(read_file(config_path));
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
    if (g.tolerance >= 0) cfg.tolerances.structural = g.tolerance;
    if (g.out.empty()) g.out = cfg.output;
    const auto res = run_sweep(cfg);
    for (const auto& e : res.errors) std::cerr << "sweep: " << e << "\n";
    if (g.format == "json") {
      json arr = json::array();
      for (const auto& r : res.records) arr.push_back(to_json(r));
      emit(g, arr);
    } else {
      emit(g, to_csv(res.records));
    }
    if (res.violations() > 0) rc = 1;
  });

  // verify
  std::vector<int> ells{4, 5, 6, 7, 8};
  auto* ver = app.add_subcommand("verify", "Invariant checks and bound verdicts for one tournament");
  ver->add_option("--input", input)->required();
  ver->add_option("--ell", ells, "Cycle lengths to check");
  ver->callback([&] {
    const auto tol = g.tolerances();
    const auto t = load(input);
    const auto m = tournament_matrix(t);
    const auto spec = spectrum(m, tol);
    const auto sc = check_spectrum(spec, m);
    const double t3 = density_trace(t, 3).value();
    bool bad = !sc.ok(tol) || sum_identity_error(m) > tol.structural || t3 > 0.125 + tol.slack(t.size());
    json checks{{"spectral_ok", sc.ok(tol)},
                {"min_real", sc.min_real},
                {"trace_error", sc.trace_error},
                {"conjugate_error", sc.conjugate_error},
                {"max_imag_sq", sc.max_imag_sq},
                {"sum_identity_error", sum_identity_error(m)},
                {"t3", t3}};
    json verdicts = json::array();
    for (int l : ells) {
      json v{{"ell", l}};
      const double tl = density_trace(t, l).value();
      v["tl"] = tl;
      if (t.size() <= 200) {
        const double gap = trace_spectral_gap(t, tl, l, tol);
        v["spectral_gap"] = gap;
        bad = bad || gap > 1e-6;
      }
      if (l < 4) {
        v["check"] = "none";
      } else if (l % 4 != 2) {
        const auto r = check_lower_bound(t, l, tol, std::nullopt, DensityPair{t3, tl});
        v["check"] = "lower_bound";
        v["verdict"] = to_string(r.kind);
        v["margin"] = r.margin;
        bad = bad || r.failed();
      } else if (t.provenance().family == "blowup" || t.provenance().family == "carousel") {
        try {
          const auto r = check_carousel_blowup(t, l, std::nullopt, tol, DensityPair{t3, tl});
          v["check"] = "carousel-blowup";
          v["verdict"] = to_string(r.kind);
          v["margin"] = r.margin;
          bad = bad || r.failed();
        } catch (const std::invalid_argument&) {
          v["check"] = "none";
        }
      } else {
        v["check"] = "none";
      }
      verdicts.push_back(v);
    }
    emit(g, json{{"n", t.size()}, {"checks", checks}, {"verdicts", verdicts}, {"ok", !bad}});
    if (bad) rc = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
