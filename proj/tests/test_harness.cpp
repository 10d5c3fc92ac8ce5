#include <gtest/gtest.h>

#include <numbers>

#include "tourncyc/harness.hpp"

using namespace tourncyc;

TEST(LowerBoundCheck, TransitiveIsOutOfRegime) {
  EXPECT_EQ(check_lower_bound(make_transitive(30), 5).kind, VerdictKind::Skip);
}

TEST(LowerBoundCheck, CarouselPasses) {
  const auto v = check_lower_bound(make_carousel(150), 4);
  EXPECT_EQ(v.kind, VerdictKind::Pass);
  EXPECT_GE(v.margin, -default_tolerances().slack(301));
}

TEST(LowerBoundCheck, RandomBlowUpSitsOnTheBound) {
  // t3 ~ 0.09 is below the regime, so the verdict is skip; the margin is
  // still reported and the construction tracks g_8 closely.
  const auto t = make_blowup({0.9, 240, Fill::Random, 4});
  const auto v = check_lower_bound(t, 8);
  EXPECT_EQ(v.kind, VerdictKind::Skip);
  EXPECT_LT(std::abs(v.margin), 5e-4);
}

TEST(LowerBoundCheck, RejectsTwoModFour) {
  EXPECT_THROW(check_lower_bound(make_carousel(5), 6), std::invalid_argument);
  EXPECT_THROW(check_lower_bound(make_carousel(5), 3), std::invalid_argument);
}

TEST(LowerBoundCheck, FailsWhenTheAllowanceIsNegative) {
  // A forced negative allowance turns an on-the-bound pass into a failure.
  const auto v = check_lower_bound(make_carousel(20), 4, default_tolerances(), -1.0);
  EXPECT_EQ(v.kind, VerdictKind::Fail);
}

TEST(CarouselBlowUpCheck, SingleCarouselMatchesAlpha) {
  const auto t = make_carousel(150);
  const double tl = density_trace(t, 6).value();
  EXPECT_NEAR(tl, 13.0 / 960.0, 1e-3);
  EXPECT_NEAR(carousel_blowup_bound(6, 0.125), std::ldexp(13.0 / 960.0, 6) / 64.0, 1e-15);
  EXPECT_EQ(check_carousel_blowup(t, 6).kind, VerdictKind::Pass);
}

TEST(CarouselBlowUpCheck, StrictlyBelowTheRandomBound) {
  const auto t = make_blowup({0.6, 300, Fill::Carousel, 0});
  const auto d = densities(t, 6);
  const double g = g_ell(6, d.t3), c = carousel_blowup_bound(6, d.t3);
  EXPECT_LT(d.tl, g);
  EXPECT_GT(g - d.tl, 0.5 * (g - c));
  EXPECT_EQ(check_carousel_blowup(t, 6, 2e-3).kind, VerdictKind::Pass);
}

TEST(CarouselBlowUpCheck, RejectsOtherFamilies) {
  EXPECT_THROW(check_carousel_blowup(make_random(30, 1), 6), std::invalid_argument);
  EXPECT_THROW(check_carousel_blowup(make_blowup({0.5, 30, Fill::Random, 1}), 6), std::invalid_argument);
  EXPECT_THROW(check_carousel_blowup(make_carousel(5), 7), std::invalid_argument);
  EXPECT_THROW(make_blowup({0.02, 60, Fill::Carousel, 0}), std::invalid_argument);
}

TEST(RegularSandwichCheck, CarouselInsideInterval) {
  const auto box = regular_sandwich(6);
  EXPECT_NEAR(box.upper, 1.0 / 64.0 - 2.0 / std::pow(std::numbers::pi, 6), 1e-16);
  EXPECT_NEAR(box.upper, 0.013545, 1e-6);
  EXPECT_EQ(check_regular_sandwich(6, 301, 0.0).kind, VerdictKind::Pass);
  // At ell = 10 the finite-N deficit (~1.4e-5 at N = 501) exceeds the
  // interval width, so the default slack(N) tolerance is needed.
  EXPECT_EQ(check_regular_sandwich(10, 501).kind, VerdictKind::Pass);
  EXPECT_NEAR(density_trace(make_carousel(250), 10).value(), regular_sandwich(10).upper, 2.5e-5);
  EXPECT_THROW(check_regular_sandwich(6, 4), std::invalid_argument);
  EXPECT_THROW(check_regular_sandwich(8, 5), std::invalid_argument);
}

TEST(TraceSpectralRoutes, Agree) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto t = make_random(50 + 30 * s, s);
    for (int l = 3; l <= 8; ++l) EXPECT_LE(trace_spectral_gap(t, density_trace(t, l).value(), l), 1e-6);
  }
}

TEST(SweepConfig, ParsesFamiliesAndRanges) {
  const auto c = parse_sweep_config_text(R"({
    "families": [
      {"family": "transitive", "n": [10, 20]},
      {"family": "random", "n": 12, "seeds": {"from": 1, "to": 3}},
      {"family": "blowup", "n": [30], "z": [0.4, 0.6], "fill": ["random", "carousel"], "seeds": [5]}
    ],
    "ell": [4, 6],
    "tolerances": {"slack_constant": 3.0}
  })");
  EXPECT_EQ(c.families.size(), 3u);
  EXPECT_EQ(c.families[1].seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(c.tolerances.slack_constant, 3.0);
  EXPECT_EQ(expand_jobs(c).size(), 2u + 3u + 4u);
}

TEST(SweepConfig, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_sweep_config_text(R"({"families":[{"family":"transitive","n":[3]}],"ell":[4],"bogus":1})"),
               ConfigError);
  EXPECT_THROW(parse_sweep_config_text(R"({"families":[{"family":"transitive","n":[3],"seed":1}],"ell":[4]})"),
               ConfigError);
  EXPECT_THROW(parse_sweep_config_text(R"({"families":[{"family":"carousel","n":[4]}],"ell":[4]})"), ConfigError);
  EXPECT_THROW(parse_sweep_config_text(R"({"families":[{"family":"transitive","n":[3]}],"ell":[3]})"), ConfigError);
  EXPECT_THROW(parse_sweep_config_text(R"({"families":[{"family":"random","n":[3]}],"ell":[4]})"), ConfigError);
  EXPECT_THROW(parse_sweep_config_text(R"({"families":[{"family":"blowup","n":[9],"z":[0.5],"fill":"empty"}],"ell":[4]})"),
               ConfigError);
  EXPECT_THROW(parse_sweep_config_text(R"({"families":[],"ell":[4]})"), ConfigError);
  EXPECT_THROW(parse_sweep_config_text("{"), ConfigError);
}

TEST(Sweep, TransitiveRecordsAreZero) {
  const auto c = parse_sweep_config_text(R"({"families":[{"family":"transitive","n":[10,20]}],"ell":[4]})");
  const auto res = run_sweep(c);
  ASSERT_EQ(res.records.size(), 2u);
  for (const auto& r : res.records) {
    EXPECT_EQ(r.tl, 0.0);
    EXPECT_EQ(r.t3, 0.0);
    EXPECT_EQ(r.margin_g, 0.0);
    EXPECT_NE(r.verdict, "lower_bound:fail");
  }
  EXPECT_EQ(res.violations(), 0u);
}

TEST(Sweep, CarouselRecord) {
  const auto res = run_sweep(parse_sweep_config_text(R"({"families":[{"family":"carousel","n":[301]}],"ell":[6]})"));
  ASSERT_EQ(res.records.size(), 1u);
  const auto& r = res.records[0];
  EXPECT_NEAR(r.tl, 13.0 / 960.0, 1e-3);
  EXPECT_NEAR(r.t3, 0.125 - 1.0 / (8.0 * 301 * 301), 1e-15);
  ASSERT_TRUE(r.carousel_bound.has_value());
  EXPECT_EQ(r.verdict, "carousel-blowup:pass");
}

TEST(Sweep, RandomMarginsWithinSlack) {
  const auto res = run_sweep(parse_sweep_config_text(
      R"({"families":[{"family":"random","n":[60],"seeds":{"from":1,"to":100}}],"ell":[4],"spectral_max_n":0})"));
  ASSERT_EQ(res.records.size(), 100u);
  double worst = 1;
  for (const auto& r : res.records) worst = std::min(worst, r.margin_g);
  EXPECT_GE(worst, -0.02);
  EXPECT_EQ(res.violations(), 0u);
}

TEST(Sweep, CsvIsCanonicalAndStable) {
  const char* cfg = R"({"families":[
      {"family":"random","n":[25,15],"seeds":[3,1,2]},
      {"family":"blowup","n":[40],"z":[0.5],"fill":["carousel","random"],"seeds":[2]},
      {"family":"carousel","n":[21]}],
    "ell":[7,4,6],"threads":3})";
  const auto a = to_csv(run_sweep(parse_sweep_config_text(cfg)).records);
  const auto b = to_csv(run_sweep(parse_sweep_config_text(cfg)).records);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# tourncyc-sweep v1\nfamily,params,n,ell,t3,tl,g_bound,carousel_bound,margin_g,margin_c,verdict\n", 0),
            0u);
  // 6 random + 2 blow-up + 1 carousel tournaments, 3 lengths each.
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 2 + 27);
  const auto rec = run_sweep(parse_sweep_config_text(cfg)).records;
  for (std::size_t i = 1; i < rec.size(); ++i)
    EXPECT_LE(std::tie(rec[i - 1].family, rec[i - 1].n, rec[i - 1].params, rec[i - 1].ell),
              std::tie(rec[i].family, rec[i].n, rec[i].params, rec[i].ell));
}

TEST(Sweep, PerRecordFailuresAreLoggedAndTheSweepContinues) {
  // z = 0.05 with carousel fill cannot be built at n = 40; the rest still runs.
  const auto res = run_sweep(parse_sweep_config_text(
      R"({"families":[{"family":"blowup","n":[40],"z":[0.05,0.5],"fill":"carousel"}],"ell":[4]})"));
  EXPECT_EQ(res.records.size(), 1u);
  ASSERT_EQ(res.errors.size(), 1u);
  EXPECT_GT(res.violations(), 0u);
}

TEST(Csv, FifteenSignificantDigits) {
  EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333333");
  EXPECT_EQ(format_real(0.0), "0");
}
