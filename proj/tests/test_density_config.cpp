#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <string>

#include "bi/config.hpp"
#include "bi/density.hpp"

using namespace bi;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gaussian term: charge, norms, sampling") {
  DensityTerm t;
  t.kind = DensityTerm::Kind::gaussian;
  t.weight = -2.5;
  t.width = 0.4;
  CHECK(t.total_charge() == doctest::Approx(-2.5).epsilon(1e-15));
  // L1 norm of a normalized gaussian is |weight|
  CHECK(t.lp_norm(1.0) == doctest::Approx(2.5).epsilon(1e-12));
  // L2 norm: |w| (2 pi s^2)^{-3/2} (pi s^2)^{3/4}
  const double s2 = t.width * t.width;
  const double exact =
      2.5 * std::pow(2.0 * kPi * s2, -1.5) * std::pow(kPi * s2, 0.75);
  CHECK(t.lp_norm(2.0) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(t.value_at({0, 0, 0}) ==
        doctest::Approx(-2.5 * std::pow(2.0 * kPi * s2, -1.5)).epsilon(1e-13));
}

TEST_CASE("ball term: volume-based quantities") {
  DensityTerm t;
  t.kind = DensityTerm::Kind::ball_constant;
  t.weight = 3.0;
  t.width = 1.0;
  CHECK(t.total_charge() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(t.lp_norm(1.0) == doctest::Approx(3.0 * 4.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(t.value_at({0.5, 0.5, 0.5}) == 3.0);
  CHECK(t.value_at({1.0, 1.0, 1.0}) == 0.0);
}

TEST_CASE("power bump: integrability threshold") {
  DensityTerm t;
  t.kind = DensityTerm::Kind::radial_power_bump;
  t.weight = 1.0;
  t.width = 1.0;
  t.exponent = 0.5;
  CHECK(t.lp_norm(4.0) > 0.0);  // s p = 2 < 3, finite
  t.exponent = 0.75;
  CHECK_THROWS(t.lp_norm(4.0));  // boundary case s p = 3 rejected
  t.exponent = 0.5;
  // total charge: 4 pi int_0^1 r^{1.5} dr = 4 pi / 2.5
  CHECK(t.total_charge() == doctest::Approx(4.0 * kPi / 2.5).epsilon(1e-12));
}

TEST_CASE("multi-term density: superposition and radial reduction") {
  ChargeDensity d;
  DensityTerm a;
  a.kind = DensityTerm::Kind::gaussian;
  a.weight = -1.0;
  a.width = 0.5;
  DensityTerm b;
  b.kind = DensityTerm::Kind::ball_constant;
  b.weight = 0.5;
  b.width = 0.8;
  d.terms = {a, b};
  CHECK(d.total_charge() ==
        doctest::Approx(a.total_charge() + b.total_charge()).epsilon(1e-12));
  CHECK(d.radial_about_origin());
  const RadialDensity rd = d.radial();
  CHECK(rd.profile(0.3) == doctest::Approx(d.value_at({0.3, 0, 0})).epsilon(1e-12));
  DensityTerm off = a;
  off.center = {1.0, 0.0, 0.0};
  d.terms.push_back(off);
  CHECK(!d.radial_about_origin());
}

TEST_CASE("grid sampling hits the closed form at nodes") {
  ChargeDensity d;
  DensityTerm t;
  t.kind = DensityTerm::Kind::gaussian;
  t.weight = 2.0;
  t.width = 0.7;
  d.terms = {t};
  Grid g(2.0, 8);
  const ScalarField s = sample_density(d, g);
  for (int i : {1, 4, 7}) {
    const auto x = g.point(i, 4, 4);
    CHECK(s(i, 4, 4) == doctest::Approx(d.value_at(x)).epsilon(1e-14));
  }
}

TEST_CASE("mollified point samples carry the exact total charge") {
  const double pi = std::acos(-1.0);
  ChargeDensity d;
  DensityTerm t;
  t.kind = DensityTerm::Kind::mollified_point;
  t.weight = -4.0 * pi;
  t.width = 0.1;
  d.terms = {t};
  Grid g(4.0, 16);  // h = 0.5 >> sigma: raw point samples alias badly
  const ScalarField s = sample_density(d, g);
  double q = 0.0;
  for (double v : s.values) q += v;
  q *= g.cell_volume();
  CHECK(q == doctest::Approx(-4.0 * pi).epsilon(1e-12));
  // a plain gaussian of the same shape stays raw (its h^3-sum drifts)
  d.terms[0].kind = DensityTerm::Kind::gaussian;
  const ScalarField raw = sample_density(d, g);
  double qr = 0.0;
  for (double v : raw.values) qr += v;
  qr *= g.cell_volume();
  CHECK(std::abs(qr + 4.0 * pi) > 1e-3);
}

TEST_CASE("config round-trip through canonical emission") {
  RunConfig c;
  c.half_width = 6.0;
  c.cells = 32;
  DensityTerm t;
  t.kind = DensityTerm::Kind::mollified_point;
  t.weight = -4.0 * kPi;
  t.width = 0.1;
  c.density.terms = {t};
  c.solver.kind = SolverKind::fixed_point;
  c.solver.theta = 0.05;
  c.solver.schedule = {0.25, 0.5, 1.0};
  c.audits.run = {"l2_identity", "tail_bound"};
  c.audits.tail_k = 3.0;
  c.output.directory = "elsewhere";
  const std::string text = emit_config(c);
  const RunConfig back = parse_config(text);
  CHECK(back == c);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_config("[grid]\nbogus_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nonsense]\n"), ConfigError);
  try {
    parse_config("[grid]\ncells = 16\nhalf_width = 2\ncells = 32\n");
    FAIL("duplicate key accepted");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2") != std::string::npos);
    CHECK(msg.find("4") != std::string::npos);
  }
}

TEST_CASE("density sections must be consecutive from 1") {
  const char* good =
      "[density.1]\nkind = gaussian\nweight = 1\nwidth = 0.5\n"
      "[density.2]\nkind = ball_constant\nweight = 2\nwidth = 0.3\n";
  const RunConfig c = parse_config(good);
  CHECK(c.density.terms.size() == 2);
  CHECK_THROWS_AS(parse_config("[density.2]\nkind = gaussian\nweight = 1\n"),
                  ConfigError);
}

TEST_CASE("overrides") {
  RunConfig c = parse_config("[grid]\ncells = 16\n");
  apply_override(c, "solver.theta=0.25");
  CHECK(c.solver.theta == 0.25);
  apply_override(c, "grid.cells=24");
  CHECK(c.cells == 24);
  CHECK_THROWS_AS(apply_override(c, "solver.not_a_key=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "no_dot"), ConfigError);
}

TEST_CASE("kind names round-trip") {
  for (auto k : {DensityTerm::Kind::gaussian, DensityTerm::Kind::ball_constant,
                 DensityTerm::Kind::radial_power_bump,
                 DensityTerm::Kind::mollified_point}) {
    auto back = kind_from_name(kind_name(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK(!kind_from_name("plasma").has_value());
}
