// End-to-end acceptance gate: ten numbered criteria, one pass/fail line
// each, nonzero exit when any fails. Criteria 3/9 run the point-charge
// continuation study at m = 48 and m = 96 and take most of the runtime.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bi/config.hpp"
#include "bi/density.hpp"
#include "bi/diagnostics.hpp"
#include "bi/fixed_point.hpp"
#include "bi/grid.hpp"
#include "bi/lagrangian.hpp"
#include "bi/quadrature.hpp"
#include "bi/minimizer.hpp"
#include "bi/radial.hpp"
#include "bi/run.hpp"

#ifndef BI_CONFIG_DIR
#define BI_CONFIG_DIR "configs"
#endif

using namespace bi;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what,
            const std::string& detail) {
  std::printf("criterion %2d %s  %-28s %s\n", criterion, ok ? "PASS" : "FAIL",
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------- criterion 1
void kernel_identities() {
  std::mt19937_64 rng(20260823);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto rand_in_ball = [&](double radius) {
    std::array<double, 3> x{};
    for (;;) {
      for (auto& c : x) c = unit(rng);
      const double n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      if (n2 <= 1.0 && n2 > 1e-12) {
        for (auto& c : x) c *= radius;
        return x;
      }
    }
  };
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::uniform_real_distribution<double> rad(0.0, 0.99);
    const auto xi = rand_in_ball(rad(rng));
    const LagrangianEval e = eval_full(std::span<const double>(xi));
    const double nu = e.nu, nu3 = nu * nu * nu;
    const auto rel = [](double got, double want) {
      return std::abs(got - want) / std::max(std::abs(want), 1.0);
    };
    // D2F xi = nu^3 xi and A xi = xi (uses nu^-2 + |xi|^2 = 1 exactly)
    for (int r = 0; r < 3; ++r) {
      double hx = 0.0, ax = 0.0;
      for (int c = 0; c < 3; ++c) {
        hx += e.hess[3 * r + c] * xi[c];
        ax += e.a[3 * r + c] * xi[c];
      }
      worst = std::max({worst, rel(hx, nu3 * xi[r]), rel(ax, xi[r])});
    }
    // entrywise factorizations D2F = nu I + nu^3 xi(x)xi, A = nu^-3 D2F
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const double h_rc = (r == c ? nu : 0.0) + nu3 * xi[r] * xi[c];
        worst = std::max(worst, rel(e.hess[3 * r + c], h_rc));
        worst = std::max(worst, rel(e.a[3 * r + c], e.hess[3 * r + c] / nu3));
      }
    // gradient DF = nu xi
    for (int c = 0; c < 3; ++c) worst = std::max(worst, rel(e.grad[c], nu * xi[c]));
    // ellipticity sandwiches on a random unit direction
    auto dir = rand_in_ball(1.0);
    const double dn =
        std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    for (auto& c : dir) c /= dn;
    double qh = 0.0, qa = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        qh += dir[r] * e.hess[3 * r + c] * dir[c];
        qa += dir[r] * e.a[3 * r + c] * dir[c];
      }
    const double tol = 1e-12;
    if (qh < nu * (1.0 - tol) || qh > nu3 * (1.0 + tol)) worst = std::max(worst, 1.0);
    if (qa < (1.0 - tol) / (nu * nu) || qa > 1.0 + tol) worst = std::max(worst, 1.0);
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst relative deviation %.2e on 1e4 points",
                worst);
  report(1, worst <= 1e-12, "kernel identities", buf);
}

// ---------------------------------------------------------------- criterion 2
void barrier_oracle() {
  const double pi = std::acos(-1.0);
  RadialDensity point;
  point.point_charge = -4.0 * pi;  // a_eff = 1
  const RadialSolution sol(point, 3, 32.0);
  double worst_flux = 0.0;
  for (double r : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0})
    worst_flux = std::max(worst_flux,
                          std::abs(sol.flux(r) - 4.0 * pi) / (4.0 * pi));
  // w_{1,0}(inf) through two different head/tail decompositions (distinct
  // adaptive node sets); tail beyond the split by t = 1/s
  const auto w_inf = [&](double split) {
    const double head = barrier_w(1.0, 0.0, 3, split, 1e-10);
    const auto slope = [](double r) {
      return 1.0 / std::sqrt(r * r * r * r + 1.0);
    };
    return head + integrate_to_inf(slope, split, 1e-10);
  };
  const double w_a = w_inf(10.0), w_b = w_inf(25.0);
  const bool ok = worst_flux <= 1e-6 && std::abs(w_a - w_b) <= 1e-8;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "flux dev %.2e, w(inf) = %.12f, tolerance spread %.2e",
                worst_flux, w_b, std::abs(w_a - w_b));
  report(2, ok, "barrier oracle", buf);
}

// ------------------------------------------------------- criteria 3, 9 driver
struct PointChargeRun {
  std::vector<SolveReport> stages;
  SolveReport certified;  // minimize warm-started from the last stage
  double annulus_error = 1.0;
};

ChargeDensity point_charge_density() {
  const double pi = std::acos(-1.0);
  ChargeDensity d;
  DensityTerm t;
  t.kind = DensityTerm::Kind::mollified_point;
  t.weight = -4.0 * pi;
  t.width = 0.1;
  d.terms = {t};
  return d;
}

PointChargeRun solve_point_charge(int m, const RadialSolution& oracle) {
  const ChargeDensity d = point_charge_density();
  const Grid grid(4.0, m);
  TauPolicy policy;
  policy.theta = 0.001;
  FixedPointOptions opts;
  const std::vector<double> schedule{0.05, 0.1, 0.2, 0.35, 0.55, 0.75, 0.9, 1.0};

  PointChargeRun out;
  out.stages = continuation_solve(d, grid, schedule, policy, opts);

  MinimizeOptions mopts;
  out.certified = minimize(d, grid, mopts, &out.stages.back().u);

  // relative L-inf error over the annulus: max|u - ref| / max|ref|
  double err_max = 0.0, ref_max = 0.0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      for (int k = 0; k <= m; ++k) {
        const auto x = grid.point(i, j, k);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (r < 0.5 || r > 3.0) continue;
        const double ref = oracle.value(r);
        err_max = std::max(err_max, std::abs(out.certified.u(i, j, k) - ref));
        ref_max = std::max(ref_max, std::abs(ref));
      }
  out.annulus_error = err_max / ref_max;
  return out;
}

// ---------------------------------------------------------------- criteria 4-7
struct SuiteEntry {
  std::string name;
  RunConfig cfg;
  SolveReport min_rep;  // filled by solver_agreement
};

std::vector<SuiteEntry> load_suite() {
  const std::string dir = BI_CONFIG_DIR;
  std::vector<SuiteEntry> suite;
  for (const char* name :
       {"gaussian", "two_gaussians", "ball_uniform", "power_bump"}) {
    SuiteEntry e;
    e.name = name;
    e.cfg = parse_config_file(dir + "/" + name + ".cfg");
    suite.push_back(std::move(e));
  }
  return suite;
}

void solver_agreement(std::vector<SuiteEntry>& suite) {
  double worst = 0.0;
  std::string detail;
  bool ok = true;
  for (auto& e : suite) {
    const Grid grid(e.cfg.half_width, 64);
    MinimizeOptions mopts;
    e.min_rep = minimize(e.cfg.density, grid, mopts);
    TauPolicy policy;
    FixedPointOptions fopts;
    const SolveReport fp = fixed_point_solve(e.cfg.density, grid, policy, fopts);
    ok = ok && e.min_rep.converged && fp.converged;
    const VectorField gm = centered_gradient(e.min_rep.u);
    const VectorField gf = centered_gradient(fp.u);
    double diff = 0.0, scale = 0.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < gm.comp[c].size(); ++i) {
        const double dd = gm.comp[c][i] - gf.comp[c][i];
        diff += dd * dd;
        scale += gm.comp[c][i] * gm.comp[c][i];
      }
    worst = std::max(worst, std::sqrt(diff / scale));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst ||Du_min - Du_fp||/||Du_min|| = %.2e",
                worst);
  report(4, ok && worst <= 1e-3, "solver agreement (m=64)", buf);
}

void spacelike_margins(const std::vector<SuiteEntry>& suite,
                       const PointChargeRun& pc48) {
  double min_theta = 1.0;
  bool all_positive = true;
  for (const auto& e : suite) {
    min_theta = std::min(min_theta, e.min_rep.theta);
    all_positive = all_positive && e.min_rep.theta > 0.0;
  }
  for (const auto& s : pc48.stages)
    all_positive = all_positive && s.theta > 0.0;
  all_positive = all_positive && pc48.certified.theta > 0.0;
  char buf[96];
  std::snprintf(buf, sizeof buf,
                "suite min theta = %.3f, stiff-run theta = %.4f", min_theta,
                pc48.certified.theta);
  report(5, all_positive && min_theta >= 0.3, "strict spacelikeness", buf);
}

void explicit_constant_audits(const std::vector<SuiteEntry>& suite) {
  bool ok = true;
  double worst = 0.0;
  for (const auto& e : suite) {
    const ScalarField& u = e.min_rep.u;
    const AuditResult tail =
        tail_bound_audit(u, e.cfg.density, 2.0, 4.0, e.min_rep.sup_u);
    const AuditResult cac = caccioppoli_audit(
        u, sample_density(e.cfg.density, u.grid), 4.0, {0, 0, 0}, 1.0, 2.0);
    ok = ok && tail.passed && cac.passed;
    worst = std::max({worst, tail.ratio(), cac.ratio()});
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst lhs/rhs ratio = %.3f", worst);
  report(6, ok, "explicit-constant audits", buf);
}

void l2_identities(const std::vector<SuiteEntry>& suite) {
  bool ok = true;
  double worst = 0.0;
  for (const auto& e : suite) {
    const auto audits =
        l2_identity_audit(e.min_rep.u, sample_density(e.cfg.density, e.min_rep.u.grid),
                          e.cfg.density.total_charge(), e.min_rep.residual_norm);
    ok = ok && audits[0].passed && audits[1].passed;
    worst = std::max(worst, std::abs(audits[1].lhs - audits[1].rhs) /
                                std::max(std::abs(audits[1].rhs), 1e-30));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst identity deviation = %.2e", worst);
  report(7, ok, "L2 identity", buf);
}

// ---------------------------------------------------------------- criterion 8
void decay_slope() {
  ChargeDensity d;
  DensityTerm t;
  t.kind = DensityTerm::Kind::gaussian;
  t.weight = -2.0;
  t.width = 0.5;
  d.terms = {t};
  const Grid grid(8.0, 64);
  MinimizeOptions opts;
  const SolveReport rep = minimize(d, grid, opts);
  const double s = rep.converged ? decay_fit(rep.u, 4.0, 7.0) : 0.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "fitted log-log slope = %.4f", s);
  report(8, rep.converged && s >= -1.15 && s <= -0.85, "far-field decay", buf);
}

// ---------------------------------------------------------------- criterion 9
void stage_stability(const PointChargeRun& pc48) {
  const ChargeDensity d = point_charge_density();
  const std::vector<double> schedule{0.05, 0.1, 0.2, 0.35, 0.55, 0.75, 0.9, 1.0};
  bool ok = true;
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < pc48.stages.size(); ++i) {
    const AuditResult a = stage_stability_audit(
        pc48.stages[i].u, pc48.stages[i + 1].u, schedule[i], schedule[i + 1], d,
        pc48.stages[i].tolerance + pc48.stages[i + 1].tolerance);
    ok = ok && a.passed;
    worst = std::max(worst, a.ratio());
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu stage pairs, worst lhs/rhs = %.3f",
                pc48.stages.size() - 1, worst);
  report(9, ok, "continuation stability", buf);
}

// --------------------------------------------------------------- criterion 10
void moser_bookkeeping() {
  double worst = 0.0;
  int pairs = 0;
  const auto check = [&](int n, double p) {
    const MoserExponents e = moser_exponents(n, p);
    worst = std::max(worst, std::abs(e.sum1 - e.sum1_series) /
                                std::max(std::abs(e.sum1), 1.0));
    worst = std::max(worst, std::abs(e.sum2 - e.sum2_series) /
                                std::max(std::abs(e.sum2), 1.0));
    ++pairs;
  };
  const MoserExponents e34 = moser_exponents(3, 4.0);
  worst = std::max(worst, std::abs(e34.sum1 - 3.0));
  worst = std::max(worst, std::abs(e34.sum2 - 6.0));
  check(3, 4.0);
  for (int n : {3, 4, 5, 6})
    for (double mult : {1.25, 1.5, 2.0, 3.0})
      check(n, mult * n);
  for (double p : {3.5, 7.0, 11.0}) check(3, p);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d pairs, worst deviation = %.2e", pairs + 1,
                worst);
  report(10, pairs + 1 >= 20 && worst <= 1e-12, "moser exponents", buf);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();

  kernel_identities();
  barrier_oracle();
  moser_bookkeeping();

  const RadialSolution oracle(point_charge_density().radial(), 3, 32.0);
  std::printf("-- point-charge continuation at m=48 and m=96 (slow) --\n");
  std::fflush(stdout);
  const PointChargeRun pc48 = solve_point_charge(48, oracle);
  std::printf("   m=48 done: annulus error %.3f%%, %.0f s elapsed\n",
              100.0 * pc48.annulus_error, seconds_since(t0));
  std::fflush(stdout);
  const PointChargeRun pc96 = solve_point_charge(96, oracle);
  std::printf("   m=96 done: annulus error %.3f%%, %.0f s elapsed\n",
              100.0 * pc96.annulus_error, seconds_since(t0));
  std::fflush(stdout);
  {
    const double e48 = pc48.annulus_error, e96 = pc96.annulus_error;
    const double ratio = e96 > 0.0 ? e48 / e96 : 0.0;
    const bool ok = pc48.certified.converged && pc96.certified.converged &&
                    e48 <= 0.05 && e96 <= 0.02 && ratio >= 3.0 && ratio <= 5.0;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "annulus error %.3f%% (m=48), %.3f%% (m=96), ratio %.2f",
                  100.0 * e48, 100.0 * e96, ratio);
    report(3, ok, "oracle-vs-grid convergence", buf);
  }
  stage_stability(pc48);

  std::vector<SuiteEntry> suite = load_suite();
  solver_agreement(suite);
  spacelike_margins(suite, pc48);
  explicit_constant_audits(suite);
  l2_identities(suite);
  decay_slope();

  std::printf("-- acceptance finished in %.0f s: %s --\n", seconds_since(t0),
              failures == 0 ? "all criteria passed"
                            : std::to_string(failures).append(" criteria failed").c_str());
  return failures == 0 ? 0 : 1;
}
