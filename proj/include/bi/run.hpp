#pragma once

// Run orchestration: execute the configured solver, run the requested
// audits, and emit report / field dump / CSV artifacts. One run per process.

#include <iosfwd>
#include <string>

#include "bi/config.hpp"
#include "bi/solve_report.hpp"

namespace bi {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverFailure = 3;
inline constexpr int kExitAuditFailure = 4;

/// Append the audits listed in cfg.audits.run to rep.audits.
void run_audits(const RunConfig& cfg, SolveReport& rep);

/// Discrete scaled-family stability check between two stages solved for
/// s1 * rho and s2 * rho; the boundary-data contribution is computed
/// explicitly and folded into the printed tolerance.
AuditResult stage_stability_audit(const ScalarField& u1, const ScalarField& u2,
                                  double s1, double s2,
                                  const ChargeDensity& rho,
                                  double combined_tolerance);

/// Commands: solve, radial, verify, sweep. Returns a process exit status:
/// 0 ok, 2 config error, 3 solver non-convergence, 4 audit failure.
int run_command(const std::string& command, const RunConfig& cfg,
                std::ostream& log);

}  // namespace bi
