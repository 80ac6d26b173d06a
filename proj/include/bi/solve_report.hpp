#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bi/grid.hpp"

namespace bi {

struct AuditResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string provenance;  // grid / density / solver description

  double ratio() const { return rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 1.0 : 1e300); }
};

struct SolveReport {
  ScalarField u;
  double theta = 0.0;          // 1 - ||Du||_inf (centered gradient)
  double energy = 0.0;
  double residual_norm = 0.0;
  double tolerance = 0.0;      // residual tolerance the solve aimed for
  int iterations = 0;
  bool converged = false;
  std::string flag;            // empty on clean convergence
  double sup_u = 0.0;          // M
  std::vector<double> tau_history;
  std::vector<AuditResult> audits;
};

void print_report(std::ostream& os, const SolveReport& r);
void write_audits_csv(std::ostream& os, const std::vector<AuditResult>& audits);

}  // namespace bi
