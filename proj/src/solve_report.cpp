#include "bi/solve_report.hpp"

#include <iomanip>
#include <ostream>

namespace bi {

void print_report(std::ostream& os, const SolveReport& r) {
  os << std::setprecision(12);
  os << "converged        " << (r.converged ? "yes" : "no");
  if (!r.flag.empty()) os << " (" << r.flag << ")";
  os << '\n';
  os << "iterations       " << r.iterations << '\n';
  os << "energy           " << r.energy << '\n';
  os << "residual         " << std::scientific << r.residual_norm
     << "  (tolerance " << r.tolerance << ")\n"
     << std::defaultfloat << std::setprecision(12);
  os << "theta            " << r.theta << '\n';
  os << "sup |u|          " << r.sup_u << '\n';
  if (!r.tau_history.empty()) {
    os << "tau history     ";
    for (double t : r.tau_history) os << ' ' << std::setprecision(6) << t;
    os << std::setprecision(12) << '\n';
  }
  for (const auto& a : r.audits) {
    os << "audit " << std::left << std::setw(24) << a.name << std::right
       << (a.passed ? " pass " : " FAIL ") << std::scientific
       << std::setprecision(6) << "lhs " << a.lhs << "  rhs " << a.rhs
       << "  tol " << a.tolerance << std::defaultfloat << std::setprecision(12)
       << '\n';
  }
}

void write_audits_csv(std::ostream& os, const std::vector<AuditResult>& audits) {
  os << "name,lhs,rhs,tolerance,passed,provenance\n";
  os << std::setprecision(17);
  for (const auto& a : audits) {
    os << a.name << ',' << a.lhs << ',' << a.rhs << ',' << a.tolerance << ','
       << (a.passed ? 1 : 0) << ',' << a.provenance << '\n';
  }
}

}  // namespace bi
