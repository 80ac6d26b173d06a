#pragma once

// Sectioned key = value run configuration: parsing with line-numbered
// errors, canonical emission (emit/parse round-trips), and single-key
// overrides for command-line use.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bi/density.hpp"

namespace bi {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolverKind { minimize, fixed_point, continuation, radial };

const char* solver_kind_name(SolverKind k);

struct SolverConfig {
  SolverKind kind = SolverKind::minimize;
  // shared
  double tolerance_factor = 1e-8;
  bool verbose = false;
  // minimizer
  double safeguard_margin = 1e-6;
  int max_iterations = 20000;
  // fixed point / continuation
  double theta = 0.1;
  double far_eps = 0.5;
  double far_radius = 0.0;
  double dv_tolerance = 1e-9;
  double linear_tolerance = 1e-10;
  bool polish = true;
  int fp_max_iterations = 200;
  std::vector<double> schedule{0.5, 1.0};
  // radial oracle
  double radial_r_max = 16.0;
  int radial_samples = 256;
  // sweep
  std::vector<int> sweep_cells{24, 48};
  double sweep_annulus_lo = 0.5;
  double sweep_annulus_hi = 3.0;

  bool operator==(const SolverConfig&) const = default;
};

struct AuditConfig {
  std::vector<std::string> run;  // audit names, executed in order
  double tolerance = 0.1;
  double tail_k = 2.0;
  double tail_p = 4.0;
  double caccioppoli_q = 4.0;
  double caccioppoli_inner = 1.0;
  double caccioppoli_outer = 2.0;
  double sup_p = 4.0;
  double sup_radius = 2.0;
  double decay_lo = 4.0;
  double decay_hi = 7.0;
  double holder_alpha = 0.5;
  std::uint64_t seed = 12345;

  bool operator==(const AuditConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  bool write_field = true;
  bool write_slices = true;
  std::string input_field;  // existing dump, for the verify path

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  double half_width = 4.0;
  int cells = 48;
  ChargeDensity density;
  SolverConfig solver;
  AuditConfig audits;
  OutputConfig output;

  bool operator==(const RunConfig&) const;
};

bool operator==(const DensityTerm& a, const DensityTerm& b);

/// Parse sectioned text ([grid], [density.N], [solver], [audits], [output]).
/// Unknown sections/keys and duplicate keys are errors with line numbers.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical text form; parse(emit(c)) == c.
std::string emit_config(const RunConfig& c);

/// Apply one `section.key=value` override (e.g. "solver.theta=0.2",
/// "density.1.weight=-2"). Throws ConfigError on unknown targets.
void apply_override(RunConfig& c, const std::string& spec);

}  // namespace bi
