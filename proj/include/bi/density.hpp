#pragma once

// Declarative charge densities: sums of closed-form terms with samplers,
// exact norms where available, and conversion to the radial oracle's form.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bi/grid.hpp"
#include "bi/radial.hpp"

namespace bi {

struct DensityTerm {
  enum class Kind { gaussian, ball_constant, radial_power_bump, mollified_point };
  Kind kind = Kind::gaussian;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  // gaussian / mollified_point: total charge; ball_constant: constant value;
  // radial_power_bump: amplitude of |x - c|^-exponent.
  double weight = 0.0;
  // gaussian / mollified_point: sigma; ball_constant / radial_power_bump: radius.
  double width = 1.0;
  double exponent = 0.0;  // radial_power_bump only

  double value_at(const std::array<double, 3>& x) const;
  std::array<double, 3> gradient_at(const std::array<double, 3>& x) const;
  bool smooth() const {
    return kind == Kind::gaussian || kind == Kind::mollified_point;
  }
  double total_charge() const;
  /// Exact L^p norm of the single term. Errors when the norm is infinite
  /// (power bump with exponent * p >= 3).
  double lp_norm(double p) const;
  /// Radius beyond which the term is treated as zero.
  double support_radius() const;
};

struct ChargeDensity {
  std::vector<DensityTerm> terms;

  bool empty() const { return terms.empty(); }
  bool smooth() const;
  /// All terms centered at the origin (so the radial oracle applies).
  bool radial_about_origin() const;

  double value_at(const std::array<double, 3>& x) const;
  std::array<double, 3> gradient_at(const std::array<double, 3>& x) const;
  double total_charge() const;
  double support_radius() const;

  /// L^p norm: closed form for a single term, radial quadrature when all
  /// terms are centered at the origin, box quadrature otherwise.
  double lp_norm(double p) const;

  /// Radial reduction; requires radial_about_origin().
  RadialDensity radial() const;
};

/// Node-wise samples. mollified_point terms are rescaled so the h^3-sum
/// carries the term's total charge exactly (a Dirac stand-in's one physical
/// invariant); all other kinds are raw point samples.
ScalarField sample_density(const ChargeDensity& d, const Grid& grid);
VectorField sample_density_gradient(const ChargeDensity& d, const Grid& grid);

const char* kind_name(DensityTerm::Kind k);
std::optional<DensityTerm::Kind> kind_from_name(const std::string& name);

}  // namespace bi
