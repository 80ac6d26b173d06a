#pragma once

// Pointwise algebra of the Born-Infeld Lagrangian F(xi) = 1 - sqrt(1 - |xi|^2):
// value, gradient, Hessian, the tilt factor nu and the normalized matrix
// A = nu^-3 D^2F. Everything here is a pure function of its arguments.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bi {

// |xi| may exceed 1 by at most this much before eval_f refuses; nu-dependent
// evaluations hard-error at |xi| >= 1 regardless.
inline constexpr double kLightConeSlack = 1e-12;

struct SpacelikeVector {
  std::vector<double> xi;
  double margin = 0.0;  // 1 - |xi|, > 0 when strictly spacelike
};

struct LagrangianEval {
  double f = 0.0;
  double nu = 1.0;
  std::vector<double> grad;  // nu * xi
  std::vector<double> hess;  // row-major n x n, nu I + nu^3 xi (x) xi
  std::vector<double> a;     // row-major n x n, nu^-2 I + xi (x) xi
};

double norm_sq(std::span<const double> v);

/// F(xi). Arguments with |xi| in (1, 1+1e-12] are clamped to the sphere.
double eval_f(std::span<const double> xi);

/// DF(xi) = nu * xi. Hard-errors on |xi| >= 1.
std::vector<double> eval_grad(std::span<const double> xi);

/// F, DF, D^2F, nu and A in one pass; nu is computed once.
LagrangianEval eval_full(std::span<const double> xi);

/// Radial projection onto the ball |xi| <= 1 - margin. Idempotent.
SpacelikeVector project_spacelike(std::span<const double> xi, double margin);

/// <DF(xi2) - DF(xi1), xi2 - xi1> - |xi2 - xi1|^2, nonnegative by convexity.
double monotonicity_gap(std::span<const double> xi1, std::span<const double> xi2);

}  // namespace bi
