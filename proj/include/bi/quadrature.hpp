#pragma once

// Adaptive quadrature used by the radial oracle. Thin wrapper over
// Gauss-Kronrod 15 with interval bisection; semi-infinite integrals go
// through the algebraic substitution t = 1/s.

#include <functional>
#include <stdexcept>
#include <string>

namespace bi {

struct QuadratureError : std::runtime_error {
  double achieved;
  QuadratureError(const std::string& what, double err)
      : std::runtime_error(what + " (achieved tolerance " + std::to_string(err) + ")"),
        achieved(err) {}
};

/// Integrate f over [a, b] to absolute tolerance abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

/// Integrate f over [a, infinity). The tail beyond max(a,1) uses t = 1/s.
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol = 1e-10);

}  // namespace bi
