#include "bi/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace bi {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  // boost's tolerance is relative to the L1 norm, which never terminates on
  // underflowing tails; pass a moderate target with a depth cap and check
  // the reported error against the absolute request ourselves.
  const double value = GK::integrate(f, a, b, 10, 1e-10, &error);
  if (!(error <= abs_tol) && !(error <= 1e-8 * std::abs(value)))
    throw QuadratureError("quadrature non-convergence", error);
  return value;
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol) {
  const double split = std::max(a, 1.0);
  double head = 0.0;
  if (split > a) head = integrate(f, a, split, abs_tol / 2);
  const auto tail = [&](double t) {
    // s = 1/t, ds = -dt/t^2; t runs over (0, 1/split]
    return f(1.0 / t) / (t * t);
  };
  return head + integrate(tail, 0.0, 1.0 / split, abs_tol / 2);
}

}  // namespace bi
