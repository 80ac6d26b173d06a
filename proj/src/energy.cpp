#include "bi/energy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bi/kernels.hpp"

namespace bi {

EnergyModel::EnergyModel(const Grid& grid, ScalarField rho_samples)
    : grid_(grid), rho_(std::move(rho_samples)) {
  if (rho_.grid != grid_) throw std::invalid_argument("rho sampled on a different grid");
  for (auto* arr : {&gf_, &gb_, &ff_, &fb_})
    for (auto& c : *arr) c.assign(grid_.node_count(), 0.0);
}

void EnergyModel::one_sided_gradients(const ScalarField& u) const {
  const int N = grid_.nodes_per_axis();
  const double inv_h = 1.0 / grid_.spacing();
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(N) * N, N, 1};
  const double* uv = u.values.data();
  for (int a = 0; a < 3; ++a) {
    double* gf = gf_[a].data();
    double* gb = gb_[a].data();
    const std::ptrdiff_t s = stride[a];
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          const std::size_t id = grid_.index(i, j, k);
          const int idx = a == 0 ? i : (a == 1 ? j : k);
          gf[id] = idx < grid_.cells ? (uv[id + s] - uv[id]) * inv_h : 0.0;
          gb[id] = idx > 0 ? (uv[id] - uv[id - s]) * inv_h : 0.0;
        }
  }
}

double EnergyModel::energy(const ScalarField& u) const {
  one_sided_gradients(u);
  const std::size_t n = grid_.node_count();
  double acc = 0.0;
  for (const auto* g : {&gf_, &gb_}) {
    const double* gx = (*g)[0].data();
    const double* gy = (*g)[1].data();
    const double* gz = (*g)[2].data();
    for (std::size_t i = 0; i < n; ++i) {
      const double s = gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i];
      if (s >= 1.0) return infinite_energy();
      acc += 0.5 * (1.0 - std::sqrt(1.0 - s));
    }
  }
  double source = 0.0;
  for (std::size_t i = 0; i < n; ++i) source += rho_.values[i] * u.values[i];
  return (acc - source) * grid_.cell_volume();
}

double EnergyModel::max_one_sided_gradient(const ScalarField& u) const {
  one_sided_gradients(u);
  double m = 0.0;
  const std::size_t n = grid_.node_count();
  for (const auto* g : {&gf_, &gb_}) {
    const double* gx = (*g)[0].data();
    const double* gy = (*g)[1].data();
    const double* gz = (*g)[2].data();
    for (std::size_t i = 0; i < n; ++i) {
      const double s = gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i];
      if (s > m) m = s;
    }
  }
  return std::sqrt(m);
}

void EnergyModel::residual(const ScalarField& u, ScalarField& out,
                           double min_margin) const {
  one_sided_gradients(u);
  const std::size_t n = grid_.node_count();

  // margin check before taking nu
  const double cap = (1.0 - min_margin) * (1.0 - min_margin);
  for (const auto* g : {&gf_, &gb_}) {
    const double* gx = (*g)[0].data();
    const double* gy = (*g)[1].data();
    const double* gz = (*g)[2].data();
    for (std::size_t i = 0; i < n; ++i) {
      const double s = gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i];
      if (s > cap) {
        const int N = grid_.nodes_per_axis();
        std::ostringstream msg;
        msg << "gradient margin violated at node (" << i / (N * std::size_t(N))
            << "," << (i / N) % N << "," << i % N << "): |Du| = " << std::sqrt(s);
        throw std::domain_error(msg.str());
      }
    }
  }

  kernels::flux3(gf_[0].data(), gf_[1].data(), gf_[2].data(),
                 ff_[0].data(), ff_[1].data(), ff_[2].data(), n);
  kernels::flux3(gb_[0].data(), gb_[1].data(), gb_[2].data(),
                 fb_[0].data(), fb_[1].data(), fb_[2].data(), n);

  if (out.grid != grid_) out = ScalarField(grid_);
  const int N = grid_.nodes_per_axis();
  const double inv_h = 1.0 / grid_.spacing();
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(N) * N, N, 1};
  for (int i = 1; i < grid_.cells; ++i)
    for (int j = 1; j < grid_.cells; ++j)
      for (int k = 1; k < grid_.cells; ++k) {
        const std::size_t id = grid_.index(i, j, k);
        double div = 0.0;
        for (int a = 0; a < 3; ++a) {
          const std::ptrdiff_t s = stride[a];
          div += (ff_[a][id] - ff_[a][id - s]) + (fb_[a][id + s] - fb_[a][id]);
        }
        out.values[id] = -0.5 * div * inv_h - rho_.values[id];
      }
  // boundary entries stay zero
  for (int i = 0; i <= grid_.cells; ++i)
    for (int j = 0; j <= grid_.cells; ++j)
      for (int k = 0; k <= grid_.cells; ++k)
        if (grid_.is_boundary(i, j, k)) out.values[grid_.index(i, j, k)] = 0.0;
}

double EnergyModel::interior_l2(const ScalarField& f) const {
  double s = 0.0;
  for (int i = 1; i < grid_.cells; ++i)
    for (int j = 1; j < grid_.cells; ++j)
      for (int k = 1; k < grid_.cells; ++k) {
        const double v = f(i, j, k);
        s += v * v;
      }
  return std::sqrt(s * grid_.cell_volume());
}

}  // namespace bi
