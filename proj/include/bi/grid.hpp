#pragma once

// Uniform Cartesian grid on the box [-L, L]^3 with the forward/backward
// difference pair. The pair satisfies exact discrete integration by parts:
// <gradient(u), F> = -<u, divergence(F)> for u vanishing on the boundary,
// which makes the discrete energy gradient equal the discrete PDE residual.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bi {

struct Grid {
  static constexpr int dim = 3;
  double half_width = 1.0;  // L
  int cells = 8;            // m, nodes at -L + i*h, i = 0..m

  Grid() = default;
  Grid(double L, int m) : half_width(L), cells(m) {
    if (m < 8) throw std::invalid_argument("grid needs at least 8 cells per axis");
    if (!(L > 0)) throw std::invalid_argument("half_width must be positive");
  }

  double spacing() const { return 2.0 * half_width / cells; }
  int nodes_per_axis() const { return cells + 1; }
  std::size_t node_count() const {
    const std::size_t N = nodes_per_axis();
    return N * N * N;
  }
  std::size_t index(int i, int j, int k) const {
    const std::size_t N = nodes_per_axis();
    return (static_cast<std::size_t>(i) * N + j) * N + k;
  }
  double coord(int i) const { return -half_width + i * spacing(); }
  std::array<double, 3> point(int i, int j, int k) const {
    return {coord(i), coord(j), coord(k)};
  }
  bool is_boundary(int i, int j, int k) const {
    return i == 0 || j == 0 || k == 0 || i == cells || j == cells || k == cells;
  }
  double cell_volume() const { return spacing() * spacing() * spacing(); }
  bool operator==(const Grid&) const = default;
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.node_count(), fill) {}
  double& operator()(int i, int j, int k) { return values[grid.index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
};

struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 3> comp;

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g) {
    for (auto& c : comp) c.assign(g.node_count(), 0.0);
  }
};

// Symmetric second-difference tensor, interior nodes only (zero on boundary).
struct SymTensorField {
  Grid grid;
  // order: xx, yy, zz, xy, xz, yz
  std::array<std::vector<double>, 6> comp;

  SymTensorField() = default;
  explicit SymTensorField(const Grid& g) : grid(g) {
    for (auto& c : comp) c.assign(g.node_count(), 0.0);
  }
};

/// Forward differences; zero on the upper boundary in each direction.
VectorField gradient(const ScalarField& u);
/// Backward differences; zero on the lower boundary in each direction.
VectorField backward_gradient(const ScalarField& u);
/// Centered in the interior, one-sided on the boundary. Reporting only.
VectorField centered_gradient(const ScalarField& u);

/// Negative adjoint of `gradient` under the h^3-weighted inner product;
/// backward differences at interior nodes, zero on the boundary.
ScalarField divergence(const VectorField& F);
/// Negative adjoint of `backward_gradient`; forward differences, interior only.
ScalarField forward_divergence(const VectorField& F);

/// Centered second differences (four-corner for mixed entries), interior only.
SymTensorField second_derivatives(const ScalarField& u);

double inner_product(const ScalarField& a, const ScalarField& b);  // h^3-weighted
double inner_product(const VectorField& a, const VectorField& b);

/// h^3-weighted p-norm; p may be infinity (max of |f|).
double lp_norm(const ScalarField& f, double p);
double linf_norm_vector(const VectorField& F);  // max euclidean length over nodes

/// (mean of |f|^p over nodes in B(x0, R) intersected with the box)^(1/p).
double ball_average(const ScalarField& f, const std::array<double, 3>& x0,
                    double R, double p);
/// Max of |f| over nodes in B(x0, R).
double ball_sup(const ScalarField& f, const std::array<double, 3>& x0, double R);

/// Trilinear interpolation onto `fine` (same box). When the grids nest,
/// each one-sided difference quotient of the result is a convex combination
/// of coarse quotients in the same direction, so per-direction slope bounds
/// survive prolongation. The euclidean gradient norm can still grow (the
/// three components mix quotients from different offsets), so a prolonged
/// spacelike field is not automatically spacelike.
ScalarField prolong(const ScalarField& coarse, const Grid& fine);

/// Dirichlet data from the Newtonian far field: u_b = Q c_n |x|^(2-n) on
/// boundary nodes, c_n = 1/((n-2) n omega_n); zero in the interior.
ScalarField far_field_boundary(const Grid& grid, double total_charge);

// BIFIELD v1 dump: header "BIFIELD v1 n m L", then node values as
// little-endian 64-bit floats in lexicographic node order.
void write_field(std::ostream& os, const ScalarField& f);
ScalarField read_field(std::istream& is);
void write_field_file(const std::string& path, const ScalarField& f);
ScalarField read_field_file(const std::string& path);

/// CSV slices along the three axes and the main diagonal through the center.
void write_axis_slices_csv(std::ostream& os, const ScalarField& f);

}  // namespace bi
