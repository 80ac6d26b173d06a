#include "bi/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bi/radial.hpp"

namespace bi {

static_assert(std::endian::native == std::endian::little,
              "BIFIELD dumps are little-endian");

VectorField gradient(const ScalarField& u) {
  const Grid& g = u.grid;
  const int N = g.nodes_per_axis();
  const double inv_h = 1.0 / g.spacing();
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(N) * N, N, 1};
  VectorField out(g);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const std::size_t id = g.index(i, j, k);
        const int idx[3] = {i, j, k};
        for (int a = 0; a < 3; ++a)
          if (idx[a] < g.cells)
            out.comp[a][id] = (u.values[id + stride[a]] - u.values[id]) * inv_h;
      }
  return out;
}

VectorField backward_gradient(const ScalarField& u) {
  const Grid& g = u.grid;
  const int N = g.nodes_per_axis();
  const double inv_h = 1.0 / g.spacing();
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(N) * N, N, 1};
  VectorField out(g);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const std::size_t id = g.index(i, j, k);
        const int idx[3] = {i, j, k};
        for (int a = 0; a < 3; ++a)
          if (idx[a] > 0)
            out.comp[a][id] = (u.values[id] - u.values[id - stride[a]]) * inv_h;
      }
  return out;
}

VectorField centered_gradient(const ScalarField& u) {
  const Grid& g = u.grid;
  const int N = g.nodes_per_axis();
  const double inv_h = 1.0 / g.spacing();
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(N) * N, N, 1};
  VectorField out(g);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const std::size_t id = g.index(i, j, k);
        const int idx[3] = {i, j, k};
        for (int a = 0; a < 3; ++a) {
          if (idx[a] == 0)
            out.comp[a][id] = (u.values[id + stride[a]] - u.values[id]) * inv_h;
          else if (idx[a] == g.cells)
            out.comp[a][id] = (u.values[id] - u.values[id - stride[a]]) * inv_h;
          else
            out.comp[a][id] =
                (u.values[id + stride[a]] - u.values[id - stride[a]]) * (0.5 * inv_h);
        }
      }
  return out;
}

ScalarField divergence(const VectorField& F) {
  const Grid& g = F.grid;
  const int N = g.nodes_per_axis();
  const double inv_h = 1.0 / g.spacing();
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(N) * N, N, 1};
  ScalarField out(g);
  for (int i = 1; i < g.cells; ++i)
    for (int j = 1; j < g.cells; ++j)
      for (int k = 1; k < g.cells; ++k) {
        const std::size_t id = g.index(i, j, k);
        double d = 0.0;
        for (int a = 0; a < 3; ++a)
          d += F.comp[a][id] - F.comp[a][id - stride[a]];
        out.values[id] = d * inv_h;
      }
  return out;
}

ScalarField forward_divergence(const VectorField& F) {
  const Grid& g = F.grid;
  const int N = g.nodes_per_axis();
  const double inv_h = 1.0 / g.spacing();
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(N) * N, N, 1};
  ScalarField out(g);
  for (int i = 1; i < g.cells; ++i)
    for (int j = 1; j < g.cells; ++j)
      for (int k = 1; k < g.cells; ++k) {
        const std::size_t id = g.index(i, j, k);
        double d = 0.0;
        for (int a = 0; a < 3; ++a)
          d += F.comp[a][id + stride[a]] - F.comp[a][id];
        out.values[id] = d * inv_h;
      }
  return out;
}

SymTensorField second_derivatives(const ScalarField& u) {
  const Grid& g = u.grid;
  const int N = g.nodes_per_axis();
  const double h = g.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(N) * N, N, 1};
  SymTensorField out(g);
  const int pair[3][2] = {{0, 1}, {0, 2}, {1, 2}};  // xy, xz, yz
  for (int i = 1; i < g.cells; ++i)
    for (int j = 1; j < g.cells; ++j)
      for (int k = 1; k < g.cells; ++k) {
        const std::size_t id = g.index(i, j, k);
        for (int a = 0; a < 3; ++a)
          out.comp[a][id] =
              (u.values[id + stride[a]] - 2.0 * u.values[id] + u.values[id - stride[a]]) *
              inv_h2;
        for (int c = 0; c < 3; ++c) {
          const auto sa = stride[pair[c][0]], sb = stride[pair[c][1]];
          out.comp[3 + c][id] = (u.values[id + sa + sb] - u.values[id + sa - sb] -
                                 u.values[id - sa + sb] + u.values[id - sa - sb]) *
                                (0.25 * inv_h2);
        }
      }
  return out;
}

double inner_product(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.grid.cell_volume();
}

double inner_product(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i)
      s += a.comp[c][i] * b.comp[c][i];
  return s * a.grid.cell_volume();
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1) throw std::domain_error("lp_norm requires p >= 1");
  double s = 0.0;
  for (double v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

double linf_norm_vector(const VectorField& F) {
  double m = 0.0;
  for (std::size_t i = 0; i < F.comp[0].size(); ++i) {
    const double s = F.comp[0][i] * F.comp[0][i] + F.comp[1][i] * F.comp[1][i] +
                     F.comp[2][i] * F.comp[2][i];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

namespace {

template <typename Fn>
void for_ball(const Grid& g, const std::array<double, 3>& x0, double R, Fn&& fn) {
  const int N = g.nodes_per_axis();
  const double R2 = R * R;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const auto x = g.point(i, j, k);
        const double d2 = (x[0] - x0[0]) * (x[0] - x0[0]) +
                          (x[1] - x0[1]) * (x[1] - x0[1]) +
                          (x[2] - x0[2]) * (x[2] - x0[2]);
        if (d2 <= R2) fn(g.index(i, j, k));
      }
}

}  // namespace

double ball_average(const ScalarField& f, const std::array<double, 3>& x0,
                    double R, double p) {
  if (p < 1) throw std::domain_error("ball_average requires p >= 1");
  double s = 0.0;
  std::size_t count = 0;
  for_ball(f.grid, x0, R, [&](std::size_t id) {
    s += std::pow(std::abs(f.values[id]), p);
    ++count;
  });
  if (count == 0) throw std::domain_error("empty ball");
  return std::pow(s / count, 1.0 / p);
}

double ball_sup(const ScalarField& f, const std::array<double, 3>& x0, double R) {
  double m = 0.0;
  std::size_t count = 0;
  for_ball(f.grid, x0, R, [&](std::size_t id) {
    m = std::max(m, std::abs(f.values[id]));
    ++count;
  });
  if (count == 0) throw std::domain_error("empty ball");
  return m;
}

ScalarField prolong(const ScalarField& coarse, const Grid& fine) {
  const Grid& cg = coarse.grid;
  if (cg.half_width != fine.half_width)
    throw std::invalid_argument("prolong needs grids on the same box");
  ScalarField out(fine);
  const int N = fine.nodes_per_axis();
  const double hc = cg.spacing();
  const auto clamp_cell = [&](double x, int& i0, double& t) {
    const double s = (x + cg.half_width) / hc;
    i0 = std::min(static_cast<int>(s), cg.cells - 1);
    if (i0 < 0) i0 = 0;
    t = s - i0;
  };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const auto x = fine.point(i, j, k);
        int i0, j0, k0;
        double tx, ty, tz;
        clamp_cell(x[0], i0, tx);
        clamp_cell(x[1], j0, ty);
        clamp_cell(x[2], k0, tz);
        double v = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
              v += (a ? tx : 1 - tx) * (b ? ty : 1 - ty) * (c ? tz : 1 - tz) *
                   coarse(i0 + a, j0 + b, k0 + c);
        out(i, j, k) = v;
      }
  return out;
}

ScalarField far_field_boundary(const Grid& grid, double total_charge) {
  ScalarField out(grid);
  if (total_charge == 0.0) return out;
  constexpr int n = Grid::dim;
  const double c_n = 1.0 / ((n - 2) * n * unit_ball_volume(n));
  const int N = grid.nodes_per_axis();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        if (!grid.is_boundary(i, j, k)) continue;
        const auto x = grid.point(i, j, k);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        out.values[grid.index(i, j, k)] = total_charge * c_n * std::pow(r, 2 - n);
      }
  return out;
}

void write_field(std::ostream& os, const ScalarField& f) {
  std::ostringstream header;
  header.precision(17);
  header << "BIFIELD v1 " << Grid::dim << ' ' << f.grid.cells << ' '
         << f.grid.half_width << '\n';
  os << header.str();
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

ScalarField read_field(std::istream& is) {
  std::string magic, version;
  int n = 0, m = 0;
  double L = 0.0;
  is >> magic >> version >> n >> m >> L;
  if (magic != "BIFIELD" || version != "v1" || n != Grid::dim)
    throw std::runtime_error("not a BIFIELD v1 dump");
  is.get();  // newline
  ScalarField f(Grid(L, m));
  is.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("truncated BIFIELD dump");
  return f;
}

void write_field_file(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_field(os, f);
}

ScalarField read_field_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_field(is);
}

void write_axis_slices_csv(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid;
  os.precision(17);
  os << "slice,t,x,y,z,u\n";
  const int c = g.cells / 2;
  const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i <= g.cells; ++i) {
      int idx[3] = {c, c, c};
      idx[a] = i;
      const auto x = g.point(idx[0], idx[1], idx[2]);
      os << names[a] << ',' << g.coord(i) << ',' << x[0] << ',' << x[1] << ','
         << x[2] << ',' << f(idx[0], idx[1], idx[2]) << '\n';
    }
  for (int i = 0; i <= g.cells; ++i) {
    const auto x = g.point(i, i, i);
    const double t = std::sqrt(3.0) * g.coord(i);
    os << "diag," << t << ',' << x[0] << ',' << x[1] << ',' << x[2] << ','
       << f(i, i, i) << '\n';
  }
}

}  // namespace bi
