#include "psdo/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace psdo {

Grid make_torus_grid(int dim, int points, double period) {
  if (dim != 1 && dim != 2) throw contract_error("grid dim must be 1 or 2");
  if (points < 8 || points % 2 != 0)
    throw contract_error("grid points must be even and >= 8");
  if (!(period > 0)) throw contract_error("grid period must be positive");
  Grid g;
  g.dim = dim;
  g.points = points;
  g.period = period;
  return g;
}

double Grid::max_xi() const {
  double c = dxi() * (points / 2);
  return dim == 1 ? c : std::sqrt(2.0) * c;
}

double Grid::torus_distance(const Vec& a, const Vec& b) const {
  double s = 0;
  for (int d = 0; d < dim; ++d) {
    double t = std::fabs(a[d] - b[d]);
    t = std::fmod(t, period);
    t = std::min(t, period - t);
    s += t * t;
  }
  return std::sqrt(s);
}

GridFunction sample(const Grid& g, const std::function<cplx(const Vec&)>& f) {
  GridFunction u(g, Side::physical);
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = f(g.x_of_flat(i));
  return u;
}

namespace {

GridFunction run_fft(const GridFunction& u, int sign) {
  const Grid& g = u.grid;
  GridFunction out(g, u.side);
  std::vector<cplx> in = u.values;  // FFTW may not be const-correct on input
  auto* fin = reinterpret_cast<fftw_complex*>(in.data());
  auto* fout = reinterpret_cast<fftw_complex*>(out.values.data());
  fftw_plan plan =
      g.dim == 1
          ? fftw_plan_dft_1d(g.points, fin, fout, sign, FFTW_ESTIMATE)
          : fftw_plan_dft_2d(g.points, g.points, fin, fout, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

GridFunction forward_transform(const GridFunction& u) {
  if (u.side != Side::physical)
    throw contract_error("forward_transform expects physical-side data");
  GridFunction v = run_fft(u, FFTW_FORWARD);
  double w = std::pow(u.grid.dx(), u.grid.dim);
  for (auto& z : v.values) z *= w;
  v.side = Side::frequency;
  return v;
}

GridFunction inverse_transform(const GridFunction& v) {
  if (v.side != Side::frequency)
    throw contract_error("inverse_transform expects frequency-side data");
  GridFunction u = run_fft(v, FFTW_BACKWARD);
  double w = std::pow(v.grid.period, -v.grid.dim);
  for (auto& z : u.values) z *= w;
  u.side = Side::physical;
  return u;
}

double bracket(const Vec& xi, int dim) {
  double s = 1;
  for (int d = 0; d < dim; ++d) s += xi[d] * xi[d];
  return std::sqrt(s);
}

GridFunction apply_multiplier(const GridFunction& u,
                              const std::function<cplx(const Vec&)>& m) {
  GridFunction v = forward_transform(u);
  for (std::size_t i = 0; i < v.values.size(); ++i)
    v.values[i] *= m(v.grid.xi_of_flat(i));
  return inverse_transform(v);
}

GridFunction spectral_derivative(const GridFunction& u, const Idx& alpha) {
  const Grid& g = u.grid;
  int total = 0;
  for (int d = 0; d < g.dim; ++d) {
    if (alpha[d] < 0) throw contract_error("derivative order must be >= 0");
    total += alpha[d];
  }
  if (total > 8) throw contract_error("derivative order |alpha| must be <= 8");
  GridFunction v = forward_transform(u);
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    Idx k = g.unflatten(i);
    Vec xi = g.xi_node(k);
    cplx f{1, 0};
    bool nyquist_killed = false;
    for (int d = 0; d < g.dim; ++d) {
      if (alpha[d] % 2 == 1 && k[d] == g.points / 2) nyquist_killed = true;
      for (int r = 0; r < alpha[d]; ++r) f *= cplx{0, xi[d]};
    }
    v.values[i] = nyquist_killed ? cplx{0, 0} : f * v.values[i];
  }
  return inverse_transform(v);
}

cplx inner_product(const GridFunction& u, const GridFunction& v) {
  if (!(u.grid == v.grid) || u.side != v.side)
    throw contract_error("inner_product: mismatched grids or sides");
  cplx s{0, 0};
  for (std::size_t i = 0; i < u.values.size(); ++i)
    s += u.values[i] * std::conj(v.values[i]);
  return s * std::pow(u.grid.dx(), u.grid.dim);
}

double sup_norm(const GridFunction& u) {
  double m = 0;
  for (const auto& z : u.values) m = std::max(m, std::abs(z));
  return m;
}

double lq_norm(const GridFunction& u, double q) {
  if (!(q >= 1)) throw contract_error("lq_norm: q must be >= 1");
  double s = 0;
  for (const auto& z : u.values) s += std::pow(std::abs(z), q);
  return std::pow(s * std::pow(u.grid.dx(), u.grid.dim), 1.0 / q);
}

double l2_norm(const GridFunction& u) { return lq_norm(u, 2.0); }

namespace {
GridFunction zip(const GridFunction& a, const GridFunction& b,
                 const std::function<cplx(cplx, cplx)>& op) {
  if (!(a.grid == b.grid) || a.side != b.side)
    throw contract_error("pointwise op: mismatched grids or sides");
  GridFunction c = a;
  for (std::size_t i = 0; i < c.values.size(); ++i)
    c.values[i] = op(a.values[i], b.values[i]);
  return c;
}
}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](cplx x, cplx y) { return x + y; });
}
GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](cplx x, cplx y) { return x - y; });
}
GridFunction operator*(cplx c, const GridFunction& a) {
  GridFunction b = a;
  for (auto& z : b.values) z *= c;
  return b;
}
GridFunction hadamard(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](cplx x, cplx y) { return x * y; });
}

void write_csv(std::ostream& os, const GridFunction& u) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# grid %d %d %.17g %s\n", u.grid.dim,
                u.grid.points, u.grid.period,
                u.side == Side::physical ? "physical" : "frequency");
  os << buf;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    Idx idx = u.grid.unflatten(i);
    if (u.grid.dim == 1)
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", idx[0],
                    u.values[i].real(), u.values[i].imag());
    else
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", idx[0], idx[1],
                    u.values[i].real(), u.values[i].imag());
    os << buf;
  }
}

GridFunction read_grid_function_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw contract_error("grid csv: empty stream");
  std::istringstream hs(line);
  std::string hash, tag, side_s;
  int dim, points;
  double period;
  hs >> hash >> tag >> dim >> points >> period >> side_s;
  if (hash != "#" || tag != "grid" || hs.fail())
    throw contract_error("grid csv: bad header, expected '# grid n N L side'");
  Grid g = make_torus_grid(dim, points, period);
  GridFunction u(g, side_s == "frequency" ? Side::frequency : Side::physical);
  if (side_s != "frequency" && side_s != "physical")
    throw contract_error("grid csv: side must be 'physical' or 'frequency'");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<double> nums;
    while (std::getline(ls, field, ',')) nums.push_back(std::stod(field));
    if (nums.size() != static_cast<std::size_t>(g.dim) + 2)
      throw contract_error("grid csv: wrong field count in data row");
    Idx idx{0, 0};
    for (int d = 0; d < g.dim; ++d) {
      idx[d] = static_cast<int>(nums[d]);
      if (idx[d] < 0 || idx[d] >= g.points)
        throw contract_error("grid csv: index out of range");
    }
    u.values[g.flatten(idx)] = cplx{nums[g.dim], nums[g.dim + 1]};
    ++rows;
  }
  if (rows != g.size()) throw contract_error("grid csv: row count mismatch");
  return u;
}

}  // namespace psdo
