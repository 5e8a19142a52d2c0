#include "psdo/lp.hpp"

#include <cmath>

namespace psdo {

double lp_f(double t) { return t < 1e-3 ? 0.0 : std::exp(-1.0 / t); }

double lp_g(double t) {
  double a = lp_f(t), b = lp_f(1.0 - t);
  return a / (a + b);  // denominator never vanishes: f(t)+f(1-t) > 0 on R
}

double lp_h(double t) { return lp_g(2.0 + t) * lp_g(2.0 - t); }

double lp_phi0_radial(double r) { return lp_h(std::fabs(r)); }

double lp_phi0(const Vec& xi, int dim) {
  double s = 0;
  for (int d = 0; d < dim; ++d) s += xi[d] * xi[d];
  return lp_phi0_radial(std::sqrt(s));
}

double lp_phi_radial(int j, double r) {
  if (j < 0) throw contract_error("lp_phi_radial: j must be >= 0");
  if (j == 0) return lp_phi0_radial(r);
  return lp_phi0_radial(std::ldexp(r, -j)) - lp_phi0_radial(std::ldexp(r, -j + 1));
}

int min_covering_level(const Grid& g) {
  int J = 0;
  while (std::ldexp(1.0, J) < g.max_xi()) ++J;
  return J;
}

LPPartition build_partition(const Grid& g, int levels) {
  if (levels < 0) throw contract_error("build_partition: levels must be >= 0");
  if (std::ldexp(1.0, levels + 1) < g.max_xi())
    throw contract_error("build_partition: 2^(J+1) < max |xi|; raise J");
  LPPartition part;
  part.grid = g;
  part.levels = levels;
  part.blocks.resize(levels + 1);
  for (int j = 0; j <= levels; ++j) {
    part.blocks[j].resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      Vec xi = g.xi_of_flat(i);
      double s = 0;
      for (int d = 0; d < g.dim; ++d) s += xi[d] * xi[d];
      part.blocks[j][i] = lp_phi_radial(j, std::sqrt(s));
    }
  }
  return part;
}

GridFunction lp_block(const GridFunction& u, const LPPartition& part, int j) {
  if (!(u.grid == part.grid)) throw contract_error("lp_block: grid mismatch");
  if (j < 0 || j > part.levels) throw contract_error("lp_block: level out of range");
  GridFunction v = forward_transform(u);
  for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] *= part.blocks[j][i];
  return inverse_transform(v);
}

namespace {

// Central finite differences of the radial profile; the profiles are smooth so a
// step well below the annulus width 2^j is accurate.
double phi_derivative(int j, double r, int order) {
  double h = std::ldexp(1.0, j) * 1e-4;
  auto f = [&](double t) { return lp_phi_radial(j, t); };
  switch (order) {
    case 1:
      return (f(r + h) - f(r - h)) / (2 * h);
    case 2:
      return (f(r + h) - 2 * f(r) + f(r - h)) / (h * h);
    case 3:
      return (f(r + 2 * h) - 2 * f(r + h) + 2 * f(r - h) - f(r - 2 * h)) /
             (2 * h * h * h);
    default:
      throw contract_error("derivative_bound_report: order must be in 1..3");
  }
}

}  // namespace

std::vector<LPDerivativeBound> derivative_bound_report(const Grid& g, int levels,
                                                       int max_order) {
  if (max_order < 1 || max_order > 3)
    throw contract_error("derivative_bound_report: max_order must be in 1..3");
  std::vector<LPDerivativeBound> out;
  for (int a = 1; a <= max_order; ++a) {
    double worst = 0;
    for (int j = 0; j <= levels; ++j) {
      for (int k = 0; k <= g.points / 2; ++k) {
        double r = k * g.dxi();
        double envelope = std::min(std::ldexp(1.0, -j * a),
                                   std::pow(std::sqrt(1 + r * r), -a));
        double d = std::fabs(phi_derivative(j, r, a));
        worst = std::max(worst, d / envelope);
      }
    }
    out.push_back({a, worst});
  }
  return out;
}

}  // namespace psdo
