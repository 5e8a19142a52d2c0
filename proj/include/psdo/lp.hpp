#pragma once

#include "psdo/grid.hpp"

namespace psdo {

/// Building blocks of the dyadic partition of unity. f is the standard smooth
/// switch e^{-1/t} (hard zero below t = 1e-3, where the true value is under
/// e^{-1000} and would underflow anyway); g ramps 0 -> 1 across [0,1]; h is the
/// plateau g(2+t) g(2-t); phi0 = h(|xi|) equals 1 for |xi| <= 1 and 0 for |xi| >= 2.
double lp_f(double t);
double lp_g(double t);
double lp_h(double t);
double lp_phi0_radial(double r);
double lp_phi0(const Vec& xi, int dim);

/// Radial profile of the j-th annular piece:
/// phi_0 as above, phi_j(r) = phi0(2^{-j} r) - phi0(2^{-j+1} r) for j >= 1.
/// Supported in 2^{j-1} <= r <= 2^{j+1}; sum_{j<=k} phi_j(r) = phi0(2^{-k} r).
double lp_phi_radial(int j, double r);

/// The pieces phi_0..phi_J tabulated on the dual lattice of a grid.
struct LPPartition {
  Grid grid;
  int levels = 0;  // J
  std::vector<std::vector<double>> blocks;  // blocks[j][flat xi index]
};

/// Smallest J such that 2^J >= max |xi| on the lattice, i.e. the partial sums
/// reach 1 at every lattice node.
int min_covering_level(const Grid& g);

/// Tabulate phi_0..phi_J. Requires 2^{J+1} >= max |xi| (otherwise the tail of the
/// lattice is not even touched by the last annulus); exact partition of unity is
/// only guaranteed on |xi| <= 2^J.
LPPartition build_partition(const Grid& g, int levels);

/// The dyadic block phi_j(D) u.
GridFunction lp_block(const GridFunction& u, const LPPartition& part, int j);

/// Empirical check of |d^a phi_j| <= c_a min(2^{-j a}, <xi>^{-a}): worst ratio of
/// the radial finite-difference derivative against the envelope, per order.
struct LPDerivativeBound {
  int order;
  double worst_ratio;  // sup over j <= levels and lattice radii
};
std::vector<LPDerivativeBound> derivative_bound_report(const Grid& g, int levels,
                                                       int max_order);

}  // namespace psdo
