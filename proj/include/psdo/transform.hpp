#pragma once

#include "psdo/symbols.hpp"

namespace psdo {

/// A 1-D change of coordinates x = h(y) with closed-form derivative and
/// inverse. The ones used with operators satisfy h(y + L) = h(y) + L, so they
/// descend to the torus and spectral interpolation across h stays exact.
struct Diffeomorphism {
  enum class Regularity { smooth, c1theta };
  std::string name;
  Regularity regularity = Regularity::smooth;
  double theta = 0;    // Holder exponent of h' when regularity is c1theta
  double bound_C = 1;  // 1/C <= |h'| <= C
  double domain_lo = -1e300, domain_hi = 1e300;
  std::function<double(double)> forward;
  std::function<double(double)> derivative;
  std::function<double(double)> inverse;
};

Diffeomorphism diffeo_identity();
Diffeomorphism diffeo_affine(double a, double b);  // y -> a y + b, a != 0
/// y -> y + a sin y, |a| < 1; smooth, torus-compatible.
Diffeomorphism diffeo_sine(double a);
/// y -> y + a sgn(sin y) |sin y|^{1+theta}: h' = 1 + a(1+theta)|sin y|^theta cos y
/// is exactly C^theta and no better; requires |a|(1+theta) < 1.
Diffeomorphism diffeo_c1theta(double a, double theta);
/// "identity", "affine:a,b", "sine:a", "c1theta:a,theta".
Diffeomorphism diffeo_from_name(const std::string& spec);

/// Spot-check the determinant bound and inverse round trip on a probe lattice;
/// throws contract_error on violation (construction errors, not data).
void validate_diffeomorphism(const Diffeomorphism& h, double lo, double hi,
                             int probes = 200);

/// Segment average of h': Xi_h(y, y') = int_0^1 h'(y' + t(y - y')) dt by
/// Gauss-Legendre; satisfies h(y) - h(y') = Xi_h(y, y') (y - y').
double xi_h(const Diffeomorphism& h, double y, double yprime,
            int quad_nodes = 16);

/// Partition of unity at scale r on an interval, with enlarged plateaus:
/// centers c_j = r j; phi_j supported in B_r(c_j), summing to 1 on the box;
/// psi_j = 1 on B_{2r}(c_j), supported in B_{3r}(c_j).
struct CoverFamily {
  double r = 1;
  double box_lo = 0, box_hi = 0;
  std::vector<double> centers;
  double phi(std::size_t j, double x) const;
  double psi(std::size_t j, double x) const;
};

CoverFamily build_cover(double r, double box_lo, double box_hi);

/// Largest r = 2^{-k} (starting from 1) for which the segment averages satisfy
/// (C+eps)^{-1} <= |Xi_h| <= C+eps with eps = 0.1 C on all probe pairs at
/// distance <= 4r; deterministic.
double select_cover_scale(const Diffeomorphism& h, double lo, double hi);

/// Principal pullback a(y, eta) = p(h(y), eta / h'(y)) sampled on the grid.
/// Needs the closed-form evaluator of p (the arguments are off-lattice) and
/// (rho, delta) = (1, 0).
SampledSymbol pullback_principal(const SampledSymbol& p, const Diffeomorphism& h);

/// Full transformed symbol in (x, y)-form,
///   a(y, eta, y') = sum_j phi_j(h(y)) p(h(y), eta/Xi_h(y,y'), h(y'))
///                   psi_j(h(y')) |Xi_h(y,y')|^{-1} |h'(y')|,
/// sampled densely on the (y, y', eta) lattice. The determinant sandwich on all
/// pairs carrying weight is asserted (throws when r is too large).
SampledSymbol pullback_full(const SampledSymbol& p, const Diffeomorphism& h,
                            const CoverFamily& cover);

/// Direct (x,y,xi)-form application without dyadic truncation:
/// v(y) = (dy / L) sum_{y'} sum_eta e^{i(y-y')eta} a(y, y', eta) u(y').
GridFunction apply_xyxi_direct(const SampledSymbol& a, const GridFunction& u);

/// Band-limited (trigonometric) interpolation of u at an off-lattice point.
cplx spectral_interpolate(const GridFunction& u, double x);

/// ||(P u) o h - A (u o h)||_inf / ||u||_inf with A the transformed symbol a
/// applied by apply_xyxi_direct; compositions with h use spectral
/// interpolation. u must be supported inside the cover box with margin >= 3r.
double equivariance_residual(const SampledSymbol& p, const SampledSymbol& a,
                             const Diffeomorphism& h, const CoverFamily& cover,
                             const GridFunction& u);

/// Global extension of h from the ball B_r(x0):
/// x -> h(x0) + [h'(x0) + phi(x)(Xi_h(x,x0) - h'(x0))](x - x0), with phi a
/// plateau equal to 1 on B_r(x0) and supported in B_{2r}(x0). Agrees with h on
/// B_r(x0) exactly (mean-value identity); affine beyond B_{2r}(x0).
/// Preconditions (throw): r^theta <= |h'(x0)| / (2 c0) with c0 the probe-measured
/// Holder constant of h', and the Neumann bound
/// sup_x |phi(x)(Xi_h(x,x0) - h'(x0))| / |h'(x0)| <= 1/2.
Diffeomorphism c1theta_extend(const Diffeomorphism& h, double x0, double r);

}  // namespace psdo
