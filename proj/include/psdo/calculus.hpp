#pragma once

#include "psdo/lp.hpp"
#include "psdo/oscillatory.hpp"
#include "psdo/symbols.hpp"

namespace psdo {

/// A double symbol p(x, xi, x', xi') given in closed form (1-D). Dense storage
/// would need N^4 values, so double symbols are evaluator-only.
struct DoubleSymbol {
  double order = 0;       // joint order in (xi, xi')
  double rho = 1;
  double delta = 0;
  double tau = 1e9;       // x-regularity, used to size the Os budget
  std::function<cplx(double x, double xi, double xp, double xip)> eval;
  /// Optional separable structure p = factor1(x,xi) * factor2(x',xi'); when
  /// present the oscillatory quadrature in simplify tabulates per axis.
  std::function<cplx(double, double)> factor1, factor2;
};

/// p1(x,xi) * p2(x',xi') as a double symbol; both factors need closed forms.
DoubleSymbol separable_double_symbol(const SampledSymbol& p1,
                                     const SampledSymbol& p2);

/// The simplified symbol p_L(x,xi) = Os-iint e^{-i y eta} p(x, xi+eta, x+y, xi)
/// of a double symbol, evaluated by oscillatory quadrature at every point of
/// the coarse grid. coarse.period must match the symbol's intended torus.
SampledSymbol simplify_double_symbol(const DoubleSymbol& p, const Grid& coarse,
                                     const OscParams& params = {});

/// v = op(p) u for a double symbol by direct summation:
///   v(x) = L^{-2} sum_{xi} sum_{y} sum_{xi'} e^{i(x-y)xi} e^{iy xi'}
///          p(x, xi, y, xi') u^(xi') dy-weights folded in.
/// O(N^3) once u^ is precomputed; the fidelity oracle for simplify.
GridFunction apply_double_symbol(const DoubleSymbol& p, const Grid& g,
                                 const GridFunction& u);

/// Leibniz composition p1 #_N p2 = sum_{|a| <= N} (1/a!) d_xi^a p1 . D_x^a p2.
/// xi-derivatives use the best available source (closed form / evaluator FD /
/// lattice FD); x-derivatives are spectral. Requires N <= 4 and declared
/// x-regularity tau_2 > N.
SampledSymbol compose_leibniz(const SampledSymbol& p1, const SampledSymbol& p2,
                              int order);

struct RemainderSweep {
  std::vector<double> lambdas;    // probe frequencies
  std::vector<double> residuals;  // sup |P1 P2 u_l - (p1 #_N p2) u_l|
  double slope = 0;               // log2 fit over the non-degenerate part
  bool degenerate = false;        // all residuals at rounding level
};

/// Plane-wave remainder sweep for the composition expansion at order N.
/// Each lambda must be a positive lattice frequency below Nyquist.
RemainderSweep composition_remainder(const SampledSymbol& p1,
                                     const SampledSymbol& p2, int order,
                                     const std::vector<double>& lambdas);

/// J_eps u: Fourier multiplier phi0(eps |xi|). eps in (0, 1].
GridFunction mollify(const GridFunction& u, double eps);

/// J_eps applied to the x-variable of an x-form symbol, per xi-slice.
SampledSymbol mollify_symbol(const SampledSymbol& p, double eps);

struct SmoothingSplit {
  SampledSymbol sharp;  // sum_j J_{eps_j} p . phi_j(xi), eps_j = 2^{-j gamma}
  SampledSymbol flat;   // p - sharp
  double gamma = 0;
};

/// Dyadic smoothing decomposition of an x-form symbol. gamma in (delta, 1).
SmoothingSplit smooth_symbol(const SampledSymbol& p, double gamma,
                             const LPPartition& part);

/// Dyadic kernel slices k_j: the inverse transform in xi of p . phi_j(xi),
/// per (x) slice (x_form) or per (x,y) slice (xxiy). The z-axis lives on the
/// signed lattice: index i represents z = i*dx for i < N/2, (i-N)*dx otherwise.
struct KernelBlocks {
  Grid grid;
  bool has_y = false;  // true when built from an xxiy symbol
  int levels = 0;
  /// x_form: k[j][x*N + z]; xxiy: k[j][(x*N + y)*N + z].
  std::vector<std::vector<cplx>> k;
};

KernelBlocks kernel_blocks(const SampledSymbol& p, const LPPartition& part);

/// Signed displacement of z-index i on the grid's lattice.
double signed_displacement(const Grid& g, int i);

/// v(x) = dx sum_y k(x, y, x - y) u(y), with k = sum_j k_j. On the lattice this
/// inverts the kernel extraction exactly.
GridFunction kernel_apply(const KernelBlocks& kb, const GridFunction& u);

struct KernelDecayRow {
  int j;                 // dyadic level
  double weighted;       // max over the window of |z|^M max_{x,y} |k_j(x,y,z)|
  double plain_sup;      // max over the window of max_{x,y} |k_j(x,y,z)|
  double z_slope;        // log-log slope of max_{x,y}|k_j| vs |z| on the window
  double self_similar;   // |z_j|^M max_{x,y} |k_j(x,y,z_j)| at z_j = (L/4) 2^{1-j}
};

struct KernelDecayReport {
  int M = 0;
  double z_lo = 0, z_hi = 0;  // window [8 dx, L/4]
  /// log2 fit of the self-similar column vs j. Measured at displacements that
  /// shrink with the level (z_j proportional to 2^{-j}, exact lattice nodes),
  /// where the dilation structure of the blocks makes the 2^{j(n + m - rho M)}
  /// law exact; at fixed z the weighted sup's constant is not saturated
  /// uniformly in j at these resolutions. Only fully resolved levels
  /// (2^{j+1} <= max |xi|) enter the fit.
  double j_slope = 0;
  std::vector<KernelDecayRow> rows;
};

/// Weighted decay of the kernel slices: the |z|^M-weighted value at
/// self-similar displacements should scale in j like 2^{j(n + m - rho M)}.
KernelDecayReport kernel_decay_report(const KernelBlocks& kb, int weight_power);

struct DisjointSupportResult {
  std::vector<double> lambdas;
  std::vector<double> values;  // sup |phi . P(psi u_lambda)|
  double slope = 0;            // log2 fit; the smoothing contract is <= -4
};

/// Localized operator phi(X) P psi(X') probed on plane waves. The supports of
/// phi and psi must be >= 4 dx apart on the torus.
DisjointSupportResult disjoint_support_check(const GridFunction& phi,
                                             const GridFunction& psi,
                                             const SampledSymbol& p,
                                             const std::vector<double>& lambdas);

}  // namespace psdo
