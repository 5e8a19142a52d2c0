#pragma once

#include "psdo/lp.hpp"
#include "psdo/symbols.hpp"

namespace psdo {

/// x-form quantization: (Pu)(x) = L^{-n} sum_xi e^{i x.xi} p(x,xi) uhat(xi).
/// uhat by FFT, then a direct double loop — O(N^{2n}), deliberately simple.
GridFunction apply_x_form(const SampledSymbol& p, const GridFunction& u);

/// y-form quantization: v = F^{-1}[ xi -> dx^n sum_y e^{-i y.xi} p(y,xi) u(y) ].
GridFunction apply_y_form(const SampledSymbol& p, const GridFunction& u);

/// Pointwise complex conjugate of the stored values (metadata unchanged).
SampledSymbol conjugate_symbol(const SampledSymbol& p);

/// On the lattice the adjoint of x-form quantization is exactly y-form
/// quantization of the conjugated symbol: residual of
/// <P u, v> - <u, P* v> should vanish to rounding.
struct AdjointCheck {
  double residual;  // |<Pu,v> - <u,P*v>|
  double relative;  // residual / (||u||_2 ||v||_2)
};
AdjointCheck adjoint_check(const SampledSymbol& p, const GridFunction& u,
                           const GridFunction& v);

/// (x,xi,y)-form: v(x) = (dx^n/L^n) sum_xi sum_y e^{i(x-y).xi} p(x,xi,y) u(y).
/// O(N^{3n}); the triple tabulation guard in make_symbol bounds the cost.
GridFunction apply_xxiy(const SampledSymbol& p, const GridFunction& u);

/// (x,y,xi)-form applied through the dyadic truncation
/// p_K = p * sum_{j<=K} phi_j(xi): returns the value at truncation K and the
/// sup-norm of each level's contribution (the convergence trace).
struct XyxiResult {
  GridFunction value;
  std::vector<double> increments;  // one per level 0..K
};
XyxiResult apply_xyxi(const SampledSymbol& p, const GridFunction& u,
                      const LPPartition& part, int truncation);

/// Adjoint symbol of an (x,y,xi)-form operator: p*(x,y,xi) = conj p(y,x,-xi).
/// (-xi is taken modulo the lattice; the Nyquist row is its own mirror.)
SampledSymbol adjoint_symbol_xyxi(const SampledSymbol& p);

/// Recover the x-form symbol of a linear lattice operator by probing with plane
/// waves: p(x,xi) = e^{-i x.xi} (P e^{i . xi})(x). Also spot-checks linearity of
/// `op` on two random probes and throws if it fails.
SampledSymbol symbol_from_operator(
    const Grid& g, const std::function<GridFunction(const GridFunction&)>& op,
    std::uint64_t probe_seed = 12345);

}  // namespace psdo
