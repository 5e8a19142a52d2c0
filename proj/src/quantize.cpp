#include "psdo/quantize.hpp"

#include <cmath>

#include "psdo/util.hpp"

namespace psdo {

namespace {

void require_physical(const GridFunction& u, const char* who) {
  if (u.side != Side::physical)
    throw contract_error(std::string(who) + ": expects physical-side input");
}

double phase_dot(const Vec& a, const Vec& b, int dim) {
  double s = 0;
  for (int d = 0; d < dim; ++d) s += a[d] * b[d];
  return s;
}

// Unsigned lattice index of -xi_k per axis: 0 -> 0, k -> N-k (Nyquist fixed).
Idx negate_frequency(const Grid& g, const Idx& k) {
  Idx out{0, 0};
  for (int d = 0; d < g.dim; ++d) out[d] = k[d] == 0 ? 0 : g.points - k[d];
  return out;
}

}  // namespace

GridFunction apply_x_form(const SampledSymbol& p, const GridFunction& u) {
  if (p.form != SymbolForm::x_form)
    throw contract_error("apply_x_form: symbol must be x-form");
  if (!(p.grid == u.grid)) throw contract_error("apply_x_form: grid mismatch");
  require_physical(u, "apply_x_form");
  const Grid& g = u.grid;
  GridFunction uhat = forward_transform(u);
  GridFunction v(g, Side::physical);
  std::size_t s = g.size();
  double norm = std::pow(g.period, -g.dim);
  for (std::size_t i = 0; i < s; ++i) {
    Vec x = g.x_of_flat(i);
    cplx acc{0, 0};
    for (std::size_t k = 0; k < s; ++k) {
      acc += std::polar(1.0, phase_dot(x, g.xi_of_flat(k), g.dim)) *
             p.values[i * s + k] * uhat.values[k];
    }
    v.values[i] = norm * acc;
  }
  return v;
}

GridFunction apply_y_form(const SampledSymbol& p, const GridFunction& u) {
  if (p.form != SymbolForm::x_form)
    throw contract_error("apply_y_form: symbol must be x-form (read as p(y,xi))");
  if (!(p.grid == u.grid)) throw contract_error("apply_y_form: grid mismatch");
  require_physical(u, "apply_y_form");
  const Grid& g = u.grid;
  std::size_t s = g.size();
  GridFunction w(g, Side::frequency);
  double dxn = std::pow(g.dx(), g.dim);
  for (std::size_t k = 0; k < s; ++k) {
    Vec xi = g.xi_of_flat(k);
    cplx acc{0, 0};
    for (std::size_t i = 0; i < s; ++i) {
      acc += std::polar(1.0, -phase_dot(g.x_of_flat(i), xi, g.dim)) *
             p.values[i * s + k] * u.values[i];
    }
    w.values[k] = dxn * acc;
  }
  return inverse_transform(w);
}

SampledSymbol conjugate_symbol(const SampledSymbol& p) {
  SampledSymbol q = p;
  for (auto& z : q.values) z = std::conj(z);
  if (p.eval)
    q.eval = [e = p.eval](const Vec& x, const Vec& xi, const Vec& y) {
      return std::conj(e(x, xi, y));
    };
  q.xi_derivative = nullptr;  // conjugation flips the derivative's inner sign; drop
  return q;
}

AdjointCheck adjoint_check(const SampledSymbol& p, const GridFunction& u,
                           const GridFunction& v) {
  cplx lhs = inner_product(apply_x_form(p, u), v);
  cplx rhs = inner_product(u, apply_y_form(conjugate_symbol(p), v));
  AdjointCheck c;
  c.residual = std::abs(lhs - rhs);
  double denom = l2_norm(u) * l2_norm(v);
  c.relative = denom > 0 ? c.residual / denom : c.residual;
  return c;
}

GridFunction apply_xxiy(const SampledSymbol& p, const GridFunction& u) {
  if (p.form != SymbolForm::xxiy)
    throw contract_error("apply_xxiy: symbol must be xxiy-form");
  if (!(p.grid == u.grid)) throw contract_error("apply_xxiy: grid mismatch");
  require_physical(u, "apply_xxiy");
  const Grid& g = u.grid;
  std::size_t s = g.size();
  GridFunction v(g, Side::physical);
  double norm = std::pow(g.dx() / g.period, g.dim);
  for (std::size_t i = 0; i < s; ++i) {
    Vec x = g.x_of_flat(i);
    cplx acc{0, 0};
    for (std::size_t k = 0; k < s; ++k) {
      Vec xi = g.xi_of_flat(k);
      // inner y-sum of e^{-i y.xi} p(x,xi,y) u(y)
      cplx inner{0, 0};
      for (std::size_t c = 0; c < s; ++c) {
        inner += std::polar(1.0, -phase_dot(g.x_of_flat(c), xi, g.dim)) *
                 p.values[(i * s + k) * s + c] * u.values[c];
      }
      acc += std::polar(1.0, phase_dot(x, xi, g.dim)) * inner;
    }
    v.values[i] = norm * acc;
  }
  return v;
}

XyxiResult apply_xyxi(const SampledSymbol& p, const GridFunction& u,
                      const LPPartition& part, int truncation) {
  if (p.form != SymbolForm::xyxi)
    throw contract_error("apply_xyxi: symbol must be xyxi-form");
  if (!(p.grid == u.grid) || !(part.grid == u.grid))
    throw contract_error("apply_xyxi: grid mismatch");
  if (truncation < 0 || truncation > part.levels)
    throw contract_error("apply_xyxi: truncation outside partition levels");
  require_physical(u, "apply_xyxi");
  const Grid& g = u.grid;
  std::size_t s = g.size();
  double norm = std::pow(g.dx() / g.period, g.dim);

  // w(x,xi) = sum_y e^{-i y.xi} p(x,y,xi) u(y) — shared across truncation levels
  std::vector<cplx> w(s * s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t k = 0; k < s; ++k) {
      Vec xi = g.xi_of_flat(k);
      cplx inner{0, 0};
      for (std::size_t b = 0; b < s; ++b) {
        inner += std::polar(1.0, -phase_dot(g.x_of_flat(b), xi, g.dim)) *
                 p.values[(i * s + b) * s + k] * u.values[b];
      }
      w[i * s + k] = inner;
    }

  XyxiResult res;
  res.value = GridFunction(g, Side::physical);
  for (int j = 0; j <= truncation; ++j) {
    GridFunction contrib(g, Side::physical);
    for (std::size_t i = 0; i < s; ++i) {
      Vec x = g.x_of_flat(i);
      cplx acc{0, 0};
      for (std::size_t k = 0; k < s; ++k) {
        double window = part.blocks[j][k];
        if (window == 0) continue;
        acc += window * std::polar(1.0, phase_dot(x, g.xi_of_flat(k), g.dim)) *
               w[i * s + k];
      }
      contrib.values[i] = norm * acc;
    }
    res.value = res.value + contrib;
    res.increments.push_back(sup_norm(contrib));
  }
  return res;
}

SampledSymbol adjoint_symbol_xyxi(const SampledSymbol& p) {
  if (p.form != SymbolForm::xyxi)
    throw contract_error("adjoint_symbol_xyxi: symbol must be xyxi-form");
  const Grid& g = p.grid;
  std::size_t s = g.size();
  SampledSymbol q = p;
  q.eval = nullptr;
  q.xi_derivative = nullptr;
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b)
      for (std::size_t c = 0; c < s; ++c) {
        std::size_t cm = g.flatten(negate_frequency(g, g.unflatten(c)));
        q.values[(a * s + b) * s + c] =
            std::conj(p.values[(b * s + a) * s + cm]);
      }
  if (p.eval)
    q.eval = [e = p.eval](const Vec& x, const Vec& xi, const Vec& y) {
      return std::conj(e(y, {-xi[0], -xi[1]}, x));
    };
  return q;
}

SampledSymbol symbol_from_operator(
    const Grid& g, const std::function<GridFunction(const GridFunction&)>& op,
    std::uint64_t probe_seed) {
  std::size_t s = g.size();
  SampledSymbol p;
  p.grid = g;
  p.form = SymbolForm::x_form;
  p.values.resize(s * s);
  for (std::size_t k = 0; k < s; ++k) {
    Vec xi = g.xi_of_flat(k);
    GridFunction e(g, Side::physical);
    for (std::size_t i = 0; i < s; ++i)
      e.values[i] = std::polar(1.0, phase_dot(g.x_of_flat(i), xi, g.dim));
    GridFunction w = op(e);
    if (!(w.grid == g) || w.side != Side::physical)
      throw contract_error("symbol_from_operator: operator changed grid or side");
    for (std::size_t i = 0; i < s; ++i)
      p.values[i * s + k] =
          std::polar(1.0, -phase_dot(g.x_of_flat(i), xi, g.dim)) * w.values[i];
  }
  // linearity spot check: op(a u1 + u2) = a op(u1) + op(u2) on random probes
  Rng rng(probe_seed);
  GridFunction u1(g, Side::physical), u2(g, Side::physical);
  for (std::size_t i = 0; i < s; ++i) {
    u1.values[i] = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    u2.values[i] = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  }
  cplx a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  GridFunction lhs = op(a * u1 + u2);
  GridFunction rhs = a * op(u1) + op(u2);
  double scale = sup_norm(lhs) + sup_norm(rhs) + 1e-30;
  if (sup_norm(lhs - rhs) / scale > 1e-8)
    throw contract_error("symbol_from_operator: probe operator is not linear");
  return p;
}

}  // namespace psdo
