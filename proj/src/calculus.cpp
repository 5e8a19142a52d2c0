#include "psdo/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "psdo/quantize.hpp"
#include "psdo/util.hpp"

namespace psdo {

namespace {

// Wrap a plain evaluator as a Func1D exposing only its order-0 "derivative";
// enough for the regularized quadrature, which never differentiates.
Func1D func_values_only(std::function<cplx(double)> f) {
  Func1D r;
  r.deriv = [f = std::move(f)](int k, double t) {
    if (k != 0)
      throw contract_error("value-only amplitude factor cannot be differentiated");
    return f(t);
  };
  return r;
}

double factorial(int k) {
  double f = 1;
  for (int r = 2; r <= k; ++r) f *= r;
  return f;
}

void require_x_form_1d(const SampledSymbol& p, const char* who) {
  if (p.form != SymbolForm::x_form)
    throw contract_error(std::string(who) + ": expects an x-form symbol");
  if (p.grid.dim != 1)
    throw contract_error(std::string(who) + ": 1-D only");
}

double check_lattice_frequency(const Grid& g, double lambda, const char* who) {
  double k = lambda / g.dxi();
  if (lambda <= 0 || std::fabs(k - std::round(k)) > 1e-9)
    throw contract_error(std::string(who) +
                         ": probe frequency must be a positive lattice multiple");
  if (std::round(k) >= g.points / 2)
    throw contract_error(std::string(who) + ": probe frequency beyond Nyquist");
  return g.dxi() * std::round(k);
}

// log2-log2 least-squares slope of v against t, skipping rounding-level values.
double decade_slope(const std::vector<double>& t, const std::vector<double>& v,
                    double floor_value, bool* degenerate) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (v[i] > floor_value) {
      xs.push_back(std::log2(t[i]));
      ys.push_back(std::log2(v[i]));
    }
  if (degenerate) *degenerate = xs.size() < 2;
  return xs.size() < 2 ? 0.0 : fit_slope(xs, ys);
}

}  // namespace

DoubleSymbol separable_double_symbol(const SampledSymbol& p1,
                                     const SampledSymbol& p2) {
  require_x_form_1d(p1, "separable_double_symbol");
  require_x_form_1d(p2, "separable_double_symbol");
  if (!p1.eval || !p2.eval)
    throw contract_error(
        "separable_double_symbol: both factors need closed-form evaluators");
  DoubleSymbol d;
  d.order = p1.order + p2.order;
  d.rho = std::min(p1.rho, p2.rho);
  d.delta = std::max(p1.delta, p2.delta);
  d.tau = std::min(p1.tau, p2.tau);
  auto e1 = p1.eval, e2 = p2.eval;
  d.factor1 = [e1](double x, double xi) {
    return e1(Vec{x, 0}, Vec{xi, 0}, Vec{0, 0});
  };
  d.factor2 = [e2](double x, double xi) {
    return e2(Vec{x, 0}, Vec{xi, 0}, Vec{0, 0});
  };
  d.eval = [f1 = d.factor1, f2 = d.factor2](double x, double xi, double xp,
                                            double xip) {
    return f1(x, xi) * f2(xp, xip);
  };
  return d;
}

SampledSymbol simplify_double_symbol(const DoubleSymbol& p, const Grid& coarse,
                                     const OscParams& params) {
  if (coarse.dim != 1)
    throw contract_error("simplify_double_symbol: 1-D only");
  if (!p.eval) throw contract_error("simplify_double_symbol: evaluator required");
  if (coarse.points > 32)
    throw contract_error(
        "simplify_double_symbol: per-point quadrature budget exceeded (N > 32)");

  SampledSymbol out;
  out.grid = coarse;
  out.form = SymbolForm::x_form;
  out.order = p.order;
  out.rho = p.rho;
  out.delta = p.delta;
  out.tau = p.tau;
  std::size_t s = coarse.size();
  out.values.resize(s * s);
  Cutoff chi = gaussian_cutoff();
  for (std::size_t a = 0; a < s; ++a) {
    double x = coarse.x_of_flat(a)[0];
    for (std::size_t b = 0; b < s; ++b) {
      double xi = coarse.xi_of_flat(b)[0];
      Amplitude amp;
      amp.order = p.order;
      amp.delta = p.delta;
      amp.tau = 0;
      if (p.factor1 && p.factor2) {
        amp = make_amplitude(
            {{cplx{1, 0},
              func_values_only([&, f = p.factor1](double eta) {
                return f(x, xi + eta);
              }),
              func_values_only([&, f = p.factor2](double y) {
                return f(x + y, xi);
              })}},
            p.order, p.delta, 0);
      } else {
        amp.eval = [&](double eta, double y) {
          return p.eval(x, xi + eta, x + y, xi);
        };
      }
      OscResult r = os_regularized(amp, chi, params);
      out.values[a * s + b] = r.value;
    }
  }
  return out;
}

GridFunction apply_double_symbol(const DoubleSymbol& p, const Grid& g,
                                 const GridFunction& u) {
  if (g.dim != 1) throw contract_error("apply_double_symbol: 1-D only");
  if (!(u.grid == g)) throw contract_error("apply_double_symbol: grid mismatch");
  GridFunction uhat = forward_transform(u);
  int N = g.points;
  GridFunction v(g, Side::physical);
  // v(x) = L^{-1} sum_xi e^{ix xi} [dx sum_y e^{-iy xi}
  //        (L^{-1} sum_xi' e^{iy xi'} p(x,xi,y,xi') uhat(xi'))]
  for (int a = 0; a < N; ++a) {
    double x = g.x_of_flat(a)[0];
    cplx acc{0, 0};
    for (int b = 0; b < N; ++b) {
      double xi = g.xi_of_flat(b)[0];
      cplx outer{0, 0};
      for (int c = 0; c < N; ++c) {
        double y = g.x_of_flat(c)[0];
        cplx inner{0, 0};
        for (int d = 0; d < N; ++d) {
          double xip = g.xi_of_flat(d)[0];
          inner += std::polar(1.0, y * xip) * p.eval(x, xi, y, xip) *
                   uhat.values[d];
        }
        outer += std::polar(1.0, -y * xi) * inner;
      }
      acc += std::polar(1.0, x * xi) * outer;
    }
    v.values[a] = acc * (g.dx() / (g.period * g.period));
  }
  return v;
}

SampledSymbol compose_leibniz(const SampledSymbol& p1, const SampledSymbol& p2,
                              int order) {
  if (p1.form != SymbolForm::x_form || p2.form != SymbolForm::x_form)
    throw contract_error("compose_leibniz: x-form symbols required");
  if (!(p1.grid == p2.grid))
    throw contract_error("compose_leibniz: grid mismatch");
  if (order < 0 || order > 4)
    throw contract_error("compose_leibniz: expansion order must be in 0..4");
  if (!(p2.tau > order))
    throw contract_error(
        "compose_leibniz: p2 lacks the declared x-regularity for this order");
  const Grid& g = p1.grid;
  std::size_t s = g.size();

  SampledSymbol out;
  out.grid = g;
  out.form = SymbolForm::x_form;
  out.order = p1.order + p2.order;
  out.rho = std::min(p1.rho, p2.rho);
  out.delta = std::max(p1.delta, p2.delta);
  out.tau = std::min(p1.tau, p2.tau - order);
  out.values.assign(s * s, cplx{0, 0});

  std::vector<Idx> alphas;
  for (int total = 0; total <= order; ++total) {
    if (g.dim == 1) alphas.push_back({total, 0});
    else
      for (int a = 0; a <= total; ++a) alphas.push_back({a, total - a});
  }
  for (const Idx& alpha : alphas) {
    int total = alpha[0] + (g.dim == 2 ? alpha[1] : 0);
    double coeff = 1.0 / (factorial(alpha[0]) *
                          (g.dim == 2 ? factorial(alpha[1]) : 1.0));
    std::vector<cplx> d1 = xi_derivative_table(p1, alpha);
    // D_x^alpha p2 = (-i)^{|alpha|} d_x^alpha p2, spectrally per xi-slice.
    cplx phase = std::pow(cplx{0, -1}, total);
    std::vector<cplx> d2(s * s);
    for (std::size_t b = 0; b < s; ++b) {
      GridFunction slice(g, Side::physical);
      for (std::size_t a = 0; a < s; ++a) slice.values[a] = p2.values[a * s + b];
      GridFunction der = total == 0 ? slice : spectral_derivative(slice, alpha);
      for (std::size_t a = 0; a < s; ++a) d2[a * s + b] = phase * der.values[a];
    }
    for (std::size_t i = 0; i < s * s; ++i)
      out.values[i] += coeff * d1[i] * d2[i];
  }
  return out;
}

RemainderSweep composition_remainder(const SampledSymbol& p1,
                                     const SampledSymbol& p2, int order,
                                     const std::vector<double>& lambdas) {
  if (p1.rho != 1 || p1.delta != 0 || p2.rho != 1 || p2.delta != 0)
    throw contract_error("composition_remainder: (rho, delta) = (1, 0) required");
  if (lambdas.empty())
    throw contract_error("composition_remainder: empty probe list");
  const Grid& g = p1.grid;
  SampledSymbol q = compose_leibniz(p1, p2, order);
  RemainderSweep sweep;
  for (double raw : lambdas) {
    double lam = check_lattice_frequency(g, raw, "composition_remainder");
    GridFunction u = sample(g, [lam](const Vec& x) {
      return std::polar(1.0, lam * x[0]);
    });
    GridFunction exact = apply_x_form(p1, apply_x_form(p2, u));
    GridFunction approx = apply_x_form(q, u);
    sweep.lambdas.push_back(lam);
    sweep.residuals.push_back(sup_norm(exact - approx));
  }
  sweep.slope = decade_slope(sweep.lambdas, sweep.residuals, 1e-13,
                             &sweep.degenerate);
  return sweep;
}

GridFunction mollify(const GridFunction& u, double eps) {
  if (!(eps > 0 && eps <= 1))
    throw contract_error("mollify: eps must lie in (0, 1]");
  int dim = u.grid.dim;
  return apply_multiplier(u, [eps, dim](const Vec& xi) {
    return cplx{lp_phi0(Vec{eps * xi[0], eps * xi[1]}, dim), 0};
  });
}

SampledSymbol mollify_symbol(const SampledSymbol& p, double eps) {
  if (p.form != SymbolForm::x_form)
    throw contract_error("mollify_symbol: x-form symbols only");
  const Grid& g = p.grid;
  std::size_t s = g.size();
  SampledSymbol out = p;
  out.eval = nullptr;           // the stored values no longer match closed forms
  out.xi_derivative = nullptr;
  for (std::size_t b = 0; b < s; ++b) {
    GridFunction slice(g, Side::physical);
    for (std::size_t a = 0; a < s; ++a) slice.values[a] = p.values[a * s + b];
    GridFunction m = mollify(slice, eps);
    for (std::size_t a = 0; a < s; ++a) out.values[a * s + b] = m.values[a];
  }
  return out;
}

SmoothingSplit smooth_symbol(const SampledSymbol& p, double gamma,
                             const LPPartition& part) {
  if (p.form != SymbolForm::x_form)
    throw contract_error("smooth_symbol: x-form symbols only");
  if (!(part.grid == p.grid))
    throw contract_error("smooth_symbol: partition grid mismatch");
  if (!(gamma > p.delta && gamma < 1))
    throw contract_error("smooth_symbol: gamma must lie in (delta, 1)");
  const Grid& g = p.grid;
  std::size_t s = g.size();

  SmoothingSplit split;
  split.gamma = gamma;
  split.sharp = p;
  split.sharp.eval = nullptr;
  split.sharp.xi_derivative = nullptr;
  split.sharp.delta = gamma;
  split.sharp.tau = 1e9;
  split.sharp.values.assign(s * s, cplx{0, 0});
  for (int j = 0; j <= part.levels; ++j) {
    double eps_j = std::pow(2.0, -j * gamma);
    SampledSymbol mj = mollify_symbol(p, eps_j);
    for (std::size_t b = 0; b < s; ++b) {
      double w = part.blocks[j][b];
      if (w == 0) continue;
      for (std::size_t a = 0; a < s; ++a)
        split.sharp.values[a * s + b] += w * mj.values[a * s + b];
    }
  }
  split.flat = split.sharp;
  split.flat.order = p.order - (gamma - p.delta) * std::min(p.tau, 1e6);
  split.flat.tau = p.tau;
  for (std::size_t i = 0; i < s * s; ++i)
    split.flat.values[i] = p.values[i] - split.sharp.values[i];
  return split;
}

KernelBlocks kernel_blocks(const SampledSymbol& p, const LPPartition& part) {
  if (p.grid.dim != 1)
    throw contract_error("kernel_blocks: 1-D only");
  if (p.form == SymbolForm::xyxi)
    throw contract_error("kernel_blocks: x-form or (x,xi,y)-form required");
  if (!(part.grid == p.grid))
    throw contract_error("kernel_blocks: partition grid mismatch");
  const Grid& g = p.grid;
  std::size_t N = g.size();
  KernelBlocks kb;
  kb.grid = g;
  kb.has_y = p.form == SymbolForm::xxiy;
  kb.levels = part.levels;
  std::size_t slices = kb.has_y ? N * N : N;
  kb.k.assign(part.levels + 1, std::vector<cplx>(slices * N));
  for (int j = 0; j <= part.levels; ++j) {
    for (std::size_t sl = 0; sl < slices; ++sl) {
      GridFunction spec(g, Side::frequency);
      for (std::size_t c = 0; c < N; ++c) {
        // xxiy stores (x, xi, y): the xi index is the middle slot
        std::size_t idx = kb.has_y ? ((sl / N) * N + c) * N + (sl % N)
                                   : sl * N + c;
        spec.values[c] = p.values[idx] * part.blocks[j][c];
      }
      GridFunction kj = inverse_transform(spec);
      for (std::size_t z = 0; z < N; ++z) kb.k[j][sl * N + z] = kj.values[z];
    }
  }
  return kb;
}

double signed_displacement(const Grid& g, int i) {
  return g.signed_index(i) * g.dx();
}

GridFunction kernel_apply(const KernelBlocks& kb, const GridFunction& u) {
  const Grid& g = kb.grid;
  if (!(u.grid == g)) throw contract_error("kernel_apply: grid mismatch");
  int N = g.points;
  std::vector<cplx> total(kb.k.front().size(), cplx{0, 0});
  for (const auto& level : kb.k)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += level[i];
  GridFunction v(g, Side::physical);
  for (int a = 0; a < N; ++a) {
    cplx acc{0, 0};
    for (int b = 0; b < N; ++b) {
      int zi = (a - b + N) % N;
      std::size_t idx = kb.has_y
                            ? (static_cast<std::size_t>(a) * N + b) * N + zi
                            : static_cast<std::size_t>(a) * N + zi;
      acc += total[idx] * u.values[b];
    }
    v.values[a] = acc * g.dx();
  }
  return v;
}

KernelDecayReport kernel_decay_report(const KernelBlocks& kb, int weight_power) {
  const Grid& g = kb.grid;
  int N = g.points;
  KernelDecayReport rep;
  rep.M = weight_power;
  rep.z_lo = 8 * g.dx();
  rep.z_hi = g.period / 4;
  std::vector<int> window;
  for (int i = 0; i < N; ++i) {
    double z = std::fabs(signed_displacement(g, i));
    if (z >= rep.z_lo && z <= rep.z_hi) window.push_back(i);
  }
  if (window.size() < 3)
    throw contract_error(
        "kernel_decay_report: window [8 dx, L/4] holds fewer than 3 nodes");
  std::size_t slices = kb.k.front().size() / N;
  std::vector<double> js, ws;
  for (int j = 0; j <= kb.levels; ++j) {
    KernelDecayRow row;
    row.j = j;
    row.weighted = 0;
    row.plain_sup = 0;
    std::vector<double> zs, vs;
    for (int i : window) {
      double z = std::fabs(signed_displacement(g, i));
      double m = 0;
      for (std::size_t sl = 0; sl < slices; ++sl)
        m = std::max(m, std::abs(kb.k[j][sl * N + i]));
      row.plain_sup = std::max(row.plain_sup, m);
      row.weighted = std::max(row.weighted, std::pow(z, weight_power) * m);
      zs.push_back(z);
      vs.push_back(m);
    }
    row.z_slope = decade_slope(zs, vs, 1e-300, nullptr);
    // self-similar displacement z_j = (L/4) 2^{1-j}, an exact lattice node for
    // power-of-two N; clamp the index to the lattice for very deep levels
    int ij = std::max(1, static_cast<int>(std::lround(
                             N / std::pow(2.0, j + 1))));
    double zj = ij * g.dx();
    double mj = 0;
    for (std::size_t sl = 0; sl < slices; ++sl)
      mj = std::max({mj, std::abs(kb.k[j][sl * N + ij]),
                     std::abs(kb.k[j][sl * N + (N - ij)])});
    row.self_similar = std::pow(zj, weight_power) * mj;
    rep.rows.push_back(row);
    // Fit only fully resolved levels: once the annulus of phi_j reaches past
    // the lattice Nyquist window, the periodized multiplier has a derivative
    // kink at the wrap whose kernel tail pollutes the measurement.
    bool resolved = std::pow(2.0, j + 1) <= g.max_xi() * (1 + 1e-12);
    if (j >= 1 && resolved && row.self_similar > 1e-300) {
      js.push_back(j);
      ws.push_back(std::log2(row.self_similar));
    }
  }
  rep.j_slope = js.size() < 2 ? 0.0 : fit_slope(js, ws);
  return rep;
}

DisjointSupportResult disjoint_support_check(
    const GridFunction& phi, const GridFunction& psi, const SampledSymbol& p,
    const std::vector<double>& lambdas) {
  const Grid& g = p.grid;
  if (!(phi.grid == g) || !(psi.grid == g))
    throw contract_error("disjoint_support_check: grid mismatch");
  if (p.form == SymbolForm::xyxi)
    throw contract_error("disjoint_support_check: x-form or (x,xi,y)-form only");
  if (lambdas.empty())
    throw contract_error("disjoint_support_check: empty probe list");
  // support separation on the torus
  double min_dist = g.period;
  bool any_phi = false, any_psi = false;
  for (std::size_t a = 0; a < g.size(); ++a) {
    if (std::abs(phi.values[a]) <= 1e-12) continue;
    any_phi = true;
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (std::abs(psi.values[b]) <= 1e-12) continue;
      any_psi = true;
      min_dist = std::min(min_dist,
                          g.torus_distance(g.x_of_flat(a), g.x_of_flat(b)));
    }
  }
  if (!any_phi || !any_psi)
    throw contract_error("disjoint_support_check: a cutoff is identically zero");
  if (min_dist < 4 * g.dx())
    throw contract_error(
        "disjoint_support_check: supports closer than 4 dx on the torus");

  DisjointSupportResult res;
  for (double raw : lambdas) {
    double lam = check_lattice_frequency(g, raw, "disjoint_support_check");
    GridFunction u = sample(g, [lam, &g](const Vec& x) {
      double phase = 0;
      for (int d = 0; d < g.dim; ++d) phase += lam * x[d];
      return std::polar(1.0, phase);
    });
    GridFunction cut = hadamard(psi, u);
    GridFunction out = p.form == SymbolForm::x_form ? apply_x_form(p, cut)
                                                    : apply_xxiy(p, cut);
    res.lambdas.push_back(lam);
    res.values.push_back(sup_norm(hadamard(phi, out)));
  }
  res.slope = decade_slope(res.lambdas, res.values, 1e-300, nullptr);
  return res;
}

}  // namespace psdo
