#include "psdo/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "psdo/lp.hpp"
#include "psdo/quantize.hpp"

namespace psdo {

namespace {

// Legendre nodes/weights on [-1, 1] by Newton iteration on the recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
      }
      pp = n * (t * p0 - p1) / (t * t - 1);
      double dt = p0 / pp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1 - t * t) * pp * pp);
  }
}

// Monotone scalar inversion: Newton from an affine initial guess, with a
// bisection fallback on a bracket around the target.
double invert_monotone(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double target,
                       double guess) {
  double y = guess;
  for (int it = 0; it < 60; ++it) {
    double r = f(y) - target;
    if (std::fabs(r) < 1e-13) return y;
    double d = df(y);
    if (std::fabs(d) < 1e-12) break;
    y -= r / d;
  }
  double lo = guess - 4, hi = guess + 4;
  while (f(lo) > target) lo -= 2;
  while (f(hi) < target) hi += 2;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// plateau bump: 1 for |t| <= 1/2, smooth ramp, 0 for |t| >= 1
double plateau(double t) { return lp_g(2 * (1 - std::fabs(t))); }

}  // namespace

Diffeomorphism diffeo_identity() {
  Diffeomorphism h;
  h.name = "identity";
  h.bound_C = 1;
  h.forward = [](double y) { return y; };
  h.derivative = [](double) { return 1.0; };
  h.inverse = [](double x) { return x; };
  return h;
}

Diffeomorphism diffeo_affine(double a, double b) {
  if (a == 0) throw contract_error("diffeo_affine: zero slope");
  Diffeomorphism h;
  h.name = "affine";
  h.bound_C = std::max(std::fabs(a), 1.0 / std::fabs(a));
  h.forward = [a, b](double y) { return a * y + b; };
  h.derivative = [a](double) { return a; };
  h.inverse = [a, b](double x) { return (x - b) / a; };
  return h;
}

Diffeomorphism diffeo_sine(double a) {
  if (std::fabs(a) >= 1)
    throw contract_error("diffeo_sine: |a| < 1 required for invertibility");
  Diffeomorphism h;
  h.name = "sine";
  h.bound_C = std::max(1 + std::fabs(a), 1.0 / (1 - std::fabs(a)));
  h.forward = [a](double y) { return y + a * std::sin(y); };
  h.derivative = [a](double y) { return 1 + a * std::cos(y); };
  h.inverse = [fwd = h.forward, der = h.derivative](double x) {
    return invert_monotone(fwd, der, x, x);
  };
  return h;
}

Diffeomorphism diffeo_c1theta(double a, double theta) {
  if (!(theta > 0 && theta < 1))
    throw contract_error("diffeo_c1theta: theta must lie in (0, 1)");
  if (std::fabs(a) * (1 + theta) >= 1)
    throw contract_error("diffeo_c1theta: |a|(1 + theta) < 1 required");
  Diffeomorphism h;
  h.name = "c1theta";
  h.regularity = Diffeomorphism::Regularity::c1theta;
  h.theta = theta;
  double lip = std::fabs(a) * (1 + theta);
  h.bound_C = std::max(1 + lip, 1.0 / (1 - lip));
  h.forward = [a, theta](double y) {
    double s = std::sin(y);
    return y + a * (s >= 0 ? 1.0 : -1.0) * std::pow(std::fabs(s), 1 + theta);
  };
  h.derivative = [a, theta](double y) {
    double s = std::sin(y);
    return 1 + a * (1 + theta) * std::pow(std::fabs(s), theta) * std::cos(y);
  };
  h.inverse = [fwd = h.forward, der = h.derivative](double x) {
    return invert_monotone(fwd, der, x, x);
  };
  return h;
}

Diffeomorphism diffeo_from_name(const std::string& spec) {
  std::string head = spec, args;
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    head = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  std::vector<double> v;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (head == "identity" && v.empty()) return diffeo_identity();
  if (head == "affine" && v.size() == 2) return diffeo_affine(v[0], v[1]);
  if (head == "sine" && v.size() == 1) return diffeo_sine(v[0]);
  if (head == "c1theta" && v.size() == 2) return diffeo_c1theta(v[0], v[1]);
  throw contract_error("unknown diffeomorphism '" + spec + "'");
}

void validate_diffeomorphism(const Diffeomorphism& h, double lo, double hi,
                             int probes) {
  if (probes < 2) throw contract_error("validate_diffeomorphism: probes >= 2");
  for (int i = 0; i < probes; ++i) {
    double y = lo + (hi - lo) * i / (probes - 1);
    double d = std::fabs(h.derivative(y));
    if (d > h.bound_C * (1 + 1e-9) || d < 1.0 / h.bound_C * (1 - 1e-9))
      throw contract_error("diffeomorphism '" + h.name +
                           "': determinant bound violated at a probe");
    if (std::fabs(h.inverse(h.forward(y)) - y) > 1e-8)
      throw contract_error("diffeomorphism '" + h.name +
                           "': inverse round trip fails at a probe");
  }
}

double xi_h(const Diffeomorphism& h, double y, double yprime, int quad_nodes) {
  double a = std::min(y, yprime), b = std::max(y, yprime);
  if (a < h.domain_lo || b > h.domain_hi)
    throw contract_error("xi_h: segment leaves the chart domain");
  std::vector<double> x, w;
  gauss_legendre(quad_nodes, x, w);
  double s = 0;
  for (int i = 0; i < quad_nodes; ++i) {
    double t = 0.5 * (x[i] + 1);  // node in [0, 1]
    s += 0.5 * w[i] * h.derivative(yprime + t * (y - yprime));
  }
  return s;
}

double CoverFamily::phi(std::size_t j, double x) const {
  double num = plateau((x - centers[j]) / r);
  if (num == 0) return 0;
  double den = 0;
  for (double c : centers) den += plateau((x - c) / r);
  return num / den;
}

double CoverFamily::psi(std::size_t j, double x) const {
  return lp_g(3 - std::fabs(x - centers[j]) / r);
}

CoverFamily build_cover(double r, double box_lo, double box_hi) {
  if (!(r > 0) || !(box_hi > box_lo))
    throw contract_error("build_cover: need r > 0 and a nonempty box");
  CoverFamily f;
  f.r = r;
  f.box_lo = box_lo;
  f.box_hi = box_hi;
  long j0 = static_cast<long>(std::floor(box_lo / r)) - 4;
  long j1 = static_cast<long>(std::ceil(box_hi / r)) + 4;
  for (long j = j0; j <= j1; ++j) f.centers.push_back(r * j);
  return f;
}

double select_cover_scale(const Diffeomorphism& h, double lo, double hi) {
  const int M = 201;
  std::vector<double> hy(M);
  for (int i = 0; i < M; ++i) hy[i] = h.forward(lo + (hi - lo) * i / (M - 1));
  double cap = h.bound_C * 1.1, floor_v = 1.0 / (h.bound_C * 1.1);
  double r = 1;
  for (int halving = 0; halving <= 20; ++halving, r /= 2) {
    bool ok = true;
    for (int i = 0; i < M && ok; ++i)
      for (int k = 0; k < M && ok; ++k) {
        if (std::fabs(hy[i] - hy[k]) > 4 * r) continue;
        double yi = lo + (hi - lo) * i / (M - 1);
        double yk = lo + (hi - lo) * k / (M - 1);
        double xi = std::fabs(xi_h(h, yi, yk));
        ok = xi <= cap && xi >= floor_v;
      }
    if (ok) return r;
  }
  throw contract_error("select_cover_scale: no admissible scale found");
}

SampledSymbol pullback_principal(const SampledSymbol& p,
                                 const Diffeomorphism& h) {
  if (p.form != SymbolForm::x_form || p.grid.dim != 1)
    throw contract_error("pullback_principal: 1-D x-form symbols only");
  if (!p.eval)
    throw contract_error("pullback_principal: closed-form evaluator required");
  if (p.rho != 1 || p.delta != 0)
    throw contract_error("pullback_principal: (rho, delta) = (1, 0) required");
  const Grid& g = p.grid;
  SampledSymbol out;
  out.grid = g;
  out.form = SymbolForm::x_form;
  out.order = p.order;
  out.rho = p.rho;
  out.delta = p.delta;
  out.tau = p.tau;
  out.eval = [pe = p.eval, fwd = h.forward, der = h.derivative](
                 const Vec& y, const Vec& eta, const Vec&) {
    double d = der(y[0]);
    if (std::fabs(d) < 1e-12)
      throw contract_error("pullback_principal: singular derivative");
    return pe(Vec{fwd(y[0]), 0}, Vec{eta[0] / d, 0}, Vec{0, 0});
  };
  std::size_t s = g.size();
  out.values.resize(s * s);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b)
      out.values[a * s + b] = out.eval(g.x_of_flat(a), g.xi_of_flat(b), Vec{0, 0});
  return out;
}

SampledSymbol pullback_full(const SampledSymbol& p, const Diffeomorphism& h,
                            const CoverFamily& cover) {
  if (p.grid.dim != 1)
    throw contract_error("pullback_full: 1-D only");
  if (p.form == SymbolForm::xyxi)
    throw contract_error("pullback_full: x-form or (x,xi,y)-form input");
  if (!p.eval)
    throw contract_error("pullback_full: closed-form evaluator required");
  if (p.rho != 1 || p.delta != 0)
    throw contract_error("pullback_full: (rho, delta) = (1, 0) required");
  const Grid& g = p.grid;
  int N = g.points;
  if (N > 128)
    throw contract_error("pullback_full: dense (y,eta,y') budget exceeded");

  std::vector<double> hy(N), dh(N);
  for (int i = 0; i < N; ++i) {
    hy[i] = h.forward(g.x_of_flat(i)[0]);
    dh[i] = h.derivative(g.x_of_flat(i)[0]);
  }
  double cap = h.bound_C * 1.1, floor_v = 1.0 / (h.bound_C * 1.1);
  std::vector<double> xi_tab(static_cast<std::size_t>(N) * N);
  std::vector<double> weight(static_cast<std::size_t>(N) * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double cut = 0;
      for (std::size_t j = 0; j < cover.centers.size(); ++j) {
        double f = cover.phi(j, hy[a]);
        if (f != 0) cut += f * cover.psi(j, hy[b]);
      }
      std::size_t ab = static_cast<std::size_t>(a) * N + b;
      if (cut == 0) {
        weight[ab] = 0;
        xi_tab[ab] = 1;
        continue;
      }
      double xv = xi_h(h, g.x_of_flat(a)[0], g.x_of_flat(b)[0]);
      if (std::fabs(xv) > cap || std::fabs(xv) < floor_v)
        throw contract_error(
            "pullback_full: segment-average determinant sandwich fails; "
            "shrink the cover scale");
      xi_tab[ab] = xv;
      weight[ab] = cut * std::fabs(dh[b]) / std::fabs(xv);
    }

  SampledSymbol out;
  out.grid = g;
  out.form = SymbolForm::xyxi;
  out.order = p.order;
  out.rho = p.rho;
  out.delta = p.delta;
  out.tau = h.regularity == Diffeomorphism::Regularity::c1theta
                ? std::min(p.tau, 1 + h.theta)
                : p.tau;
  out.values.resize(static_cast<std::size_t>(N) * N * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      std::size_t ab = static_cast<std::size_t>(a) * N + b;
      for (int c = 0; c < N; ++c) {
        cplx v{0, 0};
        if (weight[ab] != 0) {
          double eta = g.xi_of_flat(c)[0];
          v = weight[ab] *
              p.eval(Vec{hy[a], 0}, Vec{eta / xi_tab[ab], 0}, Vec{hy[b], 0});
        }
        out.values[ab * N + c] = v;
      }
    }
  return out;
}

GridFunction apply_xyxi_direct(const SampledSymbol& a, const GridFunction& u) {
  if (a.form != SymbolForm::xyxi)
    throw contract_error("apply_xyxi_direct: (x,y,xi)-form required");
  const Grid& g = a.grid;
  if (!(u.grid == g)) throw contract_error("apply_xyxi_direct: grid mismatch");
  int N = g.points;
  GridFunction v(g, Side::physical);
  for (int i = 0; i < N; ++i) {
    cplx acc{0, 0};
    for (int b = 0; b < N; ++b) {
      double dy = g.x_of_flat(i)[0] - g.x_of_flat(b)[0];
      std::size_t ab = (static_cast<std::size_t>(i) * N + b) * static_cast<std::size_t>(N);
      cplx inner{0, 0};
      for (int c = 0; c < N; ++c)
        inner += std::polar(1.0, dy * g.xi_of_flat(c)[0]) * a.values[ab + c];
      acc += inner * u.values[b];
    }
    v.values[i] = acc * (g.dx() / g.period);
  }
  return v;
}

cplx spectral_interpolate(const GridFunction& u, double x) {
  GridFunction hat = u.side == Side::frequency ? u : forward_transform(u);
  const Grid& g = u.grid;
  cplx s{0, 0};
  for (std::size_t c = 0; c < g.size(); ++c)
    s += hat.values[c] * std::polar(1.0, x * g.xi_of_flat(c)[0]);
  return s / g.period;
}

double equivariance_residual(const SampledSymbol& p, const SampledSymbol& a,
                             const Diffeomorphism& h, const CoverFamily& cover,
                             const GridFunction& u) {
  const Grid& g = p.grid;
  if (!(u.grid == g) || !(a.grid == g))
    throw contract_error("equivariance_residual: grid mismatch");
  double lo = cover.box_lo + 3 * cover.r, hi = cover.box_hi - 3 * cover.r;
  double usup = sup_norm(u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double y = g.x_of_flat(i)[0];
    if (std::abs(u.values[i]) > 1e-12 * usup && (y < lo || y > hi))
      throw contract_error(
          "equivariance_residual: u leaks outside the cover box margin");
  }
  GridFunction pu = p.form == SymbolForm::x_form ? apply_x_form(p, u)
                                                 : apply_xxiy(p, u);
  GridFunction pu_hat = forward_transform(pu);
  GridFunction u_hat = forward_transform(u);
  GridFunction uh(g, Side::physical);
  GridFunction v1(g, Side::physical);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double hy = h.forward(g.x_of_flat(i)[0]);
    v1.values[i] = spectral_interpolate(pu_hat, hy);
    uh.values[i] = spectral_interpolate(u_hat, hy);
  }
  GridFunction v2 = apply_xyxi_direct(a, uh);
  return sup_norm(v1 - v2) / usup;
}

Diffeomorphism c1theta_extend(const Diffeomorphism& h, double x0, double r) {
  if (!(r > 0)) throw contract_error("c1theta_extend: r > 0 required");
  double d0 = h.derivative(x0);
  if (std::fabs(d0) < 1e-12)
    throw contract_error("c1theta_extend: singular derivative at the center");
  double theta_eff =
      h.regularity == Diffeomorphism::Regularity::c1theta ? h.theta : 1.0;
  // probe-measured Holder constant of h' on B_{2r}(x0)
  const int M = 61;
  double c0 = 0;
  std::vector<double> xs(M), ds(M);
  for (int i = 0; i < M; ++i) {
    xs[i] = x0 + 2 * r * (2.0 * i / (M - 1) - 1);
    ds[i] = h.derivative(xs[i]);
  }
  for (int i = 0; i < M; ++i)
    for (int k = i + 1; k < M; ++k)
      c0 = std::max(c0, std::fabs(ds[i] - ds[k]) /
                            std::pow(std::fabs(xs[i] - xs[k]), theta_eff));
  if (c0 > 0 && std::pow(r, theta_eff) > std::fabs(d0) / (2 * c0))
    throw contract_error(
        "c1theta_extend: r^theta <= |h'(x0)| / (2 c0) violated; shrink r");

  auto cut = [x0, r](double x) { return plateau((x - x0) / (2 * r)); };
  auto forward = [h, x0, r, d0, cut](double x) {
    double correction = 0;
    double c = cut(x);
    if (c != 0 && x != x0) correction = c * (xi_h(h, x, x0) - d0);
    return h.forward(x0) + (d0 + correction) * (x - x0);
  };
  // Neumann invertibility bound on probes across the correction zone
  for (int i = 0; i < 4 * M; ++i) {
    double x = x0 + 3 * r * (2.0 * i / (4 * M - 1) - 1);
    double c = cut(x);
    if (c == 0 || x == x0) continue;
    if (std::fabs(c * (xi_h(h, x, x0) - d0)) / std::fabs(d0) > 0.5 + 1e-12)
      throw contract_error(
          "c1theta_extend: Neumann bound |phi B| / |h'(x0)| <= 1/2 fails");
  }

  Diffeomorphism out;
  out.name = h.name + "-extended";
  out.regularity = h.regularity;
  out.theta = h.theta;
  out.forward = forward;
  out.derivative = [forward](double x) {
    const double step = 1e-6;
    return (forward(x + step) - forward(x - step)) / (2 * step);
  };
  out.inverse = [forward, der = out.derivative, x0, d0,
                 hx0 = h.forward(x0)](double x) {
    return invert_monotone(forward, der, x, x0 + (x - hx0) / d0);
  };
  // derivative range on probes, padded for the FD tolerance
  double dmax = 0, dmin = 1e300;
  for (int i = 0; i < 4 * M; ++i) {
    double x = x0 + 4 * r * (2.0 * i / (4 * M - 1) - 1);
    double d = std::fabs(out.derivative(x));
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  out.bound_C = std::max(dmax, 1.0 / dmin) * 1.01;
  return out;
}

}  // namespace psdo
