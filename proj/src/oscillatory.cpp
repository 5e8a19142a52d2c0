#include "psdo/oscillatory.hpp"

#include <cmath>
#include <memory>

#include "psdo/lp.hpp"

namespace psdo {

// ---- 1-D derivative factories ---------------------------------------------

namespace {

double poly_eval(const std::vector<double>& c, double t) {
  double v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * i);
  if (d.empty()) d.push_back(0);
  return d;
}

long binom(int n, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

Func1D func_gauss(double a) {
  return {[a](int k, double t) -> cplx {
    // d^k e^{-a t^2} = P_k(t) e^{-a t^2}, P_{j+1} = P_j' - 2 a t P_j
    std::vector<double> p{1.0};
    for (int j = 0; j < k; ++j) {
      std::vector<double> q = poly_derivative(p);
      q.resize(std::max(q.size(), p.size() + 1), 0.0);
      for (std::size_t i = 0; i < p.size(); ++i) q[i + 1] -= 2 * a * p[i];
      p = q;
    }
    return poly_eval(p, t) * std::exp(-a * t * t);
  }};
}

Func1D func_bracket_pow(int q) {
  if (q < 0) throw contract_error("func_bracket_pow: q must be >= 0");
  return {[q](int k, double t) -> cplx {
    // d^k (1+t^2)^{-q} = P(t) (1+t^2)^{-q-k}:
    // d[P (1+t^2)^{-s}] = (P'(1+t^2) - 2 s t P) (1+t^2)^{-s-1}
    std::vector<double> p{1.0};
    int s = q;
    for (int j = 0; j < k; ++j) {
      std::vector<double> dp = poly_derivative(p);
      std::vector<double> np(std::max(dp.size() + 2, p.size() + 1), 0.0);
      for (std::size_t i = 0; i < dp.size(); ++i) {
        np[i] += dp[i];
        np[i + 2] += dp[i];
      }
      for (std::size_t i = 0; i < p.size(); ++i) np[i + 1] -= 2.0 * s * p[i];
      p = np;
      ++s;
    }
    return poly_eval(p, t) * std::pow(1 + t * t, -s);
  }};
}

Func1D func_poly(std::vector<double> c) {
  return {[c = std::move(c)](int k, double t) -> cplx {
    std::vector<double> p = c;
    for (int j = 0; j < k; ++j) p = poly_derivative(p);
    return poly_eval(p, t);
  }};
}

Func1D func_cos(double w) {
  return {[w](int k, double t) -> cplx {
    double arg = w * t + k * pi / 2;  // d^k cos(wt) = w^k cos(wt + k pi/2)
    return std::pow(w, k) * std::cos(arg);
  }};
}

Func1D func_sin(double w) {
  return {[w](int k, double t) -> cplx {
    double arg = w * t + k * pi / 2;
    return std::pow(w, k) * std::sin(arg);
  }};
}

Func1D func_const(cplx v) {
  return {[v](int k, double) -> cplx { return k == 0 ? v : cplx{0, 0}; }};
}

Func1D func_product(const Func1D& f, const Func1D& g) {
  return {[f, g](int k, double t) -> cplx {
    cplx s{0, 0};
    for (int i = 0; i <= k; ++i)
      s += static_cast<double>(binom(k, i)) * f.deriv(i, t) * g.deriv(k - i, t);
    return s;
  }};
}

Func1D func_shift(const Func1D& f, double s) {
  return {[f, s](int k, double t) -> cplx { return f.deriv(k, t + s); }};
}

Func1D func_derivative(const Func1D& f) {
  return {[f](int k, double t) -> cplx { return f.deriv(k + 1, t); }};
}

// ---- amplitudes ------------------------------------------------------------

cplx Amplitude::derivative(int a, int b, double eta, double y) const {
  if (a == 0 && b == 0) return eval(eta, y);
  if (deriv) return deriv(a, b, eta, y);
  if (a > 2 || b > 2)
    throw contract_error(
        "amplitude derivative: finite-difference fallback supports at most "
        "order 2 per variable; supply a closed-form `deriv`");
  const double h = 1e-3;
  auto in_y = [&](double e) -> cplx {
    switch (b) {
      case 0: return eval(e, y);
      case 1: return (eval(e, y + h) - eval(e, y - h)) / (2 * h);
      default:
        return (eval(e, y + h) - 2.0 * eval(e, y) + eval(e, y - h)) / (h * h);
    }
  };
  switch (a) {
    case 0: return in_y(eta);
    case 1: return (in_y(eta + h) - in_y(eta - h)) / (2 * h);
    default:
      return (in_y(eta + h) - 2.0 * in_y(eta) + in_y(eta - h)) / (h * h);
  }
}

Amplitude make_amplitude(std::vector<SeparableTerm> terms, double m, double delta,
                         double tau) {
  if (terms.empty()) throw contract_error("make_amplitude: no terms");
  Amplitude a;
  a.order = m;
  a.delta = delta;
  a.tau = tau;
  auto shared = std::make_shared<const std::vector<SeparableTerm>>(std::move(terms));
  a.terms = shared;
  a.eval = [shared](double eta, double y) {
    cplx s{0, 0};
    for (const auto& t : *shared)
      s += t.coeff * t.in_eta.deriv(0, eta) * t.in_y.deriv(0, y);
    return s;
  };
  a.deriv = [shared](int da, int db, double eta, double y) {
    cplx s{0, 0};
    for (const auto& t : *shared)
      s += t.coeff * t.in_eta.deriv(da, eta) * t.in_y.deriv(db, y);
    return s;
  };
  return a;
}

Amplitude amplitude_times_eta(const Amplitude& a) {
  if (a.terms) {
    std::vector<SeparableTerm> t = *a.terms;
    for (auto& term : t)
      term.in_eta = func_product(func_poly({0, 1}), term.in_eta);
    return make_amplitude(std::move(t), a.order + 1, a.delta, a.tau);
  }
  Amplitude b = a;
  b.order = a.order + 1;
  b.eval = [a](double eta, double y) { return eta * a.eval(eta, y); };
  b.deriv = [a](int da, int db, double eta, double y) {
    cplx s = eta * a.derivative(da, db, eta, y);
    if (da >= 1) s += static_cast<double>(da) * a.derivative(da - 1, db, eta, y);
    return s;
  };
  return b;
}

Amplitude amplitude_times_y(const Amplitude& a) {
  if (a.terms) {
    std::vector<SeparableTerm> t = *a.terms;
    for (auto& term : t) term.in_y = func_product(func_poly({0, 1}), term.in_y);
    return make_amplitude(std::move(t), a.order, a.delta, a.tau + 1);
  }
  Amplitude b = a;
  b.tau = a.tau + 1;
  b.eval = [a](double eta, double y) { return y * a.eval(eta, y); };
  b.deriv = [a](int da, int db, double eta, double y) {
    cplx s = y * a.derivative(da, db, eta, y);
    if (db >= 1) s += static_cast<double>(db) * a.derivative(da, db - 1, eta, y);
    return s;
  };
  return b;
}

Amplitude amplitude_D_eta(const Amplitude& a) {
  if (a.terms) {
    std::vector<SeparableTerm> t = *a.terms;
    for (auto& term : t) {
      term.coeff *= cplx{0, -1};
      term.in_eta = func_derivative(term.in_eta);
    }
    return make_amplitude(std::move(t), a.order, a.delta, a.tau);
  }
  Amplitude b = a;
  b.eval = [a](double eta, double y) {
    return cplx{0, -1} * a.derivative(1, 0, eta, y);
  };
  b.deriv = [a](int da, int db, double eta, double y) {
    return cplx{0, -1} * a.derivative(da + 1, db, eta, y);
  };
  return b;
}

Amplitude amplitude_D_y(const Amplitude& a) {
  if (a.terms) {
    std::vector<SeparableTerm> t = *a.terms;
    for (auto& term : t) {
      term.coeff *= cplx{0, -1};
      term.in_y = func_derivative(term.in_y);
    }
    return make_amplitude(std::move(t), a.order + a.delta, a.delta, a.tau);
  }
  Amplitude b = a;
  b.order = a.order + a.delta;  // one y-derivative may cost <eta>^delta
  b.eval = [a](double eta, double y) {
    return cplx{0, -1} * a.derivative(0, 1, eta, y);
  };
  b.deriv = [a](int da, int db, double eta, double y) {
    return cplx{0, -1} * a.derivative(da, db + 1, eta, y);
  };
  return b;
}

// ---- cutoffs ---------------------------------------------------------------

Cutoff gaussian_cutoff() {
  return {"gaussian", [](double eta, double y) {
            return std::exp(-(eta * eta + y * y) / 2);
          }};
}

Cutoff bump_cutoff() {
  return {"bump", [](double eta, double y) {
            return lp_phi0_radial(std::fabs(eta)) * lp_phi0_radial(std::fabs(y));
          }};
}

// ---- quadratures -----------------------------------------------------------

namespace {

struct QuadGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadGrid make_quad(double R, int M) {
  if (M < 16) throw contract_error("oscillatory quadrature: too few points");
  QuadGrid q;
  double h = 2 * R / (M - 1);
  for (int i = 0; i < M; ++i) {
    q.nodes.push_back(-R + i * h);
    q.weights.push_back((i == 0 || i == M - 1) ? h / 2 : h);
  }
  return q;
}

}  // namespace

OscResult os_regularized(const Amplitude& a, const Cutoff& chi,
                         const OscParams& params) {
  if (std::fabs(chi.eval(0, 0) - 1.0) > 1e-12)
    throw contract_error("os_regularized: cutoff must satisfy chi(0,0) = 1");
  if (params.eps_first > params.eps_last)
    throw contract_error("os_regularized: empty epsilon schedule");
  QuadGrid q = make_quad(params.box, params.quad_points);
  const int M = params.quad_points;

  // cache phase * weights * amplitude; only chi changes with epsilon.
  // Separable amplitudes are tabulated per axis first.
  std::vector<cplx> amp(static_cast<std::size_t>(M) * M);
  if (a.terms) {
    std::size_t T = a.terms->size();
    std::vector<std::vector<cplx>> F(T, std::vector<cplx>(M)), G = F;
    for (std::size_t t = 0; t < T; ++t)
      for (int i = 0; i < M; ++i) {
        F[t][i] = (*a.terms)[t].in_eta.deriv(0, q.nodes[i]);
        G[t][i] = (*a.terms)[t].in_y.deriv(0, q.nodes[i]);
      }
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        cplx v{0, 0};
        for (std::size_t t = 0; t < T; ++t)
          v += (*a.terms)[t].coeff * F[t][i] * G[t][j];
        amp[static_cast<std::size_t>(i) * M + j] = v;
      }
  } else {
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        amp[static_cast<std::size_t>(i) * M + j] = a.eval(q.nodes[i], q.nodes[j]);
  }
  std::vector<cplx> base(static_cast<std::size_t>(M) * M);
  for (int i = 0; i < M; ++i) {
    double eta = q.nodes[i];
    for (int j = 0; j < M; ++j) {
      double y = q.nodes[j];
      base[static_cast<std::size_t>(i) * M + j] =
          q.weights[i] * q.weights[j] * std::polar(1.0, -y * eta) *
          amp[static_cast<std::size_t>(i) * M + j];
    }
  }

  OscResult res;
  for (int k = params.eps_first; k <= params.eps_last; ++k) {
    double eps = std::ldexp(1.0, -k);
    cplx sum{0, 0};
    for (int i = 0; i < M; ++i) {
      double ee = eps * q.nodes[i];
      for (int j = 0; j < M; ++j)
        sum += base[static_cast<std::size_t>(i) * M + j] *
               chi.eval(ee, eps * q.nodes[j]);
    }
    res.trace.push_back(sum / (2 * pi));
    std::size_t n = res.trace.size();
    if (n >= 2) {
      double inc = std::abs(res.trace[n - 1] - res.trace[n - 2]);
      if (inc <= params.tol * (1 + std::abs(res.trace[n - 1]))) {
        res.converged = true;
        break;
      }
    }
  }
  res.value = res.trace.back();
  return res;
}

OscResult os_ibp(const Amplitude& a, int l, int lprime, const OscParams& params) {
  if (l < 0 || lprime < 0 || l > 3 || lprime > 3)
    throw contract_error("os_ibp: l and l' must be in 0..3");
  if (!(-2.0 * l * (1 - a.delta) + a.order < -1))
    throw contract_error("os_ibp: -2l(1-delta) + m < -n violated; raise l");
  if (!(-2.0 * lprime + a.tau < -1))
    throw contract_error("os_ibp: -2l' + tau < -n violated; raise l'");
  QuadGrid q = make_quad(params.box, params.quad_points);
  const int M = params.quad_points;
  Func1D wbr = func_bracket_pow(l);  // derivatives of <eta>^{-2l}

  // Per-axis derivative tables for separable amplitudes; pointwise calls
  // otherwise. eta-orders reach 2l', y-orders reach 2l.
  std::size_t T = a.terms ? a.terms->size() : 0;
  std::vector<std::vector<std::vector<cplx>>> F, G;  // [term][order][node]
  if (a.terms) {
    F.assign(T, std::vector<std::vector<cplx>>(2 * lprime + 1,
                                               std::vector<cplx>(M)));
    G.assign(T, std::vector<std::vector<cplx>>(2 * l + 1, std::vector<cplx>(M)));
    for (std::size_t t = 0; t < T; ++t) {
      for (int k = 0; k <= 2 * lprime; ++k)
        for (int i = 0; i < M; ++i)
          F[t][k][i] = (*a.terms)[t].in_eta.deriv(k, q.nodes[i]);
      for (int k = 0; k <= 2 * l; ++k)
        for (int j = 0; j < M; ++j)
          G[t][k][j] = (*a.terms)[t].in_y.deriv(k, q.nodes[j]);
    }
  }
  auto mixed = [&](int aeta, int ay, int i, int j) -> cplx {
    if (!a.terms) return a.derivative(aeta, ay, q.nodes[i], q.nodes[j]);
    cplx s{0, 0};
    for (std::size_t t = 0; t < T; ++t)
      s += (*a.terms)[t].coeff * F[t][aeta][i] * G[t][ay][j];
    return s;
  };

  cplx sum{0, 0};
  std::vector<cplx> wr(2 * lprime + 1);
  for (int i = 0; i < M; ++i) {
    double eta = q.nodes[i];
    for (int r = 0; r <= 2 * lprime; ++r) wr[r] = wbr.deriv(r, eta);
    for (int j = 0; j < M; ++j) {
      double y = q.nodes[j];
      // inner = <D_eta>^{2l'} [ <eta>^{-2l} <D_y>^{2l} a ](eta, y)
      cplx inner{0, 0};
      for (int jp = 0; jp <= lprime; ++jp) {
        double cjp = binom(lprime, jp) * (jp % 2 == 0 ? 1.0 : -1.0);
        for (int r = 0; r <= 2 * jp; ++r) {
          cplx acc{0, 0};
          for (int il = 0; il <= l; ++il) {
            double cil = binom(l, il) * (il % 2 == 0 ? 1.0 : -1.0);
            acc += cil * mixed(2 * jp - r, 2 * il, i, j);
          }
          inner += cjp * static_cast<double>(binom(2 * jp, r)) * wr[r] * acc;
        }
      }
      double ybr = std::pow(1 + y * y, -lprime);
      sum += q.weights[i] * q.weights[j] * std::polar(1.0, -y * eta) * ybr * inner;
    }
  }
  OscResult res;
  res.value = sum / (2 * pi);
  res.trace = {res.value};
  res.converged = true;
  return res;
}

double inversion_check(const Func1D& a, double x, const Cutoff& chi,
                       const OscParams& params) {
  Amplitude amp = make_amplitude(
      {{cplx{1, 0}, func_const(cplx{1, 0}), func_shift(a, x)}}, 0, 0, 0);
  OscResult r = os_regularized(amp, chi, params);
  return std::abs(r.value - a.deriv(0, x));
}

}  // namespace psdo
