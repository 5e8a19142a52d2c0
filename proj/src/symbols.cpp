#include "psdo/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "psdo/spaces.hpp"

namespace psdo {

std::string to_string(SymbolForm f) {
  switch (f) {
    case SymbolForm::x_form: return "x";
    case SymbolForm::xxiy: return "xxiy";
    case SymbolForm::xyxi: return "xyxi";
  }
  return "?";
}

SymbolForm symbol_form_from_string(const std::string& s) {
  if (s == "x") return SymbolForm::x_form;
  if (s == "xxiy") return SymbolForm::xxiy;
  if (s == "xyxi") return SymbolForm::xyxi;
  throw contract_error("unknown symbol form '" + s + "'");
}

std::size_t SampledSymbol::value_count() const {
  std::size_t s = grid.size();
  return form == SymbolForm::x_form ? s * s : s * s * s;
}

std::size_t SampledSymbol::index(const Idx& a, const Idx& b) const {
  if (form != SymbolForm::x_form)
    throw contract_error("two-slot index on a triple-form symbol");
  return grid.flatten(a) * grid.size() + grid.flatten(b);
}

std::size_t SampledSymbol::index(const Idx& a, const Idx& b, const Idx& c) const {
  if (form == SymbolForm::x_form)
    throw contract_error("three-slot index on an x-form symbol");
  std::size_t s = grid.size();
  return (grid.flatten(a) * s + grid.flatten(b)) * s + grid.flatten(c);
}

SampledSymbol make_symbol(const Grid& g, SymbolForm form, double m, double rho,
                          double delta, double tau,
                          std::function<cplx(const Vec&, const Vec&, const Vec&)> eval) {
  if (form != SymbolForm::x_form) {
    int cap = g.dim == 1 ? 128 : 20;
    if (g.points > cap)
      throw contract_error("triple-form symbol too large to tabulate (N > " +
                           std::to_string(cap) + ")");
  }
  SampledSymbol p;
  p.grid = g;
  p.form = form;
  p.order = m;
  p.rho = rho;
  p.delta = delta;
  p.tau = tau;
  p.eval = std::move(eval);
  p.values.resize(p.value_count());
  std::size_t s = g.size();
  const Vec zero{0, 0};
  if (form == SymbolForm::x_form) {
    for (std::size_t a = 0; a < s; ++a) {
      Vec x = g.x_of_flat(a);
      for (std::size_t b = 0; b < s; ++b)
        p.values[a * s + b] = p.eval(x, g.xi_of_flat(b), zero);
    }
  } else if (form == SymbolForm::xxiy) {
    for (std::size_t a = 0; a < s; ++a) {
      Vec x = g.x_of_flat(a);
      for (std::size_t b = 0; b < s; ++b) {
        Vec xi = g.xi_of_flat(b);
        for (std::size_t c = 0; c < s; ++c)
          p.values[(a * s + b) * s + c] = p.eval(x, xi, g.x_of_flat(c));
      }
    }
  } else {  // xyxi: slots (x, y, xi); evaluator signature stays (x, xi, y)
    for (std::size_t a = 0; a < s; ++a) {
      Vec x = g.x_of_flat(a);
      for (std::size_t b = 0; b < s; ++b) {
        Vec y = g.x_of_flat(b);
        for (std::size_t c = 0; c < s; ++c)
          p.values[(a * s + b) * s + c] = p.eval(x, g.xi_of_flat(c), y);
      }
    }
  }
  return p;
}

// ---- exact bracket-power derivatives --------------------------------------

namespace {

// Linear combination of xi1^{p1} xi2^{p2} (1+|xi|^2)^{m/2-j}; closed under
// partial derivatives, which is all we need to differentiate <xi>^m exactly.
using BracketTerms = std::map<std::array<int, 3>, double>;  // (p1,p2,j) -> coeff

BracketTerms bracket_axis_derivative(const BracketTerms& in, double m, int axis) {
  BracketTerms out;
  auto add = [&](std::array<int, 3> key, double c) {
    if (c != 0) out[key] += c;
  };
  for (const auto& [key, c] : in) {
    auto [p1, p2, j] = key;
    int p = axis == 0 ? p1 : p2;
    if (p > 0) {
      auto k = key;
      k[axis] -= 1;
      add(k, c * p);
    }
    double expo = m / 2.0 - j;
    auto k = key;
    k[axis] += 1;
    k[2] += 1;
    add(k, c * 2.0 * expo);
  }
  return out;
}

double bracket_terms_eval(const BracketTerms& terms, double m, const Vec& xi,
                          int dim) {
  double r2 = 0;
  for (int d = 0; d < dim; ++d) r2 += xi[d] * xi[d];
  double base = 1 + r2;
  double s = 0;
  for (const auto& [key, c] : terms) {
    auto [p1, p2, j] = key;
    s += c * std::pow(xi[0], p1) * (dim == 2 ? std::pow(xi[1], p2) : 1.0) *
         std::pow(base, m / 2.0 - j);
  }
  return s;
}

double bracket_partial(double m, const Idx& alpha, const Vec& xi, int dim) {
  BracketTerms terms{{{0, 0, 0}, 1.0}};
  for (int d = 0; d < dim; ++d)
    for (int r = 0; r < alpha[d]; ++r)
      terms = bracket_axis_derivative(terms, m, d);
  return bracket_terms_eval(terms, m, xi, dim);
}

}  // namespace

double bracket_power_derivative(double m, int k, double t) {
  return bracket_partial(m, {k, 0}, {t, 0}, 1);
}

SampledSymbol bracket_symbol(const Grid& g, double m) {
  SampledSymbol p = make_symbol(
      g, SymbolForm::x_form, m, 1.0, 0.0, 1e9,
      [m, dim = g.dim](const Vec&, const Vec& xi, const Vec&) {
        return cplx{std::pow(bracket(xi, dim), m), 0};
      });
  p.xi_derivative = [m, dim = g.dim](const Idx& alpha, const Vec&, const Vec& xi) {
    return cplx{bracket_partial(m, alpha, xi, dim), 0};
  };
  return p;
}

SampledSymbol differential_symbol(
    const Grid& g, const std::vector<std::pair<Idx, GridFunction>>& coeffs) {
  if (coeffs.empty()) throw contract_error("differential_symbol: no coefficients");
  int m = 0;
  for (const auto& [alpha, a] : coeffs) {
    if (!(a.grid == g)) throw contract_error("differential_symbol: grid mismatch");
    int tot = 0;
    for (int d = 0; d < g.dim; ++d) tot += alpha[d];
    m = std::max(m, tot);
  }
  // (i xi)^alpha sampled per coefficient; the coefficient values live on the
  // lattice, so the evaluator is exact at lattice x and any xi.
  auto mono = [dim = g.dim](const Idx& alpha, const Vec& xi) {
    cplx f{1, 0};
    for (int d = 0; d < dim; ++d)
      for (int r = 0; r < alpha[d]; ++r) f *= cplx{0, xi[d]};
    return f;
  };
  SampledSymbol p;
  p.grid = g;
  p.form = SymbolForm::x_form;
  p.order = m;
  p.rho = 1;
  p.delta = 0;
  p.tau = 1e9;
  std::size_t s = g.size();
  p.values.assign(s * s, cplx{0, 0});
  for (const auto& [alpha, a] : coeffs)
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t k = 0; k < s; ++k)
        p.values[i * s + k] += a.values[i] * mono(alpha, g.xi_of_flat(k));
  // Closed forms interpolate the coefficients trigonometrically off-lattice.
  std::vector<std::pair<Idx, GridFunction>> spectra;
  for (const auto& [alpha, a] : coeffs)
    spectra.emplace_back(alpha, forward_transform(a));
  auto coeff_at = [g](const GridFunction& ahat, const Vec& x) {
    cplx sum{0, 0};
    for (std::size_t k = 0; k < g.size(); ++k) {
      Vec xi = g.xi_of_flat(k);
      double phase = 0;
      for (int d = 0; d < g.dim; ++d) phase += x[d] * xi[d];
      sum += ahat.values[k] * std::polar(1.0, phase);
    }
    return sum * std::pow(g.period, -g.dim);
  };
  p.eval = [spectra, mono, coeff_at](const Vec& x, const Vec& xi, const Vec&) {
    cplx sum{0, 0};
    for (const auto& [alpha, ahat] : spectra)
      sum += coeff_at(ahat, x) * mono(alpha, xi);
    return sum;
  };
  p.xi_derivative = [spectra, coeff_at, dim = g.dim](const Idx& beta, const Vec& x,
                                                     const Vec& xi) {
    cplx sum{0, 0};
    for (const auto& [alpha, ahat] : spectra) {
      // d_xi^beta (i xi)^alpha = i^{|alpha|} * prod_d falling(alpha_d,beta_d) xi^{alpha-beta}
      cplx f{1, 0};
      bool dead = false;
      for (int d = 0; d < dim; ++d) {
        if (beta[d] > alpha[d]) { dead = true; break; }
        double fall = 1;
        for (int r = 0; r < beta[d]; ++r) fall *= alpha[d] - r;
        f *= fall * std::pow(xi[d], alpha[d] - beta[d]);
        for (int r = 0; r < alpha[d]; ++r) f *= cplx{0, 1};
      }
      if (!dead) sum += coeff_at(ahat, x) * f;
    }
    return sum;
  };
  return p;
}

SampledSymbol freeze_diagonal(const SampledSymbol& p) {
  if (p.form != SymbolForm::xyxi)
    throw contract_error("freeze_diagonal expects an xyxi symbol");
  SampledSymbol q;
  q.grid = p.grid;
  q.form = SymbolForm::x_form;
  q.order = p.order;
  q.rho = p.rho;
  q.delta = p.delta;
  q.tau = p.tau;
  std::size_t s = p.grid.size();
  q.values.resize(s * s);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t c = 0; c < s; ++c)
      q.values[a * s + c] = p.values[(a * s + a) * s + c];
  if (p.eval)
    q.eval = [e = p.eval](const Vec& x, const Vec& xi, const Vec&) {
      return e(x, xi, x);
    };
  return q;
}

// ---- seminorm estimation ---------------------------------------------------

namespace {

// Central stencils (k = 1..4) with one Richardson level, step h.
cplx fd_1d(const std::function<cplx(double)>& f, int k, double h) {
  auto stencil = [&](double s) -> cplx {
    switch (k) {
      case 1: return (f(s) - f(-s)) / (2 * s);
      case 2: return (f(s) - 2.0 * f(0) + f(-s)) / (s * s);
      case 3: return (f(2 * s) - 2.0 * f(s) + 2.0 * f(-s) - f(-2 * s)) / (2 * s * s * s);
      case 4:
        return (f(2 * s) - 4.0 * f(s) + 6.0 * f(0) - 4.0 * f(-s) + f(-2 * s)) /
               (s * s * s * s);
      default: throw contract_error("fd_1d: order must be 1..4");
    }
  };
  return (4.0 * stencil(h) - stencil(2 * h)) / 3.0;
}

// d_xi^alpha p(x, xi) from the closed-form evaluator, nesting 1-D stencils.
cplx evaluator_fd(const SampledSymbol& p, const Idx& alpha, const Vec& x,
                  const Vec& xi, double h) {
  if (alpha[1] == 0 || p.grid.dim == 1) {
    if (alpha[0] == 0) return p.eval(x, xi, {0, 0});
    return fd_1d(
        [&](double s) {
          Vec v = xi;
          v[0] += s;
          return p.eval(x, v, {0, 0});
        },
        alpha[0], h);
  }
  return fd_1d(
      [&](double s) {
        Vec v = xi;
        v[1] += s;
        return evaluator_fd(p, {alpha[0], 0}, x, v, h);
      },
      alpha[1], h);
}

// Lattice-only fallback: repeated central differences along the xi axes, with
// one-sided differences at the two ends of the signed-frequency ordering.
std::vector<cplx> lattice_fd_axis(const std::vector<cplx>& row, double h) {
  std::size_t n = row.size();
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0)
      out[i] = (row[1] - row[0]) / h;
    else if (i == n - 1)
      out[i] = (row[n - 1] - row[n - 2]) / h;
    else
      out[i] = (row[i + 1] - row[i - 1]) / (2 * h);
  }
  return out;
}

}  // namespace

std::vector<cplx> xi_derivative_table(const SampledSymbol& p, const Idx& alpha,
                                      DerivativeMode* mode_out) {
  if (p.form != SymbolForm::x_form)
    throw contract_error("xi_derivative_table expects an x-form symbol");
  const Grid& g = p.grid;
  std::size_t s = g.size();
  int total = 0;
  for (int d = 0; d < g.dim; ++d) total += alpha[d];
  DerivativeMode mode = p.xi_derivative ? DerivativeMode::closed_form
                        : p.eval        ? DerivativeMode::evaluator_fd
                                        : DerivativeMode::lattice_fd;
  if (mode_out) *mode_out = mode;
  std::vector<cplx> d(s * s);
  if (total == 0) return p.values;
  if (mode == DerivativeMode::closed_form) {
    for (std::size_t a = 0; a < s; ++a) {
      Vec x = g.x_of_flat(a);
      for (std::size_t b = 0; b < s; ++b)
        d[a * s + b] = p.xi_derivative(alpha, x, g.xi_of_flat(b));
    }
  } else if (mode == DerivativeMode::evaluator_fd) {
    double h = g.dxi() / 8.0;
    for (std::size_t a = 0; a < s; ++a) {
      Vec x = g.x_of_flat(a);
      for (std::size_t b = 0; b < s; ++b)
        d[a * s + b] = evaluator_fd(p, alpha, x, g.xi_of_flat(b), h);
    }
  } else {
    if (g.dim != 1)
      throw contract_error("xi derivatives: lattice FD fallback is 1-D only");
    std::vector<int> order(g.points);
    for (int k = 0; k < g.points; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g.signed_index(a) < g.signed_index(b); });
    for (std::size_t a = 0; a < s; ++a) {
      std::vector<cplx> row(g.points);
      for (int k = 0; k < g.points; ++k) row[k] = p.values[a * s + order[k]];
      for (int r = 0; r < alpha[0]; ++r) row = lattice_fd_axis(row, g.dxi());
      for (int k = 0; k < g.points; ++k) d[a * s + order[k]] = row[k];
    }
  }
  return d;
}

SeminormReport symbol_seminorm(const SampledSymbol& p, int l, double t) {
  if (p.form != SymbolForm::x_form)
    throw contract_error("symbol_seminorm expects an x-form symbol");
  if (l < 0 || l > 4) throw contract_error("symbol_seminorm: l must be in 0..4");
  if (t < 0) throw contract_error("symbol_seminorm: t must be >= 0");
  const Grid& g = p.grid;
  std::size_t s = g.size();
  int t_int = static_cast<int>(std::floor(t));
  double theta = t - t_int;

  SeminormReport rep;
  rep.t = t;
  rep.mode = p.xi_derivative ? DerivativeMode::closed_form
             : p.eval        ? DerivativeMode::evaluator_fd
                             : DerivativeMode::lattice_fd;

  for (int total = 0; total <= l; ++total) {
    std::vector<Idx> alphas;
    if (g.dim == 1) alphas.push_back({total, 0});
    else
      for (int a = 0; a <= total; ++a) alphas.push_back({a, total - a});
    for (const Idx& alpha : alphas) {
      std::vector<cplx> d = xi_derivative_table(p, alpha);

      SeminormEntry e;
      e.alpha = alpha;
      e.sup_ratio = 0;
      e.holder_ratio = 0;
      for (std::size_t b = 0; b < s; ++b) {
        double br = bracket(g.xi_of_flat(b), g.dim);
        double wt_sup = std::pow(br, -p.order + p.rho * total);
        GridFunction slice(g, Side::physical);
        for (std::size_t a = 0; a < s; ++a) slice.values[a] = d[a * s + b];
        e.sup_ratio = std::max(e.sup_ratio, sup_norm(slice) * wt_sup);
        if (t > 0) {
          double hn = theta > 0 ? holder_norm(slice, t_int, theta)
                                : ck_norm(slice, t_int);
          e.holder_ratio = std::max(
              e.holder_ratio,
              hn * std::pow(br, -p.order + p.rho * total - p.delta * t));
        }
      }
      rep.total = std::max(rep.total, std::max(e.sup_ratio, e.holder_ratio));
      rep.entries.push_back(e);
    }
  }
  return rep;
}

// ---- serialization ---------------------------------------------------------

void write_symbol_csv(std::ostream& os, const SampledSymbol& p) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "# symbol %s %.17g %.17g %.17g %.17g %d %d %.17g\n",
                to_string(p.form).c_str(), p.order, p.rho, p.delta, p.tau,
                p.grid.dim, p.grid.points, p.grid.period);
  os << buf;
  const Grid& g = p.grid;
  std::size_t s = g.size();
  int slots = p.form == SymbolForm::x_form ? 2 : 3;
  for (std::size_t flat = 0; flat < p.values.size(); ++flat) {
    std::size_t rest = flat;
    std::size_t slot_flats[3] = {0, 0, 0};
    for (int q = slots - 1; q >= 0; --q) {
      slot_flats[q] = rest % s;
      rest /= s;
    }
    std::string row;
    for (int q = 0; q < slots; ++q) {
      Idx idx = g.unflatten(slot_flats[q]);
      for (int d = 0; d < g.dim; ++d)
        row += std::to_string(idx[d]) + ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.values[flat].real(),
                  p.values[flat].imag());
    os << row << buf;
  }
}

SampledSymbol read_symbol_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw contract_error("symbol csv: empty stream");
  std::istringstream hs(line);
  std::string hash, tag, form_s;
  double m, rho, delta, tau, period;
  int dim, points;
  hs >> hash >> tag >> form_s >> m >> rho >> delta >> tau >> dim >> points >> period;
  if (hash != "#" || tag != "symbol" || hs.fail())
    throw contract_error("symbol csv: bad header");
  SampledSymbol p;
  p.grid = make_torus_grid(dim, points, period);
  p.form = symbol_form_from_string(form_s);
  p.order = m;
  p.rho = rho;
  p.delta = delta;
  p.tau = tau;
  p.values.assign(p.value_count(), cplx{0, 0});
  std::size_t s = p.grid.size();
  int slots = p.form == SymbolForm::x_form ? 2 : 3;
  std::size_t expect_fields = static_cast<std::size_t>(slots) * dim + 2;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<double> nums;
    while (std::getline(ls, field, ',')) nums.push_back(std::stod(field));
    if (nums.size() != expect_fields)
      throw contract_error("symbol csv: wrong field count in data row");
    std::size_t flat = 0;
    std::size_t pos = 0;
    for (int q = 0; q < slots; ++q) {
      Idx idx{0, 0};
      for (int d = 0; d < dim; ++d) {
        idx[d] = static_cast<int>(nums[pos++]);
        if (idx[d] < 0 || idx[d] >= points)
          throw contract_error("symbol csv: index out of range");
      }
      flat = flat * s + p.grid.flatten(idx);
    }
    p.values[flat] = cplx{nums[pos], nums[pos + 1]};
    ++rows;
  }
  if (rows != p.values.size()) throw contract_error("symbol csv: row count mismatch");
  return p;
}

}  // namespace psdo
