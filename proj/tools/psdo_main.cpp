// Experiment driver: wires configuration to module operations and emits
// CSV/JSON reports with stable schemas.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "psdo/acceptance.hpp"
#include "psdo/calculus.hpp"
#include "psdo/oscillatory.hpp"
#include "psdo/quantize.hpp"
#include "psdo/spaces.hpp"
#include "psdo/transform.hpp"
#include "psdo/util.hpp"

using namespace psdo;

namespace {

constexpr const char* kVersion = "1.0.0";

// A tabular report with a fixed schema line; renders to CSV and to a JSON
// mirror of the same rows.
struct Report {
  std::string schema;
  std::vector<std::pair<std::string, std::string>> meta;  // key=value comments
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void row(std::initializer_list<std::string> cells) { rows.emplace_back(cells); }

  std::string csv() const {
    std::ostringstream os;
    os << "# schema=" << schema << " version=" << kVersion << "\n";
    for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
    return os.str();
  }

  std::string json() const {
    nlohmann::json j;
    j["schema"] = schema;
    j["version"] = kVersion;
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    j["columns"] = columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) j["rows"].push_back(r);
    return j.dump(2) + "\n";
  }
};

void emit(const Report& rep, const std::string& out, const std::string& json_out) {
  if (out.empty()) {
    std::cout << rep.csv();
  } else {
    std::ofstream os(out);
    if (!os) throw std::invalid_argument("cannot open output file " + out);
    os << rep.csv();
  }
  if (!json_out.empty()) {
    std::ofstream os(json_out);
    if (!os) throw std::invalid_argument("cannot open output file " + json_out);
    os << rep.json();
  }
}

std::string fd(double v) { return format_double(v); }

// Built-in closed-form symbols, instantiated on a caller-provided grid.
// Registry: identity, bracket:<m>, ixi, mult-cos, modbracket:<m>, cusp.
SampledSymbol builtin_symbol(const std::string& name, const Grid& g) {
  std::string head = name, arg;
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    head = name.substr(0, colon);
    arg = name.substr(colon + 1);
  }
  if (head == "identity")
    return make_symbol(g, SymbolForm::x_form, 0, 1, 0, 1e9,
                       [](const Vec&, const Vec&, const Vec&) {
                         return cplx{1, 0};
                       });
  if (head == "bracket") return bracket_symbol(g, std::stod(arg));
  if (head == "ixi")
    return make_symbol(g, SymbolForm::x_form, 1, 1, 0, 1e9,
                       [](const Vec&, const Vec& xi, const Vec&) {
                         return cplx{0, xi[0]};
                       });
  if (head == "mult-cos")
    return make_symbol(g, SymbolForm::x_form, 0, 1, 0, 1e9,
                       [](const Vec& x, const Vec&, const Vec&) {
                         return cplx{2 + std::cos(x[0]), 0};
                       });
  if (head == "modbracket") {
    double m = std::stod(arg);
    SampledSymbol p = make_symbol(g, SymbolForm::x_form, m, 1, 0, 1e9,
                                  [m](const Vec& x, const Vec& xi, const Vec&) {
                                    return std::polar(1.0, x[0]) *
                                           std::pow(bracket(xi, 1), m);
                                  });
    p.xi_derivative = [m](const Idx& alpha, const Vec& x, const Vec& xi) {
      return std::polar(1.0, x[0]) * bracket_power_derivative(m, alpha[0], xi[0]);
    };
    return p;
  }
  if (head == "cusp")
    return make_symbol(g, SymbolForm::x_form, 0, 1, 0, 0.5,
                       [](const Vec& x, const Vec&, const Vec&) {
                         return cplx{std::sqrt(std::fabs(std::sin(x[0] / 2))), 0};
                       });
  throw std::invalid_argument("unknown builtin symbol '" + name + "'");
}

// "builtin:<name>" -> registry symbol on g; anything else -> CSV file path.
SampledSymbol load_symbol(const std::string& spec, const Grid& g) {
  if (spec.rfind("builtin:", 0) == 0) return builtin_symbol(spec.substr(8), g);
  std::ifstream is(spec);
  if (!is) throw std::invalid_argument("cannot open symbol file " + spec);
  return read_symbol_csv(is);
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open input file " + path);
  return read_grid_function_csv(is);
}

Amplitude builtin_amplitude(const std::string& name) {
  if (name == "gauss")
    return make_amplitude({{cplx{1, 0}, func_gauss(), func_gauss()}}, 0, 0, 0);
  if (name == "gauss-shifted")
    return make_amplitude(
        {{cplx{1, 0}, func_gauss(), func_shift(func_gauss(), -0.5)}}, 0, 0, 0);
  if (name == "bracket-gauss")
    return make_amplitude({{cplx{1, 0}, func_bracket_pow(1), func_gauss()}}, -2,
                          0, 0);
  throw std::invalid_argument("unknown builtin amplitude '" + name + "'");
}

int run_lp_check(int n, int N, double L, int J, const std::string& out,
                 const std::string& json_out) {
  Grid g = make_torus_grid(n, N, L);
  if (J < 0) J = min_covering_level(g);
  LPPartition part = build_partition(g, J);
  double unity = 0, telescope = 0;
  long support_violations = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0, radius = 0;
    for (int d = 0; d < g.dim; ++d) radius += std::pow(g.xi_of_flat(i)[d], 2);
    radius = std::sqrt(radius);
    for (int j = 0; j <= J; ++j) {
      s += part.blocks[j][i];
      if (part.blocks[j][i] != 0 && j >= 1 &&
          (radius < std::ldexp(1.0, j - 1) || radius > std::ldexp(1.0, j + 1)))
        ++support_violations;
    }
    unity = std::max(unity, std::fabs(s - 1));
    for (int k = 0; k < J; ++k) {
      double partial = 0;
      for (int j = 0; j <= k; ++j) partial += part.blocks[j][i];
      telescope = std::max(
          telescope, std::fabs(partial - lp_phi0_radial(std::ldexp(radius, -k))));
    }
  }
  Report rep;
  rep.schema = "lp-check";
  rep.meta = {{"n", std::to_string(n)}, {"N", std::to_string(N)},
              {"L", fd(L)},             {"J", std::to_string(J)}};
  rep.columns = {"check", "value"};
  rep.row({"unity_max_deviation", fd(unity)});
  rep.row({"telescoping_max_deviation", fd(telescope)});
  rep.row({"support_violations", std::to_string(support_violations)});
  for (const auto& b : derivative_bound_report(g, J, 2))
    rep.row({"derivative_bound_order_" + std::to_string(b.order),
             fd(b.worst_ratio)});
  emit(rep, out, json_out);
  return (unity <= 1e-14 && support_violations == 0) ? 0 : 2;
}

int run_norms(const std::string& input, const std::string& kind, int t,
              double theta, double tau, double s, double q,
              const std::string& out, const std::string& json_out) {
  GridFunction u = load_grid_function(input);
  Report rep;
  rep.schema = "norms";
  rep.columns = {"kind", "param1", "param2", "value"};
  if (kind == "holder") {
    rep.row({"holder", std::to_string(t), fd(theta), fd(holder_norm(u, t, theta))});
  } else if (kind == "zygmund") {
    LPPartition part = build_partition(u.grid, min_covering_level(u.grid));
    rep.row({"zygmund", fd(tau), "", fd(zygmund_norm(u, tau, part))});
  } else if (kind == "bessel") {
    rep.row({"bessel", fd(s), fd(q), fd(bessel_norm(u, s, q))});
  } else {
    throw std::invalid_argument("unknown norm kind '" + kind + "'");
  }
  emit(rep, out, json_out);
  return 0;
}

int run_interp_check(int N, double L, std::uint64_t seed, int t, double theta,
                     int k, double vartheta, const std::string& out,
                     const std::string& json_out) {
  Grid g = make_torus_grid(1, N, L);
  Report rep;
  rep.schema = "interp-check";
  rep.meta = {{"seed", std::to_string(seed)},
              {"corpus_version", corpus_version}};
  rep.columns = {"name", "lambda", "lhs", "low", "high", "ratio"};
  bool all_finite = true;
  for (const auto& [name, u] : test_corpus(g, seed)) {
    InterpolationCheck c = interpolation_check(u, t, theta, k, vartheta);
    all_finite = all_finite && std::isfinite(c.ratio);
    rep.row({name, fd(c.lambda), fd(c.lhs), fd(c.low), fd(c.high), fd(c.ratio)});
  }
  emit(rep, out, json_out);
  return all_finite ? 0 : 2;
}

int run_symbol_report(const std::string& input, int l, double t,
                      const std::string& out, const std::string& json_out) {
  Grid probe = make_torus_grid(1, 64, 2 * pi);  // builtin default lattice
  SampledSymbol p = load_symbol(input, probe);
  SeminormReport sr = symbol_seminorm(p, l, t);
  Report rep;
  rep.schema = "symbol-report";
  const char* mode = sr.mode == DerivativeMode::closed_form  ? "closed_form"
                     : sr.mode == DerivativeMode::evaluator_fd ? "evaluator_fd"
                                                               : "lattice_fd";
  rep.meta = {{"total", fd(sr.total)}, {"t", fd(sr.t)}, {"mode", mode}};
  rep.columns = {"alpha", "sup_ratio", "holder_ratio"};
  for (const auto& e : sr.entries) {
    std::string alpha;
    for (int a : e.alpha) alpha += (alpha.empty() ? "" : " ") + std::to_string(a);
    rep.row({alpha, fd(e.sup_ratio), fd(e.holder_ratio)});
  }
  emit(rep, out, json_out);
  return 0;
}

int run_apply(const std::string& symbol, const std::string& input,
              const std::string& form, const std::string& out) {
  GridFunction u = load_grid_function(input);
  SampledSymbol p = load_symbol(symbol, u.grid);
  // multiplication by the constant-1 symbol is a no-op; skip the transform
  // round trip so the output file reproduces the input bit for bit
  bool is_one = p.form == SymbolForm::x_form;
  for (const cplx& v : p.values) is_one = is_one && v == cplx{1, 0};
  GridFunction v;
  if (is_one) {
    v = u;
  } else if (form == "x") {
    v = apply_x_form(p, u);
  } else if (form == "y") {
    v = apply_y_form(p, u);
  } else if (form == "xxiy") {
    v = apply_xxiy(p, u);
  } else if (form == "xyxi") {
    LPPartition part = build_partition(u.grid, min_covering_level(u.grid));
    v = apply_xyxi(p, u, part, part.levels).value;
  } else {
    throw std::invalid_argument("unknown form '" + form + "'");
  }
  std::ofstream os(out);
  if (!os) throw std::invalid_argument("cannot open output file " + out);
  write_csv(os, v);
  return 0;
}

int run_osc(const std::string& amplitude, const std::string& method,
            const std::string& out, const std::string& json_out) {
  Amplitude a = builtin_amplitude(amplitude);
  Report rep;
  rep.schema = "osc-trace";
  rep.meta = {{"amplitude", amplitude}, {"method", method}};
  rep.columns = {"method", "step", "re", "im"};
  cplx reg_v{0, 0}, ibp_v{0, 0};
  bool ok = true;
  if (method == "reg" || method == "both") {
    OscResult res = os_regularized(a, gaussian_cutoff());
    ok = ok && res.converged;
    for (std::size_t i = 0; i < res.trace.size(); ++i)
      rep.row({"reg", std::to_string(i), fd(res.trace[i].real()),
               fd(res.trace[i].imag())});
    rep.row({"reg", "value", fd(res.value.real()), fd(res.value.imag())});
    reg_v = res.value;
  }
  if (method == "ibp" || method == "both") {
    OscResult res = os_ibp(a, 1, 1);
    ok = ok && res.converged;
    rep.row({"ibp", "value", fd(res.value.real()), fd(res.value.imag())});
    ibp_v = res.value;
  }
  if (method == "both") {
    double diff = std::abs(reg_v - ibp_v);
    rep.row({"both", "difference", fd(diff), "0"});
    ok = ok && diff <= 1e-4;
  }
  if (method != "reg" && method != "ibp" && method != "both")
    throw std::invalid_argument("unknown method '" + method + "'");
  emit(rep, out, json_out);
  return ok ? 0 : 2;
}

int run_compose(const std::string& p1s, const std::string& p2s, int order,
                const std::vector<double>& lambdas, int N, const std::string& out,
                const std::string& json_out) {
  Grid g = make_torus_grid(1, N, 2 * pi);
  SampledSymbol p1 = load_symbol(p1s, g);
  SampledSymbol p2 = load_symbol(p2s, g);
  RemainderSweep sweep = composition_remainder(p1, p2, order, lambdas);
  Report rep;
  rep.schema = "compose";
  rep.meta = {{"order", std::to_string(order)},
              {"slope", fd(sweep.slope)},
              {"degenerate", sweep.degenerate ? "1" : "0"}};
  rep.columns = {"lambda", "residual"};
  for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
    rep.row({fd(sweep.lambdas[i]), fd(sweep.residuals[i])});
  emit(rep, out, json_out);
  return 0;
}

int run_smooth(const std::string& symbol, double gamma, int N,
               const std::string& out, const std::string& json_out) {
  Grid g = make_torus_grid(1, N, 2 * pi);
  SampledSymbol p = load_symbol(symbol, g);
  LPPartition part = build_partition(g, min_covering_level(g));
  SmoothingSplit split = smooth_symbol(p, gamma, part);
  double split_err = 0;
  for (std::size_t i = 0; i < p.values.size(); ++i)
    split_err = std::max(split_err, std::abs(split.sharp.values[i] +
                                             split.flat.values[i] - p.values[i]));
  Report rep;
  rep.schema = "smooth";
  rep.meta = {{"gamma", fd(gamma)}};
  rep.columns = {"check", "value"};
  rep.row({"split_max_deviation", fd(split_err)});
  std::size_t s = g.size();
  std::vector<double> lams, sups;
  for (double lam = 4; lam <= g.max_xi() / 2; lam *= 2) {
    std::size_t col = 0;
    for (std::size_t c = 0; c < s; ++c)
      if (std::fabs(g.xi_of_flat(c)[0] - lam) < 1e-9) col = c;
    double m = 0;
    for (std::size_t a = 0; a < s; ++a)
      m = std::max(m, std::abs(split.flat.values[a * s + col]));
    rep.row({"flat_sup_xi_" + std::to_string(static_cast<int>(lam)), fd(m)});
    lams.push_back(std::log2(lam));
    sups.push_back(std::log2(m));
  }
  rep.row({"flat_decay_slope", fd(fit_slope(lams, sups))});
  emit(rep, out, json_out);
  return split_err <= 1e-14 ? 0 : 2;
}

int run_kernel(const std::string& symbol, int N, int M, const std::string& out,
               const std::string& json_out) {
  Grid g = make_torus_grid(1, N, 2 * pi);
  SampledSymbol p = load_symbol(symbol, g);
  LPPartition part = build_partition(g, min_covering_level(g));
  KernelBlocks kb = kernel_blocks(p, part);
  KernelDecayReport rep_k = kernel_decay_report(kb, M);
  Report rep;
  rep.schema = "kernel-decay";
  rep.meta = {{"M", std::to_string(M)}, {"j_slope", fd(rep_k.j_slope)}};
  rep.columns = {"j", "weighted", "plain_sup", "z_slope", "self_similar"};
  for (const auto& row : rep_k.rows)
    rep.row({std::to_string(row.j), fd(row.weighted), fd(row.plain_sup),
             fd(row.z_slope), fd(row.self_similar)});
  emit(rep, out, json_out);
  return 0;
}

int run_transform(const std::string& symbol, const std::string& diffeo,
                  const std::string& check, int N, double r,
                  const std::string& out, const std::string& json_out) {
  Diffeomorphism h = diffeo_from_name(diffeo);
  CoverFamily cover = build_cover(r, 0, 2 * pi);
  auto chart_bump = [](const Grid& g, double lambda) {
    return sample(g, [lambda](const Vec& y) {
      return lp_g(2 * (1 - std::fabs((y[0] - pi) / 1.2))) *
             std::polar(1.0, lambda * y[0]);
    });
  };
  Report rep;
  rep.schema = "transform";
  rep.meta = {{"symbol", symbol}, {"diffeo", diffeo}, {"check", check}};
  int code = 0;
  if (check == "equivariance") {
    rep.columns = {"N", "residual"};
    double last = 0;
    for (int n : {N / 2, N}) {
      Grid g = make_torus_grid(1, n, 2 * pi);
      SampledSymbol p = load_symbol(symbol, g);
      SampledSymbol a = pullback_full(p, h, cover);
      last = equivariance_residual(p, a, h, cover, chart_bump(g, 0));
      rep.row({std::to_string(n), fd(last)});
    }
    bool smooth = h.regularity == Diffeomorphism::Regularity::smooth;
    code = (!smooth || last <= 1e-2) ? 0 : 2;
  } else if (check == "principal") {
    Grid g = make_torus_grid(1, N, 2 * pi);
    SampledSymbol p = load_symbol(symbol, g);
    SampledSymbol a = pullback_full(p, h, cover);
    SampledSymbol principal = pullback_principal(p, h);
    rep.columns = {"lambda", "residual"};
    std::vector<double> xs, ys;
    for (double lam : {4.0, 8.0, 16.0, 32.0}) {
      GridFunction u = chart_bump(g, lam);
      double res =
          sup_norm(apply_xyxi_direct(a, u) - apply_x_form(principal, u));
      rep.row({fd(lam), fd(res)});
      xs.push_back(std::log2(lam));
      ys.push_back(std::log2(res));
    }
    rep.meta.push_back({"slope", fd(fit_slope(xs, ys))});
  } else if (check == "defect") {
    // lambda-slope of the C^{1,theta} defect; the normalization by sup|Pu| is
    // the implementer's operationalization of the smoothing class
    Grid g = make_torus_grid(1, N, 2 * pi);
    SampledSymbol p = load_symbol(symbol, g);
    SampledSymbol a = pullback_full(p, h, cover);
    rep.columns = {"lambda", "relative_residual"};
    std::vector<double> xs, ys;
    for (double lam : {4.0, 8.0, 16.0}) {
      GridFunction u = chart_bump(g, lam);
      double rel = equivariance_residual(p, a, h, cover, u) * sup_norm(u) /
                   sup_norm(apply_x_form(p, u));
      rep.row({fd(lam), fd(rel)});
      xs.push_back(std::log2(lam));
      ys.push_back(std::log2(rel));
    }
    rep.meta.push_back({"slope", fd(fit_slope(xs, ys))});
    rep.meta.push_back({"normalization", "sup_Pu_operationalized"});
  } else {
    throw std::invalid_argument("unknown check '" + check + "'");
  }
  emit(rep, out, json_out);
  return code;
}

int run_acceptance_cmd(const std::string& suite, std::uint64_t seed,
                       const std::string& out, const std::string& json_out) {
  std::vector<int> ids = acceptance_suite(suite);  // validated by caller
  std::vector<CriterionResult> results = run_acceptance(ids, seed);
  bool all = true;
  for (const auto& r : results) {
    std::cout << "criterion " << r.id << " " << r.name << ": "
              << (r.pass ? "PASS" : "FAIL") << " (" << std::fixed
              << std::setprecision(2) << r.seconds << " s)\n";
    std::cout.unsetf(std::ios::fixed);
    all = all && r.pass;
  }
  std::string csv = acceptance_csv(results, suite, seed);
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream os(out);
    if (!os) throw std::invalid_argument("cannot open output file " + out);
    os << csv;
  }
  if (!json_out.empty()) {
    nlohmann::json j;
    j["schema"] = "acceptance";
    j["version"] = kVersion;
    j["suite"] = suite;
    j["seed"] = seed;
    j["criteria"] = nlohmann::json::array();
    for (const auto& r : results) {
      nlohmann::json c;
      c["id"] = r.id;
      c["name"] = r.name;
      c["pass"] = r.pass;
      c["checks"] = nlohmann::json::array();
      for (const auto& ch : r.checks)
        c["checks"].push_back({{"name", ch.name},
                               {"measured", format_double(ch.measured)},
                               {"target", ch.target},
                               {"pass", ch.pass}});
      j["criteria"].push_back(c);
    }
    std::ofstream os(json_out);
    if (!os) throw std::invalid_argument("cannot open output file " + json_out);
    os << j.dump(2) << "\n";
  }
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for pseudodifferential symbol calculus"};
  app.require_subcommand(1);

  std::string out, json_out;
  app.add_option("--out", out, "output CSV path (default: stdout)");
  app.add_option("--json", json_out, "also write a JSON mirror to this path");

  // lp-check
  auto* lp = app.add_subcommand("lp-check", "dyadic partition invariants");
  int lp_n = 1, lp_N = 64, lp_J = -1;
  double lp_L = 2 * pi;
  lp->add_option("--n", lp_n);
  lp->add_option("--N", lp_N);
  lp->add_option("--L", lp_L);
  lp->add_option("--J", lp_J, "levels (default: cover the Nyquist corner)");

  // norms
  auto* no = app.add_subcommand("norms", "norm of a grid function");
  std::string no_input, no_kind = "holder";
  int no_t = 0;
  double no_theta = 0.5, no_tau = 0.5, no_s = 0, no_q = 2;
  no->add_option("--input", no_input)->required();
  no->add_option("--kind", no_kind, "holder|zygmund|bessel");
  no->add_option("--t", no_t);
  no->add_option("--theta", no_theta);
  no->add_option("--tau", no_tau);
  no->add_option("--s", no_s);
  no->add_option("--q", no_q);

  // interp-check
  auto* ic = app.add_subcommand("interp-check", "interpolation inequality sweep");
  int ic_N = 128, ic_t = 0, ic_k = 1;
  double ic_L = 2 * pi, ic_theta = 0.5, ic_vartheta = 0.5;
  std::uint64_t ic_seed = 42;
  ic->add_option("--N", ic_N);
  ic->add_option("--L", ic_L);
  ic->add_option("--seed", ic_seed);
  ic->add_option("--t", ic_t);
  ic->add_option("--theta", ic_theta);
  ic->add_option("--k", ic_k);
  ic->add_option("--vartheta", ic_vartheta);

  // symbol-report
  auto* sr = app.add_subcommand("symbol-report", "empirical symbol seminorms");
  std::string sr_input;
  int sr_l = 2;
  double sr_t = 0.5;
  sr->add_option("--input", sr_input)->required();
  sr->add_option("--l", sr_l);
  sr->add_option("--t", sr_t);

  // apply
  auto* ap = app.add_subcommand("apply", "apply a quantized symbol to data");
  std::string ap_symbol, ap_input, ap_form = "x", ap_out;
  ap->add_option("--symbol", ap_symbol)->required();
  ap->add_option("--input", ap_input)->required();
  ap->add_option("--form", ap_form, "x|y|xxiy|xyxi");
  ap->add_option("--output", ap_out)->required();

  // osc
  auto* os_cmd = app.add_subcommand("osc", "oscillatory integral traces");
  std::string os_amp = "gauss", os_method = "both";
  os_cmd->add_option("--amplitude", os_amp, "builtin amplitude name");
  os_cmd->add_option("--method", os_method, "reg|ibp|both");

  // compose
  auto* co = app.add_subcommand("compose", "composition remainder sweep");
  std::string co_p1 = "builtin:bracket:1", co_p2 = "builtin:modbracket:-1";
  int co_order = 1, co_N = 128;
  std::vector<double> co_lambdas{4, 8, 16, 32};
  co->add_option("--p1", co_p1);
  co->add_option("--p2", co_p2);
  co->add_option("--order", co_order);
  co->add_option("--N", co_N);
  co->add_option("--lambdas", co_lambdas)->delimiter(',');

  // smooth
  auto* sm = app.add_subcommand("smooth", "dyadic smoothing decomposition");
  std::string sm_symbol = "builtin:cusp";
  double sm_gamma = 0.8;
  int sm_N = 128;
  sm->add_option("--symbol", sm_symbol);
  sm->add_option("--gamma", sm_gamma);
  sm->add_option("--N", sm_N);

  // kernel
  auto* ke = app.add_subcommand("kernel", "dyadic kernel decay report");
  std::string ke_symbol = "builtin:bracket:0";
  int ke_N = 128, ke_M = 2;
  ke->add_option("--symbol", ke_symbol);
  ke->add_option("--N", ke_N);
  ke->add_option("--M", ke_M);

  // transform
  auto* tr = app.add_subcommand("transform", "coordinate-change checks");
  std::string tr_symbol = "builtin:ixi", tr_diffeo = "sine:0.1",
              tr_check = "equivariance";
  int tr_N = 128;
  double tr_r = 0.5;
  tr->add_option("--symbol", tr_symbol);
  tr->add_option("--diffeo", tr_diffeo, "identity|affine:a,b|sine:a|c1theta:a,t");
  tr->add_option("--check", tr_check, "equivariance|principal|defect");
  tr->add_option("--N", tr_N);
  tr->add_option("--r", tr_r, "cover scale");

  // acceptance
  auto* ac = app.add_subcommand("acceptance", "run acceptance criteria");
  std::string ac_suite = "all";
  std::uint64_t ac_seed = 7;
  ac->add_option("--suite", ac_suite);
  ac->add_option("--seed", ac_seed);

  // --out/--json live on the top-level app; let subcommands pass unknown
  // options up so they may appear anywhere on the command line.
  for (CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; }))
    s->fallthrough();

  // Flat key=value configuration: each line becomes --key=value, but explicit
  // command-line flags win, so keys already present are not injected.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "usage error: cannot open config file " << config_path << "\n";
      return 1;
    }
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    std::string line;
    while (std::getline(is, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        std::cerr << "usage error: config line is not key=value: " << line << "\n";
        return 1;
      }
      std::string key = trim(line.substr(0, eq));
      std::string flag = "--" + key;
      bool on_cli = false;
      for (const std::string& a : args)
        on_cli = on_cli || a == flag || a.rfind(flag + "=", 0) == 0;
      if (!on_cli) args.push_back(flag + "=" + trim(line.substr(eq + 1)));
    }
  }

  try {
    std::reverse(args.begin(), args.end());  // CLI11 wants a reversed vector
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage errors exit with 1 regardless of CLI11's internal code
  }

  try {
    if (*ac) {
      try {
        acceptance_suite(ac_suite);
      } catch (const contract_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;  // unknown suite is a usage error, not a contract failure
      }
      return run_acceptance_cmd(ac_suite, ac_seed, out, json_out);
    }
    if (*lp) return run_lp_check(lp_n, lp_N, lp_L, lp_J, out, json_out);
    if (*no)
      return run_norms(no_input, no_kind, no_t, no_theta, no_tau, no_s, no_q,
                       out, json_out);
    if (*ic)
      return run_interp_check(ic_N, ic_L, ic_seed, ic_t, ic_theta, ic_k,
                              ic_vartheta, out, json_out);
    if (*sr) return run_symbol_report(sr_input, sr_l, sr_t, out, json_out);
    if (*ap) return run_apply(ap_symbol, ap_input, ap_form, ap_out);
    if (*os_cmd) return run_osc(os_amp, os_method, out, json_out);
    if (*co)
      return run_compose(co_p1, co_p2, co_order, co_lambdas, co_N, out, json_out);
    if (*sm) return run_smooth(sm_symbol, sm_gamma, sm_N, out, json_out);
    if (*ke) return run_kernel(ke_symbol, ke_N, ke_M, out, json_out);
    if (*tr)
      return run_transform(tr_symbol, tr_diffeo, tr_check, tr_N, tr_r, out,
                           json_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const contract_error& e) {
    std::cerr << "contract failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
