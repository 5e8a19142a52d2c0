#include "psdo/spaces.hpp"

#include <cmath>

#include "psdo/util.hpp"

namespace psdo {

namespace {

// All multi-indices with |alpha| == total in `dim` variables.
std::vector<Idx> multi_indices_of_order(int dim, int total) {
  std::vector<Idx> out;
  if (dim == 1) {
    out.push_back({total, 0});
  } else {
    for (int a = 0; a <= total; ++a) out.push_back({a, total - a});
  }
  return out;
}

}  // namespace

double holder_seminorm(const GridFunction& u, double theta, double min_sep) {
  if (!(theta > 0) || theta > 1)
    throw contract_error("holder_seminorm: theta must lie in (0,1]");
  const Grid& g = u.grid;
  if (min_sep < 0) min_sep = 4 * g.dx();
  double best = 0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    Vec xa = g.x_of_flat(a);
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      double d = g.torus_distance(xa, g.x_of_flat(b));
      if (d < min_sep) continue;
      double q = std::abs(u.values[a] - u.values[b]) / std::pow(d, theta);
      best = std::max(best, q);
    }
  }
  return best;
}

double ck_norm(const GridFunction& u, int t) {
  if (t < 0) throw contract_error("ck_norm: order must be >= 0");
  double s = 0;
  for (int total = 0; total <= t; ++total)
    for (const Idx& alpha : multi_indices_of_order(u.grid.dim, total))
      s += sup_norm(total == 0 ? u : spectral_derivative(u, alpha));
  return s;
}

double holder_norm(const GridFunction& u, int t, double theta, double min_sep) {
  double base = ck_norm(u, t);
  double semi = 0;
  for (const Idx& alpha : multi_indices_of_order(u.grid.dim, t)) {
    const GridFunction du = t == 0 ? u : spectral_derivative(u, alpha);
    semi = std::max(semi, holder_seminorm(du, theta, min_sep));
  }
  return base + semi;
}

double zygmund_norm(const GridFunction& u, double tau, const LPPartition& part) {
  double best = 0;
  for (int j = 0; j <= part.levels; ++j)
    best = std::max(best, std::pow(2.0, j * tau) * sup_norm(lp_block(u, part, j)));
  return best;
}

double bessel_norm(const GridFunction& u, double s, double q) {
  GridFunction v = apply_multiplier(u, [&](const Vec& xi) {
    return cplx{std::pow(bracket(xi, u.grid.dim), s), 0};
  });
  return lq_norm(v, q);
}

InterpolationCheck interpolation_check(const GridFunction& u, int t, double theta,
                                       int k, double vartheta) {
  double lo_ord = t + theta, hi_ord = k + vartheta;
  if (!(lo_ord < hi_ord))
    throw contract_error("interpolation_check: need t+theta < k+vartheta");
  InterpolationCheck r;
  r.lambda = lo_ord / hi_ord;
  r.lhs = holder_norm(u, t, theta);
  r.low = sup_norm(u);
  r.high = holder_norm(u, k, vartheta);
  r.ratio = r.lhs / (std::pow(r.low, 1 - r.lambda) * std::pow(r.high, r.lambda));
  return r;
}

std::vector<std::pair<std::string, GridFunction>> test_corpus(const Grid& g,
                                                              std::uint64_t seed) {
  if (g.dim != 1) throw contract_error("test_corpus: corpus is 1-D");
  std::vector<std::pair<std::string, GridFunction>> out;
  auto add = [&](const std::string& name, const std::function<cplx(double)>& f) {
    out.emplace_back(name, sample(g, [&](const Vec& x) { return f(x[0]); }));
  };
  double w = 2 * pi / g.period;  // base angular frequency of the torus

  for (int k : {1, 2, 4}) {
    add("sin" + std::to_string(k),
        [=](double x) { return std::sin(k * w * x); });
    add("cos" + std::to_string(k),
        [=](double x) { return std::cos(k * w * x); });
  }
  for (int k : {1, 3, 8}) {
    add("wave" + std::to_string(k),
        [=](double x) { return std::polar(1.0, k * w * x); });
  }
  add("bump", [=](double x) { return std::exp(-8 * (1 - std::cos(w * x))); });
  add("bump2", [=](double x) {
    double b = std::exp(-8 * (1 - std::cos(w * (x - 1.0))));
    return b * b;
  });
  add("gaussmod", [=](double x) {
    return std::exp(-4 * (1 - std::cos(w * x))) * std::cos(5 * w * x);
  });
  add("cusp", [=](double x) { return std::sqrt(std::fabs(std::sin(w * x / 2))); });
  // Sawtooth smoothed at continuum scale eps = 0.1 via the phi0 low-pass; the
  // Fourier series is finite (phi0 vanishes past |k| = 20), so the function is
  // the same for every grid resolution.
  add("sawtooth_smooth", [=](double x) {
    double s = 0;
    for (int k = 1; k <= 32; ++k) {
      double window = lp_phi0_radial(0.1 * k);
      if (window == 0) break;
      s += -2.0 / k * std::sin(k * w * x) * window;
    }
    return s;
  });

  // Seeded band-limited noise: fixed continuum Fourier coefficients on |k| <= 8,
  // resampled on whatever lattice is requested.
  Rng rng(seed);
  for (int member = 0; member < 6; ++member) {
    std::vector<cplx> coeff;
    for (int k = -8; k <= 8; ++k)
      coeff.push_back(cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)} /
                      std::pow(1.0 + std::abs(k), 1.5));
    add("noise" + std::to_string(member), [=](double x) {
      cplx s{0, 0};
      for (int k = -8; k <= 8; ++k) s += coeff[k + 8] * std::polar(1.0, k * w * x);
      return s;
    });
  }
  return out;
}

}  // namespace psdo
