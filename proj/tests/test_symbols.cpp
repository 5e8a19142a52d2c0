#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "psdo/symbols.hpp"
#include "psdo/util.hpp"

using namespace psdo;

TEST_CASE("bracket power derivatives match hand formulas") {
  for (double t : {-3.0, -0.4, 0.0, 1.7, 12.0}) {
    double b = std::sqrt(1 + t * t);
    CHECK(bracket_power_derivative(1.0, 0, t) == doctest::Approx(b).epsilon(1e-14));
    CHECK(bracket_power_derivative(1.0, 1, t) ==
          doctest::Approx(t / b).epsilon(1e-14));
    CHECK(bracket_power_derivative(1.0, 2, t) ==
          doctest::Approx(std::pow(b, -3.0)).epsilon(1e-13));
    // d/dt (1+t^2)^{-1} = -2t (1+t^2)^{-2}
    CHECK(bracket_power_derivative(-2.0, 1, t) ==
          doctest::Approx(-2 * t * std::pow(b, -4.0)).epsilon(1e-13));
  }
}

TEST_CASE("bracket power derivatives satisfy the decay envelope") {
  for (double m : {-2.0, -1.0, 0.0, 1.0, 2.5}) {
    for (int k = 1; k <= 4; ++k) {
      double worst = 0;
      for (double t = -40; t <= 40; t += 0.37) {
        double env = std::pow(std::sqrt(1 + t * t), m - k);
        worst = std::max(worst, std::fabs(bracket_power_derivative(m, k, t)) / env);
      }
      CHECK(worst < 120.0);  // C_alpha grows combinatorially with the order, stays O(100)
    }
  }
}

TEST_CASE("bracket symbol tabulates <xi>^m and reports a clean seminorm") {
  Grid g = make_torus_grid(1, 64, 2 * pi);
  SampledSymbol p = bracket_symbol(g, -2.0);
  std::size_t s = g.size();
  for (std::size_t k = 0; k < s; ++k) {
    double xi = g.xi_of_flat(k)[0];
    CHECK(std::abs(p.values[k] - std::pow(1 + xi * xi, -1.0)) < 1e-14);
  }
  SeminormReport rep = symbol_seminorm(p, 2, 0.0);
  CHECK(rep.mode == DerivativeMode::closed_form);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.entries[0].sup_ratio == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rep.total < 10.0);  // sup ratio of the 2nd derivative tends to 6
}

TEST_CASE("seminorm derivative modes agree on a smooth symbol") {
  Grid g = make_torus_grid(1, 32, 2 * pi);
  SampledSymbol p = bracket_symbol(g, -1.0);

  SampledSymbol p_eval = p;
  p_eval.xi_derivative = nullptr;  // force evaluator-based finite differences
  SampledSymbol p_tab = p;
  p_tab.xi_derivative = nullptr;
  p_tab.eval = nullptr;  // force the lattice fallback

  SeminormReport exact = symbol_seminorm(p, 2, 0.0);
  SeminormReport fd = symbol_seminorm(p_eval, 2, 0.0);
  SeminormReport tab = symbol_seminorm(p_tab, 2, 0.0);
  CHECK(fd.mode == DerivativeMode::evaluator_fd);
  CHECK(tab.mode == DerivativeMode::lattice_fd);
  for (std::size_t i = 0; i < exact.entries.size(); ++i) {
    CHECK(fd.entries[i].sup_ratio ==
          doctest::Approx(exact.entries[i].sup_ratio).epsilon(1e-6));
    // lattice differences carry O(dxi^2) truncation error
    CHECK(tab.entries[i].sup_ratio ==
          doctest::Approx(exact.entries[i].sup_ratio).epsilon(0.2));
  }
}

TEST_CASE("differential symbol a(x) i xi + b(x)") {
  Grid g = make_torus_grid(1, 32, 2 * pi);
  GridFunction a = sample(g, [](const Vec& x) { return 2 + std::sin(x[0]); });
  GridFunction b = sample(g, [](const Vec& x) { return std::cos(2 * x[0]); });
  SampledSymbol p = differential_symbol(g, {{{1, 0}, a}, {{0, 0}, b}});
  CHECK(p.order == 1);
  std::size_t s = g.size();
  double err = 0;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t k = 0; k < s; ++k) {
      cplx expect = a.values[i] * cplx{0, g.xi_of_flat(k)[0]} + b.values[i];
      err = std::max(err, std::abs(p.values[i * s + k] - expect));
    }
  CHECK(err < 1e-13);
  // exact xi-derivative: d_xi p = i a(x)
  Vec x{1.5, 0}, xi{3.7, 0};
  cplx ax = p.xi_derivative({1, 0}, x, xi);
  CHECK(std::abs(ax - cplx{0, 1} * cplx{2 + std::sin(1.5), 0}) < 1e-12);
  // evaluator interpolates the coefficients exactly at lattice points
  Vec xl = g.x_of_flat(5);
  CHECK(std::abs(p.eval(xl, xi, {0, 0}) -
                 (a.values[5] * cplx{0, 3.7} + b.values[5])) < 1e-12);
}

TEST_CASE("triple-form symbols: tabulation layout and diagonal freeze") {
  Grid g = make_torus_grid(1, 16, 2 * pi);
  auto f = [](const Vec& x, const Vec& xi, const Vec& y) {
    return cplx{std::sin(x[0]) + 0.5 * std::cos(y[0]), 0} /
           (1 + xi[0] * xi[0]);
  };
  SampledSymbol p = make_symbol(g, SymbolForm::xyxi, -2, 1, 0, 1e9, f);
  std::size_t s = g.size();
  Idx ia{3, 0}, ib{7, 0}, ic{10, 0};
  cplx expect = f(g.x_node(ia), g.xi_node(ic), g.x_node(ib));
  CHECK(std::abs(p.values[p.index(ia, ib, ic)] - expect) < 1e-15);

  SampledSymbol q = freeze_diagonal(p);
  CHECK(q.form == SymbolForm::x_form);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t k = 0; k < s; ++k) {
      cplx e = f(g.x_of_flat(i), g.xi_of_flat(k), g.x_of_flat(i));
      CHECK(std::abs(q.values[i * s + k] - e) < 1e-15);
    }
}

TEST_CASE("triple-form tabulation is size-guarded") {
  Grid g = make_torus_grid(1, 256, 2 * pi);
  auto one = [](const Vec&, const Vec&, const Vec&) { return cplx{1, 0}; };
  CHECK_THROWS_AS(make_symbol(g, SymbolForm::xxiy, 0, 1, 0, 1e9, one),
                  contract_error);
  CHECK_NOTHROW(make_symbol(make_torus_grid(1, 16, 2 * pi), SymbolForm::xxiy, 0, 1,
                            0, 1e9, one));
}

TEST_CASE("symbol csv round trip preserves values and class metadata") {
  Grid g = make_torus_grid(1, 16, 5.0);
  Rng rng(99);
  SampledSymbol p = bracket_symbol(g, -1.5);
  p.rho = 0.8;
  p.delta = 0.25;
  p.tau = 1.5;
  for (auto& z : p.values) z += cplx{0, rng.uniform(-1, 1)};
  std::stringstream ss;
  write_symbol_csv(ss, p);
  SampledSymbol q = read_symbol_csv(ss);
  CHECK(q.form == p.form);
  CHECK(q.order == p.order);
  CHECK(q.rho == p.rho);
  CHECK(q.delta == p.delta);
  CHECK(q.tau == p.tau);
  REQUIRE(q.values.size() == p.values.size());
  for (std::size_t i = 0; i < p.values.size(); ++i)
    CHECK(q.values[i] == p.values[i]);

  // triple form too
  SampledSymbol t = make_symbol(
      make_torus_grid(1, 8, 2 * pi), SymbolForm::xxiy, 0, 1, 0, 1e9,
      [&](const Vec& x, const Vec& xi, const Vec& y) {
        return cplx{x[0] - y[0], 1.0 / (1 + xi[0] * xi[0])};
      });
  std::stringstream st;
  write_symbol_csv(st, t);
  SampledSymbol t2 = read_symbol_csv(st);
  CHECK(t2.form == SymbolForm::xxiy);
  for (std::size_t i = 0; i < t.values.size(); ++i)
    CHECK(t2.values[i] == t.values[i]);
}

TEST_CASE("symbol csv rejects malformed input") {
  std::stringstream bad("# symbol z 0 1 0 1 1 16 6.28\n");
  CHECK_THROWS_AS(read_symbol_csv(bad), contract_error);
  std::stringstream bad2("# symbol x 0 1 0 1 1 16 6.28\n0,0,1.0\n");
  CHECK_THROWS_AS(read_symbol_csv(bad2), contract_error);
}
