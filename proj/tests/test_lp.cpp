#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psdo/grid.hpp"
#include "psdo/lp.hpp"
#include "psdo/util.hpp"

using namespace psdo;

TEST_CASE("switch function f and ramp g") {
  CHECK(lp_f(-1.0) == 0.0);
  CHECK(lp_f(0.0) == 0.0);
  CHECK(lp_f(1e-4) == 0.0);  // guarded underflow region
  CHECK(lp_f(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(lp_g(-0.5) == 0.0);
  CHECK(lp_g(1.5) == 1.0);
  CHECK(lp_g(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  // g(t) + g(1-t) = 1 on the ramp
  for (double t : {0.1, 0.3, 0.62, 0.9})
    CHECK(lp_g(t) + lp_g(1 - t) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("phi0 plateau and support") {
  for (double r : {0.0, 0.5, 1.0}) CHECK(lp_phi0_radial(r) == 1.0);
  for (double r : {2.0, 3.0, 100.0}) CHECK(lp_phi0_radial(r) == 0.0);
  CHECK(lp_phi0_radial(1.5) > 0.0);
  CHECK(lp_phi0_radial(1.5) < 1.0);
  CHECK(lp_phi0_radial(-0.7) == 1.0);  // even in r
}

TEST_CASE("annuli: support and telescoping partial sums") {
  // supp phi_j in [2^{j-1}, 2^{j+1}]
  CHECK(lp_phi_radial(3, 3.9) == 0.0);
  CHECK(lp_phi_radial(3, 6.0) > 0.0);
  CHECK(lp_phi_radial(3, 16.1) == 0.0);
  // sum_{j<=k} phi_j(r) = phi0(2^{-k} r) pointwise
  for (double r : {0.3, 1.7, 5.0, 23.0, 100.0}) {
    for (int k : {0, 3, 7}) {
      double s = 0;
      for (int j = 0; j <= k; ++j) s += lp_phi_radial(j, r);
      CHECK(s == doctest::Approx(lp_phi0_radial(std::ldexp(r, -k))).epsilon(1e-14));
    }
  }
}

TEST_CASE("lattice partition of unity at every node") {
  for (int dim : {1, 2}) {
    Grid g = make_torus_grid(dim, dim == 1 ? 128 : 32, 2 * pi);
    int J = min_covering_level(g);
    CHECK(std::ldexp(1.0, J) >= g.max_xi());
    LPPartition part = build_partition(g, J);
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0;
      for (int j = 0; j <= J; ++j) s += part.blocks[j][i];
      worst = std::max(worst, std::fabs(s - 1.0));
    }
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("build_partition rejects a truncation that misses the lattice") {
  Grid g = make_torus_grid(1, 128, 2 * pi);  // max |xi| = 64
  CHECK_THROWS_AS(build_partition(g, 4), contract_error);  // 2^5 = 32 < 64
  CHECK_NOTHROW(build_partition(g, 5));  // touched, though unity only on |xi|<=32
}

TEST_CASE("neighbor identity (phi_{j-1}+phi_j+phi_{j+1}) phi_j = phi_j") {
  Grid g = make_torus_grid(1, 128, 2 * pi);
  for (int j = 1; j <= 7; ++j) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      double r = std::fabs(g.xi_of_flat(i)[0]);
      double mid = lp_phi_radial(j, r);
      double tri = lp_phi_radial(j - 1, r) + mid + lp_phi_radial(j + 1, r);
      CHECK(std::fabs(tri * mid - mid) <= 1e-14);
    }
  }
}

TEST_CASE("blocks of a pure plane wave select exactly its shell") {
  Grid g = make_torus_grid(1, 64, 2 * pi);
  int J = min_covering_level(g);
  LPPartition part = build_partition(g, J);
  int k0 = 12;  // phi_j(12) nonzero only for j in {3,4} (annuli [4,16] and [8,32])
  GridFunction u =
      sample(g, [&](const Vec& x) { return std::polar(1.0, k0 * x[0]); });
  double total = 0;
  for (int j = 0; j <= J; ++j) {
    double nj = sup_norm(lp_block(u, part, j));
    total += nj;
    if (j != 3 && j != 4) CHECK(nj < 1e-13);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));  // blocks sum to phi-sum = 1
}

TEST_CASE("block sums reconstruct the function") {
  Grid g = make_torus_grid(2, 32, 2 * pi);
  int J = min_covering_level(g);
  LPPartition part = build_partition(g, J);
  GridFunction u = sample(g, [](const Vec& x) {
    return std::exp(std::sin(3 * x[0]) + std::cos(x[1]));
  });
  GridFunction acc(g, Side::physical);
  for (int j = 0; j <= J; ++j) acc = acc + lp_block(u, part, j);
  CHECK(sup_norm(acc - u) < 1e-12);
}

TEST_CASE("derivative envelope ratios are bounded and N-stable") {
  Grid g64 = make_torus_grid(1, 64, 2 * pi);
  Grid g128 = make_torus_grid(1, 128, 2 * pi);
  auto r64 = derivative_bound_report(g64, min_covering_level(g64), 3);
  auto r128 = derivative_bound_report(g128, min_covering_level(g128), 3);
  REQUIRE(r64.size() == 3);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(std::isfinite(r64[a].worst_ratio));
    CHECK(r64[a].worst_ratio > 0);
    // the empirical constants c_alpha are resolution-independent up to 30%
    double ratio = r128[a].worst_ratio / r64[a].worst_ratio;
    CHECK(ratio > 0.7);
    CHECK(ratio < 1.3);
  }
}
