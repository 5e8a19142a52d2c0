#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psdo/oscillatory.hpp"
#include "psdo/symbols.hpp"

using namespace psdo;

namespace {

Amplitude gauss_gauss() {
  return make_amplitude({{cplx{1, 0}, func_gauss(), func_gauss()}}, 0, 0, 0);
}

// e^{-eta^2} * e^{-(y-1/2)^2}: breaks the even symmetry in y
Amplitude gauss_shifted() {
  return make_amplitude({{cplx{1, 0}, func_gauss(), func_shift(func_gauss(), -0.5)}},
                        0, 0, 0);
}

}  // namespace

TEST_CASE("1-D factor derivatives match hand values") {
  Func1D g = func_gauss();
  CHECK(std::abs(g.deriv(0, 0.7) - std::exp(-0.49)) < 1e-15);
  CHECK(std::abs(g.deriv(1, 0.7) - (-1.4) * std::exp(-0.49)) < 1e-14);
  CHECK(std::abs(g.deriv(2, 0.7) - (4 * 0.49 - 2) * std::exp(-0.49)) < 1e-14);

  // (1+t^2)^{-q} = <t>^{-2q}: cross-check against the bracket-power oracle
  for (int q : {1, 2}) {
    Func1D b = func_bracket_pow(q);
    for (int k = 0; k <= 4; ++k)
      for (double t : {-2.3, 0.0, 1.1})
        CHECK(std::abs(b.deriv(k, t) - bracket_power_derivative(-2.0 * q, k, t)) <
              1e-12);
  }

  Func1D c = func_cos(3.0);
  CHECK(std::abs(c.deriv(1, 0.4) - (-3 * std::sin(1.2))) < 1e-14);
  CHECK(std::abs(c.deriv(2, 0.4) - (-9 * std::cos(1.2))) < 1e-14);

  // product rule and shift
  Func1D p = func_product(func_poly({0, 1}), func_gauss());  // t e^{-t^2}
  CHECK(std::abs(p.deriv(1, 0.3) -
                 (std::exp(-0.09) + 0.3 * (-0.6) * std::exp(-0.09))) < 1e-14);
  Func1D s = func_shift(func_gauss(), 2.0);
  CHECK(std::abs(s.deriv(0, -1.0) - std::exp(-1.0)) < 1e-15);
}

TEST_CASE("regularized quadrature hits the exact Gaussian value 1/sqrt(5)") {
  double exact = 1.0 / std::sqrt(5.0);
  OscResult r = os_regularized(gauss_gauss(), gaussian_cutoff());
  CHECK(r.converged);
  CHECK(r.trace.size() >= 2);
  CHECK(std::abs(r.value - exact) < 1e-5);
}

TEST_CASE("the limit does not depend on the regularizing cutoff") {
  for (const Amplitude& a : {gauss_gauss(), gauss_shifted(),
                             make_amplitude({{cplx{1, 0}, func_bracket_pow(1),
                                              func_gauss()}},
                                            -2, 0, 0)}) {
    OscResult r1 = os_regularized(a, gaussian_cutoff());
    OscResult r2 = os_regularized(a, bump_cutoff());
    CHECK(r1.converged);
    CHECK(r2.converged);
    CHECK(std::abs(r1.value - r2.value) < 1e-5);
  }
}

TEST_CASE("integration-by-parts route agrees with the regularized route") {
  for (int l = 1; l <= 2; ++l) {
    OscResult ibp = os_ibp(gauss_gauss(), l, l);
    CHECK(std::abs(ibp.value - 1.0 / std::sqrt(5.0)) < 1e-4);
  }
  OscResult reg = os_regularized(gauss_shifted(), gaussian_cutoff());
  OscResult ibp = os_ibp(gauss_shifted(), 1, 1);
  CHECK(std::abs(reg.value - ibp.value) < 1e-4);
}

TEST_CASE("os_ibp enforces its convergence preconditions") {
  Amplitude slow = gauss_gauss();
  slow.order = 2.0;  // claimed growth <eta>^2: l=1 gives -2+2 = 0, not < -1
  CHECK_THROWS_AS(os_ibp(slow, 1, 1), contract_error);
  CHECK_NOTHROW(os_ibp(slow, 2, 1));
  Amplitude wide = gauss_gauss();
  wide.tau = 1.5;  // <y>^{1.5} growth needs l' = 2
  CHECK_THROWS_AS(os_ibp(wide, 1, 1), contract_error);
  CHECK_NOTHROW(os_ibp(wide, 1, 2));
}

TEST_CASE("cutoff contract chi(0,0)=1 is enforced") {
  Cutoff bad{"bad", [](double e, double y) {
               return 0.5 * std::exp(-(e * e + y * y));
             }};
  CHECK_THROWS_AS(os_regularized(gauss_gauss(), bad), contract_error);
}

TEST_CASE("partial integration identities Os(y a)=Os(D_eta a), Os(eta a)=Os(D_y a)") {
  Amplitude a = gauss_shifted();
  OscResult lhs1 = os_ibp(amplitude_times_y(a), 1, 2);
  OscResult rhs1 = os_ibp(amplitude_D_eta(a), 1, 1);
  CHECK(std::abs(lhs1.value - rhs1.value) < 1e-4);
  CHECK(std::abs(lhs1.value) > 1e-3);  // the identity is not testing 0 == 0

  OscResult lhs2 = os_ibp(amplitude_times_eta(a), 2, 1);
  OscResult rhs2 = os_ibp(amplitude_D_y(a), 1, 1);
  CHECK(std::abs(lhs2.value - rhs2.value) < 1e-4);
}

TEST_CASE("oscillatory inversion: Os-iint e^{-i y eta} a(x+y) = a(x)") {
  Func1D a = func_cos(1.0);
  for (double x : {0.0, 0.7, 2.0}) {
    CHECK(inversion_check(a, x, gaussian_cutoff()) < 1e-4);
  }
  // constant amplitude: the pure delta pairing
  CHECK(inversion_check(func_const(cplx{1, 0}), 0.0, gaussian_cutoff()) < 1e-4);
  // smooth decaying amplitude
  CHECK(inversion_check(func_gauss(0.25), 0.4, gaussian_cutoff()) < 1e-4);
}

TEST_CASE("finite-difference fallback matches closed derivatives, refuses order 3") {
  Amplitude closed = gauss_shifted();
  Amplitude fd = closed;
  fd.deriv = nullptr;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      CHECK(std::abs(fd.derivative(a, b, 0.37, -0.81) -
                     closed.derivative(a, b, 0.37, -0.81)) < 1e-4);
  CHECK_THROWS_AS(fd.derivative(3, 0, 0.0, 0.0), contract_error);
  CHECK_NOTHROW(closed.derivative(3, 0, 0.0, 0.0));
}
