#pragma once

#include <memory>

#include "psdo/grid.hpp"

namespace psdo {

/// A scalar function of one variable exposing exact derivatives: deriv(k, t) is
/// the k-th derivative at t. The building block for amplitudes with closed-form
/// derivative data (products of Gaussians, bracket powers, polynomials, trig).
struct Func1D {
  std::function<cplx(int, double)> deriv;
};

Func1D func_gauss(double a = 1.0);        // e^{-a t^2}
Func1D func_bracket_pow(int q);           // (1+t^2)^{-q}, q >= 0
Func1D func_poly(std::vector<double> c);  // c0 + c1 t + ...
Func1D func_cos(double w);
Func1D func_sin(double w);
Func1D func_const(cplx v);
Func1D func_product(const Func1D& f, const Func1D& g);  // Leibniz
Func1D func_shift(const Func1D& f, double s);           // t -> f(t + s)
Func1D func_derivative(const Func1D& f);                // t -> f'(t)

struct Amplitude;

/// a(eta,y) = sum_k coeff_k f_k(eta) g_k(y), with exact Leibniz derivatives.
struct SeparableTerm {
  cplx coeff;
  Func1D in_eta;
  Func1D in_y;
};

/// Amplitude a(eta, y) for 1-D oscillatory integrals, with class metadata
/// (|d_eta^a d_y^b a| <= C <eta>^{m - a + delta b} <y>^tau is the regime the
/// integration-by-parts route assumes). If `deriv` is absent, derivatives fall
/// back to nested central differences (step 1e-3) and refuse orders above 2 per
/// variable.
struct Amplitude {
  double order = 0;  // m
  double delta = 0;
  double tau = 0;
  std::function<cplx(double, double)> eval;
  std::function<cplx(int, int, double, double)> deriv;
  /// Separable structure, when known; lets the quadratures tabulate per-axis
  /// derivative tables instead of evaluating pointwise.
  std::shared_ptr<const std::vector<SeparableTerm>> terms;

  cplx derivative(int a, int b, double eta, double y) const;
};

Amplitude make_amplitude(std::vector<SeparableTerm> terms, double m, double delta,
                         double tau);

/// Wrappers used by the partial-integration identities. All keep exact
/// derivatives if the input has them.
Amplitude amplitude_times_eta(const Amplitude& a);
Amplitude amplitude_times_y(const Amplitude& a);
Amplitude amplitude_D_eta(const Amplitude& a);  // D = -i d
Amplitude amplitude_D_y(const Amplitude& a);

/// Schwartz regularizer chi with chi(0,0) = 1.
struct Cutoff {
  std::string name;
  std::function<double(double, double)> eval;
};
Cutoff gaussian_cutoff();  // e^{-(eta^2+y^2)/2}
Cutoff bump_cutoff();      // phi0(|eta|) phi0(|y|) — compactly supported

struct OscParams {
  double box = 30.0;    // half-width R of the quadrature box [-R,R]^2
  int quad_points = 1024;
  int eps_first = 1;    // epsilon_k = 2^{-k}, k = eps_first..eps_last
  int eps_last = 8;
  double tol = 1e-5;    // relative Cauchy tolerance on the trace
};

struct OscResult {
  cplx value;
  std::vector<cplx> trace;  // one entry per epsilon
  bool converged = false;
};

/// The definition, verbatim: tensor trapezoid of
/// (2 pi)^{-1} e^{-i y eta} chi(eps eta, eps y) a(eta, y) over [-R,R]^2,
/// for the dyadic epsilon schedule; converged when the trace is Cauchy at `tol`.
OscResult os_regularized(const Amplitude& a, const Cutoff& chi,
                         const OscParams& params = {});

/// The absolutely convergent rewrite: trapezoid of
/// (2 pi)^{-1} e^{-i y eta} <y>^{-2l'} <D_eta>^{2l'} ( <eta>^{-2l} <D_y>^{2l} a ).
/// Preconditions -2l(1-delta) + m < -1 and -2l' + tau < -1 are enforced against
/// the amplitude's declared class.
OscResult os_ibp(const Amplitude& a, int l, int lprime,
                 const OscParams& params = {});

/// |Os-iint e^{-i y eta} a(x+y) dy dbar-eta  -  a(x)|.
double inversion_check(const Func1D& a, double x, const Cutoff& chi,
                       const OscParams& params = {});

}  // namespace psdo
