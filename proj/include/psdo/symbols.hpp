#pragma once

#include <cstdint>
#include <optional>

#include "psdo/grid.hpp"

namespace psdo {

/// Argument layout of a symbol.
///   x_form  : p(x, xi)
///   xxiy    : p(x, xi, y)
///   xyxi    : p(x, y, xi)
enum class SymbolForm { x_form, xxiy, xyxi };

std::string to_string(SymbolForm f);
SymbolForm symbol_form_from_string(const std::string& s);

/// A symbol tabulated on the grid lattice, tagged with its declared class
/// C^tau S^m_{rho,delta}. The class parameters are metadata: estimators report
/// against them, nothing enforces them. An optional closed-form evaluator (and
/// exact xi-derivative) enables off-lattice use (pullbacks, oscillatory
/// quadrature) and sharper seminorm estimates.
struct SampledSymbol {
  Grid grid;
  SymbolForm form = SymbolForm::x_form;
  double order = 0;   // m
  double rho = 1;
  double delta = 0;
  double tau = 1e9;   // declared x-regularity; default "smooth"
  std::vector<cplx> values;

  /// Closed form; the third argument is used only by the triple forms.
  std::function<cplx(const Vec& x, const Vec& xi, const Vec& y)> eval;
  /// Exact d_xi^alpha p(x,xi) for x_form symbols.
  std::function<cplx(const Idx& alpha, const Vec& x, const Vec& xi)> xi_derivative;

  std::size_t value_count() const;
  std::size_t index(const Idx& a, const Idx& b) const;                // x_form
  std::size_t index(const Idx& a, const Idx& b, const Idx& c) const;  // triples
};

/// Tabulate a closed-form symbol. Triple forms store N^{3n} values and are
/// refused above N=128 (n=1) / N=20 (n=2) to keep memory bounded.
SampledSymbol make_symbol(const Grid& g, SymbolForm form, double m, double rho,
                          double delta, double tau,
                          std::function<cplx(const Vec&, const Vec&, const Vec&)> eval);

/// <xi>^m with exact xi-derivatives attached.
SampledSymbol bracket_symbol(const Grid& g, double m);

/// sum_alpha a_alpha(x) (i xi)^alpha from tabulated coefficients; exact
/// xi-derivatives (they only touch the monomial).
SampledSymbol differential_symbol(const Grid& g,
                                  const std::vector<std::pair<Idx, GridFunction>>& coeffs);

/// q(x, xi) = p(x, x, xi) for an xyxi symbol.
SampledSymbol freeze_diagonal(const SampledSymbol& p);

/// Exact k-th derivative of t -> (1+t^2)^{m/2} (1-D bracket powers); used by the
/// builtin symbols and as an oracle elsewhere.
double bracket_power_derivative(double m, int k, double t);

/// How xi-derivatives were obtained for a seminorm report.
enum class DerivativeMode { closed_form, evaluator_fd, lattice_fd };

struct SeminormEntry {
  Idx alpha;            // xi multi-index
  double sup_ratio;     // sup |d^a p| <xi>^{-m+rho|a|}
  double holder_ratio;  // sup_xi ||d^a p(.,xi)||_{C^t} <xi>^{-m+rho|a|-delta t}
};

struct SeminormReport {
  double total = 0;  // max over entries of max(sup_ratio, holder_ratio)
  double t = 0;      // x-regularity the Hölder column was measured against
  DerivativeMode mode = DerivativeMode::closed_form;
  std::vector<SeminormEntry> entries;
};

/// d_xi^alpha p tabulated over the whole (x,xi) lattice (layout x*S + xi),
/// using the best available derivative source (closed form, evaluator-based
/// finite differences, or lattice differences).
std::vector<cplx> xi_derivative_table(const SampledSymbol& p, const Idx& alpha,
                                      DerivativeMode* mode_out = nullptr);

/// Empirical seminorm |p|^{(m)}_{l,t} of an x_form symbol against its declared
/// class. t = integer part + Hölder part; l <= 4.
SeminormReport symbol_seminorm(const SampledSymbol& p, int l, double t);

/// CSV layout: "# symbol form m rho delta tau n N L", then one row per stored
/// value, indices first (2 per slot for n=2), then re, im.
void write_symbol_csv(std::ostream& os, const SampledSymbol& p);
SampledSymbol read_symbol_csv(std::istream& is);

}  // namespace psdo
