#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace psdo {

using cplx = std::complex<double>;
using Vec = std::array<double, 2>;  // first `dim` entries are meaningful
using Idx = std::array<int, 2>;

constexpr double pi = 3.14159265358979323846;

/// Thrown when a caller violates a documented precondition.
struct contract_error : std::runtime_error {
  explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

/// Uniform periodic grid on [0,L)^n with the dual lattice (2*pi/L) * [-N/2, N/2)^n.
/// N is even so the lattice spacing identity dx * dxi * N = 2*pi holds per axis.
struct Grid {
  int dim = 1;       // n, 1 or 2
  int points = 8;    // N per axis, even, >= 8
  double period = 2 * pi;  // L

  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(points);
    return s;
  }
  double dx() const { return period / points; }
  double dxi() const { return 2 * pi / period; }

  /// Map an unsigned per-axis index in [0,N) to the signed frequency index in [-N/2, N/2).
  int signed_index(int k) const { return k < points / 2 ? k : k - points; }

  /// Decompose a flat storage index (row-major, axis 0 slowest) into per-axis indices.
  Idx unflatten(std::size_t flat) const {
    Idx i{0, 0};
    if (dim == 1) {
      i[0] = static_cast<int>(flat);
    } else {
      i[0] = static_cast<int>(flat / static_cast<std::size_t>(points));
      i[1] = static_cast<int>(flat % static_cast<std::size_t>(points));
    }
    return i;
  }
  std::size_t flatten(const Idx& i) const {
    return dim == 1 ? static_cast<std::size_t>(i[0])
                    : static_cast<std::size_t>(i[0]) * points + i[1];
  }

  Vec x_node(const Idx& i) const {
    Vec x{0, 0};
    for (int d = 0; d < dim; ++d) x[d] = i[d] * dx();
    return x;
  }
  Vec xi_node(const Idx& k) const {
    Vec xi{0, 0};
    for (int d = 0; d < dim; ++d) xi[d] = dxi() * signed_index(k[d]);
    return xi;
  }
  Vec x_of_flat(std::size_t flat) const { return x_node(unflatten(flat)); }
  Vec xi_of_flat(std::size_t flat) const { return xi_node(unflatten(flat)); }

  /// Largest |xi| on the dual lattice (the Nyquist corner).
  double max_xi() const;

  /// Geodesic distance on the torus (R/LZ)^n.
  double torus_distance(const Vec& a, const Vec& b) const;

  bool operator==(const Grid& g) const {
    return dim == g.dim && points == g.points && period == g.period;
  }
};

Grid make_torus_grid(int dim, int points, double period);

enum class Side { physical, frequency };

/// Complex samples on either the x-lattice or the xi-lattice of a Grid.
struct GridFunction {
  Grid grid;
  Side side = Side::physical;
  std::vector<cplx> values;

  GridFunction() = default;
  GridFunction(const Grid& g, Side s) : grid(g), side(s), values(g.size(), cplx{0, 0}) {}
};

GridFunction sample(const Grid& g, const std::function<cplx(const Vec&)>& f);

/// Forward DFT with integral normalization: uhat(xi) = dx^n * sum_x e^{-i x.xi} u(x),
/// the Riemann approximation of the Fourier integral.
GridFunction forward_transform(const GridFunction& u);

/// Inverse with the d-bar measure: u(x) = L^{-n} * sum_xi e^{+i x.xi} uhat(xi).
GridFunction inverse_transform(const GridFunction& v);

/// Japanese bracket <xi> = (1 + |xi|^2)^{1/2}.
double bracket(const Vec& xi, int dim);

/// Multiply on the frequency side by m(xi); input/output on the physical side.
GridFunction apply_multiplier(const GridFunction& u,
                              const std::function<cplx(const Vec&)>& m);

/// d^alpha u via the multiplier (i xi)^alpha. Axes whose order is odd have their
/// unpaired Nyquist plane zeroed (the -N/2 mode has no +N/2 partner). |alpha| <= 8.
GridFunction spectral_derivative(const GridFunction& u, const Idx& alpha);

/// Sesquilinear lattice inner product <u,v> = dx^n sum_x u(x) conj(v(x)).
cplx inner_product(const GridFunction& u, const GridFunction& v);

double sup_norm(const GridFunction& u);
/// Riemann L^q norm (dx^n weights), q >= 1.
double lq_norm(const GridFunction& u, double q);
double l2_norm(const GridFunction& u);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(cplx c, const GridFunction& a);
/// Pointwise product.
GridFunction hadamard(const GridFunction& a, const GridFunction& b);

/// CSV layout: header "# grid n N L side", then one row per lattice node,
/// "i,re,im" (n=1) or "i,j,re,im" (n=2), row-major order.
void write_csv(std::ostream& os, const GridFunction& u);
GridFunction read_grid_function_csv(std::istream& is);

}  // namespace psdo
