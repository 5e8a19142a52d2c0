#pragma once

#include <cstdint>

#include "psdo/grid.hpp"
#include "psdo/lp.hpp"

namespace psdo {

/// Discrete Hölder seminorm [u]_theta = sup |u(x)-u(y)| / d(x,y)^theta over lattice
/// pairs with torus distance >= min_sep. Pairs closer than min_sep (default 4 dx)
/// are excluded: below a few grid spacings the quotient measures interpolation
/// noise, not regularity. theta in (0,1].
double holder_seminorm(const GridFunction& u, double theta, double min_sep = -1.0);

/// ||u||_{C^t} = sum_{|alpha|<=t} sup |d^alpha u| (derivatives spectral).
double ck_norm(const GridFunction& u, int t);

/// ||u||_{C^{t,theta}} = ||u||_{C^t} + max_{|alpha|=t} [d^alpha u]_theta.
double holder_norm(const GridFunction& u, int t, double theta,
                   double min_sep = -1.0);

/// Zygmund norm ||u||_{C^tau_*} = sup_j 2^{j tau} ||phi_j(D) u||_inf.
double zygmund_norm(const GridFunction& u, double tau, const LPPartition& part);

/// Bessel-potential norm ||<D>^s u||_{L^q} with Riemann dx^n weights.
double bessel_norm(const GridFunction& u, double s, double q);

/// Data behind the convexity inequality
/// ||u||_{C^{t,theta}} <= c ||u||_{C^0}^{1-lambda} ||u||_{C^{k,vartheta}}^lambda,
/// lambda = (t+theta)/(k+vartheta). `ratio` is lhs / (rhs0^{1-lambda} rhs1^lambda),
/// i.e. the empirical constant this function exhibits.
struct InterpolationCheck {
  double lambda;
  double lhs;    // ||u||_{C^{t,theta}}
  double low;    // ||u||_{C^0}
  double high;   // ||u||_{C^{k,vartheta}}
  double ratio;
};
InterpolationCheck interpolation_check(const GridFunction& u, int t, double theta,
                                       int k, double vartheta);

/// Versioned corpus of 1-D probe functions used by norm stability checks:
/// trig waves, plane waves, smooth bumps, a C^{1/2} cusp, a mollified sawtooth,
/// and seeded band-limited noise. Stable across grid resolutions (same continuum
/// functions resampled).
inline constexpr const char* corpus_version = "1.0.0";
std::vector<std::pair<std::string, GridFunction>> test_corpus(const Grid& g,
                                                              std::uint64_t seed);

}  // namespace psdo
