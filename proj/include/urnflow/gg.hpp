#pragma once

#include <functional>
#include <limits>

#include "urnflow/rng.hpp"

namespace urnflow::gg {

// Parameters of the generalized gamma law GG(k, r): the law of X^(1/r) with
// X gamma distributed with shape k/r. Covers the exponential (1,1),
// half-normal (1,2), Rayleigh (2,2) and Weibull families.
struct GGParams {
  double k = 1.0;
  double r = 1.0;
};

// Density r x^(k-1) exp(-x^r) / Gamma(k/r), x > 0.
double density(const GGParams& p, double x);

// Distribution function; zero for x <= 0.
double cdf(const GGParams& p, double x);

// E Z^l = Gamma((k+l)/r) / Gamma(k/r), defined for l > -k.
double moment(const GGParams& p, double l);

// Draw a sample as X^(1/r) with X gamma(k/r); deterministic given the stream.
double sample(const GGParams& p, RngStream& rng);

// Inverse CDF by bisection.
double quantile(const GGParams& p, double prob);

// Gamma(shape) sampler (unit scale), Marsaglia-Tsang with the shape boost
// for shape < 1.
double gamma_sample(double shape, RngStream& rng);

// Convex potential on (a, b): the target density is normalizer * exp(-B(x)).
struct Potential {
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  std::function<double(double)> B;
  std::function<double(double)> Bprime;
  double x0 = 0.0;           // location of the minimum of B
  double normalizer = 1.0;   // C_B
  double mode_height = 1.0;  // C_B * exp(-B(x0)) = max of the density
  double k = 0.0, r = 0.0;   // generalized gamma parameters when applicable
  double tail_cutoff = 0.0;  // upper tail beyond this point is < 1e-16
};

// The generalized gamma potential B(x) = x^r - (k-1) ln x. Requires
// k, r >= 1 so that B is convex with a unique minimum; for k = 1 the minimum
// sits at the boundary and B(x0) = 0 by convention.
Potential potential(const GGParams& p);

// Explicit constants dominating the density mode and the inverse mode:
//   C_B exp(-B(x0)) <= M   and   exp(B(x0)) Gamma(k/r)/r <= Mprime.
struct BoundConstants {
  double M = 0.0;
  double Mprime = 0.0;
};
BoundConstants bound_constants(const GGParams& p);

}  // namespace urnflow::gg
