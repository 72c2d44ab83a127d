#include "urnflow/gg.hpp"

#include <cmath>
#include <stdexcept>

#include "urnflow/special.hpp"

namespace urnflow::gg {

namespace {

void check_params(const GGParams& p) {
  if (!(p.k > 0.0) || !(p.r > 0.0) || !std::isfinite(p.k) || !std::isfinite(p.r))
    throw std::domain_error("GGParams: need k > 0 and r > 0");
}

// x - x log x, with the value 0 at x = 0.
double psi(double x) {
  return x > 0.0 ? x - x * std::log(x) : 0.0;
}

}  // namespace

double density(const GGParams& p, double x) {
  check_params(p);
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("gg::density: need finite x > 0");
  double log_pdf = std::log(p.r) + (p.k - 1.0) * std::log(x) -
                   std::pow(x, p.r) - std::lgamma(p.k / p.r);
  return std::exp(log_pdf);
}

double cdf(const GGParams& p, double x) {
  check_params(p);
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return special::reg_lower_gamma(p.k / p.r, std::pow(x, p.r));
}

double moment(const GGParams& p, double l) {
  check_params(p);
  if (!(l > -p.k)) throw std::domain_error("gg::moment: need l > -k");
  return special::gamma_ratio((p.k + l) / p.r, p.k / p.r);
}

double gamma_sample(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw std::domain_error("gamma_sample: shape must be positive");
  if (shape < 1.0) {
    double boost = std::pow(rng.uniform(), 1.0 / shape);
    return gamma_sample(shape + 1.0, rng) * boost;
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = rng.normal();
    double t = 1.0 + c * z;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample(const GGParams& p, RngStream& rng) {
  check_params(p);
  return std::pow(gamma_sample(p.k / p.r, rng), 1.0 / p.r);
}

double quantile(const GGParams& p, double prob) {
  check_params(p);
  if (!(prob >= 0.0 && prob < 1.0))
    throw std::domain_error("gg::quantile: prob in [0,1) required");
  if (prob == 0.0) return 0.0;
  double hi = 1.0;
  while (cdf(p, hi) < prob) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (cdf(p, mid) < prob)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

Potential potential(const GGParams& p) {
  check_params(p);
  if (p.k < 1.0 || p.r < 1.0)
    throw std::domain_error("gg::potential: convexity needs k >= 1 and r >= 1");

  double k = p.k, r = p.r;
  Potential pot;
  pot.k = k;
  pot.r = r;
  pot.B = [k, r](double x) {
    double power = std::pow(x, r);
    return k > 1.0 ? power - (k - 1.0) * std::log(x) : power;
  };
  pot.Bprime = [k, r](double x) {
    return r * std::pow(x, r - 1.0) - (k > 1.0 ? (k - 1.0) / x : 0.0);
  };
  pot.x0 = k > 1.0 ? std::pow((k - 1.0) / r, 1.0 / r) : 0.0;
  pot.normalizer = r * std::exp(-std::lgamma(k / r));
  pot.mode_height = pot.normalizer * std::exp(-psi((k - 1.0) / r));

  double cut = pot.x0 + 1.0;
  while (special::reg_upper_gamma(k / r, std::pow(cut, r)) > 1e-16) cut *= 1.5;
  pot.tail_cutoff = cut;
  return pot;
}

BoundConstants bound_constants(const GGParams& p) {
  check_params(p);
  if (p.k < 1.0 || p.r < 1.0)
    throw std::domain_error("gg::bound_constants: need k >= 1 and r >= 1");
  double k = p.k, r = p.r;
  double m = (k - 1.0) / r;

  BoundConstants c;
  c.M = std::pow(k, 1.0 - 1.0 / r) * std::pow(r, 1.0 / r) *
        std::exp(-4.0 / 9.0) * std::exp(1.0 / (6.0 * (m + 3.0 / 8.0))) /
        std::sqrt(2.0 * m + 1.0);
  c.Mprime = std::sqrt(2.0 * M_PI) * std::exp(-1.0 / (6.0 * (m + 3.0 / 8.0))) *
             std::sqrt(m + 0.5) * std::pow(m + 1.0, 1.0 / r) / k;
  return c;
}

}  // namespace urnflow::gg
