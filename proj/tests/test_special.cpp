#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "urnflow/quadrature.hpp"
#include "urnflow/special.hpp"

using namespace urnflow;

TEST_CASE("regularized incomplete gamma against quadrature of the density") {
  // Independent oracle: integrate the gamma density directly; for a < 1 the
  // substitution u = t^a removes the endpoint singularity.
  for (double a : {0.25, 0.5, 1.0, 1.5, 2.0, 3.5, 6.0}) {
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 12.0}) {
      double oracle;
      if (a < 1.0) {
        oracle = quad::integrate(
                     [a](double u) { return std::exp(-std::pow(u, 1.0 / a)); },
                     0.0, std::pow(x, a), 1e-14) /
                 (a * std::exp(std::lgamma(a)));
      } else {
        oracle = quad::integrate(
            [a](double t) {
              return std::exp((a - 1.0) * std::log(t) - t - std::lgamma(a));
            },
            1e-14, x, 1e-14);
      }
      CHECK(special::reg_lower_gamma(a, x) == doctest::Approx(oracle).epsilon(1e-11));
    }
  }
}

TEST_CASE("incomplete gamma limits and errors") {
  CHECK(special::reg_lower_gamma(2.0, 0.0) == 0.0);
  CHECK(special::reg_upper_gamma(2.0, 0.0) == 1.0);
  CHECK(special::reg_lower_gamma(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK_THROWS_AS(special::reg_lower_gamma(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(special::reg_lower_gamma(1.0, -1.0), std::domain_error);
}

TEST_CASE("chi-square p-value basics") {
  // df = 2: the statistic is exponential with mean 2.
  CHECK(special::chi_square_pvalue(2.0, 2) == doctest::Approx(std::exp(-1.0)));
  CHECK(special::chi_square_pvalue(0.0, 5) == 1.0);
  CHECK_THROWS_AS(special::chi_square_pvalue(1.0, 0), std::domain_error);
}

TEST_CASE("chi-square goodness of fit accepts the true law") {
  std::vector<std::int64_t> counts = {250123, 249877, 250301, 249699};
  std::vector<double> probs = {0.25, 0.25, 0.25, 0.25};
  auto r = special::chi_square_gof(counts, probs);
  CHECK(r.df == 3);
  CHECK(r.pvalue > 0.05);
}

TEST_CASE("quadrature integrates polynomials and reaches tolerance") {
  double v = quad::integrate([](double x) { return x * x * x; }, 0.0, 2.0);
  CHECK(v == doctest::Approx(4.0).epsilon(1e-13));
  double w = quad::integrate([](double x) { return std::exp(-x); }, 0.0, 40.0);
  CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
  double kinked = quad::integrate_segmented(
      [](double x) { return std::fabs(x - 0.3); }, 0.0, 1.0, {0.3});
  CHECK(kinked == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-13));
}

TEST_CASE("dkw band formula") {
  CHECK(special::dkw_band(100000, 0.01) ==
        doctest::Approx(std::sqrt(std::log(200.0) / 200000.0)));
  CHECK_THROWS_AS(special::dkw_band(0, 0.01), std::domain_error);
}
