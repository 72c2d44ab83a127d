#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "urnflow/gg.hpp"
#include "urnflow/quadrature.hpp"
#include "urnflow/rng.hpp"
#include "urnflow/special.hpp"
#include "urnflow/stats.hpp"

using namespace urnflow;

TEST_CASE("density closed-form points") {
  CHECK(gg::density({1, 1}, 2.0) == doctest::Approx(std::exp(-2.0)));
  // limit toward the left endpoint for the half-normal case: 2 / sqrt(pi)
  CHECK(gg::density({1, 2}, 1e-12) ==
        doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-9));
  CHECK(gg::density({2, 2}, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK_THROWS_AS(gg::density({1, 1}, 0.0), std::domain_error);
  CHECK_THROWS_AS(gg::density({1, 1}, -1.0), std::domain_error);
  CHECK_THROWS_AS(gg::density({1, 1}, std::nan("")), std::domain_error);
}

TEST_CASE("cdf closed form and limits") {
  for (double t : {0.1, 0.7, 1.3, 2.5})
    CHECK(gg::cdf({2, 2}, t) == doctest::Approx(1.0 - std::exp(-t * t)).epsilon(1e-12));
  CHECK(gg::cdf({1, 1}, 0.0) == 0.0);
  CHECK(gg::cdf({1, 2}, 1e9) == doctest::Approx(1.0));
  // monotone nondecreasing
  double prev = 0.0;
  for (double t = 0.05; t < 6.0; t += 0.05) {
    double c = gg::cdf({3, 2}, t);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("moments") {
  CHECK(gg::moment({3, 2}, 2.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(gg::moment({1, 1}, 0.0) == doctest::Approx(1.0));
  CHECK(gg::moment({2, 2}, 1.0) == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(gg::moment({2, 2}, -2.0), std::domain_error);
}

TEST_CASE("normalization and moment consistency by quadrature") {
  for (int k = 1; k <= 6; ++k) {
    for (int r = 1; r <= 6; ++r) {
      gg::GGParams p{static_cast<double>(k), static_cast<double>(r)};
      auto pot = gg::potential(p);
      double total = quad::integrate(
          [&](double x) { return gg::density(p, x); }, 1e-13, pot.tail_cutoff, 1e-12);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  for (int l = 1; l <= 3; ++l) {
    gg::GGParams p{2, 3};
    auto pot = gg::potential(p);
    double q = quad::integrate(
        [&](double x) { return std::pow(x, l) * gg::density(p, x); }, 1e-13,
        pot.tail_cutoff, 1e-12);
    CHECK(gg::moment(p, l) == doctest::Approx(q).epsilon(1e-6));
  }
}

TEST_CASE("power identity: cdf equals the gamma law of x^r") {
  RngStream rng(99, 0);
  for (int i = 0; i < 100; ++i) {
    double k = 0.5 + 5.0 * rng.uniform();
    double r = 0.5 + 5.0 * rng.uniform();
    double x = 0.05 + 3.0 * rng.uniform();
    double via_gamma = special::reg_lower_gamma(k / r, std::pow(x, r));
    CHECK(gg::cdf({k, r}, x) == doctest::Approx(via_gamma).epsilon(1e-12));
  }
}

TEST_CASE("sampling moments and self-consistency") {
  RngStream rng(7, 0);
  SUBCASE("unit exponential mean") {
    const int m = 1000000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += gg::sample({1, 1}, rng);
    // 3 sigma / sqrt(m) band around 1
    CHECK(std::fabs(acc / m - 1.0) < 3.0 / std::sqrt(static_cast<double>(m)));
  }
  SUBCASE("E Z^2 = 1 for the Rayleigh case") {
    const int m = 1000000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      double z = gg::sample({2, 2}, rng);
      acc += z * z;
    }
    CHECK(std::fabs(acc / m - 1.0) < 3.0 / std::sqrt(static_cast<double>(m)));
  }
  SUBCASE("Kolmogorov statistic below the DKW band") {
    const std::size_t m = 100000;
    std::vector<double> xs(m);
    for (auto& x : xs) x = gg::sample({3, 3}, rng);
    auto dk = stats::dk_empirical(xs, {3, 3}, 0.01);
    CHECK(dk.statistic < dk.band);
  }
}

TEST_CASE("potential fields") {
  SUBCASE("exponential case") {
    auto pot = gg::potential({1, 1});
    CHECK(pot.x0 == 0.0);
    CHECK(pot.mode_height == doctest::Approx(1.0));
    CHECK(pot.normalizer == doctest::Approx(1.0));
  }
  SUBCASE("Rayleigh case") {
    auto pot = gg::potential({2, 2});
    CHECK(pot.x0 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(pot.mode_height ==
          doctest::Approx(2.0 * (1.0 / std::sqrt(2.0)) * std::exp(-0.5)).epsilon(1e-14));
    // mode height equals the density at the minimum of the potential
    CHECK(pot.mode_height == doctest::Approx(gg::density({2, 2}, pot.x0)).epsilon(1e-13));
  }
  SUBCASE("density integrates to one for the potential normalizer") {
    auto pot = gg::potential({3, 2});
    double total = quad::integrate(
        [&](double x) { return pot.normalizer * std::exp(-pot.B(x)); }, 1e-13,
        pot.tail_cutoff, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(gg::potential({0.5, 1}), std::domain_error);
  CHECK_THROWS_AS(gg::potential({1, 0.5}), std::domain_error);
}

TEST_CASE("bound constants") {
  auto c11 = gg::bound_constants({1, 1});
  CHECK(c11.M == doctest::Approx(1.0).epsilon(1e-14));
  // the constants dominate their exact counterparts on a (k, r) grid
  for (int k = 1; k <= 10; ++k) {
    for (int r = 1; r <= 10; ++r) {
      gg::GGParams p{static_cast<double>(k), static_cast<double>(r)};
      auto pot = gg::potential(p);
      auto c = gg::bound_constants(p);
      CHECK(pot.mode_height <= c.M + 1e-12);
      double inverse_mode = std::exp(pot.B(pot.x0)) / pot.normalizer;
      CHECK(inverse_mode <= c.Mprime + 1e-12);
    }
  }
}

TEST_CASE("quantile inverts the cdf") {
  gg::GGParams p{2, 3};
  for (double q : {0.01, 0.2, 0.5, 0.9, 0.999})
    CHECK(gg::cdf(p, gg::quantile(p, q)) == doctest::Approx(q).epsilon(1e-10));
}
