#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "urnflow/quadrature.hpp"
#include "urnflow/stein.hpp"
#include "urnflow/urn.hpp"

using namespace urnflow;

TEST_CASE("solution for the exponential potential against the closed form") {
  auto pot = gg::potential({1, 1});
  double threshold = 1.0;
  auto sol = stein::solve(
      pot, [threshold](double x) { return x <= threshold ? 1.0 : 0.0; },
      {threshold});
  double c = 1.0 - std::exp(-1.0);
  CHECK(sol.h_mean() == doctest::Approx(c).epsilon(1e-12));
  for (double x : {0.2, 0.5, 0.9}) {
    double expected = std::exp(x - 1.0) - std::exp(-1.0);
    CHECK(sol.f(x) == doctest::Approx(expected).epsilon(1e-10));
  }
  for (double x : {1.2, 2.0, 5.0})
    CHECK(sol.f(x) == doctest::Approx(c).epsilon(1e-10));
  for (double x : {0.3, 0.8, 1.4, 3.0})
    CHECK(sol.residual(x) < 1e-8);
}

TEST_CASE("constant test functions solve to zero") {
  auto pot = gg::potential({2, 2});
  auto sol = stein::solve(pot, [](double) { return 0.7; });
  for (double x : {0.1, 0.5, 1.0, 2.0}) CHECK(std::fabs(sol.f(x)) < 1e-10);
}

TEST_CASE("residual stays small for a smooth test function") {
  auto pot = gg::potential({2, 2});
  auto h = stein::smoothed_indicator(1.0, 0.1);
  auto sol = stein::solve(pot, h, {0.9, 1.0, 1.1});
  for (int i = 1; i <= 40; ++i) {
    double x = 0.08 * i;
    bool near_kink = false;
    for (double kk : {0.9, 1.0, 1.1})
      if (std::fabs(x - kk) < 1e-3) near_kink = true;
    if (near_kink) continue;
    CHECK(sol.residual(x) < 1e-8);
  }
}

TEST_CASE("kappa functions") {
  SUBCASE("closed form for the exponential potential") {
    auto pot = gg::potential({1, 1});
    for (double x : {0.2, 1.0, 2.5}) {
      auto [ka, kb] = stein::kappas(pot, x);
      CHECK(ka == doctest::Approx(std::exp(x) - 1.0).epsilon(1e-10));
      CHECK(kb == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("closed form through the distribution function") {
    auto pot = gg::potential({3, 2});
    gg::GGParams p{3, 2};
    for (double x : {0.3, 0.9, 1.8}) {
      auto [ka, kb] = stein::kappas(pot, x);
      double eb = std::exp(pot.B(x));
      CHECK(ka == doctest::Approx(eb * gg::cdf(p, x) / pot.normalizer).epsilon(1e-9));
      CHECK(kb ==
            doctest::Approx(eb * (1.0 - gg::cdf(p, x)) / pot.normalizer).epsilon(1e-9));
    }
  }
  SUBCASE("kappa vanishes toward the left endpoint") {
    auto pot = gg::potential({1, 1});
    CHECK(stein::kappas(pot, 1e-8).first < 1e-7);
  }
  SUBCASE("slope bound above the minimum") {
    auto pot = gg::potential({2, 2});
    for (double x = pot.x0 + 0.05; x < 3.0; x += 0.1) {
      auto [ka, kb] = stein::kappas(pot, x);
      CHECK(pot.Bprime(x) * kb <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("the two g forms agree") {
  auto pot = gg::potential({2, 2});
  double t = 1.0;
  auto sol = stein::solve(pot, [t](double x) { return x <= t ? 1.0 : 0.0; }, {t});
  SUBCASE("constant test function gives g identically zero") {
    auto zero = stein::solve(pot, [](double) { return 1.0; });
    for (double x : {0.2, 0.8, 1.5}) CHECK(std::fabs(zero.g(x)) < 1e-9);
  }
  SUBCASE("derivative and algebraic forms agree away from the jump") {
    for (int i = 1; i <= 1000; ++i) {
      double x = 0.003 * i;
      if (std::fabs(x - t) < 1e-3) continue;
      double a = sol.g(x), b = sol.g_derivative_form(x);
      CHECK(std::fabs(a - b) < 1e-6);
    }
  }
}

TEST_CASE("characterization: centered drift expectation vanishes") {
  RngStream rng(61, 0);
  for (int k : {1, 2, 3}) {
    for (int r : {1, 2}) {
      gg::GGParams prm{static_cast<double>(k), static_cast<double>(r)};
      auto pot = gg::potential(prm);
      for (int trial = 0; trial < 4; ++trial) {
        // random polynomial-times-bump with f(0) = 0
        double a = 0.2 + rng.uniform();
        double b = rng.uniform();
        double c = 0.5 + rng.uniform();
        double s = 0.4 + rng.uniform();
        auto f = [=](double x) {
          return x * (a + b * x) * std::exp(-(x - c) * (x - c) / (2 * s * s));
        };
        auto fp = [=](double x) {
          double bump = std::exp(-(x - c) * (x - c) / (2 * s * s));
          return ((a + 2 * b * x) - x * (a + b * x) * (x - c) / (s * s)) * bump;
        };
        double ev = quad::integrate(
            [&](double x) {
              return (fp(x) - pot.Bprime(x) * f(x)) * pot.normalizer *
                     std::exp(-pot.B(x));
            },
            1e-13, pot.tail_cutoff, 1e-12);
        CHECK(std::fabs(ev) < 1e-7);
      }
    }
  }
}

TEST_CASE("transfer identity between g and the equilibrium transform") {
  SUBCASE("analytic case f(x) = x: both sides equal k") {
    for (int k : {1, 2, 3}) {
      for (int r : {1, 2}) {
        // any positive law rescaled so E W^r = k/r
        auto base = urn::exact_pmf<double>({1, 1, 1, 12});
        double mr = power_moment(base, r);
        double scale = std::pow(mr * r / k, 1.0 / r);
        auto sides = stein::equilibrium_identity(
            k, r, base, scale, [](double x) { return x; },
            [](double) { return 1.0; });
        CHECK(sides.lhs == doctest::Approx(static_cast<double>(k)).epsilon(1e-8));
        CHECK(sides.rhs == doctest::Approx(static_cast<double>(k)).epsilon(1e-12));
        CHECK(sides.gap() < 1e-6);
      }
    }
  }
  SUBCASE("zero test function gives zero on both sides") {
    auto base = urn::exact_pmf<double>({1, 1, 1, 8});
    double scale = std::pow(power_moment(base, 2) * 2.0 / 1.0, 0.5);
    auto sides = stein::equilibrium_identity(
        1, 2, base, scale, [](double) { return 0.0; }, [](double) { return 0.0; });
    CHECK(sides.lhs == doctest::Approx(0.0));
    CHECK(sides.rhs == doctest::Approx(0.0));
  }
  SUBCASE("smooth bounded f with the continuous fixed-point law") {
    for (int k : {1, 2}) {
      for (int r : {1, 2}) {
        auto sides = stein::equilibrium_identity_gg(
            k, r, [](double x) { return 1.0 - std::exp(-x); },
            [](double x) { return std::exp(-x); });
        CHECK(sides.gap() < 1e-6);
      }
    }
  }
  SUBCASE("moment precondition is enforced") {
    auto base = urn::exact_pmf<double>({1, 1, 1, 8});
    CHECK_THROWS_AS(stein::equilibrium_identity(
                        2, 2, base, 1.0, [](double x) { return x; },
                        [](double) { return 1.0; }),
                    std::domain_error);
  }
}

TEST_CASE("explicit bound evaluation") {
  SUBCASE("worked value at k = r = 1") {
    CHECK(stein::thm5_bound(1, 1, 0.1, 1.0, 0.0) ==
          doctest::Approx(1.4).epsilon(1e-12));
  }
  SUBCASE("limits and monotonicity") {
    CHECK(stein::thm5_bound(2, 2, 1e-12, 0.9, 0.0) < 1e-10);
    double prev = 0.0;
    for (double beta : {0.05, 0.1, 0.2, 0.4, 0.8}) {
      double v = stein::thm5_bound(2, 2, beta, 0.9, 0.0);
      CHECK(v > prev);
      prev = v;
    }
    prev = 0.0;
    for (double exc : {0.0, 0.01, 0.05, 0.2}) {
      double v = stein::thm5_bound(2, 2, 0.1, 0.9, exc);
      CHECK(v >= prev);
      prev = v;
    }
    // the fractional-power branch is continuous against r = 2 in spirit:
    // both produce finite positive bounds
    CHECK(stein::thm5_bound(2, 1.5, 0.1, 0.9, 0.01) > 0.0);
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(stein::thm5_bound(1, 1, 0.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(stein::thm5_bound(1, 1, 1.5, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(stein::thm5_bound(1, 1, 0.1, 1.0, 2.0), std::domain_error);
  }
}

TEST_CASE("perturbation bound for fractional powers") {
  // |(x+t)^{r-1} f(x+t) - x^{r-1} f(x)| under the stated envelope, including
  // the concave branch 1 < r < 2.
  for (double r : {1.0, 1.5, 2.0, 3.0}) {
    for (double kk : {1.0, 2.0}) {
      gg::GGParams prm{kk, r};
      auto pot = gg::potential(prm);
      auto consts = gg::bound_constants(prm);
      double t0 = gg::quantile(prm, 0.5);
      auto sol = stein::solve(
          pot, [t0](double x) { return x <= t0 ? 1.0 : 0.0; }, {t0});
      double hnorm = std::max(gg::cdf(prm, t0), 1.0 - gg::cdf(prm, t0));
      for (double beta : {0.01, 0.1, 0.5}) {
        for (double x : {0.3, 0.7, 1.2, 2.0}) {
          for (double t : {beta, -beta, beta / 2}) {
            if (x + t <= 1e-6) continue;
            double lhs = std::fabs(std::pow(x + t, r - 1.0) * sol.f(x + t) -
                                   std::pow(x, r - 1.0) * sol.f(x));
            double rhs;
            if (r == 1.0) {
              rhs = 2.0 * beta;
            } else if (r >= 2.0) {
              rhs = beta * (r - 1.0) *
                        (1.0 + std::pow(2.0, r - 2.0) * std::pow(x, r - 1.0) +
                         std::pow(2.0, r - 2.0) * std::pow(beta, r - 1.0)) *
                        consts.Mprime +
                    2.0 * beta * std::pow(x, r - 1.0);
            } else {
              rhs = std::pow(beta, r - 1.0) * consts.Mprime +
                    2.0 * beta * std::pow(x, r - 1.0);
            }
            CHECK(lhs <= hnorm * rhs * (1.0 + 1e-6) + 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("gamma function sandwich bounds") {
  CHECK(stein::batir_max_ratio() <= 1.0 + 1e-12);
  CHECK(stein::wendel_max_ratio() <= 1.0 + 1e-12);
}

TEST_CASE("bound audit smoke test on two parameter pairs") {
  for (auto [k, r] : {std::pair{1, 2}, std::pair{2, 1}}) {
    auto report = stein::bound_audit(k, r);
    INFO("k=", k, " r=", r, " residual=", report.max_residual);
    for (const auto& e : report.entries) {
      INFO(e.family, " ratio=", e.max_ratio, " at=", e.at);
      CHECK(e.max_ratio <= 1.0 + 1e-6);
    }
    CHECK(report.max_residual < 1e-8);
    CHECK(report.ok());
  }
}
