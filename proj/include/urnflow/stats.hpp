#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urnflow/gg.hpp"
#include "urnflow/pmf.hpp"
#include "urnflow/urn.hpp"

namespace urnflow::stats {

// Exact Kolmogorov distance between the law of X / mu (X with the given
// pmf) and the GG target. The supremum over t is attained at support atoms,
// taking both the left limit and the value of the step CDF.
double dk_discrete_vs_gg(const Pmf& pmf, double mu, const gg::GGParams& target);

struct EmpiricalDk {
  double statistic = 0.0;
  double band = 0.0;  // DKW band at the requested confidence
};
EmpiricalDk dk_empirical(std::vector<double> samples, const gg::GGParams& target,
                         double alpha = 0.01);

struct RateRow {
  std::int64_t n = 0;
  double mu = 0.0;
  double dk = 0.0;
  std::string method = "exact";
  double stderr_ = 0.0;
};

struct RateReport {
  std::vector<RateRow> rows;
  double theory_slope = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> normalized;  // dk * n^{-theory_slope}
};

// Least-squares fit of log dk against log n; needs >= 4 rows spanning at
// least two decades.
RateReport fit_rate(std::vector<RateRow> rows, double theory_slope);

// min and max of the normalized distances (the empirical sandwich).
std::pair<double, double> sandwich(const RateReport& report);

std::vector<std::int64_t> default_grid(std::int64_t n_min = 32,
                                       std::int64_t n_max = 16384);

// Exact-law rate pipelines. Each row computes the exact pmf, the moment
// scaling toward the target, and the exact Kolmogorov distance; rows run in
// parallel.
RateReport urn_rate(int j, int l, const std::vector<std::int64_t>& grid);

enum class StatFamily {
  subtree_size,       // spanning size of root + k leaves; GG(2k, 2)
  walk_occupation,    // origin visits of the walk; GG(1, 2)
  bridge_occupation,  // origin visits of the bridge; GG(2, 2)
};
StatFamily stat_family_from_name(const std::string& name);
RateReport stat_rate(StatFamily family, int k,
                     const std::vector<std::int64_t>& grid);

// Law of Bi(N - subtract, 1/2) + add where N follows n_law.
template <class T>
BasicPmf<T> binomial_thin(const BasicPmf<T>& n_law, std::int64_t subtract,
                          std::int64_t add) {
  MixtureBuilder<T> mix;
  for (std::int64_t m = n_law.min_support(); m <= n_law.max_support(); ++m) {
    T weight = n_law.prob(m);
    if (weight == T(0)) continue;
    std::int64_t trials = m - subtract;
    if (trials < 0)
      throw std::domain_error("binomial_thin: negative trial count");
    BasicPmf<T> row;
    row.offset = add;
    row.mass.assign(static_cast<std::size_t>(trials) + 1, T(0));
    // C(trials, s) / 2^trials by the multiplicative recurrence.
    T coeff(1);
    T denom(1);
    for (std::int64_t t = 0; t < trials; ++t) denom *= T(2);
    for (std::int64_t s = 0; s <= trials; ++s) {
      row.mass[static_cast<std::size_t>(s)] = coeff / denom;
      if (s < trials) coeff = coeff * T(trials - s) / T(s + 1);
    }
    mix.add(weight, row);
  }
  return mix.done();
}

// Law of (N - Y | N - Y > 0) with Y geometric(1/2) on {0, 1, ...}
// independent of N.
template <class T>
BasicPmf<T> geometric_difference_positive(const BasicPmf<T>& n_law) {
  std::int64_t hi = n_law.max_support();
  BasicPmf<T> out;
  out.offset = 1;
  out.mass.assign(static_cast<std::size_t>(hi), T(0));
  T half(1);
  half /= T(2);
  for (std::int64_t m = n_law.min_support(); m <= hi; ++m) {
    T weight = n_law.prob(m);
    if (weight == T(0)) continue;
    T geo = half;  // P[Y = 0]
    for (std::int64_t x = m; x >= 1; --x) {
      out.mass[static_cast<std::size_t>(x - 1)] += weight * geo;
      geo *= half;
    }
  }
  out.normalize();
  out.trim();
  return out;
}

}  // namespace urnflow::stats
