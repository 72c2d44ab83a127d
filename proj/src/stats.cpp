#include "urnflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "urnflow/parallel.hpp"
#include "urnflow/special.hpp"

namespace urnflow::stats {

double dk_discrete_vs_gg(const Pmf& pmf, double mu, const gg::GGParams& target) {
  if (!(mu > 0.0)) throw std::domain_error("dk_discrete_vs_gg: mu > 0 required");
  double cum = 0.0, best = 0.0;
  for (std::int64_t x = pmf.min_support(); x <= pmf.max_support(); ++x) {
    double g = gg::cdf(target, static_cast<double>(x) / mu);
    best = std::max(best, std::fabs(cum - g));  // left limit of the step CDF
    cum += pmf.prob(x);
    best = std::max(best, std::fabs(cum - g));
  }
  return best;
}

EmpiricalDk dk_empirical(std::vector<double> samples, const gg::GGParams& target,
                         double alpha) {
  if (samples.empty()) throw std::domain_error("dk_empirical: empty sample");
  std::sort(samples.begin(), samples.end());
  double m = static_cast<double>(samples.size());
  EmpiricalDk out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double g = gg::cdf(target, samples[i]);
    out.statistic = std::max(out.statistic, std::fabs((i + 1.0) / m - g));
    out.statistic = std::max(out.statistic, std::fabs(g - static_cast<double>(i) / m));
  }
  out.band = special::dkw_band(samples.size(), alpha);
  return out;
}

RateReport fit_rate(std::vector<RateRow> rows, double theory_slope) {
  if (rows.size() < 4)
    throw std::domain_error("fit_rate: need at least four rows");
  std::sort(rows.begin(), rows.end(),
            [](const RateRow& a, const RateRow& b) { return a.n < b.n; });
  double span = static_cast<double>(rows.back().n) / static_cast<double>(rows.front().n);
  if (span < 100.0)
    throw std::domain_error("fit_rate: grid must span at least two decades");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double count = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    double x = std::log(static_cast<double>(r.n));
    double y = std::log(r.dk);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateReport rep;
  rep.theory_slope = theory_slope;
  rep.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  rep.intercept = (sy - rep.slope * sx) / count;
  for (const auto& r : rows)
    rep.normalized.push_back(r.dk *
                             std::pow(static_cast<double>(r.n), -theory_slope));
  rep.rows = std::move(rows);
  return rep;
}

std::pair<double, double> sandwich(const RateReport& report) {
  if (report.normalized.empty())
    throw std::domain_error("sandwich: empty report");
  auto [lo, hi] =
      std::minmax_element(report.normalized.begin(), report.normalized.end());
  return {*lo, *hi};
}

std::vector<std::int64_t> default_grid(std::int64_t n_min, std::int64_t n_max) {
  std::vector<std::int64_t> grid;
  for (std::int64_t n = n_min; n <= n_max; n *= 2) grid.push_back(n);
  return grid;
}

RateReport urn_rate(int j, int l, const std::vector<std::int64_t>& grid) {
  if (j < 1 || l < 1) throw std::domain_error("urn_rate: j, l >= 1 required");
  gg::GGParams target{static_cast<double>(j), static_cast<double>(l + 1)};
  std::vector<RateRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    std::int64_t n = grid[i];
    urn::UrnSpec spec{1, j, l, n};
    Pmf pmf = urn::exact_pmf<double>(spec);
    double mu = urn::mu_n(j, l, n);
    rows[i] = {n, mu, dk_discrete_vs_gg(pmf, mu, target), "exact", 0.0};
  });
  return fit_rate(std::move(rows),
                  -static_cast<double>(l) / (l + 1.0));
}

StatFamily stat_family_from_name(const std::string& name) {
  if (name == "subtree" || name == "ub") return StatFamily::subtree_size;
  if (name == "walk" || name == "ln") return StatFamily::walk_occupation;
  if (name == "bridge" || name == "lbn") return StatFamily::bridge_occupation;
  throw std::invalid_argument("unknown statistic family: " + name);
}

RateReport stat_rate(StatFamily family, int k,
                     const std::vector<std::int64_t>& grid) {
  gg::GGParams target;
  std::vector<RateRow> rows(grid.size());
  switch (family) {
    case StatFamily::subtree_size: {
      if (k < 1) throw std::domain_error("stat_rate: k >= 1 required");
      // Spanning size of the root and k leaves in a tree with n leaves has
      // the immigration-urn law started from 2k-1 whites, run n-k draws.
      target = {2.0 * k, 2.0};
      parallel_for(grid.size(), [&](std::size_t i) {
        std::int64_t n = grid[i];
        urn::UrnSpec spec{0, 2 * k - 1, 1, n - k};
        Pmf pmf = urn::exact_pmf<double>(spec);
        double mu = urn::mu_for_target(spec, target.k, target.r);
        rows[i] = {n, mu, dk_discrete_vs_gg(pmf, mu, target), "exact", 0.0};
      });
      break;
    }
    case StatFamily::walk_occupation: {
      // Origin visits of a walk of length 2n (or 2n+1).
      target = {1.0, 2.0};
      parallel_for(grid.size(), [&](std::size_t i) {
        std::int64_t n = grid[i];
        urn::UrnSpec spec{1, 1, 1, n};
        Pmf pmf = urn::exact_pmf<double>(spec);
        double mu = urn::mu_for_target(spec, target.k, target.r);
        rows[i] = {n, mu, dk_discrete_vs_gg(pmf, mu, target), "exact", 0.0};
      });
      break;
    }
    case StatFamily::bridge_occupation: {
      // Origin visits of a bridge of length 2n.
      target = {2.0, 2.0};
      parallel_for(grid.size(), [&](std::size_t i) {
        std::int64_t n = grid[i];
        urn::UrnSpec spec{0, 1, 1, n};
        Pmf pmf = urn::exact_pmf<double>(spec);
        double mu = urn::mu_for_target(spec, target.k, target.r);
        rows[i] = {n, mu, dk_discrete_vs_gg(pmf, mu, target), "exact", 0.0};
      });
      break;
    }
  }
  return fit_rate(std::move(rows), -0.5);
}

}  // namespace urnflow::stats
