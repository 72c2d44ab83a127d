#pragma once

#include <cstdint>
#include <vector>

namespace urnflow::special {

// Regularized lower incomplete gamma P(a, x). Series for x < a + 1,
// continued fraction otherwise; absolute error well below 1e-12 over the
// parameter ranges used here.
double reg_lower_gamma(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double reg_upper_gamma(double a, double x);

// Gamma(num) / Gamma(den) evaluated in log space.
double gamma_ratio(double num, double den);

// Upper-tail p-value of a chi-square statistic.
double chi_square_pvalue(double stat, int df);

struct ChiSquareResult {
  double stat = 0.0;
  int df = 0;
  double pvalue = 1.0;
};

// Goodness-of-fit test of observed counts against exact cell probabilities.
// Cells with expected count below `min_expected` are pooled left-to-right.
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& counts,
                               const std::vector<double>& probs,
                               double min_expected = 5.0);

// One-sided Dvoretzky-Kiefer-Wolfowitz band at confidence 1 - alpha.
double dkw_band(std::size_t samples, double alpha);

}  // namespace urnflow::special
