#include "urnflow/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace urnflow::special {

namespace {

constexpr int kMaxIter = 600;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// P(a, x) by the standard power series; converges quickly for x < a + 1.
double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by continued fraction, modified Lentz evaluation.
double upper_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

void check_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a) || std::isnan(x) || x < 0.0)
    throw std::domain_error("incomplete gamma: need a > 0 and x >= 0");
}

}  // namespace

double reg_lower_gamma(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? lower_series(a, x) : 1.0 - upper_cf(a, x);
}

double reg_upper_gamma(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - lower_series(a, x) : upper_cf(a, x);
}

double gamma_ratio(double num, double den) {
  return std::exp(std::lgamma(num) - std::lgamma(den));
}

double chi_square_pvalue(double stat, int df) {
  if (df <= 0) throw std::domain_error("chi_square_pvalue: df must be positive");
  if (stat <= 0.0) return 1.0;
  return reg_upper_gamma(0.5 * df, 0.5 * stat);
}

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& counts,
                               const std::vector<double>& probs,
                               double min_expected) {
  if (counts.size() != probs.size() || counts.empty())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  std::int64_t total = 0;
  for (auto c : counts) total += c;

  // Pool adjacent cells until each pooled cell has enough expected mass.
  std::vector<double> obs, exp_;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    o_acc += static_cast<double>(counts[i]);
    e_acc += probs[i] * static_cast<double>(total);
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp_.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_.empty()) {
      obs.push_back(o_acc);
      exp_.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp_.back() += e_acc;
    }
  }

  ChiSquareResult r;
  r.df = static_cast<int>(obs.size()) - 1;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    double diff = obs[i] - exp_[i];
    r.stat += diff * diff / exp_[i];
  }
  r.pvalue = r.df > 0 ? chi_square_pvalue(r.stat, r.df) : 1.0;
  return r;
}

double dkw_band(std::size_t samples, double alpha) {
  if (samples == 0) throw std::domain_error("dkw_band: empty sample");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(samples)));
}

}  // namespace urnflow::special
