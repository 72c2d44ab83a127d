#pragma once

#include <functional>
#include <string>
#include <vector>

#include "urnflow/gg.hpp"
#include "urnflow/pmf.hpp"

namespace urnflow::stein {

using RealFn = std::function<double(double)>;

// Tent test function of height eps peaked at s:
//   h(x) = measure of u in (0, eps] with s < x + u <= s + eps.
RealFn smoothed_indicator(double s, double eps);

// Solution of f'(x) - B'(x) f(x) = h(x) - E h(Z) for the density
// normalizer * exp(-B). Evaluation integrates the centered test function
// against exp(-B), from the left of the domain below the potential minimum
// and from the right tail above it (which avoids cancellation for large x).
class SteinSolution {
 public:
  SteinSolution(const gg::Potential& pot, RealFn h,
                std::vector<double> breakpoints = {});

  double h_mean() const { return h_mean_; }
  double h_tilde(double x) const { return h_(x) - h_mean_; }

  double f(double x) const;
  double f_prime(double x) const;  // central differences, step 1e-5 max(1,x)
  double f_prime_step(double x, double step) const;
  double residual(double x) const; // |f' - B' f - h_tilde|, flat 1e-5 step

  // g = h_tilde + (B' + (k-1)/x) f; for the power potential this equals
  // h_tilde + r x^(r-1) f. Defined through the potential's (k, r).
  double g(double x) const;
  // The derivative form f' + (k-1)/x f, with the k = 1 singularity taken
  // as zero.
  double g_derivative_form(double x) const;

  const gg::Potential& potential() const { return *pot_; }

 private:
  double weighted_integral(double lo, double hi) const;

  const gg::Potential* pot_;
  RealFn h_;
  double h_mean_;
  std::vector<double> breaks_;
};

SteinSolution solve(const gg::Potential& pot, RealFn h,
                    std::vector<double> breakpoints = {});

// kappa_a(x) = e^{B(x)} int_a^x e^{-B}, kappa_b(x) = e^{B(x)} int_x^b e^{-B},
// both by quadrature.
std::pair<double, double> kappas(const gg::Potential& pot, double x);

// Explicit Kolmogorov bound from the coupling exceedance:
// for r = 1 or r >= 2,
//   beta [10 M + 2 r (r-1)(1 + 2^{r-2}(E W^{r-1} + beta^{r-1})) M' + 4 r E W^{r-1}]
//     + 4 (2 + (r+k-1) M') P[|W - W*| > beta],
// and for 1 < r < 2 the middle term is replaced by 2 r beta^{r-1} M'.
double thm5_bound(double k, double r, double beta, double ew_r_minus_1,
                  double exceedance);

// Both sides of the transfer identity E g(W*) = r E W^{r-1} f(W) for a test
// function with f(0) = 0 and a discrete base law scaled so E W^r = k/r.
struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap() const;
};
IdentitySides equilibrium_identity(int k, int r, const Pmf& w, double scale,
                                   const RealFn& f, const RealFn& fprime);
// Continuous version with W distributed as the GG(k, r) target itself.
IdentitySides equilibrium_identity_gg(int k, int r, const RealFn& f,
                                      const RealFn& fprime);

// One numerically audited inequality family: the largest observed ratio of
// the bounded side to the bounding side (<= 1 up to tolerance when the
// inequality holds), and where it occurred.
struct AuditEntry {
  std::string family;
  double max_ratio = 0.0;
  double at = 0.0;
};

struct AuditReport {
  int k = 0, r = 0;
  double max_residual = 0.0;
  double form_agreement = 0.0;  // max |g_(34) - g_(35)| over the grid
  std::vector<AuditEntry> entries;
  bool ok(double tol = 1e-6) const;
};

// Grid audit of every inequality used by the Kolmogorov bound for GG(k, r):
// the non-uniform and uniform solution bounds, the norm bound on g, the
// perturbation bound, the kappa slope bounds, the mode and inverse-mode
// constants, the gamma-function sandwich bounds, and the smoothing and
// concentration inequalities. Test functions are indicators at 50 quantile
// thresholds and 50 tent functions.
AuditReport bound_audit(int k, int r);

// Gamma-function bounds on their own grids (x = 0.1..10, s in [0, 1]).
double batir_max_ratio();
double wendel_max_ratio();

}  // namespace urnflow::stein
