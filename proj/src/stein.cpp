#include "urnflow/stein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "urnflow/quadrature.hpp"
#include "urnflow/special.hpp"

namespace urnflow::stein {

RealFn smoothed_indicator(double s, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("smoothed_indicator: eps > 0 required");
  return [s, eps](double x) {
    double lo = std::max(0.0, s - x);
    double hi = std::min(eps, s + eps - x);
    return std::max(0.0, hi - lo);
  };
}

SteinSolution::SteinSolution(const gg::Potential& pot, RealFn h,
                             std::vector<double> breakpoints)
    : pot_(&pot), h_(std::move(h)), h_mean_(0.0), breaks_(std::move(breakpoints)) {
  const auto& B = pot_->B;
  double c = pot_->normalizer;
  h_mean_ = quad::integrate_segmented(
      [this, &B, c](double z) { return h_(z) * c * std::exp(-B(z)); }, pot_->a,
      pot_->tail_cutoff, breaks_, 1e-13);
}

double SteinSolution::weighted_integral(double lo, double hi) const {
  const auto& B = pot_->B;
  return quad::integrate_segmented(
      [this, &B](double z) { return h_tilde(z) * std::exp(-B(z)); }, lo, hi,
      breaks_, 1e-13);
}

double SteinSolution::f(double x) const {
  if (!(x > pot_->a) || !std::isfinite(x))
    throw std::domain_error("SteinSolution::f: x inside the domain required");
  if (x <= pot_->x0)
    return std::exp(pot_->B(x)) * weighted_integral(pot_->a, x);
  return -std::exp(pot_->B(x)) * weighted_integral(x, pot_->tail_cutoff);
}

double SteinSolution::f_prime(double x) const {
  return f_prime_step(x, 1e-5 * std::max(1.0, x));
}

double SteinSolution::f_prime_step(double x, double step) const {
  // Anchor both evaluations on one shared integral so its quadrature error
  // cancels against the B' f term of the residual.
  if (x <= pot_->x0) {
    double base = weighted_integral(pot_->a, x);
    double up = weighted_integral(x, x + step);
    double down = weighted_integral(x - step, x);
    double fp = std::exp(pot_->B(x + step)) * (base + up);
    double fm = std::exp(pot_->B(x - step)) * (base - down);
    return (fp - fm) / (2.0 * step);
  }
  double base = weighted_integral(x, pot_->tail_cutoff);
  double up = weighted_integral(x, x + step);
  double down = weighted_integral(x - step, x);
  double fp = -std::exp(pot_->B(x + step)) * (base - up);
  double fm = -std::exp(pot_->B(x - step)) * (base + down);
  return (fp - fm) / (2.0 * step);
}

double SteinSolution::residual(double x) const {
  // A flat step keeps the truncation error well under the 1e-8 target even
  // where B' is large.
  return std::fabs(f_prime_step(x, 1e-5) - pot_->Bprime(x) * f(x) - h_tilde(x));
}

double SteinSolution::g(double x) const {
  double k = pot_->k;
  double extra = k > 1.0 ? (k - 1.0) / x : 0.0;
  return h_tilde(x) + (pot_->Bprime(x) + extra) * f(x);
}

double SteinSolution::g_derivative_form(double x) const {
  double k = pot_->k;
  double extra = k > 1.0 ? (k - 1.0) / x * f(x) : 0.0;
  return f_prime(x) + extra;
}

SteinSolution solve(const gg::Potential& pot, RealFn h,
                    std::vector<double> breakpoints) {
  return SteinSolution(pot, std::move(h), std::move(breakpoints));
}

std::pair<double, double> kappas(const gg::Potential& pot, double x) {
  if (!(x > pot.a))
    throw std::domain_error("kappas: x inside the domain required");
  const auto& B = pot.B;
  double eb = std::exp(B(x));
  double lower =
      quad::integrate([&B](double z) { return std::exp(-B(z)); }, pot.a, x, 1e-13);
  double upper = quad::integrate([&B](double z) { return std::exp(-B(z)); }, x,
                                 pot.tail_cutoff, 1e-13);
  return {eb * lower, eb * upper};
}

double thm5_bound(double k, double r, double beta, double ew_r_minus_1,
                  double exceedance) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::domain_error("thm5_bound: beta in (0, 1] required");
  if (k < 1.0 || r < 1.0)
    throw std::domain_error("thm5_bound: k, r >= 1 required");
  if (!(exceedance >= 0.0 && exceedance <= 1.0))
    throw std::domain_error("thm5_bound: exceedance must be a probability");

  auto c = gg::bound_constants({k, r});
  double tail = 4.0 * (2.0 + (r + k - 1.0) * c.Mprime) * exceedance;
  if (r == 1.0 || r >= 2.0) {
    double middle = 2.0 * r * (r - 1.0) *
                    (1.0 + std::pow(2.0, r - 2.0) *
                               (ew_r_minus_1 + std::pow(beta, r - 1.0))) *
                    c.Mprime;
    return beta * (10.0 * c.M + middle + 4.0 * r * ew_r_minus_1) + tail;
  }
  return beta * (10.0 * c.M + 4.0 * r * ew_r_minus_1) +
         2.0 * r * std::pow(beta, r - 1.0) * c.Mprime + tail;
}

double IdentitySides::gap() const {
  double denom = std::max(std::fabs(lhs), std::fabs(rhs));
  if (denom < 1e-9) return std::fabs(lhs - rhs);
  return std::fabs(lhs - rhs) / denom;
}

IdentitySides equilibrium_identity(int k, int r, const Pmf& w, double scale,
                                   const RealFn& f, const RealFn& fprime) {
  if (k < 1 || r < 1)
    throw std::domain_error("equilibrium_identity: k, r >= 1 required");
  if (!(scale > 0.0)) throw std::domain_error("equilibrium_identity: scale > 0");

  double moment_r = 0.0;
  for (std::int64_t x = w.min_support(); x <= w.max_support(); ++x)
    moment_r += w.prob(x) * std::pow(static_cast<double>(x) / scale, r);
  if (std::fabs(moment_r - static_cast<double>(k) / r) > 1e-9)
    throw std::domain_error("equilibrium_identity: need E W^r = k/r (rescale)");

  auto g = [&](double x) {
    double extra = k > 1 ? (k - 1.0) / x * f(x) : 0.0;
    return fprime(x) + extra;
  };

  // Power-biased weights over the scaled atoms.
  IdentitySides sides;
  double bias_total = 0.0;
  for (std::int64_t x = w.min_support(); x <= w.max_support(); ++x) {
    double y = static_cast<double>(x) / scale;
    double p = w.prob(x);
    if (p == 0.0 || y <= 0.0) continue;
    bias_total += p * std::pow(y, r);
    sides.rhs += r * p * std::pow(y, r - 1.0) * f(y);
  }
  for (std::int64_t x = w.min_support(); x <= w.max_support(); ++x) {
    double y = static_cast<double>(x) / scale;
    double p = w.prob(x);
    if (p == 0.0 || y <= 0.0) continue;
    double q = p * std::pow(y, r) / bias_total;
    // E g(V y) with V ~ Beta(k, 1).
    double atom = quad::integrate(
        [&](double u) { return g(u * y) * k * std::pow(u, k - 1.0); }, 1e-12,
        1.0, 1e-11);
    sides.lhs += q * atom;
  }
  return sides;
}

IdentitySides equilibrium_identity_gg(int k, int r, const RealFn& f,
                                      const RealFn& fprime) {
  gg::GGParams prm{static_cast<double>(k), static_cast<double>(r)};
  gg::Potential pot = gg::potential(prm);
  auto g = [&](double x) {
    double extra = k > 1 ? (k - 1.0) / x * f(x) : 0.0;
    return fprime(x) + extra;
  };
  IdentitySides sides;
  sides.lhs = quad::integrate(
      [&](double z) { return g(z) * gg::density(prm, z); }, 1e-12,
      pot.tail_cutoff, 1e-11);
  sides.rhs = quad::integrate(
      [&](double z) {
        return r * std::pow(z, r - 1.0) * f(z) * gg::density(prm, z);
      },
      1e-12, pot.tail_cutoff, 1e-11);
  return sides;
}

bool AuditReport::ok(double tol) const {
  if (max_residual >= 1e-8) return false;
  for (const auto& e : entries)
    if (!(e.max_ratio <= 1.0 + tol)) return false;
  return true;
}

double batir_max_ratio() {
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    double x = 0.1 * i;
    double core = std::pow(x, x) * std::exp(-x) * std::sqrt(x + 0.5) *
                  std::exp(-1.0 / (6.0 * (x + 3.0 / 8.0)));
    double lower = std::sqrt(2.0) * std::exp(4.0 / 9.0) * core;
    double upper = std::sqrt(2.0 * M_PI) * core;
    double gamma = std::tgamma(x + 1.0);
    worst = std::max(worst, lower / gamma);
    worst = std::max(worst, gamma / upper);
  }
  return worst;
}

double wendel_max_ratio() {
  double worst = 0.0;
  const double svals[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int i = 1; i <= 100; ++i) {
    double x = 0.1 * i;
    for (double s : svals) {
      double middle =
          std::exp(std::lgamma(x + s) - s * std::log(x) - std::lgamma(x));
      double lower = std::pow(x / (x + s), 1.0 - s);
      worst = std::max(worst, lower / middle);
      worst = std::max(worst, middle / 1.0);
    }
  }
  return worst;
}

namespace {

// Precomputed panel decomposition of (0, cutoff] with exp(-B) cached at the
// Kronrod nodes, so integrating many test functions against the target
// density only costs the test-function evaluations.
struct GridEngine {
  gg::GGParams prm;
  gg::Potential pot;
  std::vector<double> points;         // panel boundaries, points[0] = 0
  std::vector<double> node_x;         // 15 per panel
  std::vector<double> node_w;         // Kronrod weight * exp(-B) * half-width
  std::vector<std::size_t> eval_idx;  // indices of points used as eval grid
  std::vector<double> expB;           // e^{B} at eval points
  std::vector<double> bprime;         // B' at eval points
  std::vector<double> kappa_a, kappa_b;

  explicit GridEngine(int k, int r, const std::vector<double>& extra_points) {
    prm = {static_cast<double>(k), static_cast<double>(r)};
    pot = gg::potential(prm);

    std::vector<double> pts{0.0};
    const int kGrid = 2000;
    for (int i = 1; i <= kGrid; ++i)
      pts.push_back(gg::quantile(prm, static_cast<double>(i) / (kGrid + 1)));
    for (double e : extra_points)
      if (e > 0.0 && e < pot.tail_cutoff) pts.push_back(e);
    if (pot.x0 > 0.0) pts.push_back(pot.x0);
    // Geometric refinement toward the tail keeps single-panel errors small.
    double hi = pts.back();
    double top = gg::quantile(prm, 1.0 - 1e-12);
    for (int i = 1; i <= 40; ++i)
      pts.push_back(hi + (top - hi) * i / 40.0);
    pts.push_back(pot.tail_cutoff);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
              pts.end());
    points = std::move(pts);

    std::size_t panels = points.size() - 1;
    node_x.resize(panels * 15);
    node_w.resize(panels * 15);
    for (std::size_t p = 0; p < panels; ++p) {
      double mid = 0.5 * (points[p] + points[p + 1]);
      double half = 0.5 * (points[p + 1] - points[p]);
      for (int j = 0; j < 15; ++j) {
        double x = mid + half * quad::kKronrodNodes[j];
        node_x[p * 15 + j] = x;
        node_w[p * 15 + j] =
            quad::kKronrodWeights[j] * half * (x > 0.0 ? std::exp(-pot.B(x)) : 0.0);
      }
    }

    double lo_q = gg::quantile(prm, 1.0 / (kGrid + 1));
    double hi_q = gg::quantile(prm, static_cast<double>(kGrid) / (kGrid + 1));
    for (std::size_t i = 1; i + 1 < points.size(); ++i)
      if (points[i] >= lo_q && points[i] <= hi_q) eval_idx.push_back(i);

    expB.resize(eval_idx.size());
    bprime.resize(eval_idx.size());
    kappa_a.resize(eval_idx.size());
    kappa_b.resize(eval_idx.size());
    for (std::size_t e = 0; e < eval_idx.size(); ++e) {
      double x = points[eval_idx[e]];
      expB[e] = std::exp(pot.B(x));
      bprime[e] = pot.Bprime(x);
      double cdf = gg::cdf(prm, x);
      // Closed forms: C_B int_0^x e^{-B} = G(x), similarly for the tail.
      kappa_a[e] = expB[e] * cdf / pot.normalizer;
      kappa_b[e] = expB[e] * (1.0 - cdf) / pot.normalizer;
    }
  }

  // Panel integrals of u * exp(-B) for an arbitrary integrand u.
  std::vector<double> panel_integrals(const RealFn& u) const {
    std::size_t panels = points.size() - 1;
    std::vector<double> out(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      double acc = 0.0;
      for (int j = 0; j < 15; ++j)
        acc += u(node_x[p * 15 + j]) * node_w[p * 15 + j];
      out[p] = acc;
    }
    return out;
  }

  double integral_of(const RealFn& u) const {
    auto parts = panel_integrals(u);
    double acc = 0.0;
    for (double v : parts) acc += v;
    return acc;
  }
};

// Per-test-function solution data on the engine grid.
struct GridSolution {
  double h_mean = 0.0;
  double h_norm = 0.0;  // ess sup |h - E h|
  std::vector<double> prefix;   // int_0^{points[i]} h~ e^{-B}
  std::vector<double> suffix;   // int_{points[i]}^{cutoff} h~ e^{-B}
  std::vector<double> f;        // at eval points
  std::vector<double> g;

  GridSolution(const GridEngine& eng, const RealFn& h, double h_mean_in,
               double h_norm_in)
      : h_mean(h_mean_in), h_norm(h_norm_in) {
    auto parts = eng.panel_integrals(
        [&](double x) { return h(x) - h_mean; });
    std::size_t n = eng.points.size();
    prefix.assign(n, 0.0);
    suffix.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) prefix[i + 1] = prefix[i] + parts[i];
    for (std::size_t i = n - 1; i-- > 0;) suffix[i] = suffix[i + 1] + parts[i];

    f.resize(eng.eval_idx.size());
    g.resize(eng.eval_idx.size());
    for (std::size_t e = 0; e < eng.eval_idx.size(); ++e) {
      std::size_t i = eng.eval_idx[e];
      double x = eng.points[i];
      f[e] = x <= eng.pot.x0 ? eng.expB[e] * prefix[i] : -eng.expB[e] * suffix[i];
      double extra = eng.prm.k > 1.0 ? (eng.prm.k - 1.0) / x : 0.0;
      g[e] = (h(x) - h_mean) + (eng.bprime[e] + extra) * f[e];
    }
  }

  // f at an arbitrary x: nearest panel anchor plus one local Kronrod panel.
  double f_at(const GridEngine& eng, const RealFn& h, double x) const {
    auto it = std::upper_bound(eng.points.begin(), eng.points.end(), x);
    std::size_t anchor = static_cast<std::size_t>(it - eng.points.begin()) - 1;
    double px = eng.points[anchor];
    auto integrand = [&](double z) {
      return (h(z) - h_mean) * std::exp(-eng.pot.B(z));
    };
    double delta = x > px ? quad::kronrod15(integrand, px, x) : 0.0;
    if (x <= eng.pot.x0)
      return std::exp(eng.pot.B(x)) * (prefix[anchor] + delta);
    return -std::exp(eng.pot.B(x)) * (suffix[anchor] - delta);
  }
};

double perturbation_rhs(double k, double r, double beta, double x, double mp) {
  (void)k;
  if (r == 1.0) return 2.0 * beta;
  if (r >= 2.0)
    return beta * (r - 1.0) *
               (1.0 + std::pow(2.0, r - 2.0) * std::pow(x, r - 1.0) +
                std::pow(2.0, r - 2.0) * std::pow(beta, r - 1.0)) *
               mp +
           2.0 * beta * std::pow(x, r - 1.0);
  return std::pow(beta, r - 1.0) * mp + 2.0 * beta * std::pow(x, r - 1.0);
}

void track(AuditEntry& entry, double lhs, double rhs, double where) {
  double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? 2.0 : 0.0);
  if (ratio > entry.max_ratio) {
    entry.max_ratio = ratio;
    entry.at = where;
  }
}

// Exact Kolmogorov distance between an atomic law and the GG target.
double dk_atoms(const std::vector<double>& atoms, const std::vector<double>& mass,
                const gg::GGParams& prm) {
  double cum = 0.0, best = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double gcdf = gg::cdf(prm, atoms[i]);
    best = std::max(best, std::fabs(cum - gcdf));
    cum += mass[i];
    best = std::max(best, std::fabs(cum - gcdf));
  }
  return best;
}

}  // namespace

AuditReport bound_audit(int k, int r) {
  if (k < 1 || r < 1) throw std::domain_error("bound_audit: k, r >= 1 required");

  AuditReport report;
  report.k = k;
  report.r = r;
  gg::GGParams prm{static_cast<double>(k), static_cast<double>(r)};
  auto consts = gg::bound_constants(prm);

  // Test functions: 50 indicator thresholds and 50 tent functions; all
  // thresholds and kinks become panel boundaries.
  const int kFns = 50;
  const double tent_eps[] = {0.8, 0.4, 0.2, 0.1, 0.05};
  std::vector<double> thresholds(kFns), tent_centers(kFns);
  std::vector<double> extra;
  for (int i = 0; i < kFns; ++i) {
    thresholds[i] = gg::quantile(prm, (i + 0.5) / kFns);
    tent_centers[i] = gg::quantile(prm, (i + 0.75) / (kFns + 1));
    extra.push_back(thresholds[i]);
    double eps = tent_eps[i % 5];
    extra.push_back(tent_centers[i]);
    extra.push_back(tent_centers[i] - eps);
    extra.push_back(tent_centers[i] + eps);
  }
  GridEngine eng(k, r, extra);

  AuditEntry solution_pointwise{"solution-pointwise"};
  AuditEntry solution_uniform{"solution-uniform"};
  AuditEntry solution_mprime{"solution-mprime"};
  AuditEntry slope_pointwise{"slope-pointwise"};
  AuditEntry slope_uniform{"slope-uniform"};
  AuditEntry drift_uniform{"drift-uniform"};
  AuditEntry g_norm{"g-norm"};
  AuditEntry perturbation{"perturbation"};

  double uniform_cap = std::exp(eng.pot.B(eng.pot.x0)) / eng.pot.normalizer;

  struct TestFn {
    RealFn h;
    double mean;
    double norm;
    std::vector<double> kinks;
  };
  std::vector<TestFn> fns;
  for (int i = 0; i < kFns; ++i) {
    double t = thresholds[i];
    RealFn h = [t](double x) { return x <= t ? 1.0 : 0.0; };
    double mean = gg::cdf(prm, t);
    fns.push_back({h, mean, std::max(mean, 1.0 - mean), {t}});
  }
  for (int i = 0; i < kFns; ++i) {
    double s = tent_centers[i];
    double eps = tent_eps[i % 5];
    RealFn h = smoothed_indicator(s, eps);
    double mean = eng.integral_of(h) * eng.pot.normalizer;
    fns.push_back({h, mean, std::max(mean, eps - mean), {s - eps, s, s + eps}});
  }

  // Residuals are validated on the central quantile band; the far tails
  // amplify the pinned finite-difference step through B'^2.
  double resid_lo = gg::quantile(prm, 0.005);
  double resid_hi = gg::quantile(prm, 0.995);

  const double betas[] = {0.01, 0.1, 0.5};
  for (const auto& tf : fns) {
    GridSolution sol(eng, tf.h, tf.mean, tf.norm);

    for (std::size_t e = 0; e < eng.eval_idx.size(); ++e) {
      double x = eng.points[eng.eval_idx[e]];
      double fa = std::fabs(sol.f[e]);
      double wedge = std::min(eng.kappa_a[e], eng.kappa_b[e]);
      track(solution_pointwise, fa, tf.norm * wedge, x);
      track(solution_uniform, fa, tf.norm * uniform_cap, x);
      track(solution_mprime, fa, tf.norm * consts.Mprime, x);
      track(drift_uniform, std::fabs(eng.bprime[e] * sol.f[e]), tf.norm, x);
      track(g_norm, std::fabs(sol.g[e]),
            tf.norm * (2.0 + (r + k - 1.0) * consts.Mprime), x);
    }

    // Derivative families on a subsample, away from kinks and jumps.
    for (std::size_t e = 0; e < eng.eval_idx.size(); e += 4) {
      double x = eng.points[eng.eval_idx[e]];
      double step = 1e-5 * std::max(1.0, x);
      bool near_kink = false;
      for (double kk : tf.kinks)
        if (std::fabs(x - kk) <= 2.0 * step) near_kink = true;
      if (near_kink) continue;

      double fp = (sol.f_at(eng, tf.h, x + step) - sol.f_at(eng, tf.h, x - step)) /
                  (2.0 * step);
      double wedge = std::min(eng.kappa_a[e], eng.kappa_b[e]);
      track(slope_pointwise, std::fabs(fp),
            tf.norm * (1.0 + std::fabs(eng.bprime[e]) * wedge), x);
      track(slope_uniform, std::fabs(fp), 2.0 * tf.norm, x);

      if (x >= resid_lo && x <= resid_hi) {
        // flat step for the definitional self-test
        double fp_flat = (sol.f_at(eng, tf.h, x + 1e-5) -
                          sol.f_at(eng, tf.h, x - 1e-5)) /
                         2e-5;
        double resid =
            std::fabs(fp_flat - eng.bprime[e] * sol.f[e] - (tf.h(x) - tf.mean));
        report.max_residual = std::max(report.max_residual, resid);
        report.form_agreement = std::max(report.form_agreement, resid);
      }
    }

    // Perturbation of x^{r-1} f(x) under shifts |t| <= beta.
    for (std::size_t e = 0; e < eng.eval_idx.size(); e += 16) {
      double x = eng.points[eng.eval_idx[e]];
      double base = std::pow(x, r - 1.0) * sol.f[e];
      for (double beta : betas) {
        for (double t : {beta, -beta, 0.5 * beta, -0.5 * beta}) {
          double y = x + t;
          if (y <= eng.points[1]) continue;
          double lhs =
              std::fabs(std::pow(y, r - 1.0) * sol.f_at(eng, tf.h, y) - base);
          track(perturbation, lhs,
                tf.norm * perturbation_rhs(k, r, beta, x, consts.Mprime), x);
        }
      }
    }
  }

  // Potential-level inequalities.
  AuditEntry kappa_a_slope{"kappa-a-slope"};
  AuditEntry kappa_b_slope{"kappa-b-slope"};
  AuditEntry kappa_monotone{"kappa-monotone"};
  for (std::size_t e = 0; e < eng.eval_idx.size(); ++e) {
    double x = eng.points[eng.eval_idx[e]];
    if (x < eng.pot.x0)
      track(kappa_a_slope, std::fabs(eng.bprime[e]) * eng.kappa_a[e], 1.0, x);
    if (x > eng.pot.x0)
      track(kappa_b_slope, eng.bprime[e] * eng.kappa_b[e], 1.0, x);
    if (e + 1 < eng.eval_idx.size()) {
      double xn = eng.points[eng.eval_idx[e + 1]];
      if (xn <= eng.pot.x0)
        track(kappa_monotone, eng.kappa_a[e], eng.kappa_a[e + 1], x);
      if (x >= eng.pot.x0)
        track(kappa_monotone, eng.kappa_b[e + 1], eng.kappa_b[e], x);
    }
  }

  AuditEntry mode_entry{"mode-constant"};
  track(mode_entry, eng.pot.mode_height, consts.M, eng.pot.x0);
  AuditEntry inverse_mode{"inverse-mode-constant"};
  track(inverse_mode, uniform_cap, consts.Mprime, eng.pot.x0);

  AuditEntry batir{"batir"};
  track(batir, batir_max_ratio(), 1.0, 0.0);
  AuditEntry wendel{"wendel"};
  track(wendel, wendel_max_ratio(), 1.0, 0.0);

  // Smoothing and concentration against a fine discretization of the target
  // (spacing well below the smallest tent width) and against the target
  // itself.
  AuditEntry smoothing{"smoothing"};
  AuditEntry concentration{"concentration"};
  {
    double delta = 0.005;
    double top = gg::quantile(prm, 1.0 - 1e-10);
    std::vector<double> atoms, mass;
    double prev = 0.0;
    for (double x = delta; x < top + delta; x += delta) {
      double c = gg::cdf(prm, x);
      atoms.push_back(x - 0.5 * delta);
      mass.push_back(c - prev);
      prev = c;
    }
    mass.back() += 1.0 - prev;
    double dk = dk_atoms(atoms, mass, prm);

    std::vector<double> sgrid;
    for (int i = 1; i <= 200; ++i)
      sgrid.push_back(gg::quantile(prm, i / 201.0));
    for (double eps : {0.05, 0.1, 0.2}) {
      // sup_s |E h(W) - E h(Z)| over a grid containing the atom kinks.
      std::vector<double> svals = sgrid;
      for (double a : atoms) {
        svals.push_back(a);
        svals.push_back(a - eps);
        svals.push_back(a + eps);
      }
      double sup = 0.0;
      for (double s : svals) {
        if (s <= 0.0) continue;
        auto h = smoothed_indicator(s, eps);
        double ew = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) ew += mass[i] * h(atoms[i]);
        double ez = eng.integral_of(h) * eng.pot.normalizer;
        sup = std::max(sup, std::fabs(ew - ez));
      }
      track(smoothing, dk, sup + eng.pot.mode_height * eps, eps);

      for (double s : sgrid) {
        double window = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i)
          if (atoms[i] >= s && atoms[i] <= s + eps) window += mass[i];
        track(concentration, window, eng.pot.mode_height * eps + 2.0 * dk, s);
        // Target against itself: the window mass is bounded by the mode.
        double self_window = gg::cdf(prm, s + eps) - gg::cdf(prm, s);
        track(concentration, self_window, eng.pot.mode_height * eps, s);
      }
    }
  }

  report.entries = {solution_pointwise, solution_uniform, solution_mprime,
                    slope_pointwise,    slope_uniform,    drift_uniform,
                    g_norm,             perturbation,     kappa_a_slope,
                    kappa_b_slope,      kappa_monotone,   mode_entry,
                    inverse_mode,       batir,            wendel,
                    smoothing,          concentration};
  return report;
}

}  // namespace urnflow::stein
