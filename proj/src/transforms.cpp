#include "urnflow/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "urnflow/parallel.hpp"

namespace urnflow::transform {

EquilibriumLaw::EquilibriumLaw(const Pmf& base, int k, int r)
    : biased_(power_bias(base, r)), k_(k), r_(r),
      base_moment_r_(power_moment(base, r)) {
  if (k < 1) throw std::domain_error("EquilibriumLaw: k >= 1 required");
}

double EquilibriumLaw::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::int64_t x = biased_.min_support(); x <= biased_.max_support(); ++x) {
    double m = biased_.prob(x);
    if (m == 0.0) continue;
    double ratio = t / static_cast<double>(x);
    acc += m * (ratio >= 1.0 ? 1.0 : std::pow(ratio, k_));
  }
  return acc;
}

double fixed_point_ks(const gg::GGParams& p, std::size_t samples, RngStream& rng) {
  int k = static_cast<int>(p.k), r = static_cast<int>(p.r);
  if (k < 1 || r < 1 || p.k != k || p.r != r)
    throw std::domain_error("fixed_point_ks: integer k, r >= 1 required");

  // Power-biasing GG(k, r) lands in GG(k+r, r), so W* = V_k * Z' with
  // Z' ~ GG(k+r, r).
  gg::GGParams biased{p.k + p.r, p.r};
  std::vector<double> xs(samples);
  for (double& x : xs) {
    double v = std::pow(rng.uniform(), 1.0 / p.k);
    x = v * gg::sample(biased, rng);
  }
  std::sort(xs.begin(), xs.end());
  double m = static_cast<double>(samples);
  double stat = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double g = gg::cdf(p, xs[i]);
    stat = std::max(stat, std::fabs((i + 1.0) / m - g));
    stat = std::max(stat, std::fabs(g - static_cast<double>(i) / m));
  }
  return stat;
}

namespace {

Pmf normalized_or_point(Pmf p, std::int64_t fallback) {
  double t = p.total();
  if (t <= 0.0) {
    // Degenerate residual (identical marginals); never sampled.
    Pmf point;
    point.offset = fallback;
    point.mass = {1.0};
    return point;
  }
  for (double& m : p.mass) m /= t;
  return p;
}

}  // namespace

MaximalCoupling::MaximalCoupling(const Pmf& p, const Pmf& q)
    : p_(p), q_(q), tv_(0.0),
      residual_p_{}, residual_q_{}, overlap_{},
      overlap_sampler_(Pmf{0, {1.0}}),
      residual_p_sampler_(Pmf{0, {1.0}}),
      residual_q_sampler_(Pmf{0, {1.0}}) {
  std::int64_t lo = std::min(p.min_support(), q.min_support());
  std::int64_t hi = std::max(p.max_support(), q.max_support());
  overlap_.offset = residual_p_.offset = residual_q_.offset = lo;
  overlap_.mass.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  residual_p_.mass = overlap_.mass;
  residual_q_.mass = overlap_.mass;
  for (std::int64_t x = lo; x <= hi; ++x) {
    double a = p.prob(x), b = q.prob(x);
    double common = std::min(a, b);
    std::size_t i = static_cast<std::size_t>(x - lo);
    overlap_.mass[i] = common;
    residual_p_.mass[i] = a - common;
    residual_q_.mass[i] = b - common;
    tv_ += a - common;
  }
  overlap_ = normalized_or_point(std::move(overlap_), p.min_support());
  residual_p_ = normalized_or_point(std::move(residual_p_), p.min_support());
  residual_q_ = normalized_or_point(std::move(residual_q_), q.min_support());
  overlap_sampler_ = DiscreteSampler(overlap_);
  residual_p_sampler_ = DiscreteSampler(residual_p_);
  residual_q_sampler_ = DiscreteSampler(residual_q_);
}

std::pair<std::int64_t, std::int64_t> MaximalCoupling::sample(RngStream& rng) const {
  if (rng.uniform() >= tv_) {
    std::int64_t z = overlap_sampler_.sample(rng);
    return {z, z};
  }
  return {residual_p_sampler_.sample(rng), residual_q_sampler_.sample(rng)};
}

std::int64_t MaximalCoupling::second_given_first(std::int64_t x, RngStream& rng) const {
  double px = p_.prob(x);
  if (px <= 0.0)
    throw std::domain_error("MaximalCoupling: conditioning point has zero mass");
  double keep = std::min(px, q_.prob(x)) / px;
  if (rng.uniform() < keep) return x;
  return residual_q_sampler_.sample(rng);
}

CouplingChain::CouplingChain(int j, int l, std::int64_t n)
    : j_(j), l_(l), n_(n),
      mu_(urn::mu_n(j, l, n)),
      w_pmf_(urn::exact_pmf<double>({1, j, l, n})),
      r_pmf_(urn::exact_pmf<double>({1, j + l + 1, l, n - l})),
      r_sampler_(r_pmf_),
      rising_(urn::rising_bias(w_pmf_, l + 1)),
      power_(power_bias(w_pmf_, l + 1)),
      residual_{},
      residual_sampler_(Pmf{0, {1.0}}),
      bias_coupling_tv_(0.0),
      equilibrium_(w_pmf_, j, l + 1) {
  if (n <= l) throw std::domain_error("CouplingChain: need n > l");

  std::int64_t lo = std::min(rising_.min_support(), power_.min_support());
  std::int64_t hi = std::max(rising_.max_support(), power_.max_support());
  keep_prob_.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  residual_.offset = lo;
  residual_.mass.assign(keep_prob_.size(), 0.0);
  for (std::int64_t x = lo; x <= hi; ++x) {
    double a = rising_.prob(x), b = power_.prob(x);
    std::size_t i = static_cast<std::size_t>(x - lo);
    keep_prob_[i] = a > 0.0 ? std::min(1.0, b / a) : 0.0;
    double extra = b - std::min(a, b);
    residual_.mass[i] = extra;
    bias_coupling_tv_ += extra;
  }
  residual_ = normalized_or_point(std::move(residual_), power_.min_support());
  residual_sampler_ = DiscreteSampler(residual_);
  keep_offset_ = lo;
}

CouplingChain::Sample CouplingChain::draw(RngStream& rng) const {
  Sample s;

  // Exact draw of R, then the conditional continuation of the same urn for
  // the remaining l draws.
  std::int64_t rho = r_sampler_.sample(rng);
  std::int64_t whites = rho;
  urn::UrnSpec full{1, j_ + l_ + 1, l_, n_};
  for (std::int64_t i = n_ - l_; i < n_; ++i) {
    double p = static_cast<double>(whites) /
               static_cast<double>(urn::total_balls(full, i));
    if (rng.uniform() < p) ++whites;
  }
  std::int64_t t_rb = whites - (l_ + 1);

  // Rising bias -> power bias via the conditional maximal coupling.
  std::size_t idx = static_cast<std::size_t>(t_rb - keep_offset_);
  double keep = idx < keep_prob_.size() ? keep_prob_[idx] : 0.0;
  s.t_pb = rng.uniform() < keep ? t_rb : residual_sampler_.sample(rng);

  // Shared uniforms: Q_j(R - j - 1) and V_j from the same block.
  urn::PolyaCoupled qc = urn::polya_coupled_sample(j_, rho - j_ - 1, rng);
  s.w = qc.q;
  s.v = qc.v;
  s.wstar = s.v * static_cast<double>(s.t_pb);
  return s;
}

double CouplingChain::default_beta() const {
  return (2.0 * j_ + 2.0 * l_ + 5.0) / mu_;
}

ExceedanceEstimate coupling_exceedance(const CouplingChain& chain, double beta,
                                       std::size_t samples, std::uint64_t seed) {
  if (samples == 0)
    throw std::domain_error("coupling_exceedance: need at least one sample");
  constexpr std::size_t kBlock = 4096;
  std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::int64_t> hits(blocks, 0);
  double mu = chain.mu();

  parallel_for(blocks, [&](std::size_t b) {
    RngStream rng(seed, b);
    std::size_t count = std::min(kBlock, samples - b * kBlock);
    std::int64_t h = 0;
    for (std::size_t i = 0; i < count; ++i) {
      auto s = chain.draw(rng);
      if (std::fabs(static_cast<double>(s.w) - s.wstar) / mu > beta) ++h;
    }
    hits[b] = h;
  });

  std::int64_t total = 0;
  for (auto h : hits) total += h;
  ExceedanceEstimate est;
  est.n = chain.n();
  est.beta = beta;
  est.samples = samples;
  est.seed = seed;
  est.exceedance = static_cast<double>(total) / static_cast<double>(samples);
  est.stderr_ = std::sqrt(est.exceedance * (1.0 - est.exceedance) /
                          static_cast<double>(samples));
  return est;
}

}  // namespace urnflow::transform
