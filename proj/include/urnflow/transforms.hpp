#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "urnflow/gg.hpp"
#include "urnflow/pmf.hpp"
#include "urnflow/urn.hpp"

namespace urnflow::transform {

// Reweight a nonnegative-support pmf by x^r and renormalize. All mass at
// zero is an error (the bias is undefined there).
template <class T>
BasicPmf<T> power_bias(const BasicPmf<T>& p, int r) {
  if (r < 1) throw std::domain_error("transform::power_bias: r >= 1 required");
  if (p.min_support() < 0)
    throw std::domain_error("transform::power_bias: support must be nonnegative");
  bool positive = false;
  for (std::int64_t x = p.min_support(); x <= p.max_support(); ++x)
    if (x > 0 && p.prob(x) > T(0)) positive = true;
  if (!positive)
    throw std::domain_error("transform::power_bias: all mass at zero");
  return reweighted(p, [r](std::int64_t x) {
    T acc(1);
    for (int i = 0; i < r; ++i) acc *= T(x);
    return acc;
  });
}

// Law of V_k * Wb where Wb is the r-power-biased base and V_k ~ Beta(k, 1).
// The result is continuous on (0, max support); it is represented through
// its distribution function.
class EquilibriumLaw {
 public:
  EquilibriumLaw(const Pmf& base, int k, int r);

  double cdf(double t) const;
  const Pmf& biased() const { return biased_; }
  int k() const { return k_; }
  int r() const { return r_; }
  double base_power_moment() const { return base_moment_r_; }  // E W^r

 private:
  Pmf biased_;
  int k_, r_;
  double base_moment_r_;
};

// One-sample Kolmogorov statistic of the transform's fixed point: samples
// V_k * Z' with Z' ~ GG(k+r, r) and compares against the GG(k, r)
// distribution function.
double fixed_point_ks(const gg::GGParams& p, std::size_t samples, RngStream& rng);

// TV-optimal coupling of two pmfs: with probability 1 - d_TV both
// coordinates are drawn from the overlap, otherwise from the normalized
// residuals. Also exposes the conditional draw of the second coordinate
// given the first, which realizes the same joint law.
class MaximalCoupling {
 public:
  MaximalCoupling(const Pmf& p, const Pmf& q);

  double tv() const { return tv_; }
  std::pair<std::int64_t, std::int64_t> sample(RngStream& rng) const;
  std::int64_t second_given_first(std::int64_t x, RngStream& rng) const;

 private:
  Pmf p_, q_;
  double tv_;
  Pmf residual_p_, residual_q_;   // normalized
  Pmf overlap_;                   // normalized
  DiscreteSampler overlap_sampler_;
  DiscreteSampler residual_p_sampler_;
  DiscreteSampler residual_q_sampler_;
};

// Constructive coupling of the urn variable W ~ F^{n,l}_{1,j} with its
// generalized equilibrium transform W* = V_j * W^(l+1):
//   1. draw R from the exact law F^{n-l,l}_{1,j+l+1};
//   2. continue that urn l more draws to X, so X - (l+1) has the
//      rising-factorial-biased law;
//   3. convert rising bias to power bias through the maximal coupling;
//   4. the same j uniforms drive Q_j(R - j - 1) = W and V_j.
// The marginals of W and W* are exact; the pair is close with high
// probability, which is what the exceedance estimate measures.
class CouplingChain {
 public:
  CouplingChain(int j, int l, std::int64_t n);

  struct Sample {
    std::int64_t w = 0;       // urn variable
    double v = 0.0;           // Beta(j, 1) coordinate
    std::int64_t t_pb = 0;    // power-biased coordinate
    double wstar = 0.0;       // v * t_pb
  };
  Sample draw(RngStream& rng) const;

  double mu() const { return mu_; }
  double default_beta() const;  // (2j + 2l + 5) / mu
  const Pmf& w_pmf() const { return w_pmf_; }
  const EquilibriumLaw& equilibrium() const { return equilibrium_; }
  double bias_tv() const { return bias_coupling_tv_; }

  int j() const { return j_; }
  int l() const { return l_; }
  std::int64_t n() const { return n_; }

 private:
  int j_, l_;
  std::int64_t n_;
  double mu_;
  Pmf w_pmf_;           // F^{n,l}_{1,j}
  Pmf r_pmf_;           // F^{n-l,l}_{1,j+l+1}
  DiscreteSampler r_sampler_;
  Pmf rising_, power_;  // biased laws of W (order l+1)
  std::vector<double> keep_prob_;  // accept T_pb = T_rb given T_rb
  std::int64_t keep_offset_ = 0;
  Pmf residual_;
  DiscreteSampler residual_sampler_;
  double bias_coupling_tv_;
  EquilibriumLaw equilibrium_;
};

struct ExceedanceEstimate {
  std::int64_t n = 0;
  double beta = 0.0;
  double exceedance = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of P[|W - W*| / mu > beta] over seed-partitioned
// sample blocks; deterministic for a given seed regardless of thread count.
ExceedanceEstimate coupling_exceedance(const CouplingChain& chain, double beta,
                                       std::size_t samples, std::uint64_t seed);

}  // namespace urnflow::transform
