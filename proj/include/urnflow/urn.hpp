#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "urnflow/pmf.hpp"
#include "urnflow/rng.hpp"

namespace urnflow::urn {

// Thrown when a request would exceed the table sizes the exact engines are
// prepared to allocate.
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Urn with immigration. Each draw returns the drawn ball plus one more of
// the same color; after every `period`-th draw one extra black ball is
// added. The observable is the white-ball count after `draws` draws.
struct UrnSpec {
  std::int64_t black0 = 0;  // b
  std::int64_t white0 = 1;  // w
  std::int64_t period = 1;  // l
  std::int64_t draws = 0;   // n
};

void validate(const UrnSpec& s);

// Total balls in the urn after draw i (draws are 1-based; i = 0 is the
// initial state): w + b + i + floor(i / l).
std::int64_t total_balls(const UrnSpec& s, std::int64_t i);

// One full trajectory; returns the final white count.
std::int64_t simulate(const UrnSpec& s, RngStream& rng);

// Exact law of the white count by dynamic programming over
// (draw index, white count).
template <class T>
BasicPmf<T> exact_pmf(const UrnSpec& s);

// Exact law by direct enumeration of all 2^n colored draw sequences.
// Exponential; capped at 20 draws. Exists as an independent check of the DP.
template <class T>
BasicPmf<T> brute_force_pmf(const UrnSpec& s);

// E W (W+1) ... (W+m-1) via the closed product formula
//   prod_{j<m} (w+j) * prod_{i=1..n} (1 + m / N_{i-1}).
template <class T>
T rising_moment(const UrnSpec& s, int m);

// E W^1 .. E W^m, solved from the rising-factorial moments through the
// unsigned Stirling triangle.
template <class T>
std::vector<T> raw_moments(const UrnSpec& s, int up_to);

// Scaling constant mu_n with mu^(l+1) = (l+1)/j * E W^(l+1) for the urn
// started with one black and j white balls.
double mu_n(int j, int l, std::int64_t n);

// Scaling toward a GG(K, r) target: mu^r = (r / K) * E W^r.
double mu_for_target(const UrnSpec& s, double gg_k, double gg_r);

// Classical urn (no immigration) started with `black` black and `white`
// white balls: draw, replace, duplicate.
template <class T>
BasicPmf<T> polya_pmf(std::int64_t black, std::int64_t white, std::int64_t n);

// Exact distribution function of the white count for the classical urn with
// one black ball: prod_{i<j} (t-i)/(n+j-i), clamped outside [j, j+n].
double polya_cdf(std::int64_t j, std::int64_t n, std::int64_t t);

// Coupled draw (Q, V): Q has the classical one-black-ball urn law via the
// max-of-ceilings representation, V = max of the same j uniforms is
// Beta(j,1), and |Q - nV| <= j+1 holds pathwise.
struct PolyaCoupled {
  std::int64_t q = 0;
  double v = 0.0;
};
PolyaCoupled polya_coupled_sample(int j, std::int64_t n, RngStream& rng);

// Reweight a pmf by the rising factorial x (x+1) ... (x+r-1).
template <class T>
BasicPmf<T> rising_bias(const BasicPmf<T>& p, int r);

// Exact distributional identities connecting the immigration urn, its biased
// versions and the classical urn. Each check builds both sides exactly and
// returns the sup-norm difference (zero in rational mode).
enum class Identity {
  bias_shift,      // extra white start vs rising-factorial bias + shift
  first_block,     // split off the first l draws as a classical block
  random_clock,    // immigration urn as a classical urn run for a random time
  polya_restart,   // classical urn restarted after l draws
  polya_embedding  // immigration urn as classical urn at a random time
};

Identity identity_from_name(const std::string& name);
std::string identity_name(Identity id);

struct IdentityParams {
  int j = 1;
  int l = 1;
  std::int64_t n = 1;
  int r = 1;            // bias order (bias_shift only)
  int i = 0;            // extra-black offset (random_clock only)
  std::int64_t b = 1;   // start counts (bias_shift only)
  std::int64_t w = 1;
};

template <class T>
T identity_discrepancy(Identity id, const IdentityParams& params);

}  // namespace urnflow::urn

#include "urnflow/urn_impl.hpp"
