#include "urnflow/urn.hpp"

#include <cmath>

namespace urnflow::urn {

void validate(const UrnSpec& s) {
  if (s.black0 < 0 || s.white0 < 0)
    throw std::domain_error("UrnSpec: negative ball counts");
  if (s.black0 + s.white0 < 1)
    throw std::domain_error("UrnSpec: at least one ball required");
  if (s.period < 1) throw std::domain_error("UrnSpec: period l >= 1 required");
  if (s.draws < 0) throw std::domain_error("UrnSpec: draws n >= 0 required");
}

std::int64_t total_balls(const UrnSpec& s, std::int64_t i) {
  validate(s);
  if (i < 0 || i > s.draws)
    throw std::domain_error("urn::total_balls: draw index out of range");
  return s.white0 + s.black0 + i + i / s.period;
}

std::int64_t simulate(const UrnSpec& s, RngStream& rng) {
  validate(s);
  std::int64_t whites = s.white0;
  std::int64_t total = s.white0 + s.black0;
  for (std::int64_t i = 1; i <= s.draws; ++i) {
    double p = static_cast<double>(whites) / static_cast<double>(total);
    if (rng.uniform() < p) ++whites;
    ++total;  // same-color replacement
    if (i % s.period == 0) ++total;  // black immigrant
  }
  return whites;
}

double mu_n(int j, int l, std::int64_t n) {
  if (j < 1 || l < 1) throw std::domain_error("urn::mu_n: j, l >= 1 required");
  UrnSpec s{1, j, l, n};
  double moment = raw_moments<double>(s, l + 1).back();
  return std::pow((l + 1.0) / j * moment, 1.0 / (l + 1.0));
}

double mu_for_target(const UrnSpec& s, double gg_k, double gg_r) {
  int r = static_cast<int>(gg_r);
  if (r < 1 || static_cast<double>(r) != gg_r)
    throw std::domain_error("urn::mu_for_target: integer r required");
  double moment = raw_moments<double>(s, r).back();
  return std::pow(gg_r / gg_k * moment, 1.0 / gg_r);
}

double polya_cdf(std::int64_t j, std::int64_t n, std::int64_t t) {
  if (j < 1 || n < 0) throw std::domain_error("urn::polya_cdf: need j >= 1, n >= 0");
  if (t < j) return 0.0;
  if (t > j + n) return 1.0;
  double acc = 1.0;
  for (std::int64_t i = 0; i < j; ++i)
    acc *= static_cast<double>(t - i) / static_cast<double>(n + j - i);
  return acc;
}

PolyaCoupled polya_coupled_sample(int j, std::int64_t n, RngStream& rng) {
  if (j < 1 || n < 0)
    throw std::domain_error("urn::polya_coupled_sample: need j >= 1, n >= 0");
  PolyaCoupled out;
  for (int i = 0; i < j; ++i) {
    double u = rng.uniform();
    std::int64_t candidate =
        i + static_cast<std::int64_t>(std::ceil(static_cast<double>(n + j - i) * u));
    out.q = std::max(out.q, candidate);
    out.v = std::max(out.v, u);
  }
  return out;
}

Identity identity_from_name(const std::string& name) {
  if (name == "bias-shift" || name == "lemma4.2") return Identity::bias_shift;
  if (name == "first-block" || name == "lemma4.7") return Identity::first_block;
  if (name == "random-clock" || name == "lemma4.8") return Identity::random_clock;
  if (name == "polya-restart" || name == "lemma4.9") return Identity::polya_restart;
  if (name == "polya-embedding" || name == "lemma4.10") return Identity::polya_embedding;
  throw std::invalid_argument("unknown identity name: " + name);
}

std::string identity_name(Identity id) {
  switch (id) {
    case Identity::bias_shift: return "bias-shift";
    case Identity::first_block: return "first-block";
    case Identity::random_clock: return "random-clock";
    case Identity::polya_restart: return "polya-restart";
    case Identity::polya_embedding: return "polya-embedding";
  }
  return "?";
}

}  // namespace urnflow::urn
