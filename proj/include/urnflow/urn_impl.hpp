#pragma once

// Template bodies for urn.hpp; kept out of the main header for readability.

namespace urnflow::urn {

template <class T>
BasicPmf<T> exact_pmf(const UrnSpec& s) {
  validate(s);
  if (s.draws > (std::int64_t{1} << 20))
    throw ResourceLimit("urn::exact_pmf: draw count too large for the DP table");

  BasicPmf<T> pmf;
  pmf.offset = s.white0;
  pmf.mass.assign(static_cast<std::size_t>(s.draws) + 1, T(0));
  pmf.mass[0] = T(1);

  // In-place sweep from high white counts down; at draw i+1 a white is drawn
  // with probability (current whites) / N_i.
  for (std::int64_t i = 0; i < s.draws; ++i) {
    T total = T(total_balls(s, i));
    for (std::int64_t x = i + 1; x >= 0; --x) {
      T stay = x <= i ? pmf.mass[static_cast<std::size_t>(x)] *
                            (total - T(s.white0 + x)) / total
                      : T(0);
      T up = x > 0 ? pmf.mass[static_cast<std::size_t>(x - 1)] *
                         T(s.white0 + x - 1) / total
                   : T(0);
      pmf.mass[static_cast<std::size_t>(x)] = stay + up;
    }
  }
  return pmf;
}

template <class T>
BasicPmf<T> brute_force_pmf(const UrnSpec& s) {
  validate(s);
  if (s.draws > 20)
    throw ResourceLimit("urn::brute_force_pmf: enumeration capped at 20 draws");

  BasicPmf<T> pmf;
  pmf.offset = s.white0;
  pmf.mass.assign(static_cast<std::size_t>(s.draws) + 1, T(0));

  std::uint64_t seqs = std::uint64_t{1} << s.draws;
  for (std::uint64_t bits = 0; bits < seqs; ++bits) {
    T prob(1);
    std::int64_t whites = s.white0;
    bool possible = true;
    for (std::int64_t i = 0; i < s.draws; ++i) {
      std::int64_t total = total_balls(s, i);
      bool white_drawn = (bits >> i) & 1u;
      if (white_drawn) {
        if (whites == 0) {
          possible = false;
          break;
        }
        prob *= T(whites) / T(total);
        ++whites;
      } else {
        if (whites == total) {
          possible = false;
          break;
        }
        prob *= T(total - whites) / T(total);
      }
    }
    if (possible)
      pmf.mass[static_cast<std::size_t>(whites - s.white0)] += prob;
  }
  return pmf;
}

template <class T>
T rising_moment(const UrnSpec& s, int m) {
  validate(s);
  if (m < 1) throw std::domain_error("urn::rising_moment: m >= 1 required");
  T acc(1);
  for (int j = 0; j < m; ++j) acc *= T(s.white0 + j);
  for (std::int64_t i = 1; i <= s.draws; ++i) {
    T n_prev = T(total_balls(s, i - 1));
    acc *= (n_prev + T(m)) / n_prev;
  }
  return acc;
}

template <class T>
std::vector<T> raw_moments(const UrnSpec& s, int up_to) {
  if (up_to < 1) throw std::domain_error("urn::raw_moments: need up_to >= 1");

  // stir[m][i]: coefficient of x^i in x (x+1) ... (x+m-1).
  std::vector<std::vector<T>> stir(static_cast<std::size_t>(up_to) + 1);
  stir[0] = {T(1)};
  for (int m = 0; m < up_to; ++m) {
    stir[m + 1].assign(static_cast<std::size_t>(m) + 2, T(0));
    for (int i = 0; i <= m; ++i) {
      stir[m + 1][static_cast<std::size_t>(i) + 1] += stir[m][static_cast<std::size_t>(i)];
      stir[m + 1][static_cast<std::size_t>(i)] += T(m) * stir[m][static_cast<std::size_t>(i)];
    }
  }

  std::vector<T> raw(static_cast<std::size_t>(up_to) + 1, T(0));
  raw[0] = T(1);
  for (int m = 1; m <= up_to; ++m) {
    T value = rising_moment<T>(s, m);
    for (int i = 0; i < m; ++i)
      value -= stir[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] *
               raw[static_cast<std::size_t>(i)];
    raw[static_cast<std::size_t>(m)] = value;  // leading coefficient is 1
  }
  return std::vector<T>(raw.begin() + 1, raw.end());
}

template <class T>
BasicPmf<T> polya_pmf(std::int64_t black, std::int64_t white, std::int64_t n) {
  if (black < 0 || white < 0 || black + white < 1 || n < 0)
    throw std::domain_error("urn::polya_pmf: invalid start counts");
  if (n > (std::int64_t{1} << 20))
    throw ResourceLimit("urn::polya_pmf: draw count too large");

  BasicPmf<T> pmf;
  pmf.offset = white;
  pmf.mass.assign(static_cast<std::size_t>(n) + 1, T(0));
  pmf.mass[0] = T(1);
  for (std::int64_t t = 0; t < n; ++t) {
    T total = T(black + white + t);
    for (std::int64_t x = t + 1; x >= 0; --x) {
      T stay = x <= t ? pmf.mass[static_cast<std::size_t>(x)] *
                            (total - T(white + x)) / total
                      : T(0);
      T up = x > 0 ? pmf.mass[static_cast<std::size_t>(x - 1)] *
                         T(white + x - 1) / total
                   : T(0);
      pmf.mass[static_cast<std::size_t>(x)] = stay + up;
    }
  }
  return pmf;
}

template <class T>
BasicPmf<T> rising_bias(const BasicPmf<T>& p, int r) {
  if (r < 1) throw std::domain_error("urn::rising_bias: r >= 1 required");
  if (p.min_support() < 0)
    throw std::domain_error("urn::rising_bias: support must be nonnegative");
  return reweighted(p, [r](std::int64_t x) {
    T acc(1);
    for (int i = 0; i < r; ++i) acc *= T(x + i);
    return acc;
  });
}

template <class T>
T identity_discrepancy(Identity id, const IdentityParams& prm) {
  switch (id) {
    case Identity::bias_shift: {
      // Starting with r extra whites is the same law as biasing by the
      // r-order rising factorial and shifting by r.
      UrnSpec base{prm.b, prm.w, prm.l, prm.n};
      UrnSpec extra{prm.b, prm.w + prm.r, prm.l, prm.n};
      BasicPmf<T> left = exact_pmf<T>(extra);
      BasicPmf<T> right = shifted(rising_bias(exact_pmf<T>(base), prm.r), prm.r);
      return sup_diff(left, right);
    }
    case Identity::first_block: {
      if (prm.n < prm.l)
        throw std::domain_error("identity first_block: need n >= l");
      UrnSpec whole{1, prm.j, prm.l, prm.n};
      BasicPmf<T> left = exact_pmf<T>(whole);
      BasicPmf<T> block = polya_pmf<T>(1, prm.j, prm.l);
      MixtureBuilder<T> mix;
      for (std::int64_t x = block.min_support(); x <= block.max_support(); ++x) {
        UrnSpec rest{2 + prm.j + prm.l - x, x, prm.l, prm.n - prm.l};
        mix.add(block.prob(x), exact_pmf<T>(rest));
      }
      return sup_diff(left, mix.done());
    }
    case Identity::random_clock: {
      if (prm.n < prm.l)
        throw std::domain_error("identity random_clock: need n >= l");
      if (prm.i < 0 || prm.i > prm.l)
        throw std::domain_error("identity random_clock: need 0 <= i <= l");
      UrnSpec left_spec{2 + prm.i, prm.j + prm.l - prm.i, prm.l, prm.n - prm.l};
      BasicPmf<T> left = exact_pmf<T>(left_spec);
      UrnSpec clock{1, 1 + prm.j + prm.l, prm.l, prm.n - prm.l};
      BasicPmf<T> clock_law = exact_pmf<T>(clock);
      MixtureBuilder<T> mix;
      for (std::int64_t rho = clock_law.min_support(); rho <= clock_law.max_support(); ++rho)
        mix.add(clock_law.prob(rho),
                polya_pmf<T>(1 + prm.i, prm.j + prm.l - prm.i, rho - prm.j - prm.l - 1));
      return sup_diff(left, mix.done());
    }
    case Identity::polya_restart: {
      if (prm.n < prm.l)
        throw std::domain_error("identity polya_restart: need n >= l");
      BasicPmf<T> left = polya_pmf<T>(1, prm.j, prm.n);
      BasicPmf<T> block = polya_pmf<T>(1, prm.j, prm.l);
      MixtureBuilder<T> mix;
      for (std::int64_t x = block.min_support(); x <= block.max_support(); ++x)
        mix.add(block.prob(x), polya_pmf<T>(1 + prm.j + prm.l - x, x, prm.n - prm.l));
      return sup_diff(left, mix.done());
    }
    case Identity::polya_embedding: {
      if (prm.n < prm.l)
        throw std::domain_error("identity polya_embedding: need n >= l");
      UrnSpec whole{1, prm.j, prm.l, prm.n};
      BasicPmf<T> left = exact_pmf<T>(whole);
      UrnSpec clock{1, prm.j + prm.l + 1, prm.l, prm.n - prm.l};
      BasicPmf<T> clock_law = exact_pmf<T>(clock);
      MixtureBuilder<T> mix;
      for (std::int64_t rho = clock_law.min_support(); rho <= clock_law.max_support(); ++rho)
        mix.add(clock_law.prob(rho), polya_pmf<T>(1, prm.j, rho - prm.j - 1));
      return sup_diff(left, mix.done());
    }
  }
  throw std::logic_error("identity_discrepancy: unknown identity");
}

}  // namespace urnflow::urn
