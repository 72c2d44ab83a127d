// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "urnflow/rational.hpp"
#include "urnflow/special.hpp"
#include "urnflow/stats.hpp"
#include "urnflow/stein.hpp"
#include "urnflow/transforms.hpp"
#include "urnflow/trees.hpp"
#include "urnflow/urn.hpp"
#include "urnflow/walks.hpp"

namespace fs = std::filesystem;
using namespace urnflow;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<bool(std::string&)> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool approx_slope(double slope, double target, double tol, std::string& note) {
  note += " slope=" + std::to_string(slope) + " target=" + std::to_string(target);
  return std::fabs(slope - target) <= tol;
}

// ---------------------------------------------------------------- 1 & 2
bool urn_exactness(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t b : {0, 1})
    for (std::int64_t w : {1, 2, 3})
      for (std::int64_t l : {1, 2, 3})
        for (std::int64_t n = 0; n <= 8; ++n) {
          urn::UrnSpec s{b, w, l, n};
          if (sup_diff(urn::exact_pmf<BigRat>(s), urn::brute_force_pmf<BigRat>(s)) !=
              BigRat(0))
            return false;
        }
  double dt = seconds_since(t0);
  note += " runtime=" + std::to_string(dt) + "s";
  return dt < 10.0;
}

bool moment_formula(std::string& note) {
  for (std::int64_t b : {0, 1})
    for (std::int64_t w : {1, 2, 3})
      for (std::int64_t l : {1, 2, 3})
        for (std::int64_t n = 0; n <= 8; ++n) {
          urn::UrnSpec s{b, w, l, n};
          auto pmf = urn::exact_pmf<BigRat>(s);
          for (int m = 1; m <= 4; ++m)
            if (urn::rising_moment<BigRat>(s, m) != rising_factorial_moment(pmf, m))
              return false;
        }
  note += " grid=(b,w,l,n<=8) m<=4";
  return true;
}

// ------------------------------------------------------------------- 3
bool identities(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  std::int64_t checks = 0;
  for (int j = 1; j <= 3; ++j) {
    for (int l = 1; l <= 3; ++l) {
      for (std::int64_t n = l; n <= 12; ++n) {
        urn::IdentityParams p;
        p.j = j;
        p.l = l;
        p.n = n;
        for (int r = 1; r <= 3; ++r) {
          urn::IdentityParams q = p;
          q.r = r;
          q.b = 1;
          q.w = j;
          if (urn::identity_discrepancy<BigRat>(urn::Identity::bias_shift, q) !=
              BigRat(0))
            return false;
          ++checks;
        }
        if (urn::identity_discrepancy<BigRat>(urn::Identity::first_block, p) !=
            BigRat(0))
          return false;
        for (int i = 0; i <= l; ++i) {
          urn::IdentityParams q = p;
          q.i = i;
          if (urn::identity_discrepancy<BigRat>(urn::Identity::random_clock, q) !=
              BigRat(0))
            return false;
          ++checks;
        }
        if (urn::identity_discrepancy<BigRat>(urn::Identity::polya_restart, p) !=
            BigRat(0))
          return false;
        if (urn::identity_discrepancy<BigRat>(urn::Identity::polya_embedding, p) !=
            BigRat(0))
          return false;
        checks += 3;
      }
    }
  }
  double dt = seconds_since(t0);
  note += " checks=" + std::to_string(checks) + " runtime=" + std::to_string(dt) + "s";
  return dt < 60.0;
}

// ------------------------------------------------------------------- 4
bool remy_uniformity(std::string& note) {
  for (int n = 1; n <= 5; ++n) {
    auto all = tree::enumerate_decorated(n);
    BigRat expected(1);
    expected = tree::catalan(n - 1);
    for (int i = 2; i <= n; ++i) expected *= i;
    if (BigRat(all.size()) != expected) return false;
    std::set<std::string> distinct;
    for (const auto& t : all) distinct.insert(tree::to_string(t));
    if (distinct.size() != all.size()) return false;
    if (tree::construction_probability(n) * expected != BigRat(1)) return false;
  }

  auto all4 = tree::enumerate_decorated(4);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < all4.size(); ++i)
    index[tree::to_string(all4[i])] = i;
  RngStream rng(1009, 0);
  std::vector<std::int64_t> counts(all4.size(), 0);
  const int m = 1000000;
  for (int i = 0; i < m; ++i)
    ++counts[index.at(tree::to_string(tree::grow(4, rng)))];
  std::vector<double> probs(all4.size(), 1.0 / static_cast<double>(all4.size()));
  auto chi = special::chi_square_gof(counts, probs);
  note += " chi2 p=" + std::to_string(chi.pvalue);
  return chi.pvalue > 0.01;
}

// ------------------------------------------------------------------- 5
bool embeddings(std::string& note) {
  // spanning sizes (exact, every k)
  for (int n = 2; n <= 6; ++n) {
    auto all = tree::enumerate_decorated(n);
    BigRat w(1, static_cast<std::int64_t>(all.size()));
    for (int k = 1; k < n; ++k) {
      std::vector<std::int32_t> labels;
      for (int i = 1; i <= k; ++i) labels.push_back(i);
      std::map<std::int64_t, BigRat> law;
      for (const auto& t : all) law[tree::spanning_size(t, labels)] += w;
      auto urn_law = urn::exact_pmf<BigRat>({0, 2 * k - 1, 1, n - k});
      for (auto [v, p] : law)
        if (p != urn_law.prob(v)) return false;
    }
  }

  // bridge occupation (exact, lengths <= 12)
  for (int n = 1; n <= 6; ++n) {
    auto bridges = walk::enumerate_paths(walk::PathClass::bridge, 2 * n);
    std::map<std::int64_t, BigRat> law;
    BigRat w(1, static_cast<std::int64_t>(bridges.size()));
    for (const auto& p : bridges) law[walk::path_stats(p).origin_visits] += w;
    auto urn_law = urn::exact_pmf<BigRat>({0, 1, 1, n});
    for (auto [v, p] : law)
      if (p != urn_law.prob(v)) return false;
  }

  // walk occupation (exact, both parities, lengths <= 12)
  for (int n = 1; n <= 5; ++n) {
    for (int len : {2 * n, 2 * n + 1}) {
      auto walks = walk::enumerate_paths(walk::PathClass::walk, len);
      std::map<std::int64_t, BigRat> law;
      BigRat w(1, static_cast<std::int64_t>(walks.size()));
      for (const auto& p : walks) law[walk::path_stats(p).origin_visits] += w;
      auto urn_law = urn::exact_pmf<BigRat>({1, 1, 1, n});
      for (auto [v, p] : law)
        if (p != urn_law.prob(v)) return false;
    }
  }

  // root-path node count (exact; conditioned geometric difference)
  for (int n = 2; n <= 6; ++n) {
    auto all = tree::enumerate_decorated(n);
    std::map<std::int64_t, BigRat> law;
    BigRat tw(1, static_cast<std::int64_t>(all.size()));
    for (const auto& t : all) {
      BigRat nw = tw / BigRat(t.node_count());
      for (std::int32_t v = 0; v < t.node_count(); ++v) {
        std::int64_t depth = 0;
        for (std::int32_t u = v; u >= 0; u = t.nodes[u].parent) ++depth;
        law[depth] += nw;
      }
    }
    auto expect = stats::geometric_difference_positive(
        urn::exact_pmf<BigRat>({0, 1, 1, n - 1}));
    for (auto [v, p] : law)
      if (p != expect.prob(v)) return false;
  }

  // plane spanning size (exact; node-count convention +k)
  for (int n = 2; n <= 6; ++n) {
    for (int k = 1; k <= 2 && k < n; ++k) {
      std::vector<std::int32_t> labels;
      for (int i = 1; i <= k; ++i) labels.push_back(i);
      auto all = tree::enumerate_decorated(n);
      std::map<std::int64_t, BigRat> law;
      BigRat w(1, static_cast<std::int64_t>(all.size()));
      for (const auto& t : all)
        law[tree::plane_spanning_size(tree::binary_to_plane(t), labels)] += w;
      auto expect = stats::binomial_thin(
          urn::exact_pmf<BigRat>({0, 2 * k - 1, 1, n - k}), 2 * k - 1, k);
      for (auto [v, p] : law)
        if (p != expect.prob(v)) return false;
    }
  }

  // excursion height at a uniform time (exact; (n-1)-draw convention)
  {
    // frozen oracle for length 4
    auto exc4 = walk::enumerate_paths(walk::PathClass::excursion, 4);
    if (exc4.size() != 1) return false;
    std::map<std::int64_t, BigRat> law4;
    for (int t = 0; t < 4; ++t) law4[exc4[0].heights()[t]] += BigRat(1, 4);
    if (law4[0] != BigRat(1, 4) || law4[1] != BigRat(1, 2) || law4[2] != BigRat(1, 4))
      return false;
  }
  for (int n = 2; n <= 6; ++n) {
    auto excursions = walk::enumerate_paths(walk::PathClass::excursion, 2 * n);
    std::map<std::int64_t, BigRat> law;
    BigRat w(1, static_cast<std::int64_t>(excursions.size()) * (2 * n));
    for (const auto& e : excursions) {
      auto h = e.heights();
      for (int t = 0; t < 2 * n; ++t) law[h[static_cast<std::size_t>(t)]] += w;
    }
    auto expect =
        stats::binomial_thin(urn::exact_pmf<BigRat>({0, 1, 1, n - 1}), 0, 0);
    for (auto [v, p] : law)
      if (p != expect.prob(v)) return false;
  }

  // meander final height (exact, both parities)
  for (int n = 1; n <= 5; ++n) {
    auto odd = walk::enumerate_paths(walk::PathClass::meander, 2 * n + 1);
    std::map<std::int64_t, BigRat> law;
    BigRat w(1, static_cast<std::int64_t>(odd.size()));
    for (const auto& p : odd) law[p.final_height()] += w;
    auto thinned = stats::binomial_thin(urn::exact_pmf<BigRat>({0, 1, 1, n}), 1, 0);
    for (auto [v, p] : law)
      if (p != thinned.prob((v - 1) / 2)) return false;
  }
  for (int n = 0; n <= 4; ++n) {
    auto even = walk::enumerate_paths(walk::PathClass::meander, 2 * n + 2);
    std::map<std::int64_t, BigRat> law;
    BigRat w(1, static_cast<std::int64_t>(even.size()));
    for (const auto& p : even) law[p.final_height()] += w;
    auto y_law = stats::binomial_thin(urn::exact_pmf<BigRat>({0, 1, 1, n}), 0, 0);
    BigRat positive = BigRat(1) - y_law.prob(0);
    for (auto [v, p] : law)
      if (p != y_law.prob(v / 2) / positive) return false;
  }

  note += " conventions: plane-size=+k, excursion-height=(n-1)-draw law";
  return true;
}

// ------------------------------------------------------------------- 6
bool fixed_point(std::string& note) {
  const std::size_t m = 100000;
  double band = special::dkw_band(m, 0.01);
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    for (int r = 1; r <= 3; ++r) {
      RngStream rng(4242 + 10 * k + r, 0);
      gg::GGParams p{static_cast<double>(k), static_cast<double>(r)};
      double stat = transform::fixed_point_ks(p, m, rng);
      worst = std::max(worst, stat);
      if (stat >= band) return false;
    }
  }
  note += " worst=" + std::to_string(worst) + " band=" + std::to_string(band);
  return true;
}

// ------------------------------------------------------------------- 7
bool urn_rates(std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  auto grid = stats::default_grid(32, 16384);
  const std::pair<int, int> configs[] = {{1, 1}, {2, 1}, {1, 2}, {1, 3}};
  for (auto [j, l] : configs) {
    auto rep = stats::urn_rate(j, l, grid);
    std::string tag = " (" + std::to_string(j) + "," + std::to_string(l) + ")";
    if (!approx_slope(rep.slope, rep.theory_slope, 0.15, note)) return false;
    auto [lo, hi] = stats::sandwich(rep);
    if (!(lo > 0.0) || !(hi / lo < 10.0)) {
      note += tag + " sandwich failed";
      return false;
    }
  }
  double dt = seconds_since(t0);
  note += " runtime=" + std::to_string(dt) + "s";
  return dt < 600.0;
}

// ------------------------------------------------------------------- 8
bool stat_rates(std::string& note) {
  auto grid = stats::default_grid(32, 16384);
  {
    auto rep = stats::stat_rate(stats::StatFamily::subtree_size, 1, grid);
    if (!approx_slope(rep.slope, -0.5, 0.15, note)) return false;
  }
  {
    auto rep = stats::stat_rate(stats::StatFamily::subtree_size, 2, grid);
    if (!approx_slope(rep.slope, -0.5, 0.15, note)) return false;
  }
  {
    auto rep = stats::stat_rate(stats::StatFamily::walk_occupation, 1, grid);
    if (!approx_slope(rep.slope, -0.5, 0.15, note)) return false;
  }
  {
    auto rep = stats::stat_rate(stats::StatFamily::bridge_occupation, 1, grid);
    if (!approx_slope(rep.slope, -0.5, 0.15, note)) return false;
  }
  return true;
}

// ------------------------------------------------------------------- 9
bool stein_audit_all(std::string& note) {
  double worst_ratio = 0.0, worst_residual = 0.0;
  for (int k = 1; k <= 6; ++k) {
    for (int r = 1; r <= 6; ++r) {
      auto report = stein::bound_audit(k, r);
      worst_residual = std::max(worst_residual, report.max_residual);
      for (const auto& e : report.entries) {
        worst_ratio = std::max(worst_ratio, e.max_ratio);
        if (e.max_ratio > 1.0 + 1e-6) {
          note += " family=" + e.family + " k=" + std::to_string(k) +
                  " r=" + std::to_string(r) +
                  " ratio=" + std::to_string(e.max_ratio);
          return false;
        }
      }
      if (report.max_residual >= 1e-8) {
        note += " residual=" + std::to_string(report.max_residual);
        return false;
      }

      // transfer identity: analytic case f(x) = x on a rescaled urn law
      auto base = urn::exact_pmf<double>({1, 1, 1, 16});
      double mr = power_moment(base, r);
      double scale = std::pow(mr * r / static_cast<double>(k),
                              1.0 / static_cast<double>(r));
      auto sides = stein::equilibrium_identity(
          k, r, base, scale, [](double x) { return x; },
          [](double) { return 1.0; });
      if (std::fabs(sides.lhs - k) > 1e-6 * k || sides.gap() > 1e-6) return false;
      auto smooth = stein::equilibrium_identity_gg(
          k, r, [](double x) { return 1.0 - std::exp(-x); },
          [](double x) { return std::exp(-x); });
      if (smooth.gap() > 1e-6) return false;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), " worst ratio-1=%.1e worst residual=%.1e",
                worst_ratio - 1.0, worst_residual);
  note += buf;
  return true;
}

// ------------------------------------------------------------------ 10
bool end_to_end(std::string& note) {
  const int j = 1, l = 1;
  gg::GGParams target{1, 2};
  double min_margin = 1e300;
  for (std::int64_t n : stats::default_grid(32, 16384)) {
    transform::CouplingChain chain(j, l, n);
    double beta = chain.default_beta();
    if (beta > 1.0) {
      note += " beta>1 at n=" + std::to_string(n);
      return false;
    }
    auto est = transform::coupling_exceedance(chain, beta, 200000, 31 + n);
    double ewrm1 = mean(chain.w_pmf()) / chain.mu();
    double bound = stein::thm5_bound(j, l + 1, beta, ewrm1, est.exceedance);
    double dk = stats::dk_discrete_vs_gg(chain.w_pmf(), chain.mu(), target);
    if (!(bound >= dk)) {
      note += " violated at n=" + std::to_string(n);
      return false;
    }
    min_margin = std::min(min_margin, bound / dk);
  }
  note += " min bound/d_K=" + std::to_string(min_margin);
  return true;
}

// ------------------------------------------------------------------ 11
std::string g_cli_path;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool run_cli(const std::string& args) {
  std::string cmd = g_cli_path + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

bool determinism(std::string& note) {
  if (g_cli_path.empty()) {
    note += " no --cli path given";
    return false;
  }
  fs::path base = fs::temp_directory_path() / "urnflow_determinism";
  fs::remove_all(base);
  fs::create_directories(base);

  const std::vector<std::string> commands = {
      "gg sample --k 2 --r 2 --samples 2000 --seed 777",
      "transform couple --j 1 --l 1 --n 64 --samples 20000 --seed 9",
      "rate --family lbn --nmin 32 --nmax 4096 --seed 5",
      "urn pmf --b 1 --w 2 --l 3 --n 24 --seed 1",
      "tree grow --n 9 --seed 3",
  };
  int idx = 0;
  for (const auto& cmd : commands) {
    // Run the identical invocation twice into the same directory and compare
    // every artifact byte for byte.
    fs::path dir = base / ("run" + std::to_string(idx));
    std::string full = cmd + " --out " + dir.string();
    if (!run_cli(full)) return false;
    std::map<std::string, std::string> first;
    for (const auto& entry : fs::directory_iterator(dir))
      first[entry.path().filename().string()] = slurp(entry.path());
    if (!run_cli(full)) return false;
    std::map<std::string, std::string> second;
    for (const auto& entry : fs::directory_iterator(dir))
      second[entry.path().filename().string()] = slurp(entry.path());
    if (first != second) {
      note += " mismatch for '" + cmd + "'";
      return false;
    }
    ++idx;
  }

  // config file semantics: values come from the file, explicit flags win
  fs::path cfg = base / "cfg.json";
  {
    std::ofstream os(cfg);
    os << "{\"b\": 1, \"w\": 2, \"l\": 3, \"n\": 6, \"seed\": 42}\n";
  }
  fs::path cfg_dir = base / "cfg_run";
  if (!run_cli("urn pmf --config " + cfg.string() + " --n 24 --out " +
               cfg_dir.string()))
    return false;
  std::string pmf = slurp(cfg_dir / "pmf.json");
  // offset 2 comes from the file, 25 mass entries from the overriding flag
  if (pmf.find("\"offset\": 2") == std::string::npos) {
    note += " config w not applied";
    return false;
  }
  std::int64_t atoms = 0;
  for (char c : pmf)
    if (c == ',') ++atoms;
  if (atoms < 24) {
    note += " flag override of n not applied";
    return false;
  }
  note += " " + std::to_string(commands.size()) + " commands byte-identical";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
    if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  std::vector<Criterion> criteria = {
      {1, "urn exact engine matches brute-force enumeration (rational)", urn_exactness},
      {2, "rising-moment product formula matches pmf sums (rational)", moment_formula},
      {3, "five distributional identities vanish exactly (rational)", identities},
      {4, "uniform decorated trees: exact probabilities and chi-square", remy_uniformity},
      {5, "tree/walk embeddings match exact urn laws (enumeration)", embeddings},
      {6, "equilibrium fixed point passes the 99% DKW band", fixed_point},
      {7, "urn Kolmogorov rates fit -l/(l+1) with a tight sandwich", urn_rates},
      {8, "statistic families fit the -1/2 rate", stat_rates},
      {9, "bound audit holds on the full (k, r) grid", stein_audit_all},
      {10, "explicit bound dominates the exact distance at every n", end_to_end},
      {11, "CLI runs are byte-identical for a fixed seed", determinism},
  };

  bool all_ok = true;
  for (auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail += std::string(" exception: ") + e.what();
    }
    std::printf("[%2d] %s  %s (%.1fs)%s\n", c.id, ok ? "PASS" : "FAIL",
                c.title.c_str(), seconds_since(t0), detail.c_str());
    std::fflush(stdout);
    if (!ok) all_ok = false;
  }
  return all_ok ? 0 : 1;
}
