// Experiment runner: every library module exposed as a subcommand with
// reproducible seeding, JSON config files, and CSV/JSON artifacts.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "urnflow/parallel.hpp"
#include "urnflow/rational.hpp"
#include "urnflow/special.hpp"
#include "urnflow/stats.hpp"
#include "urnflow/stein.hpp"
#include "urnflow/transforms.hpp"
#include "urnflow/trees.hpp"
#include "urnflow/urn.hpp"
#include "urnflow/walks.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace urnflow;

namespace {

constexpr const char* kVersion = "1.0.0";

// Exit codes: 1 invalid config, 2 resource limit, 3 failed --check.
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunContext {
  std::uint64_t seed = 12345;
  std::string out_dir = ".";
  bool timings = false;
  std::vector<std::string> argv_echo;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  fs::path out_path(const std::string& name) const {
    return fs::path(out_dir) / name;
  }

  void write_text(const std::string& name, const std::string& body) {
    fs::create_directories(out_dir);
    std::ofstream os(out_path(name), std::ios::binary);
    os << body;
    outputs.push_back(name);
  }

  void write_json(const std::string& name, const json& j) {
    write_text(name, j.dump(2) + "\n");
  }

  void finish(const std::string& command) {
    json manifest;
    manifest["tool"] = "urnflow";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["argv"] = argv_echo;
    manifest["seed"] = seed;
    manifest["outputs"] = outputs;
    if (timings) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
      manifest["duration_ms"] = ms;
    }
    write_text("manifest.json", manifest.dump(2) + "\n");
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json pmf_json(const Pmf& p) {
  json j;
  j["offset"] = p.offset;
  j["mass"] = p.mass;
  return j;
}

std::string pmf_csv(const Pmf& p) {
  std::string s = "support,mass\n";
  for (std::int64_t x = p.min_support(); x <= p.max_support(); ++x)
    s += std::to_string(x) + "," + fmt(p.prob(x)) + "\n";
  return s;
}

std::string rate_csv(const stats::RateReport& r) {
  std::string s = "n,mu_n,d_K,normalized\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    s += std::to_string(r.rows[i].n) + "," + fmt(r.rows[i].mu) + "," +
         fmt(r.rows[i].dk) + "," + fmt(r.normalized[i]) + "\n";
  return s;
}

json rate_json(const stats::RateReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    rows.push_back({{"n", r.rows[i].n},
                    {"mu_n", r.rows[i].mu},
                    {"d_K", r.rows[i].dk},
                    {"method", r.rows[i].method},
                    {"normalized", r.normalized[i]}});
  }
  json j;
  j["rows"] = rows;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["theory_slope"] = r.theory_slope;
  return j;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure("check failed: " + what);
}

// Merge a JSON config file into argv: file values apply only where the flag
// was not given explicitly, so flags override the file.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  if (config_path.empty()) return args;

  std::ifstream is(config_path);
  if (!is) throw CLI::ValidationError("--config", "cannot open " + config_path);
  json cfg = json::parse(is);
  std::set<std::string> present(args.begin(), args.end());
  for (auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    if (present.count(flag)) continue;
    args.push_back(flag);
    if (!value.is_boolean()) {
      args.push_back(value.is_string() ? value.get<std::string>()
                                       : value.dump());
    } else if (!value.get<bool>()) {
      args.pop_back();  // false boolean: drop the flag entirely
    }
  }
  return args;
}

urn::UrnSpec spec_of(std::int64_t b, std::int64_t w, std::int64_t l, std::int64_t n) {
  return urn::UrnSpec{b, w, l, n};
}

void check_urn() {
  for (std::int64_t b : {0, 1})
    for (std::int64_t w : {1, 2})
      for (std::int64_t l : {1, 2})
        for (std::int64_t n : {3, 6}) {
          auto dp = urn::exact_pmf<BigRat>(spec_of(b, w, l, n));
          auto bf = urn::brute_force_pmf<BigRat>(spec_of(b, w, l, n));
          require(sup_diff(dp, bf) == BigRat(0), "urn DP vs enumeration");
          for (int m = 1; m <= 3; ++m)
            require(urn::rising_moment<BigRat>(spec_of(b, w, l, n), m) ==
                        rising_factorial_moment(dp, m),
                    "urn moment product formula");
        }
  urn::IdentityParams p;
  p.j = 1;
  p.l = 1;
  p.n = 6;
  require(urn::identity_discrepancy<BigRat>(urn::Identity::polya_embedding, p) ==
              BigRat(0),
          "urn classical-time representation");
}

double quad_total(const gg::GGParams& prm, const gg::Potential& pot) {
  double acc = 0.0;
  double step = pot.tail_cutoff / 20000.0;
  double prev = 0.0;
  for (int i = 1; i <= 20000; ++i) {
    double c = gg::cdf(prm, i * step);
    acc += c - prev;
    prev = c;
  }
  return acc + (1.0 - prev);
}

void check_gg(double k, double r) {
  gg::GGParams prm{k, r};
  auto pot = gg::potential(prm);
  auto c = gg::bound_constants(prm);
  require(pot.mode_height <= c.M + 1e-12, "mode constant");
  require(std::exp(pot.B(pot.x0)) / pot.normalizer <= c.Mprime + 1e-12,
          "inverse mode constant");
  double total = quad_total(prm, pot);
  require(std::fabs(total - 1.0) < 1e-8, "density normalization");
}

void check_trees(std::uint64_t seed) {
  auto all = tree::enumerate_decorated(4);
  require(all.size() == 120, "decorated tree count");
  require(tree::construction_probability(4) == BigRat(1, 120),
          "construction probability");
  for (const auto& t : all) {
    auto p = tree::binary_to_plane(t);
    require(tree::to_string(tree::plane_to_binary(p)) == tree::to_string(t),
            "plane bijection roundtrip");
  }
  RngStream rng(seed, 0);
  auto t = tree::grow(6, rng);
  require(t.leaf_count() == 6, "growth leaf count");
}

void check_walks() {
  for (int n = 1; n <= 4; ++n) {
    std::set<std::string> images;
    for (const auto& t : tree::enumerate_decorated(n))
      images.insert(walk::to_string(walk::tree_to_excursion(t)));
    require(images.size() ==
                walk::enumerate_paths(walk::PathClass::excursion, 2 * n).size(),
            "excursion bijection");
    for (const auto& b : walk::enumerate_paths(walk::PathClass::bridge, 2 * n)) {
      auto m = walk::bridge_to_meander(b);
      require(walk::to_string(walk::meander_to_bridge(m)) == walk::to_string(b),
              "meander roundtrip");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"urn, tree, walk and distributional-transform experiments"};
  app.require_subcommand(1);

  RunContext ctx;
  std::string config_path;
  app.add_option("--seed", ctx.seed, "64-bit seed; no wall-clock default");
  app.add_option("--config", config_path, "JSON config file; flags override it");
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_flag("--timings", ctx.timings, "include durations in the manifest");

  // ---- urn ----------------------------------------------------------
  auto* urn_cmd = app.add_subcommand("urn", "immigration and classical urns");
  std::int64_t b = 1, w = 1, l = 1, n = 2, m_order = 2;
  std::int64_t samples = 100000;
  bool rational = false, run_check = false;
  std::string identity_name_arg = "polya-embedding";
  int ident_r = 1, ident_i = 0;

  auto* urn_pmf = urn_cmd->add_subcommand("pmf", "exact white-count law");
  urn_pmf->add_option("--b", b);
  urn_pmf->add_option("--w", w);
  urn_pmf->add_option("--l", l);
  urn_pmf->add_option("--n", n);
  urn_pmf->add_flag("--rational", rational, "exact arithmetic (n <= 64)");
  urn_pmf->add_flag("--check", run_check);

  auto* urn_sample = urn_cmd->add_subcommand("sample", "simulate trajectories");
  urn_sample->add_option("--b", b);
  urn_sample->add_option("--w", w);
  urn_sample->add_option("--l", l);
  urn_sample->add_option("--n", n);
  urn_sample->add_option("--samples", samples);
  urn_sample->add_flag("--check", run_check);

  auto* urn_moments = urn_cmd->add_subcommand("moments", "moment formulas");
  urn_moments->add_option("--b", b);
  urn_moments->add_option("--w", w);
  urn_moments->add_option("--l", l);
  urn_moments->add_option("--n", n);
  urn_moments->add_option("--m", m_order, "highest order");
  urn_moments->add_flag("--check", run_check);

  auto* urn_identity = urn_cmd->add_subcommand("identity", "distributional identities");
  urn_identity->add_option("--name", identity_name_arg);
  std::int64_t ident_j = 1, ident_l = 1, ident_n = 4;
  urn_identity->add_option("--j", ident_j);
  urn_identity->add_option("--l", ident_l);
  urn_identity->add_option("--n", ident_n);
  urn_identity->add_option("--r", ident_r);
  urn_identity->add_option("--i", ident_i);
  urn_identity->add_option("--b", b);
  urn_identity->add_option("--w", w);
  urn_identity->add_flag("--check", run_check);

  // spec'd shorthand: a top-level identity command
  auto* identity_alias = app.add_subcommand("identity", "alias of urn identity");
  identity_alias->add_option("--name", identity_name_arg);
  identity_alias->add_option("--j", ident_j);
  identity_alias->add_option("--l", ident_l);
  identity_alias->add_option("--n", ident_n);
  identity_alias->add_option("--r", ident_r);
  identity_alias->add_option("--i", ident_i);
  identity_alias->add_option("--b", b);
  identity_alias->add_option("--w", w);
  identity_alias->add_flag("--check", run_check);

  // ---- gg -----------------------------------------------------------
  auto* gg_cmd = app.add_subcommand("gg", "generalized gamma distribution");
  double gk = 1, gr = 1, gx = 1, gl = 1;
  std::int64_t grid_points = 0;
  double grid_max = 5.0;
  auto add_gg_opts = [&](CLI::App* c) {
    c->add_option("--k", gk);
    c->add_option("--r", gr);
    c->add_flag("--check", run_check);
  };
  auto* gg_pdf = gg_cmd->add_subcommand("pdf", "density");
  add_gg_opts(gg_pdf);
  gg_pdf->add_option("--x", gx);
  gg_pdf->add_option("--grid", grid_points, "emit a CSV grid of this size");
  gg_pdf->add_option("--xmax", grid_max);
  auto* gg_cdf = gg_cmd->add_subcommand("cdf", "distribution function");
  add_gg_opts(gg_cdf);
  gg_cdf->add_option("--x", gx);
  gg_cdf->add_option("--grid", grid_points);
  gg_cdf->add_option("--xmax", grid_max);
  auto* gg_moment = gg_cmd->add_subcommand("moment", "E Z^l");
  add_gg_opts(gg_moment);
  gg_moment->add_option("--l", gl);
  auto* gg_sample_cmd = gg_cmd->add_subcommand("sample", "draw samples");
  add_gg_opts(gg_sample_cmd);
  gg_sample_cmd->add_option("--samples", samples);

  // ---- tree ---------------------------------------------------------
  auto* tree_cmd = app.add_subcommand("tree", "decorated binary and plane trees");
  std::int64_t tree_n = 5, tree_k = 1;
  std::string stat_name = "ub";
  auto* tree_grow = tree_cmd->add_subcommand("grow", "grow one uniform tree");
  tree_grow->add_option("--n", tree_n);
  tree_grow->add_flag("--check", run_check);
  auto* tree_enum = tree_cmd->add_subcommand("enumerate", "all decorated trees");
  tree_enum->add_option("--n", tree_n);
  tree_enum->add_flag("--check", run_check);
  auto* tree_stat = tree_cmd->add_subcommand("stat", "statistic distributions");
  tree_stat->add_option("--stat", stat_name, "ub | vb | vp");
  tree_stat->add_option("--n", tree_n);
  tree_stat->add_option("--k", tree_k);
  tree_stat->add_option("--samples", samples);
  tree_stat->add_flag("--check", run_check);

  // ---- walk ---------------------------------------------------------
  auto* walk_cmd = app.add_subcommand("walk", "lattice paths and bijections");
  std::string walk_kind = "excursion", path_arg;
  std::int64_t walk_len = 8;
  auto* walk_map = walk_cmd->add_subcommand("map", "tree-to-path maps");
  walk_map->add_option("--kind", walk_kind, "excursion | bridge | meander | walk");
  walk_map->add_option("--n", tree_n, "leaves of the generating tree");
  walk_map->add_flag("--check", run_check);
  auto* walk_enum = walk_cmd->add_subcommand("enumerate", "all paths of a class");
  walk_enum->add_option("--class", walk_kind);
  walk_enum->add_option("--length", walk_len);
  walk_enum->add_flag("--check", run_check);
  auto* walk_stat = walk_cmd->add_subcommand("stat", "statistics of one path");
  walk_stat->add_option("--path", path_arg, "U/D letters");
  walk_stat->add_flag("--check", run_check);

  // ---- stein --------------------------------------------------------
  auto* stein_cmd = app.add_subcommand("stein", "potential framework");
  double s_threshold = 1.0, s_beta = 0.1, s_ewrm1 = 1.0, s_exceed = 0.0;
  int s_k = 1, s_r = 2;
  auto* stein_solve = stein_cmd->add_subcommand("solve", "solution for an indicator");
  stein_solve->add_option("--k", s_k);
  stein_solve->add_option("--r", s_r);
  stein_solve->add_option("--t", s_threshold, "indicator threshold");
  stein_solve->add_flag("--check", run_check);
  auto* stein_audit = stein_cmd->add_subcommand("audit", "inequality audit");
  stein_audit->add_option("--k", s_k);
  stein_audit->add_option("--r", s_r);
  stein_audit->add_flag("--check", run_check);
  auto* stein_bound = stein_cmd->add_subcommand("bound", "explicit bound value");
  stein_bound->add_option("--k", s_k);
  stein_bound->add_option("--r", s_r);
  stein_bound->add_option("--beta", s_beta);
  stein_bound->add_option("--ewrm1", s_ewrm1, "E W^{r-1}");
  stein_bound->add_option("--exceedance", s_exceed);
  stein_bound->add_flag("--check", run_check);

  // ---- transform ----------------------------------------------------
  auto* tr_cmd = app.add_subcommand("transform", "bias and equilibrium transforms");
  int tr_r = 1, tr_k = 1;
  std::int64_t tr_j = 1, tr_l = 1, tr_n = 64;
  double tr_beta = 0.0;
  auto* tr_bias = tr_cmd->add_subcommand("bias", "power bias of an urn law");
  tr_bias->add_option("--b", b);
  tr_bias->add_option("--w", w);
  tr_bias->add_option("--l", l);
  tr_bias->add_option("--n", n);
  tr_bias->add_option("--r", tr_r);
  tr_bias->add_flag("--check", run_check);
  auto* tr_eq = tr_cmd->add_subcommand("equilibrium", "equilibrium transform CDF");
  tr_eq->add_option("--b", b);
  tr_eq->add_option("--w", w);
  tr_eq->add_option("--l", l);
  tr_eq->add_option("--n", n);
  tr_eq->add_option("--k", tr_k);
  tr_eq->add_option("--r", tr_r);
  tr_eq->add_option("--grid", grid_points);
  tr_eq->add_flag("--check", run_check);
  auto* tr_couple = tr_cmd->add_subcommand("couple", "coupling-chain exceedance");
  tr_couple->add_option("--j", tr_j);
  tr_couple->add_option("--l", tr_l);
  tr_couple->add_option("--n", tr_n);
  tr_couple->add_option("--beta", tr_beta, "0 means the canonical threshold");
  tr_couple->add_option("--samples", samples);
  tr_couple->add_flag("--check", run_check);

  // ---- rate ---------------------------------------------------------
  auto* rate_cmd = app.add_subcommand("rate", "convergence-rate experiment");
  std::string family = "urn";
  std::int64_t nmin = 32, nmax = 16384;
  int rate_j = 1, rate_l = 1, rate_k = 1;
  rate_cmd->add_option("--family", family, "urn | ub | ln | lbn");
  rate_cmd->add_option("--j", rate_j);
  rate_cmd->add_option("--l", rate_l);
  rate_cmd->add_option("--k", rate_k);
  rate_cmd->add_option("--nmin", nmin);
  rate_cmd->add_option("--nmax", nmax);
  rate_cmd->add_flag("--check", run_check);

  // Global options may appear after the subcommand name.
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
    for (auto* sub : cmd->get_subcommands({})) {
      sub->fallthrough();
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  std::vector<std::string> args;
  try {
    args = merge_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  ctx.argv_echo = args;
  std::vector<const char*> cargs{argv[0]};
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (urn_pmf->parsed()) {
      if (rational && n > 64) throw urn::ResourceLimit("rational mode limited to n <= 64");
      Pmf pmf = rational ? to_double_pmf(urn::exact_pmf<BigRat>(spec_of(b, w, l, n)))
                         : urn::exact_pmf<double>(spec_of(b, w, l, n));
      json j = pmf_json(pmf);
      j["rational"] = rational;
      ctx.write_json("pmf.json", j);
      ctx.write_text("pmf.csv", pmf_csv(pmf));
      if (run_check) check_urn();
      ctx.finish("urn pmf");
    } else if (urn_sample->parsed()) {
      std::map<std::int64_t, std::int64_t> counts;
      RngStream rng(ctx.seed, 0);
      for (std::int64_t i = 0; i < samples; ++i)
        ++counts[urn::simulate(spec_of(b, w, l, n), rng)];
      std::string csv = "white,count\n";
      for (auto [x, c] : counts) csv += std::to_string(x) + "," + std::to_string(c) + "\n";
      ctx.write_text("samples.csv", csv);
      if (run_check) check_urn();
      ctx.finish("urn sample");
    } else if (urn_moments->parsed()) {
      json j;
      auto raw = urn::raw_moments<double>(spec_of(b, w, l, n), static_cast<int>(m_order));
      json rising = json::array(), raws = json::array();
      for (int i = 1; i <= m_order; ++i)
        rising.push_back(urn::rising_moment<double>(spec_of(b, w, l, n), i));
      for (double v : raw) raws.push_back(v);
      j["rising"] = rising;
      j["raw"] = raws;
      if (l >= 1 && b == 1)
        j["mu_n"] = urn::mu_n(static_cast<int>(w), static_cast<int>(l), n);
      ctx.write_json("moments.json", j);
      if (run_check) check_urn();
      ctx.finish("urn moments");
    } else if (urn_identity->parsed() || identity_alias->parsed()) {
      urn::Identity id = urn::identity_from_name(identity_name_arg);
      urn::IdentityParams p;
      p.j = static_cast<int>(ident_j);
      p.l = static_cast<int>(ident_l);
      p.n = ident_n;
      p.r = ident_r;
      p.i = ident_i;
      p.b = b;
      p.w = w;
      BigRat diff = urn::identity_discrepancy<BigRat>(id, p);
      json j;
      j["name"] = urn::identity_name(id);
      j["j"] = p.j;
      j["l"] = p.l;
      j["n"] = p.n;
      j["discrepancy"] = as_double(diff);
      j["exact_zero"] = (diff == BigRat(0));
      ctx.write_json("identity.json", j);
      std::cout << "discrepancy " << as_double(diff) << "\n";
      if (run_check) require(diff == BigRat(0), "identity discrepancy must vanish");
      ctx.finish("urn identity");
    } else if (gg_pdf->parsed() || gg_cdf->parsed()) {
      bool densities = gg_pdf->parsed();
      gg::GGParams prm{gk, gr};
      if (grid_points > 0) {
        std::string csv = densities ? "x,pdf\n" : "x,cdf\n";
        for (std::int64_t i = 1; i <= grid_points; ++i) {
          double x = grid_max * static_cast<double>(i) / static_cast<double>(grid_points);
          csv += fmt(x) + "," +
                 fmt(densities ? gg::density(prm, x) : gg::cdf(prm, x)) + "\n";
        }
        ctx.write_text(densities ? "pdf.csv" : "cdf.csv", csv);
      } else {
        std::cout << fmt(densities ? gg::density(prm, gx) : gg::cdf(prm, gx)) << "\n";
      }
      if (run_check) check_gg(gk, gr);
      ctx.finish(densities ? "gg pdf" : "gg cdf");
    } else if (gg_moment->parsed()) {
      std::cout << fmt(gg::moment({gk, gr}, gl)) << "\n";
      if (run_check) check_gg(gk, gr);
      ctx.finish("gg moment");
    } else if (gg_sample_cmd->parsed()) {
      RngStream rng(ctx.seed, 0);
      std::vector<double> xs(static_cast<std::size_t>(samples));
      for (auto& x : xs) x = gg::sample({gk, gr}, rng);
      std::string csv = "sample\n";
      for (double x : xs) csv += fmt(x) + "\n";
      ctx.write_text("samples.csv", csv);
      auto dk = stats::dk_empirical(xs, {gk, gr}, 0.01);
      json j;
      j["ks_statistic"] = dk.statistic;
      j["dkw_band_99"] = dk.band;
      ctx.write_json("ks.json", j);
      if (run_check) require(dk.statistic < dk.band, "sampler KS self test");
      ctx.finish("gg sample");
    } else if (tree_grow->parsed()) {
      RngStream rng(ctx.seed, 0);
      auto t = tree::grow(static_cast<std::int32_t>(tree_n), rng);
      ctx.write_text("tree.txt", tree::to_string(t) + "\n");
      ctx.write_text("plane.txt", tree::to_string(tree::binary_to_plane(t)) + "\n");
      if (run_check) check_trees(ctx.seed);
      ctx.finish("tree grow");
    } else if (tree_enum->parsed()) {
      auto all = tree::enumerate_decorated(static_cast<std::int32_t>(tree_n));
      std::string csv = "tree,probability\n";
      double prob = as_double(tree::construction_probability(
          static_cast<std::int32_t>(tree_n)));
      for (const auto& t : all) csv += tree::to_string(t) + "," + fmt(prob) + "\n";
      ctx.write_text("enumerate.csv", csv);
      std::cout << all.size() << " trees\n";
      if (run_check) check_trees(ctx.seed);
      ctx.finish("tree enumerate");
    } else if (tree_stat->parsed()) {
      RngStream rng(ctx.seed, 0);
      std::map<std::int64_t, std::int64_t> counts;
      std::vector<std::int32_t> labels;
      for (int i = 1; i <= tree_k; ++i) labels.push_back(i);
      for (std::int64_t i = 0; i < samples; ++i) {
        auto t = tree::grow(static_cast<std::int32_t>(tree_n), rng);
        std::int64_t value = 0;
        if (stat_name == "ub") {
          value = tree::spanning_size(t, labels);
        } else if (stat_name == "vb") {
          std::int32_t v = static_cast<std::int32_t>(rng.below(t.node_count()));
          for (std::int32_t u = v; u >= 0; u = t.nodes[u].parent) ++value;
        } else if (stat_name == "vp") {
          value = tree::plane_spanning_size(tree::binary_to_plane(t), labels);
        } else {
          throw CLI::ValidationError("--stat", "unknown statistic " + stat_name);
        }
        ++counts[value];
      }
      // comparison law assembled exactly from the urn engine
      Pmf expected;
      if (stat_name == "ub") {
        expected = urn::exact_pmf<double>(
            spec_of(0, 2 * tree_k - 1, 1, tree_n - tree_k));
      } else if (stat_name == "vb") {
        expected = tree_n == 1
                       ? Pmf{1, {1.0}}
                       : stats::geometric_difference_positive(
                             urn::exact_pmf<double>(spec_of(0, 1, 1, tree_n - 1)));
      } else {
        expected = stats::binomial_thin(
            urn::exact_pmf<double>(spec_of(0, 2 * tree_k - 1, 1, tree_n - tree_k)),
            2 * tree_k - 1, tree_k);
      }
      std::vector<std::int64_t> cell_counts(
          static_cast<std::size_t>(expected.size()), 0);
      bool in_support = true;
      for (auto [v, c] : counts) {
        if (!expected.contains(v)) in_support = false;
        else cell_counts[static_cast<std::size_t>(v - expected.min_support())] = c;
      }
      json j;
      j["stat"] = stat_name;
      j["n"] = tree_n;
      j["k"] = tree_k;
      j["samples"] = samples;
      json hist = json::object();
      for (auto [v, c] : counts) hist[std::to_string(v)] = c;
      j["counts"] = hist;
      j["expected"] = pmf_json(expected);
      double pvalue = 0.0;
      if (in_support) {
        std::vector<double> probs(expected.mass.begin(), expected.mass.end());
        pvalue = special::chi_square_gof(cell_counts, probs).pvalue;
      }
      j["in_support"] = in_support;
      j["chi_square_pvalue"] = pvalue;
      ctx.write_json("stat.json", j);
      if (run_check) {
        check_trees(ctx.seed);
        require(in_support && pvalue > 0.01, "tree statistic law");
      }
      ctx.finish("tree stat");
    } else if (walk_map->parsed()) {
      RngStream rng(ctx.seed, 0);
      walk::LatticePath p;
      if (walk_kind == "excursion") {
        p = walk::tree_to_excursion(tree::grow(static_cast<std::int32_t>(tree_n), rng));
      } else if (walk_kind == "bridge") {
        p = walk::tree_to_bridge(tree::grow(static_cast<std::int32_t>(tree_n), rng));
      } else if (walk_kind == "meander") {
        p = walk::bridge_to_meander(
            walk::tree_to_bridge(tree::grow(static_cast<std::int32_t>(tree_n), rng)));
      } else if (walk_kind == "walk") {
        auto [t1, t2] = tree::grow_pair(static_cast<std::int32_t>(tree_n), rng);
        p = walk::trees_to_walk(t1, t2, rng.coin() ? 1 : -1);
      } else {
        throw CLI::ValidationError("--kind", "unknown kind " + walk_kind);
      }
      ctx.write_text("path.txt", walk::to_string(p) + "\n");
      json steps = json::array();
      for (auto s : p.steps) steps.push_back(static_cast<int>(s));
      ctx.write_json("path.json", steps);
      if (run_check) check_walks();
      ctx.finish("walk map");
    } else if (walk_enum->parsed()) {
      auto paths = walk::enumerate_paths(walk::path_class_from_name(walk_kind),
                                         static_cast<int>(walk_len));
      std::string csv = "path\n";
      for (const auto& p : paths) csv += walk::to_string(p) + "\n";
      ctx.write_text("paths.csv", csv);
      std::cout << paths.size() << " paths\n";
      if (run_check) check_walks();
      ctx.finish("walk enumerate");
    } else if (walk_stat->parsed()) {
      auto p = walk::path_from_string(path_arg);
      auto st = walk::path_stats(p);
      json j;
      j["length"] = p.length();
      j["origin_visits"] = st.origin_visits;
      j["final_height"] = st.final_height;
      j["bridge"] = p.is(walk::PathClass::bridge);
      j["excursion"] = p.is(walk::PathClass::excursion);
      j["meander"] = p.is(walk::PathClass::meander);
      ctx.write_json("stats.json", j);
      if (run_check) check_walks();
      ctx.finish("walk stat");
    } else if (stein_solve->parsed()) {
      gg::GGParams prm{static_cast<double>(s_k), static_cast<double>(s_r)};
      auto pot = gg::potential(prm);
      auto sol = stein::solve(
          pot, [s_threshold](double x) { return x <= s_threshold ? 1.0 : 0.0; },
          {s_threshold});
      std::string csv = "x,f,residual\n";
      double max_resid = 0.0;
      for (int i = 1; i <= 200; ++i) {
        double x = gg::quantile(prm, i / 201.0);
        double step = 1e-5 * std::max(1.0, x);
        if (std::fabs(x - s_threshold) <= 2.0 * step) continue;
        double resid = sol.residual(x);
        max_resid = std::max(max_resid, resid);
        csv += fmt(x) + "," + fmt(sol.f(x)) + "," + fmt(resid) + "\n";
      }
      ctx.write_text("solution.csv", csv);
      json j;
      j["k"] = s_k;
      j["r"] = s_r;
      j["threshold"] = s_threshold;
      j["max_residual"] = max_resid;
      ctx.write_json("solution.json", j);
      if (run_check) require(max_resid < 1e-8, "solution residual");
      ctx.finish("stein solve");
    } else if (stein_audit->parsed()) {
      auto report = stein::bound_audit(s_k, s_r);
      json families = json::array();
      for (const auto& e : report.entries)
        families.push_back({{"family", e.family},
                            {"max_ratio", e.max_ratio},
                            {"argmax", e.at}});
      json j;
      j["k"] = report.k;
      j["r"] = report.r;
      j["max_residual"] = report.max_residual;
      j["form_agreement"] = report.form_agreement;
      j["families"] = families;
      j["ok"] = report.ok();
      ctx.write_json("audit.json", j);
      std::cout << (report.ok() ? "audit ok" : "audit FAILED") << "\n";
      if (run_check) require(report.ok(), "bound audit");
      ctx.finish("stein audit");
    } else if (stein_bound->parsed()) {
      double v = stein::thm5_bound(s_k, s_r, s_beta, s_ewrm1, s_exceed);
      json j;
      j["k"] = s_k;
      j["r"] = s_r;
      j["beta"] = s_beta;
      j["ewrm1"] = s_ewrm1;
      j["exceedance"] = s_exceed;
      j["bound"] = v;
      ctx.write_json("bound.json", j);
      std::cout << fmt(v) << "\n";
      ctx.finish("stein bound");
    } else if (tr_bias->parsed()) {
      auto base = urn::exact_pmf<double>(spec_of(b, w, l, n));
      auto biased = transform::power_bias(base, tr_r);
      ctx.write_json("bias.json", pmf_json(biased));
      ctx.write_text("bias.csv", pmf_csv(biased));
      if (run_check) {
        auto again = transform::power_bias(transform::power_bias(base, 1), 1);
        auto direct = transform::power_bias(base, 2);
        require(sup_diff(again, direct) < 1e-12, "bias composition");
      }
      ctx.finish("transform bias");
    } else if (tr_eq->parsed()) {
      auto base = urn::exact_pmf<double>(spec_of(b, w, l, n));
      transform::EquilibriumLaw law(base, tr_k, tr_r);
      std::int64_t pts = grid_points > 0 ? grid_points : 200;
      double hi = static_cast<double>(base.max_support());
      std::string csv = "t,cdf\n";
      for (std::int64_t i = 0; i <= pts; ++i) {
        double t = hi * static_cast<double>(i) / static_cast<double>(pts);
        csv += fmt(t) + "," + fmt(law.cdf(t)) + "\n";
      }
      ctx.write_text("equilibrium.csv", csv);
      if (run_check) {
        RngStream rng(ctx.seed, 0);
        double band = special::dkw_band(20000, 0.01);
        require(transform::fixed_point_ks({1, 1}, 20000, rng) < band,
                "fixed point of the transform");
      }
      ctx.finish("transform equilibrium");
    } else if (tr_couple->parsed()) {
      transform::CouplingChain chain(static_cast<int>(tr_j),
                                     static_cast<int>(tr_l), tr_n);
      double beta = tr_beta > 0.0 ? tr_beta : chain.default_beta();
      auto est = transform::coupling_exceedance(
          chain, beta, static_cast<std::size_t>(samples), ctx.seed);
      json j;
      j["n"] = est.n;
      j["beta"] = est.beta;
      j["exceedance"] = est.exceedance;
      j["stderr"] = est.stderr_;
      j["seed"] = est.seed;
      ctx.write_json("couple.json", j);
      std::cout << "exceedance " << fmt(est.exceedance) << "\n";
      if (run_check)
        require(est.exceedance < 0.5, "coupling exceedance sanity");
      ctx.finish("transform couple");
    } else if (rate_cmd->parsed()) {
      auto grid = stats::default_grid(nmin, nmax);
      stats::RateReport rep;
      if (family == "urn") {
        rep = stats::urn_rate(rate_j, rate_l, grid);
      } else {
        rep = stats::stat_rate(stats::stat_family_from_name(family), rate_k, grid);
      }
      ctx.write_text("rate.csv", rate_csv(rep));
      ctx.write_json("rate.json", rate_json(rep));
      std::cout << "slope " << fmt(rep.slope) << " (target " << fmt(rep.theory_slope)
                << ")\n";
      if (run_check) {
        require(std::fabs(rep.slope - rep.theory_slope) <= 0.15, "rate slope");
        auto [lo, hi] = stats::sandwich(rep);
        require(lo > 0.0 && hi / lo < 10.0, "normalized sandwich");
      }
      ctx.finish("rate");
    }
  } catch (const CheckFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const urn::ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
