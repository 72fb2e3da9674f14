// Command-line front end: samplers, exact constants, summary tables, and the
// Monte Carlo comparison lab.
//
// Exit codes: 0 ok, 1 comparison verdict failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fringelab/exact.hpp"
#include "fringelab/mc.hpp"
#include "fringelab/report.hpp"

namespace {

using namespace fringe;

struct ProbArg {
  double value = 0.5;
  std::optional<BigRational> exact;
};

ProbArg parse_prob(const std::string& text) {
  ProbArg out;
  if (text.find('/') != std::string::npos || text.find('.') == std::string::npos) {
    out.exact = BigRational(text);
    out.value = out.exact->to_double();
  } else {
    out.value = std::stod(text);
  }
  if (!(out.value > 0.0 && out.value < 1.0))
    throw CLI::ValidationError("--p", "probability must lie in (0,1)");
  return out;
}

std::vector<long> parse_grid(const std::string& text, int points_per_octave) {
  int lo = 0, hi = 0;
  if (std::sscanf(text.c_str(), "2^%d..2^%d", &lo, &hi) != 2 || lo < 1 || hi < lo)
    throw CLI::ValidationError("--grid", "expected a range like 2^10..2^20");
  std::vector<long> grid;
  for (int j = 0; j <= (hi - lo) * points_per_octave; ++j) {
    double e = lo + static_cast<double>(j) / points_per_octave;
    long n = std::lround(std::pow(2.0, e));
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  return grid;
}

void log_config(const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) std::cerr << "# " << k << " = " << v << "\n";
}

// flat key=value config file ('#' comments); returned as --key=value tokens
std::vector<std::string> load_config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw CLI::ValidationError("--config", "cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config",
                                 path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw CLI::ValidationError("--config",
                                 path + ":" + std::to_string(lineno) + ": empty key");
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

// config entries go in front of the explicit flags; with TakeLast semantics
// on scalar options the command line wins
std::vector<std::string> splice_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 1; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
    if (path.empty()) continue;
    std::vector<std::string> extra = load_config_args(path);
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    break;
  }
  return args;
}

void make_scalars_overridable(CLI::App* cmd) {
  for (CLI::Option* opt : cmd->get_options())
    if (opt->get_expected() == 1 && !opt->get_positional())
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

std::string format_tree_output(const TreeShape& t, const std::string& format) {
  if (format == "code") return encode(t).bits;
  return format_shape(t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fringe-tree statistics of random full binary trees"};
  app.require_subcommand(1);

  // ---- sample ----
  auto* sample_cmd = app.add_subcommand("sample", "draw one random tree");
  std::string s_model = "uniform", s_p = "1/2", s_format = "shape";
  long s_n = 0;  // 0 = not provided (flag or config must set it)
  double s_beta = -1.0;
  uint64_t s_seed = 1;
  sample_cmd->add_option("--model", s_model, "trie|patricia|bst|ebst|cbst|beta|cb|uniform");
  sample_cmd->add_option("--n", s_n, "leaf count (nodes for bst/ebst/cbst)");
  sample_cmd->add_option("--p", s_p, "bit probability for trie/patricia");
  sample_cmd->add_option("--beta", s_beta, "beta-splitting parameter (> -2)");
  sample_cmd->add_option("--seed", s_seed, "random seed");
  sample_cmd->add_option("--format", s_format, "shape|code")
      ->check(CLI::IsMember({"shape", "code"}));
  std::string s_config;
  sample_cmd->add_option("--config", s_config, "flat key=value config file");

  // ---- constants ----
  auto* const_cmd = app.add_subcommand("constants", "limiting fringe constants for one shape");
  std::string c_model = "cbst", c_tree, c_p = "1/2";
  int c_fourier = 8;
  long c_maxden = 1000000, c_period_a = 0, c_period_b = 0;
  const_cmd->add_option("--model", c_model, "patricia|ebst|cbst|cb|uniform");
  const_cmd->add_option("--tree", c_tree, "shape, e.g. \"(*,*)\"");
  const_cmd->add_option("--p", c_p, "patricia bit probability (fraction => exact pi_t)");
  const_cmd->add_option("--fourier-terms", c_fourier, "Fourier truncation K");
  const_cmd->add_option("--max-denominator", c_maxden, "period detection cap");
  const_cmd->add_option("--period-a", c_period_a, "explicit period: log p/log q = a/b");
  const_cmd->add_option("--period-b", c_period_b, "explicit period: log p/log q = a/b");
  std::string c_config;
  const_cmd->add_option("--config", c_config, "flat key=value config file");

  // ---- tables ----
  auto* tables_cmd = app.add_subcommand("tables", "summary tables for the five models");
  bool t_cladogram = false;
  std::string t_format = "text";
  tables_cmd->add_flag("--cladogram", t_cladogram, "orientation-forgetting counts");
  tables_cmd->add_option("--format", t_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  std::string t_config;
  tables_cmd->add_option("--config", t_config, "flat key=value config file");

  // ---- census ----
  auto* census_cmd = app.add_subcommand("census", "replicated fringe censuses");
  std::string m_model = "uniform", m_p = "1/2", m_format = "csv";
  long m_n = 1000, m_maxleaves = 6;
  double m_beta = -1.0;
  int m_reps = 50, m_jobs = 1;
  uint64_t m_seed = 1;
  bool m_cladogram = false;
  census_cmd->add_option("--model", m_model);
  census_cmd->add_option("--n", m_n);
  census_cmd->add_option("--reps", m_reps);
  census_cmd->add_option("--max-leaves", m_maxleaves, "census cutoff K");
  census_cmd->add_option("--p", m_p);
  census_cmd->add_option("--beta", m_beta);
  census_cmd->add_option("--seed", m_seed);
  census_cmd->add_option("--jobs", m_jobs);
  census_cmd->add_flag("--cladogram", m_cladogram);
  census_cmd->add_option("--format", m_format)->check(CLI::IsMember({"csv", "json"}));
  std::string m_config;
  census_cmd->add_option("--config", m_config, "flat key=value config file");

  // ---- compare ----
  auto* cmp_cmd = app.add_subcommand("compare", "Monte Carlo vs limiting predictions");
  std::string x_model = "uniform", x_p = "1/2", x_format = "csv";
  std::vector<std::string> x_trees;
  long x_n = 10000, x_maxleaves = 6;
  double x_beta = -1.0;
  int x_reps = 500, x_jobs = 1;
  uint64_t x_seed = 1;
  cmp_cmd->add_option("--model", x_model, "patricia|ebst|cbst|cb|uniform|bst");
  cmp_cmd->add_option("--tree", x_trees, "shapes to check (default t2, t3, t4c)");
  cmp_cmd->add_option("--n", x_n);
  cmp_cmd->add_option("--reps", x_reps);
  cmp_cmd->add_option("--max-leaves", x_maxleaves);
  cmp_cmd->add_option("--p", x_p);
  cmp_cmd->add_option("--beta", x_beta);
  cmp_cmd->add_option("--seed", x_seed);
  cmp_cmd->add_option("--jobs", x_jobs);
  cmp_cmd->add_option("--format", x_format)->check(CLI::IsMember({"csv", "json"}));
  std::string x_config;
  cmp_cmd->add_option("--config", x_config, "flat key=value config file");

  // ---- oscillate ----
  auto* osc_cmd = app.add_subcommand("oscillate", "phase-folded oscillation scan (patricia)");
  std::string o_tree = "(*,*)", o_p = "1/2", o_grid = "2^10..2^20", o_format = "csv";
  int o_points = 3, o_reps = 30, o_jobs = 1;
  uint64_t o_seed = 1;
  osc_cmd->add_option("--tree", o_tree);
  osc_cmd->add_option("--p", o_p);
  osc_cmd->add_option("--grid", o_grid, "geometric grid, e.g. 2^10..2^20");
  osc_cmd->add_option("--points-per-octave", o_points);
  osc_cmd->add_option("--reps", o_reps);
  osc_cmd->add_option("--seed", o_seed);
  osc_cmd->add_option("--jobs", o_jobs);
  osc_cmd->add_option("--format", o_format)->check(CLI::IsMember({"csv", "json"}));
  std::string o_config;
  osc_cmd->add_option("--config", o_config, "flat key=value config file");

  for (CLI::App* cmd : {sample_cmd, const_cmd, tables_cmd, census_cmd, cmp_cmd, osc_cmd})
    make_scalars_overridable(cmd);

  try {
    std::vector<std::string> args = splice_config(argc, argv);
    std::reverse(args.begin(), args.end());  // parse(vector) takes reversed args
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(sample_cmd)) {
      if (s_n < 1) throw CLI::ValidationError("--n", "a positive size is required");
      ProbArg p = parse_prob(s_p);
      ModelSpec spec;
      spec.model = parse_model(s_model);
      spec.n = s_n;
      spec.p = p.value;
      spec.p_exact = p.exact;
      spec.beta = (s_model == "cb") ? -1.0 : s_beta;
      spec.validate();
      log_config({{"model", s_model},
                  {"n", std::to_string(s_n)},
                  {"p", s_p},
                  {"beta", std::to_string(spec.beta)},
                  {"seed", std::to_string(s_seed)}});
      RandomSource rng(s_seed);
      std::cout << format_tree_output(sample(spec, rng), s_format) << "\n";
      return 0;
    }

    if (app.got_subcommand(const_cmd)) {
      if (c_tree.empty()) throw CLI::ValidationError("--tree", "a shape is required");
      Model model = parse_model(c_model);
      if (model == Model::trie || model == Model::bst)
        throw std::invalid_argument("constants: model must be one of the full-tree models");
      TreeShape tree = parse_shape(c_tree);
      ProbArg p = parse_prob(c_p);
      SourceParams sp = (c_period_a > 0 && c_period_b > 0)
                            ? SourceParams::with_period(p.value, c_period_a, c_period_b)
                            : SourceParams::make(p.value, c_maxden);
      log_config({{"model", c_model}, {"tree", c_tree}, {"p", c_p}});
      std::cout << constants_json(model, tree, &sp, c_fourier,
                                  p.exact ? &*p.exact : nullptr);
      return 0;
    }

    if (app.got_subcommand(tables_cmd)) {
      SummaryTables tables = make_summary_tables(t_cladogram);
      std::cout << (t_format == "json" ? summary_tables_json(tables)
                                       : format_summary_tables_text(tables));
      return 0;
    }

    if (app.got_subcommand(census_cmd)) {
      ProbArg p = parse_prob(m_p);
      ExperimentPlan plan;
      plan.spec.model = parse_model(m_model);
      plan.spec.p = p.value;
      plan.spec.beta = (m_model == "cb") ? -1.0 : m_beta;
      plan.spec.n = m_n;
      plan.n_values = {m_n};
      plan.reps = m_reps;
      plan.census_leaves = m_maxleaves;
      plan.hist_cap = m_n;  // every fringe leaf size lands in the histogram
      plan.master_seed = m_seed;
      plan.cladogram = m_cladogram;
      plan.jobs = m_jobs;
      log_config({{"model", m_model},
                  {"n", std::to_string(m_n)},
                  {"reps", std::to_string(m_reps)},
                  {"max-leaves", std::to_string(m_maxleaves)},
                  {"seed", std::to_string(m_seed)}});
      CensusStats stats = run(plan);
      std::cout << (m_format == "json" ? census_json(stats) : census_csv(stats));
      return 0;
    }

    if (app.got_subcommand(cmp_cmd)) {
      ProbArg p = parse_prob(x_p);
      ExperimentPlan plan;
      plan.spec.model = parse_model(x_model);
      plan.spec.p = p.value;
      plan.spec.beta = (x_model == "cb") ? -1.0 : x_beta;
      plan.spec.n = x_n;
      plan.n_values = {x_n};
      plan.reps = x_reps;
      plan.master_seed = x_seed;
      plan.jobs = x_jobs;
      std::vector<TreeShape> shapes;
      if (x_trees.empty() && plan.spec.model != Model::bst)
        x_trees = {"(*,*)", "(*,(*,*))", "((*,*),(*,*))"};
      long needed = 1;
      for (const std::string& s : x_trees) {
        shapes.push_back(parse_shape(s));
        needed = std::max(needed, shapes.back().leafcount());
      }
      plan.census_leaves = std::max(x_maxleaves, needed);
      log_config({{"model", x_model},
                  {"n", std::to_string(x_n)},
                  {"reps", std::to_string(x_reps)},
                  {"p", x_p},
                  {"seed", std::to_string(x_seed)}});
      CensusStats stats = run(plan);
      SourceParams sp = SourceParams::make(p.value);
      std::vector<ComparisonRow> rows = compare(stats, shapes, &sp);
      std::cout << (x_format == "json" ? comparison_json(rows) : comparison_csv(rows));
      for (const ComparisonRow& row : rows)
        if (row.verdict == "fail") return 1;
      return 0;
    }

    if (app.got_subcommand(osc_cmd)) {
      ProbArg p = parse_prob(o_p);
      TreeShape tree = parse_shape(o_tree);
      std::vector<long> grid = parse_grid(o_grid, o_points);
      SourceParams osp = SourceParams::make(p.value);
      if (osp.per.periodic &&
          std::log(static_cast<double>(grid.back()) / static_cast<double>(grid.front())) <
              3.0 * osp.per.d)
        std::cerr << "# warning: grid spans fewer than 3 periods\n";
      log_config({{"tree", o_tree},
                  {"p", o_p},
                  {"grid", o_grid},
                  {"reps", std::to_string(o_reps)},
                  {"seed", std::to_string(o_seed)}});
      std::vector<OscPoint> pts = oscillation_scan(tree, p.value, grid, o_reps, o_seed, o_jobs);
      std::cout << (o_format == "json" ? oscillation_json(pts) : oscillation_csv(pts));
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeParseError& e) {
    std::cerr << "error: bad shape: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
