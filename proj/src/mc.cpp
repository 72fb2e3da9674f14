#include "fringelab/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fringelab/exact.hpp"

namespace fringe {

void ExperimentPlan::validate() const {
  spec.validate();
  if (n_values.empty()) throw std::invalid_argument("ExperimentPlan: n_values must be nonempty");
  if (reps < 2) throw std::invalid_argument("ExperimentPlan: reps must be >= 2");
  if (census_leaves < 1) throw std::invalid_argument("ExperimentPlan: census cutoff must be >= 1");
  if (jobs < 1) throw std::invalid_argument("ExperimentPlan: jobs must be >= 1");
}

uint64_t replicate_seed(uint64_t master_seed, uint64_t replicate_index) {
  return master_seed ^ replicate_index;
}

const RunData& CensusStats::at_n(long n) const {
  for (const RunData& r : runs)
    if (r.n == n) return r;
  throw std::out_of_range("CensusStats: no run with n = " + std::to_string(n));
}

namespace {

struct ReplicateResult {
  std::map<ShapeCode, long> counts;
  std::map<long, long> leaf_sizes;
  long leafcount = 0;
  long size = 0;
};

ReplicateResult one_replicate(const ModelSpec& spec, long n, long census_leaves, long hist_cap,
                              bool cladogram, uint64_t seed) {
  ModelSpec s = spec;
  s.n = n;
  RandomSource rng(seed);
  TreeShape tree = sample(s, rng);
  FringeCensus c = census(tree, census_leaves, hist_cap, cladogram);
  ReplicateResult out;
  out.counts = std::move(c.counts);
  out.leaf_sizes = std::move(c.leaf_size_hist);
  out.leafcount = c.tree_leafcount;
  out.size = c.tree_size;
  return out;
}

}  // namespace

CensusStats run(const ExperimentPlan& plan) {
  plan.validate();
  CensusStats stats;
  stats.plan = plan;
  const int reps = plan.reps;
  for (size_t ni = 0; ni < plan.n_values.size(); ++ni) {
    long n = plan.n_values[ni];
    RunData run_data;
    run_data.n = n;
    run_data.reps = reps;
    run_data.leafcounts.assign(static_cast<size_t>(reps), 0);
    run_data.sizes.assign(static_cast<size_t>(reps), 0);

    std::vector<ReplicateResult> results(static_cast<size_t>(reps));
    uint64_t base_index = static_cast<uint64_t>(ni) * static_cast<uint64_t>(reps);
    auto work = [&](int rep) {
      uint64_t seed = replicate_seed(plan.master_seed, base_index + static_cast<uint64_t>(rep));
      results[static_cast<size_t>(rep)] = one_replicate(plan.spec, n, plan.census_leaves,
                                                        plan.hist_cap, plan.cladogram, seed);
    };
    if (plan.jobs <= 1) {
      for (int rep = 0; rep < reps; ++rep) work(rep);
    } else {
      std::atomic<int> next{0};
      std::vector<std::thread> pool;
      int threads = std::min(plan.jobs, reps);
      pool.reserve(static_cast<size_t>(threads));
      for (int i = 0; i < threads; ++i)
        pool.emplace_back([&] {
          for (;;) {
            int rep = next.fetch_add(1);
            if (rep >= reps) return;
            work(rep);
          }
        });
      for (auto& th : pool) th.join();
    }
    // canonical-order merge: identical output for any thread count
    for (int rep = 0; rep < reps; ++rep) {
      ReplicateResult& r = results[static_cast<size_t>(rep)];
      run_data.leafcounts[static_cast<size_t>(rep)] = r.leafcount;
      run_data.sizes[static_cast<size_t>(rep)] = r.size;
      for (const auto& [code, cnt] : r.counts) {
        auto& series = run_data.shape_counts[code];
        if (series.empty()) series.assign(static_cast<size_t>(reps), 0);
        series[static_cast<size_t>(rep)] = cnt;
      }
      for (const auto& [m, cnt] : r.leaf_sizes) {
        auto& series = run_data.leaf_size_counts[m];
        if (series.empty()) series.assign(static_cast<size_t>(reps), 0);
        series[static_cast<size_t>(rep)] = cnt;
      }
    }
    stats.runs.push_back(std::move(run_data));
  }
  return stats;
}

namespace {

template <typename T>
SeriesStats stats_impl(const std::vector<T>& xs) {
  SeriesStats s;
  s.count = static_cast<long>(xs.size());
  if (xs.empty()) return s;
  // two-pass: exact-order-independent given the canonical series order
  double mean = 0;
  for (T x : xs) mean += static_cast<double>(x);
  mean /= static_cast<double>(xs.size());
  double m2 = 0, m3 = 0, m4 = 0;
  for (T x : xs) {
    double d = static_cast<double>(x) - mean;
    double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  double nd = static_cast<double>(xs.size());
  s.mean = mean;
  s.variance = xs.size() > 1 ? m2 / (nd - 1.0) : 0.0;
  double sigma2 = m2 / nd;
  if (sigma2 > 0) {
    s.skewness = (m3 / nd) / std::pow(sigma2, 1.5);
    s.ex_kurtosis = (m4 / nd) / (sigma2 * sigma2) - 3.0;
  }
  s.std_error = xs.size() > 1 ? std::sqrt(s.variance / nd) : 0.0;
  return s;
}

}  // namespace

SeriesStats series_stats(const std::vector<long>& xs) { return stats_impl(xs); }
SeriesStats series_stats(const std::vector<double>& xs) { return stats_impl(xs); }

std::vector<long> shape_series(const RunData& run, const ShapeCode& code) {
  auto it = run.shape_counts.find(code);
  if (it != run.shape_counts.end()) return it->second;
  return std::vector<long>(static_cast<size_t>(run.reps), 0);
}

namespace {

double z_score(double empirical, double predicted, double std_error) {
  double diff = empirical - predicted;
  if (std_error > 0) return diff / std_error;
  // a constant series either hits the prediction exactly or is infinitely
  // far from it
  if (diff == 0) return 0.0;
  return diff > 0 ? std::numeric_limits<double>::infinity()
                  : -std::numeric_limits<double>::infinity();
}

ComparisonRow scalar_row(const std::string& model, const RunData& rd, const std::string& label,
                         const std::vector<long>& series, double predicted_mean_per_n,
                         double predicted_var_per_n) {
  ComparisonRow row;
  row.model = model;
  row.n = rd.n;
  row.shape_label = label;
  SeriesStats st = series_stats(series);
  double n = static_cast<double>(rd.n);
  row.empirical = st.mean / n;
  row.predicted = predicted_mean_per_n;
  row.z = z_score(st.mean / n, predicted_mean_per_n, st.std_error / n);
  row.has_variance_prediction = true;
  row.var_per_n = st.variance / n;
  row.predicted_var_per_n = predicted_var_per_n;
  row.var_ratio = row.var_per_n / predicted_var_per_n;
  bool ok = std::abs(row.z) <= 4.0 && row.var_ratio >= 0.8 && row.var_ratio <= 1.25;
  row.verdict = ok ? "pass" : "fail";
  return row;
}

}  // namespace

std::vector<ComparisonRow> compare(const CensusStats& stats, const std::vector<TreeShape>& shapes,
                                   const SourceParams* sp) {
  std::vector<ComparisonRow> rows;
  Model model = stats.plan.spec.model;
  const std::string mname = model_name(model);

  for (const RunData& rd : stats.runs) {
    if (model == Model::bst) {
      rows.push_back(
          scalar_row(mname, rd, "leafcount", rd.leafcounts, 1.0 / 3.0, 2.0 / 45.0));
      continue;
    }
    if (model == Model::cbst) {
      rows.push_back(
          scalar_row(mname, rd, "leafcount", rd.leafcounts, 1.0 / 3.0, 2.0 / 45.0));
      rows.push_back(scalar_row(mname, rd, "size", rd.sizes, 2.0 / 3.0, 8.0 / 45.0));
    }
    for (const TreeShape& t : shapes) {
      if (t.leafcount() > stats.plan.census_leaves)
        throw std::out_of_range("compare: shape exceeds census cutoff");
      ComparisonRow row;
      row.model = mname;
      row.n = rd.n;
      row.shape_label = format_shape(t);
      row.shape = stats.plan.cladogram ? cladogram_code(t) : encode(t);
      std::vector<long> counts = shape_series(rd, row.shape);
      // per-replicate fringe probability N_t/|T| (|T| varies for cbst)
      std::vector<double> probs(counts.size());
      for (size_t i = 0; i < counts.size(); ++i)
        probs[i] = static_cast<double>(counts[i]) / static_cast<double>(rd.sizes[i]);
      SeriesStats pst = series_stats(probs);
      LimitValue lim = limit_fringe(model, t, sp);
      double predicted = lim.value;
      if (lim.periodic && lim.periodic->period > 0)
        predicted = lim.periodic->eval(std::log(static_cast<double>(rd.n)));
      row.empirical = pst.mean;
      row.predicted = predicted;
      row.z = z_score(pst.mean, predicted, pst.std_error);
      bool mean_ok = std::abs(row.z) <= 4.0;

      SeriesStats cst = series_stats(counts);
      // the uniform-model variance constant is per node (the tree has
      // 2n-1 nodes for n leaves); the patricia one is per leaf
      double var_divisor = model == Model::uniform_full
                               ? static_cast<double>(2 * rd.n - 1)
                               : static_cast<double>(rd.n);
      row.var_per_n = cst.variance / var_divisor;
      if (model == Model::uniform_full && t.leafcount() >= 2) {
        row.has_variance_prediction = true;
        row.predicted_var_per_n = uniform_count_variance(t).to_double();
      } else if (model == Model::patricia && t.leafcount() >= 2 && sp != nullptr) {
        row.has_variance_prediction = true;
        PeriodicConstant vc = patricia_var_const(t, *sp);
        row.predicted_var_per_n = vc.eval(std::log(static_cast<double>(rd.n)));
      }
      if (row.has_variance_prediction) {
        row.var_ratio = row.var_per_n / row.predicted_var_per_n;
        bool var_ok = row.var_ratio >= 0.8 && row.var_ratio <= 1.25;
        row.verdict = (mean_ok && var_ok) ? "pass" : "fail";
      } else {
        // no formula in the source theory (cbst/cb variances are open)
        row.verdict = mean_ok ? "pass" : "fail";
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

CltRow clt_diagnostic(const RunData& run, const ShapeCode& shape) {
  CltRow row;
  if (run.reps < 200) {
    row.refused = true;
    row.note = "need at least 200 replicates";
    return row;
  }
  std::vector<long> series = shape_series(run, shape);
  std::vector<long> distinct(series);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) {
    row.refused = true;
    row.note = "counts near-constant";
    return row;
  }
  SeriesStats st = series_stats(series);
  row.skewness = st.skewness;
  row.ex_kurtosis = st.ex_kurtosis;
  row.pass = std::abs(st.skewness) <= 0.3 && std::abs(st.ex_kurtosis) <= 0.6;
  return row;
}

std::vector<OscPoint> oscillation_scan(const TreeShape& t, double p,
                                       const std::vector<long>& n_grid, int reps,
                                       uint64_t master_seed, int jobs) {
  SourceParams sp = SourceParams::make(p);
  if (!sp.per.periodic)
    throw std::invalid_argument("oscillation_scan: p is not detected as periodic");
  PeriodicConstant mean = patricia_mean_const(t, sp);
  ExperimentPlan plan;
  plan.spec.model = Model::patricia;
  plan.spec.p = p;
  plan.spec.n = n_grid.front();
  plan.n_values = n_grid;
  plan.reps = reps;
  plan.census_leaves = std::max<long>(t.leafcount(), 2);
  plan.master_seed = master_seed;
  plan.jobs = jobs;
  CensusStats stats = run(plan);
  ShapeCode code = encode(t);
  std::vector<OscPoint> out;
  for (const RunData& rd : stats.runs) {
    std::vector<long> counts = shape_series(rd, code);
    SeriesStats st = series_stats(counts);
    OscPoint pt;
    pt.n = rd.n;
    double logn = std::log(static_cast<double>(rd.n));
    pt.phase = std::fmod(logn, sp.per.d);
    pt.empirical = st.mean / static_cast<double>(rd.n);
    pt.predicted = mean.eval(logn);
    pt.std_error = st.std_error / static_cast<double>(rd.n);
    out.push_back(pt);
  }
  return out;
}

BigRational oracle_bst_expectation(const TreeShape& t, long n, bool compressed) {
  if (n < 1 || n > 10) throw std::invalid_argument("oracle_bst_expectation: need 1 <= n <= 10");
  long m = t.leafcount();
  BigRational expectation(0);
  for (const ShapeProb& sp : bst_shape_distribution(n)) {
    TreeShape derived = compressed ? compress(sp.shape) : extend(sp.shape);
    if (derived.leafcount() < m) continue;
    FringeCensus c = census(derived, std::max<long>(m, 1));
    expectation += sp.prob * BigRational(c.count_of(t));
  }
  return expectation;
}

namespace {

// number of (tree with j leaves, marked fringe copy) pairs; base = value at
// j = m (1 for a single shape, Catalan(m-1) for "any shape with m leaves")
std::vector<BigRational> occurrence_dp(long m, long n, const BigRational& base) {
  std::vector<BigRational> cat(static_cast<size_t>(n) + 1, BigRational(0));
  for (long j = 1; j <= n; ++j) cat[static_cast<size_t>(j)] = catalan(j - 1);
  std::vector<BigRational> d(static_cast<size_t>(n) + 1, BigRational(0));
  for (long j = m; j <= n; ++j) {
    BigRational total = (j == m) ? base : BigRational(0);
    for (long i = 1; i <= j - 1; ++i) {
      total += d[static_cast<size_t>(i)] * cat[static_cast<size_t>(j - i)];
      total += cat[static_cast<size_t>(i)] * d[static_cast<size_t>(j - i)];
    }
    d[static_cast<size_t>(j)] = total;
  }
  return d;
}

}  // namespace

BigRational oracle_uniform_expectation(const TreeShape& t, long n) {
  if (n < 1 || n > 14) throw std::invalid_argument("oracle_uniform_expectation: need 1 <= n <= 14");
  if (!t.is_full()) throw std::invalid_argument("oracle_uniform_expectation: t must be full");
  long m = t.leafcount();
  if (m > n) return BigRational(0);
  std::vector<BigRational> d = occurrence_dp(m, n, BigRational(1));
  return d[static_cast<size_t>(n)] / catalan(n - 1);
}

BigRational oracle_uniform_leafsize_expectation(long m, long n) {
  if (n < 1 || n > 14)
    throw std::invalid_argument("oracle_uniform_leafsize_expectation: need 1 <= n <= 14");
  if (m < 1 || m > n) return BigRational(0);
  std::vector<BigRational> d = occurrence_dp(m, n, catalan(m - 1));
  return d[static_cast<size_t>(n)] / catalan(n - 1);
}

}  // namespace fringe
