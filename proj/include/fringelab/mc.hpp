#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fringelab/asymptotics.hpp"
#include "fringelab/model.hpp"
#include "fringelab/samplers.hpp"
#include "fringelab/tree.hpp"

namespace fringe {

struct ExperimentPlan {
  ModelSpec spec;
  std::vector<long> n_values;
  int reps = 500;
  long census_leaves = 6;  // census cutoff K
  long hist_cap = -1;      // leaf-size histogram cap; -1 means census_leaves
  uint64_t master_seed = 1;
  bool cladogram = false;
  int jobs = 1;

  void validate() const;
};

/// Raw per-replicate observations for one n. Integer counts are kept whole
/// so aggregation order cannot change any result; statistics are computed
/// afterwards in canonical order.
struct RunData {
  long n = 0;
  int reps = 0;
  std::map<ShapeCode, std::vector<long>> shape_counts;  // rep-indexed, zeros kept
  std::map<long, std::vector<long>> leaf_size_counts;   // N_m series
  std::vector<long> leafcounts;
  std::vector<long> sizes;
};

struct CensusStats {
  ExperimentPlan plan;
  std::vector<RunData> runs;
  const RunData& at_n(long n) const;
};

CensusStats run(const ExperimentPlan& plan);

/// Seed for one replicate, derived from the master seed and a global
/// replicate index.
uint64_t replicate_seed(uint64_t master_seed, uint64_t replicate_index);

struct SeriesStats {
  long count = 0;
  double mean = 0, variance = 0;       // sample variance (n-1)
  double skewness = 0, ex_kurtosis = 0;
  double std_error = 0;  // of the mean
};

SeriesStats series_stats(const std::vector<long>& xs);
SeriesStats series_stats(const std::vector<double>& xs);

/// Per-replicate series N_t for a shape (zeros when the shape never
/// occurred in a replicate).
std::vector<long> shape_series(const RunData& run, const ShapeCode& code);

struct ComparisonRow {
  std::string model;
  long n = 0;
  std::string shape_label;  // shape text, or "leafcount"/"size"
  ShapeCode shape;
  double empirical = 0;  // mean fringe probability (or mean/n for scalars)
  double predicted = 0;
  double z = 0;
  bool has_variance_prediction = false;
  // count-variance density in the units of the model's formula: per node
  // for the uniform model, per leaf for patricia, per n for the scalars
  double var_per_n = 0;
  double predicted_var_per_n = 0;
  double var_ratio = 0;
  std::string verdict;  // "pass" | "fail" | "info"
};

/// Compares empirical fringe probabilities (and variance densities where a
/// formula exists) against the limiting predictions. Patricia predictions
/// are the periodic functions evaluated at log n. BST runs compare the
/// leaf count, compressed-BST runs additionally the tree size.
std::vector<ComparisonRow> compare(const CensusStats& stats,
                                   const std::vector<TreeShape>& shapes,
                                   const SourceParams* sp = nullptr);

struct CltRow {
  bool refused = false;
  std::string note;
  double skewness = 0, ex_kurtosis = 0;
  bool pass = false;
};

/// Moment-based normality proxy: |skew| <= 0.3 and |excess kurtosis| <= 0.6.
/// Refuses degenerate series (near-constant counts) and reps < 200.
CltRow clt_diagnostic(const RunData& run, const ShapeCode& shape);

struct OscPoint {
  long n = 0;
  double phase = 0;      // log n mod d
  double empirical = 0;  // mean N_t / n
  double predicted = 0;  // H^{-1} psi_E(log n)
  double std_error = 0;
};

std::vector<OscPoint> oscillation_scan(const TreeShape& t, double p,
                                       const std::vector<long>& n_grid, int reps,
                                       uint64_t master_seed, int jobs = 1);

/// Exact E N_t over the BST-derived models at small n, by summing the full
/// shape distribution: E N_t(compress(BST_n)) or E N_t(extend(BST_n)).
BigRational oracle_bst_expectation(const TreeShape& t, long n, bool compressed);

/// Exact E N_t(U_n) for the uniform full binary tree via the occurrence
/// counting recurrence; n <= 14.
BigRational oracle_uniform_expectation(const TreeShape& t, long n);
/// Exact E N_m(U_n), same recurrence with all shapes of m leaves admitted.
BigRational oracle_uniform_leafsize_expectation(long m, long n);

}  // namespace fringe
