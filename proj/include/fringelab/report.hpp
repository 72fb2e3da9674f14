#pragma once

#include <array>
#include <string>
#include <vector>

#include "fringelab/mc.hpp"

namespace fringe {

/// The four reference shapes used throughout the summary tables.
inline const char* kTableShapeTexts[4] = {"(*,*)", "(*,(*,*))", "(*,(*,(*,*)))",
                                          "((*,*),(*,*))"};
inline const char* kTableShapeNames[4] = {"t2", "t3", "t4a", "t4c"};

struct SummaryTableRow {
  std::string model_label;
  std::string flag;  // e.g. "p = 1/2, constant term only"
  std::array<double, 4> values{};
};

struct SummaryTables {
  std::vector<SummaryTableRow> fringe;  // limits of P(T* = t)
  std::vector<SummaryTableRow> qsin;    // limits of q(T; t)
  std::array<double, 5> ratio_t4c_over_t4a{};  // one per model, row order
};

/// Limits for the five models x four reference shapes; cladogram mode
/// multiplies the t3 column by 2 and the t4a column by 4 (orientation
/// counts), matching the unoriented reading of the trees.
SummaryTables make_summary_tables(bool cladogram = false);

std::string format_summary_tables_text(const SummaryTables& t);
std::string summary_tables_json(const SummaryTables& t);

/// compare output in the documented schema
/// model,n,shape_code,stat,value,predicted,z
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_json(const std::vector<ComparisonRow>& rows);

/// census output: model,n,rep,shape_code,count (one row per replicate and
/// shape)
std::string census_csv(const CensusStats& stats);
std::string census_json(const CensusStats& stats);

/// oscillation output: n,log_n_mod_d,empirical,predicted,stderr
std::string oscillation_csv(const std::vector<OscPoint>& pts);
std::string oscillation_json(const std::vector<OscPoint>& pts);

/// JSON record for one model/tree constant:
/// {model, shape, constant, fourier: [{k, re, im}], period, ...}.
/// p_exact, when set, adds an exact rational pi_t field (patricia).
std::string constants_json(Model model, const TreeShape& tree, const SourceParams* sp,
                           int fourier_terms, const BigRational* p_exact = nullptr);

}  // namespace fringe
