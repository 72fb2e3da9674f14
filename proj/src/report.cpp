#include "fringelab/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fringe {

namespace {

using nlohmann::json;

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

struct TableModel {
  Model model;
  std::string label;
  std::string flag;
};

const std::vector<TableModel>& table_models() {
  static const std::vector<TableModel> models = {
      {Model::patricia, "patricia", "p = 1/2, constant term only"},
      {Model::ebst, "ebst", ""},
      {Model::cbst, "cbst", ""},
      {Model::beta_split, "cb", ""},
      {Model::uniform_full, "uniform", ""},
  };
  return models;
}

}  // namespace

SummaryTables make_summary_tables(bool cladogram) {
  SummaryTables tables;
  SourceParams sp = SourceParams::make(0.5);
  std::array<TreeShape, 4> shapes = {
      parse_shape(kTableShapeTexts[0]), parse_shape(kTableShapeTexts[1]),
      parse_shape(kTableShapeTexts[2]), parse_shape(kTableShapeTexts[3])};
  // orientation counts when mirror images are identified (t2 and t4c are
  // their own mirrors)
  std::array<double, 4> orientation = {1.0, cladogram ? 2.0 : 1.0, cladogram ? 4.0 : 1.0, 1.0};
  size_t mi = 0;
  for (const TableModel& tm : table_models()) {
    SummaryTableRow fr, qr;
    fr.model_label = qr.model_label = tm.label;
    fr.flag = qr.flag = tm.flag;
    for (size_t i = 0; i < shapes.size(); ++i) {
      fr.values[i] = limit_fringe(tm.model, shapes[i], &sp).value * orientation[i];
      qr.values[i] = limit_qsin(tm.model, shapes[i], &sp).value * orientation[i];
    }
    tables.ratio_t4c_over_t4a[mi++] = fr.values[3] / fr.values[2];
    tables.fringe.push_back(std::move(fr));
    tables.qsin.push_back(std::move(qr));
  }
  return tables;
}

std::string format_summary_tables_text(const SummaryTables& t) {
  std::ostringstream os;
  auto emit = [&os](const std::vector<SummaryTableRow>& rows, const std::string& title) {
    os << title << "\n";
    os << "model      t2      t3      t4a     t4c\n";
    for (const SummaryTableRow& r : rows) {
      os << r.model_label;
      for (size_t i = r.model_label.size(); i < 11; ++i) os << ' ';
      for (size_t i = 0; i < 4; ++i) os << fixed4(r.values[i]) << (i + 1 < 4 ? "  " : "");
      if (!r.flag.empty()) os << "   (" << r.flag << ")";
      os << "\n";
    }
  };
  emit(t.fringe, "Limits of P(T* = t), fringe probability");
  os << "\n";
  emit(t.qsin, "Limits of q(T; t), extended fringe probability");
  os << "\nratio t4c/t4a by model:";
  for (size_t i = 0; i < t.ratio_t4c_over_t4a.size(); ++i)
    os << " " << t.fringe[i].model_label << "=" << fixed4(t.ratio_t4c_over_t4a[i]);
  os << "\n";
  return os.str();
}

std::string summary_tables_json(const SummaryTables& t) {
  json j;
  auto rows_to_json = [](const std::vector<SummaryTableRow>& rows) {
    json arr = json::array();
    for (const SummaryTableRow& r : rows) {
      json row;
      row["model"] = r.model_label;
      if (!r.flag.empty()) row["flag"] = r.flag;
      for (size_t i = 0; i < 4; ++i) row[kTableShapeNames[i]] = r.values[i];
      arr.push_back(row);
    }
    return arr;
  };
  j["fringe"] = rows_to_json(t.fringe);
  j["qsin"] = rows_to_json(t.qsin);
  json ratios;
  for (size_t i = 0; i < t.ratio_t4c_over_t4a.size(); ++i)
    ratios[t.fringe[i].model_label] = t.ratio_t4c_over_t4a[i];
  j["ratio_t4c_over_t4a"] = ratios;
  return j.dump(2) + "\n";
}

namespace {

void append_row(std::ostringstream& os, const std::string& model, long n,
                const std::string& code, const std::string& stat, double value,
                const std::string& predicted, const std::string& z) {
  os << model << "," << n << "," << code << "," << stat << "," << fixed(value, 12) << ","
     << predicted << "," << z << "\n";
}

}  // namespace

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "model,n,shape_code,stat,value,predicted,z\n";
  for (const ComparisonRow& r : rows) {
    std::string code = r.shape.bits.empty() ? r.shape_label : r.shape.bits;
    std::string stat = r.shape.bits.empty() ? r.shape_label + "_per_n" : "fringe_prob";
    append_row(os, r.model, r.n, code, stat, r.empirical, fixed(r.predicted, 12),
               fixed(r.z, 6));
    if (r.has_variance_prediction)
      append_row(os, r.model, r.n, code, "var_per_n", r.var_per_n,
                 fixed(r.predicted_var_per_n, 12), "");
    else
      append_row(os, r.model, r.n, code, "var_per_n", r.var_per_n, "", "");
    append_row(os, r.model, r.n, code, "verdict", r.verdict == "pass" ? 1.0 : 0.0, "", "");
  }
  return os.str();
}

std::string comparison_json(const std::vector<ComparisonRow>& rows) {
  json arr = json::array();
  for (const ComparisonRow& r : rows) {
    json row;
    row["model"] = r.model;
    row["n"] = r.n;
    row["shape_code"] = r.shape.bits.empty() ? r.shape_label : r.shape.bits;
    row["shape"] = r.shape_label;
    row["stat"] = r.shape.bits.empty() ? r.shape_label + "_per_n" : "fringe_prob";
    row["value"] = r.empirical;
    row["predicted"] = r.predicted;
    row["z"] = r.z;
    row["var_per_n"] = r.var_per_n;
    if (r.has_variance_prediction) row["predicted_var_per_n"] = r.predicted_var_per_n;
    row["verdict"] = r.verdict;
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

std::string census_csv(const CensusStats& stats) {
  std::ostringstream os;
  os << "model,n,rep,kind,key,count\n";
  const std::string mname = model_name(stats.plan.spec.model);
  for (const RunData& rd : stats.runs) {
    for (const auto& [code, series] : rd.shape_counts)
      for (int rep = 0; rep < rd.reps; ++rep)
        os << mname << "," << rd.n << "," << rep << ",shape," << code.bits << ","
           << series[static_cast<size_t>(rep)] << "\n";
    for (const auto& [m, series] : rd.leaf_size_counts)
      for (int rep = 0; rep < rd.reps; ++rep)
        os << mname << "," << rd.n << "," << rep << ",leaf_size," << m << ","
           << series[static_cast<size_t>(rep)] << "\n";
  }
  return os.str();
}

std::string census_json(const CensusStats& stats) {
  json out;
  out["model"] = model_name(stats.plan.spec.model);
  out["reps"] = stats.plan.reps;
  out["max_leaves"] = stats.plan.census_leaves;
  out["seed"] = stats.plan.master_seed;
  json runs = json::array();
  for (const RunData& rd : stats.runs) {
    json run_j;
    run_j["n"] = rd.n;
    json shapes;
    for (const auto& [code, series] : rd.shape_counts) shapes[code.bits] = series;
    run_j["counts"] = shapes;
    json hist;
    for (const auto& [m, series] : rd.leaf_size_counts) hist[std::to_string(m)] = series;
    run_j["leaf_size_counts"] = hist;
    run_j["leafcounts"] = rd.leafcounts;
    run_j["sizes"] = rd.sizes;
    runs.push_back(run_j);
  }
  out["runs"] = runs;
  return out.dump(2) + "\n";
}

std::string oscillation_csv(const std::vector<OscPoint>& pts) {
  std::ostringstream os;
  os << "n,log_n_mod_d,empirical,predicted,stderr\n";
  for (const OscPoint& p : pts)
    os << p.n << "," << fixed(p.phase, 12) << "," << fixed(p.empirical, 12) << ","
       << fixed(p.predicted, 12) << "," << fixed(p.std_error, 6) << "\n";
  return os.str();
}

std::string oscillation_json(const std::vector<OscPoint>& pts) {
  json arr = json::array();
  for (const OscPoint& p : pts) {
    json row;
    row["n"] = p.n;
    row["log_n_mod_d"] = p.phase;
    row["empirical"] = p.empirical;
    row["predicted"] = p.predicted;
    row["stderr"] = p.std_error;
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

std::string constants_json(Model model, const TreeShape& tree, const SourceParams* sp,
                           int fourier_terms, const BigRational* p_exact) {
  json j;
  j["model"] = model_name(model);
  j["shape"] = format_shape(tree);
  j["shape_code"] = encode(tree).bits;
  LimitValue fr = limit_fringe(model, tree, sp);
  LimitValue qs = limit_qsin(model, tree, sp);
  j["constant"] = fr.value;
  j["qsin_constant"] = qs.value;
  if (!fr.symbolic.empty()) j["symbolic"] = fr.symbolic;
  if (!qs.symbolic.empty()) j["qsin_symbolic"] = qs.symbolic;
  j["period"] = 0.0;
  j["fourier"] = json::array();
  if (model == Model::patricia && sp != nullptr && !tree.is_leaf()) {
    PeriodicConstant fringe_fn =
        patricia_mean_const(tree, *sp, fourier_terms).scaled(0.5);
    j["constant"] = fringe_fn.constant;
    j["pi_t"] = pi_t(tree, sp->p);
    if (p_exact != nullptr) j["pi_t_exact"] = pi_t(tree, *p_exact).to_string();
    j["periodic"] = sp->per.periodic;
    if (sp->per.periodic) {
      j["period"] = sp->per.d;
      j["period_a"] = sp->per.a;
      j["period_b"] = sp->per.b;
      json fourier = json::array();
      for (size_t k = 0; k < fringe_fn.coef.size(); ++k) {
        json c;
        c["k"] = k + 1;
        c["re"] = fringe_fn.coef[k].real();
        c["im"] = fringe_fn.coef[k].imag();
        fourier.push_back(c);
      }
      j["fourier"] = fourier;
      j["fourier_tail_bound"] = fringe_fn.tail_bound;
    }
    PeriodicConstant var = patricia_var_const(tree, *sp, fourier_terms);
    j["var_per_n_constant"] = var.constant;
  }
  return j.dump(2) + "\n";
}

}  // namespace fringe
