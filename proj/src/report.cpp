#include "circext/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace circext::report {

namespace {

Json number(double v) { return json_number(v); }

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json point(const GridSpec& grid, const std::vector<double>& p) {
  if (p.size() != grid.axes.size()) return numbers(p);
  Json o = Json::object();
  for (std::size_t i = 0; i < p.size(); ++i) o[grid.axes[i].name] = number(p[i]);
  return o;
}

std::string triple(const spectrum::Triple& t) {
  return std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);  // JSON has no literal for these
}

Json to_json(const GridSpec& grid) {
  Json axes = Json::array();
  for (const auto& a : grid.axes)
    axes.push_back({{"name", a.name},
                    {"lo", number(a.lo)},
                    {"hi", number(a.hi)},
                    {"points", a.points},
                    {"spacing", a.spacing == Spacing::log ? "log" : "uniform"},
                    {"include_hi", a.include_hi}});
  return {{"axes", axes}, {"size", grid.size()}};
}

Json to_json(const certify::CertReport& r, bool include_timing) {
  Json subs = Json::array();
  for (const auto& s : r.sub_checks)
    subs.push_back({{"name", s.name},
                    {"passed", s.passed},
                    {"worst_margin", number(s.worst_margin)},
                    {"worst_point", point(r.grid, s.worst_point)},
                    {"quantity_at_worst", number(s.quantity_at_worst)},
                    {"quantity_min", number(s.quantity_min)},
                    {"quantity_max", number(s.quantity_max)}});
  Json extras = Json::object();
  for (const auto& [k, v] : r.extras) extras[k] = number(v);
  Json j = {{"lemma_id", r.lemma_id},
            {"status", r.status},
            {"passed", r.passed},
            {"worst_margin", number(r.worst_margin)},
            {"worst_point", point(r.grid, r.worst_point)},
            {"tolerance", number(r.tolerance)},
            {"bound_scale", number(r.bound_scale)},
            {"points_evaluated", r.points_evaluated},
            {"points_skipped", r.points_skipped},
            {"max_step_variation", number(r.max_step_variation)},
            {"sub_checks", subs},
            {"extras", extras},
            {"grid", to_json(r.grid)}};
  if (include_timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

Json to_json(const threshold::ThresholdCurve& c) {
  return {{"eps", numbers(c.eps_values)},
          {"lhs", numbers(c.lhs)},
          {"rhs", numbers(c.rhs)},
          {"crossings", numbers(c.crossings())}};
}

Json to_json(const spectrum::QFormMatrix& m, bool include_entries) {
  Json modes = Json::array();
  for (const auto& k : m.modes) modes.push_back(k.k);
  Json j = {{"N", m.N},
            {"d", m.d},
            {"dimension", m.dim()},
            {"normalization", number(m.normalization)},
            {"frobenius_norm", number(m.frobenius_norm())},
            {"max_asymmetry", number(m.max_asymmetry)},
            {"constant_mode_residual", number(spectrum::constant_mode_residual(m))},
            {"modes", modes}};
  if (include_entries) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
      Json row = Json::array();
      for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(number(m.at(i, k)));
      rows.push_back(row);
    }
    j["entries"] = rows;
  }
  return j;
}

Json to_json(const spectrum::ScalingStudy& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"N", r.N},
                    {"dimension", r.dim},
                    {"frobenius_norm", number(r.frobenius)},
                    {"lambda_min", number(r.lambda_min)},
                    {"min_eigenvalue_ratio", number(r.min_eigenvalue_ratio)},
                    {"constant_mode_residual", number(r.constant_residual)},
                    {"lambda_min_over_model", number(r.model_ratio)}});
  return {{"rows", rows},
          {"fitted_exponent", number(s.fitted_exponent)},
          {"fitted_intercept", number(s.fitted_intercept)},
          {"model", "c N^-2 log N"},
          {"model_constant", number(s.model_constant)},
          {"model_max_relative_deviation", number(s.model_spread)},
          {"monotone_non_increasing", s.monotone}};
}

Json to_json(const spectrum::ConcentrationReport& r) {
  Json bins = Json::array();
  for (const auto& b : r.bins) bins.push_back({b.distance_bin, b.cone_bin, number(b.mass)});
  return {{"N", r.N},
          {"dimension", r.dim},
          {"frobenius_norm", number(r.frobenius)},
          {"offdiag_mass", number(r.offdiag_mass)},
          {"near_fraction", number(r.near_fraction)},
          {"band_fraction", number(r.band_fraction)},
          {"union_fraction", number(r.union_fraction)},
          {"far_fraction", number(r.far_fraction)},
          {"far_abs_ratio", number(r.far_abs_ratio)},
          {"multiplier_exponent", number(r.multiplier_exponent)},
          {"bins_columns", {"distance_bin", "cone_bin", "mass"}},
          {"bins", bins}};
}

Json envelope(const std::string& command, Json parameters, Json result) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"parameters", std::move(parameters)},
          {"result", std::move(result)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_cert_reports(const std::vector<certify::CertReport>& reports) {
  std::ostringstream os;
  os << "lemma_id,check,status,passed,worst_margin,quantity_at_worst,quantity_min,quantity_max,"
        "points_evaluated,points_skipped,bound_scale\n";
  for (const auto& r : reports) {
    os << r.lemma_id << ",all," << r.status << ',' << (r.passed ? 1 : 0) << ','
       << format_number(r.worst_margin) << ",,,," << r.points_evaluated << ',' << r.points_skipped << ','
       << format_number(r.bound_scale) << '\n';
    for (const auto& s : r.sub_checks)
      os << r.lemma_id << ',' << s.name << ',' << (s.passed ? "passed" : "failed") << ','
         << (s.passed ? 1 : 0) << ',' << format_number(s.worst_margin) << ','
         << format_number(s.quantity_at_worst) << ',' << format_number(s.quantity_min) << ','
         << format_number(s.quantity_max) << ",,," << format_number(r.bound_scale) << '\n';
  }
  return os.str();
}

std::string csv_curve(const threshold::ThresholdCurve& c) {
  std::ostringstream os;
  os << "eps,lhs,rhs\n";
  for (std::size_t i = 0; i < c.eps_values.size(); ++i)
    os << format_number(c.eps_values[i]) << ',' << format_number(c.lhs[i]) << ','
       << format_number(c.rhs[i]) << '\n';
  return os.str();
}

std::string csv_matrix(const spectrum::QFormMatrix& m) {
  std::ostringstream os;
  os << "row,col,k1,k2,k3,l1,l2,l3,value\n";
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      os << i << ',' << j << ',' << triple(m.modes[i].k) << ',' << triple(m.modes[j].k) << ','
         << format_number(m.at(i, j)) << '\n';
  return os.str();
}

std::string csv_eigenvalues(const std::vector<double>& ev) {
  std::ostringstream os;
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < ev.size(); ++i) os << i << ',' << format_number(ev[i]) << '\n';
  return os.str();
}

std::string csv_scaling(const spectrum::ScalingStudy& s) {
  std::ostringstream os;
  os << "N,dimension,frobenius_norm,lambda_min,min_eigenvalue_ratio,constant_mode_residual,"
        "lambda_min_over_model\n";
  for (const auto& r : s.rows)
    os << r.N << ',' << r.dim << ',' << format_number(r.frobenius) << ',' << format_number(r.lambda_min)
       << ',' << format_number(r.min_eigenvalue_ratio) << ',' << format_number(r.constant_residual) << ','
       << format_number(r.model_ratio) << '\n';
  return os.str();
}

std::string csv_concentration(const spectrum::ConcentrationReport& r) {
  std::ostringstream os;
  os << "distance_bin,cone_bin,mass\n";
  for (const auto& b : r.bins) os << b.distance_bin << ',' << b.cone_bin << ',' << format_number(b.mass) << '\n';
  return os.str();
}

}  // namespace circext::report
