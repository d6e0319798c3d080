#include "scenario/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lipmass::scenario {
namespace {

using nlohmann::json;

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json opt(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

json vec(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v[i]));
  return out;
}

json nums(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

json verdict(const mass::Verdict& v) {
  return {{"ratio", num(v.ratio)}, {"decaying", v.decaying}, {"threshold", v.threshold}, {"rate", opt(v.rate)}};
}

json mass_json(const mass::ADMMassEstimate& m) {
  return {{"radii", nums(m.radii)},
          {"fluxes", nums(m.fluxes)},
          {"std_errors", nums(m.std_errors)},
          {"mass", num(m.mass)},
          {"order", num(m.order)},
          {"coefficient", num(m.coefficient)},
          {"residual", num(m.residual)},
          {"fit_tolerance", num(m.fit_tolerance)},
          {"reliable", m.reliable},
          {"monte_carlo", m.monte_carlo}};
}

json order_fit(const geometry::DecayOrderFit& f) { return {{"order", opt(f.order)}, {"values", nums(f.values)}}; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string decay_csv(const mass::DecayTable& table) {
  std::ostringstream out;
  const auto& cols = mass::decay_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : table.rows) {
    const double vals[] = {r.eps,          r.vol_tube,   r.int_goal, r.int_newgoal_core, r.int_newgoal_annulus,
                           r.sup_d1,       r.eps_sup_d2, r.mass,     r.dmass};
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << format_double(i == 0 || r.ok ? vals[i] : NAN);
    out << "\n";
  }
  return out.str();
}

std::string report_csv(const Report& report) { return decay_csv(report.table); }

nlohmann::json report_json(const Report& r) {
  json j;
  j["format"] = "lipmass-report";
  j["version"] = kReportFormatVersion;
  j["scenario"] = r.spec.to_json();
  j["label"] = r.label;
  j["singular_dimension"] = r.singular_dimension;

  const HypothesisCheck& h = r.hypothesis;
  j["hypotheses"] = {
      {"nonnegative_curvature",
       {{"samples", h.samples},
        {"skipped", h.skipped},
        {"negative", h.negative},
        {"min_curvature", num(h.min_curvature)},
        {"worst_point", vec(h.worst)},
        {"half_width", num(h.half_width)},
        {"tolerance", num(h.tolerance)},
        {"holds", h.holds}}},
      {"decay",
       {{"radii", nums(r.decay.radii)},
        {"metric", order_fit(r.decay.metric)},
        {"derivative", order_fit(r.decay.derivative)},
        {"curvature", order_fit(r.decay.curvature)},
        {"metric_threshold", num(r.decay.metric_threshold)},
        {"curvature_threshold", num(r.decay.curvature_threshold)},
        {"metric_ok", r.decay.metric_ok},
        {"curvature_ok", r.decay.curvature_ok}}},
      {"equivalence_constant", num(r.equivalence_constant)}};
  j["source_mass"] = mass_json(r.source_mass);

  json rows = json::array(), details = json::array();
  for (const auto& row : r.table.rows) {
    rows.push_back({num(row.eps), num(row.vol_tube), num(row.int_goal), num(row.int_newgoal_core),
                    num(row.int_newgoal_annulus), num(row.sup_d1), num(row.eps_sup_d2), num(row.mass),
                    num(row.dmass)});
    json d = {{"eps", num(row.eps)},
              {"ok", row.ok},
              {"error", row.error},
              {"locality_deviation", num(row.locality_deviation)},
              {"min_eigenvalue", num(row.min_eigenvalue)},
              {"active_nodes", row.active_nodes},
              {"tube_nodes", row.tube.nodes},
              {"int_negative", num(row.tube.int_negative)},
              {"min_curvature", num(row.tube.min_curvature)}};
    if (row.ok) d["mass_estimate"] = mass_json(row.mass_estimate);
    details.push_back(d);
  }
  j["decay_table"] = {{"columns", mass::decay_columns()},
                      {"rows", rows},
                      {"details", details},
                      {"goal", verdict(r.table.goal)},
                      {"annulus", verdict(r.table.annulus)}};

  json width = json::array();
  for (const auto& w : r.width)
    width.push_back({{"eps", num(w.eps)},
                     {"ok", w.ok},
                     {"error", w.error},
                     {"sup_d1", num(w.bounds.sup_d1)},
                     {"eps_sup_d2", num(w.bounds.eps_sup_d2)},
                     {"h", num(w.bounds.h)},
                     {"nodes", w.bounds.nodes},
                     {"plateau_nodes", w.bounds.plateau_nodes},
                     {"plateau_violations", w.bounds.plateau_violations},
                     {"zero_nodes", w.bounds.zero_nodes},
                     {"zero_violations", w.bounds.zero_violations}});
  j["width_report"] = width;

  json conf = json::array();
  for (const auto& c : r.conformal)
    conf.push_back({{"eps", num(c.eps)},
                    {"ok", c.ok},
                    {"error", c.error},
                    {"rho", num(c.rho)},
                    {"amplitude", num(c.amplitude)},
                    {"dm", num(c.dm)},
                    {"flux_shift", num(c.flux_shift)},
                    {"cross_check_error", num(c.cross_check_error)},
                    {"min_u", num(c.min_u)},
                    {"residual", num(c.residual)},
                    {"pointwise_residual", num(c.pointwise_residual)},
                    {"iterations", c.iterations},
                    {"unknowns", c.unknowns},
                    {"worst_corrected_curvature", num(c.worst_corrected_curvature)},
                    {"worst_node", c.worst_node.size() ? vec(c.worst_node) : json(nullptr)},
                    {"negative_nodes", c.negative_nodes},
                    {"final_mass", num(c.final_mass)}});
  j["conformal"] = conf;

  json conv = json::array();
  for (const auto& c : r.convergence)
    conv.push_back({{"eps", num(c.eps)},
                    {"max_node_deviation", num(c.max_node_deviation)},
                    {"lipschitz_bound", opt(c.lipschitz_bound)}});
  j["convergence"] = conv;

  const Verdicts& v = r.verdicts;
  j["verdicts"] = {{"goal", verdict(v.goal)},
                   {"annulus", verdict(v.annulus)},
                   {"sup_d1_variation", num(v.sup_d1_variation)},
                   {"eps_sup_d2_variation", num(v.eps_sup_d2_variation)},
                   {"width_d2_variation", opt(v.width_d2_variation)},
                   {"width_sup_d1", opt(v.width_sup_d1)},
                   {"width_certificate_violations", v.width_certificate_violations},
                   {"max_locality_deviation", num(v.max_locality_deviation)},
                   {"max_dmass", num(v.max_dmass)},
                   {"conformal_dm_ratio", opt(v.conformal_dm_ratio)},
                   {"conformal_min_u", opt(v.conformal_min_u)},
                   {"conformal_worst_curvature", opt(v.conformal_worst_curvature)},
                   {"conformal_min_final_mass", opt(v.conformal_min_final_mass)},
                   {"conformal_max_cross_check", opt(v.conformal_max_cross_check)}};
  j["row_failures"] = r.row_failures();
  return j;
}

nlohmann::json content_json(const ContentReport& r) {
  json vols = json::array(), errs = json::array();
  for (const auto& v : r.study.volumes) {
    vols.push_back(num(v.volume));
    errs.push_back(num(v.error));
  }
  return {{"format", "lipmass-content"},
          {"version", kReportFormatVersion},
          {"scenario", r.spec.to_json()},
          {"m", num(r.study.m)},
          {"normalizer", num(r.study.normalizer)},
          {"eps", nums(r.study.eps)},
          {"volumes", vols},
          {"errors", errs},
          {"ratios", nums(r.study.ratios)},
          {"running_min", nums(r.study.running_min)},
          {"liminf_estimate", num(r.study.liminf_estimate)}};
}

std::string content_csv(const ContentReport& r) {
  std::ostringstream out;
  out << "eps,volume,error,ratio,running_min\n";
  for (std::size_t i = 0; i < r.study.eps.size(); ++i)
    out << format_double(r.study.eps[i]) << "," << format_double(r.study.volumes[i].volume) << ","
        << format_double(r.study.volumes[i].error) << "," << format_double(r.study.ratios[i]) << ","
        << format_double(r.study.running_min[i]) << "\n";
  return out.str();
}

void emit_report(const Report& report, const std::string& json_path, const std::string& csv_path) {
  const std::string jp = json_path.empty() ? report.spec.output.json : json_path;
  const std::string cp = csv_path.empty() ? report.spec.output.csv : csv_path;
  if (!jp.empty()) write_file(jp, dump_json(report_json(report)));
  if (!cp.empty()) write_file(cp, report_csv(report));
}

void emit_content(const ContentReport& report, const std::string& json_path, const std::string& csv_path) {
  if (!json_path.empty()) write_file(json_path, dump_json(content_json(report)));
  if (!csv_path.empty()) write_file(csv_path, content_csv(report));
}

}  // namespace lipmass::scenario
