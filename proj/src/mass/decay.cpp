#include "mass/decay.hpp"

#include "common/fit.hpp"

#include <cmath>
#include <limits>

namespace lipmass::mass {

Verdict decay_verdict(const std::vector<double>& eps, const std::vector<double>& values, double threshold,
                      double floor) {
  Verdict v;
  v.threshold = threshold;
  if (values.empty()) return v;
  bool all_zero = true;
  for (double x : values) all_zero = all_zero && std::abs(x) <= floor;
  if (all_zero) {
    v.ratio = 0.0;
    v.decaying = true;
    return v;
  }
  v.ratio = values.front() > 0.0 ? values.back() / values.front() : std::numeric_limits<double>::infinity();
  v.decaying = v.ratio < threshold;
  v.rate = loglog_slope(eps, values, floor);
  return v;
}

std::vector<double> DecayTable::column(const std::string& name) const {
  std::vector<double> out;
  for (const DecayRow& r : rows) {
    if (name == "eps") out.push_back(r.eps);
    else if (name == "vol_tube") out.push_back(r.vol_tube);
    else if (name == "int_goal") out.push_back(r.int_goal);
    else if (name == "int_newgoal_core") out.push_back(r.int_newgoal_core);
    else if (name == "int_newgoal_annulus") out.push_back(r.int_newgoal_annulus);
    else if (name == "sup_d1") out.push_back(r.sup_d1);
    else if (name == "eps_sup_d2") out.push_back(r.eps_sup_d2);
    else if (name == "mass") out.push_back(r.mass);
    else if (name == "dmass") out.push_back(r.dmass);
    else throw Error(ErrorCode::kInvalidArgument, "unknown decay column " + name);
  }
  return out;
}

double mass_stability(const geometry::MetricField& source, const geometry::MetricField& gm,
                      const std::vector<double>& radii, const FluxOptions& options) {
  return std::abs(adm_mass(source, radii, options).mass - adm_mass(gm, radii, options).mass);
}

DecayTable decay_study(const DecayStudyInputs& in) {
  require(in.source && in.set, ErrorCode::kInvalidArgument, "decay study needs a source metric and a singular set");
  require(in.eps.size() >= 3, ErrorCode::kInvalidArgument, "decay study needs at least 3 eps values");
  for (std::size_t i = 1; i < in.eps.size(); ++i)
    require(in.eps[i] < in.eps[i - 1], ErrorCode::kInvalidArgument, "eps sequence must be strictly decreasing");
  const mollifier::BumpKernel unit(in.n);
  const ADMMassEstimate source_mass = adm_mass(*in.source, in.flux_radii, in.flux, in.fit_tolerance);
  DecayTable table;
  for (double eps : in.eps) {
    DecayRow row;
    row.eps = eps;
    try {
      auto width = mollifier::build_width(in.set, eps, unit, in.width_order);
      auto gm_ptr = mollifier::mollify_metric(in.source, width, unit, in.mollify);
      const mollifier::MollifiedMetric& gm = *gm_ptr;
      row.tube = analyze_tube(gm, in.curvature_exponent, in.mode);
      row.vol_tube = row.tube.vol_tube;
      row.int_goal = row.tube.int_tube2;
      row.int_newgoal_core = row.tube.int_tube1;
      row.int_newgoal_annulus = row.tube.int_annulus;
      row.sup_d1 = row.tube.bounds.sup_d1;
      row.eps_sup_d2 = row.tube.bounds.eps_sup_d2;
      row.locality_deviation = gm.locality_deviation();
      row.active_nodes = gm.active_nodes();
      row.min_eigenvalue = gm.has_lattice() ? gm.min_active_eigenvalue() : 1.0;
      FluxOptions flux = in.flux;
      flux.set = in.set.get();
      flux.exclusion = 2.0 * eps;
      row.mass_estimate = adm_mass(gm, in.flux_radii, flux, in.fit_tolerance);
      row.mass = row.mass_estimate.mass;
      row.dmass = std::abs(row.mass - source_mass.mass);
      if (in.row_hook) in.row_hook(row, gm_ptr);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  std::vector<double> eps, goal, annulus;
  for (const DecayRow& r : table.rows) {
    if (!r.ok) continue;
    eps.push_back(r.eps);
    goal.push_back(r.int_goal);
    annulus.push_back(r.int_newgoal_annulus);
  }
  table.goal = decay_verdict(eps, goal);
  table.annulus = decay_verdict(eps, annulus);
  return table;
}

}  // namespace lipmass::mass
