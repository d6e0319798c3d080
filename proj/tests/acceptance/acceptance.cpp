// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (capped at 100).
#include "conformal/conformal.hpp"
#include "geometry/curvature.hpp"
#include "geometry/lattice.hpp"
#include "scenario/config.hpp"
#include "scenario/pipeline.hpp"
#include "scenario/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace lipmass;
using nlohmann::json;

namespace {

int failed = 0;

void verdict(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failed;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Run {
  scenario::Report report;
  double seconds = 0.0;
};

Run run_config(const std::string& name) {
  const auto t0 = std::chrono::steady_clock::now();
  Run r{scenario::run_pipeline(scenario::load_scenario(std::string(LIPMASS_CONFIG_DIR) + "/" + name + ".json")), 0.0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "ran %s in %.1f s\n", name.c_str(), r.seconds);
  return r;
}

double opt_or(const std::optional<double>& v, double fallback) { return v ? *v : fallback; }

bool rows_ok(const scenario::Report& r) { return !r.row_failures(); }

// Criterion 11: lattice-stencil curvature error under h -> h/2 on a closed-form metric.
double fd_error(double h) {
  auto w = std::make_shared<geometry::RadialField>(3, Vec::Zero(3), [](double r) {
    const double e = std::exp(-r * r);
    return geometry::RadialJet{1.0 + 0.3 * e, -0.6 * r * e, 0.3 * e * (4.0 * r * r - 2.0)};
  });
  auto g = geometry::conformally_flat(w);
  const Vec c = Vec::Constant(3, 0.25);
  const geometry::Lattice lat =
      geometry::Lattice::from_box(c - Vec::Constant(3, 2.0 * h), c + Vec::Constant(3, 2.0 * h), h);
  auto lm = geometry::LatticeMetric::sample(*g, lat);
  Index idx{};
  lat.node_at(c, idx);
  geometry::MetricJet jet(3);
  lm->node_partials(idx, 2, jet);
  geometry::CurvatureWorkspace ws(3);
  return std::abs(geometry::scalar_curvature_from_jet(jet, ws) - geometry::scalar_curvature(*g, c));
}

std::string outputs(const scenario::Report& r) {
  return scenario::dump_json(scenario::report_json(r)) + scenario::report_csv(r);
}

}  // namespace

int main() {
  try {
    std::map<std::string, Run> runs;
    for (const char* name : {"schwarzschild", "flat", "lipschitz-point", "lipschitz-circle", "w1p-point", "corner-sphere"})
      runs.emplace(name, run_config(name));

    {  // 1. ADM mass oracle
      const Run& s = runs.at("schwarzschild");
      const auto& m = s.report.source_mass;
      double worst = 0.0;
      for (std::size_t i = 0; i < m.radii.size(); ++i)
        worst = std::max(worst, std::abs(m.fluxes[i] / std::pow(1.0 + 0.5 / m.radii[i], 3) - 1.0));
      const double err = std::abs(m.mass - 1.0);
      verdict(1, s.report.spec.flux.sphere_order >= 32 && m.radii.size() == 4 && err <= 0.01 && worst <= 1e-3 &&
                     s.seconds < 60.0,
              "mass " + fmt("%.6f", m.mass) + ", worst flux rel err " + fmt("%.2e", worst) + ", " +
                  fmt("%.1f s", s.seconds));
    }
    {  // 2. Flat baseline
      const auto& r = runs.at("flat").report;
      double worst = 0.0;
      for (const auto& row : r.table.rows)
        for (double v : {row.int_goal, row.int_newgoal_core, row.int_newgoal_annulus, row.sup_d1, row.eps_sup_d2})
          worst = std::max(worst, std::abs(v));
      verdict(2, rows_ok(r) && std::abs(r.source_mass.mass) <= 1e-6 && worst <= mass::kDiscretizationFloor,
              "mass " + fmt("%.2e", r.source_mass.mass) + ", largest statistic " + fmt("%.2e", worst));
    }
    {  // 3. Exact locality
      double loc = 0.0, dm = 0.0;
      bool ok = true;
      for (const auto& [name, run] : runs) {
        ok = ok && rows_ok(run.report);
        loc = std::max(loc, run.report.verdicts.max_locality_deviation);
        dm = std::max(dm, run.report.verdicts.max_dmass);
      }
      verdict(3, ok && loc <= 1e-10 && dm <= 1e-10,
              "max deviation outside S_2eps " + fmt("%.2e", loc) + ", max mass change " + fmt("%.2e", dm));
    }
    {  // 4. Width-function certificate
      const Run& p = runs.at("lipschitz-point");
      const auto& v = p.report.verdicts;
      double worst_d1_margin = -INFINITY;
      bool ok = p.report.width.size() == 3;
      for (const auto& w : p.report.width) {
        ok = ok && w.ok && w.bounds.h <= w.eps / 20.0 * (1 + 1e-12);
        worst_d1_margin = std::max(worst_d1_margin, w.bounds.sup_d1 - (3.0 + 10.0 * w.bounds.h));
      }
      const double per_eps = p.report.timings.count("width_report") ? p.report.timings.at("width_report") / 3.0 : 0.0;
      verdict(4, ok && v.width_certificate_violations == 0 && worst_d1_margin <= 0.0 &&
                     opt_or(v.width_d2_variation, INFINITY) < 0.20 && per_eps < 120.0,
              "violations " + std::to_string(v.width_certificate_violations) + ", max|d sigma| " +
                  fmt("%.4f", opt_or(v.width_sup_d1, NAN)) + ", eps|dd sigma| variation " +
                  fmt("%.3f", opt_or(v.width_d2_variation, NAN)) + ", " + fmt("%.1f s per eps", per_eps));
    }
    {  // 5. Lipschitz bound certificate
      const auto& r = runs.at("lipschitz-point").report;
      const auto& v = r.verdicts;
      verdict(5, rows_ok(r) && r.table.rows.size() >= 3 && v.sup_d1_variation < 0.20 && v.eps_sup_d2_variation < 0.20,
              "sup|dg| variation " + fmt("%.3f", v.sup_d1_variation) + ", eps sup|ddg| variation " +
                  fmt("%.3f", v.eps_sup_d2_variation));
    }
    {  // 6. Goal-integral decay
      const auto& p = runs.at("lipschitz-point").report;
      const auto& c = runs.at("lipschitz-circle").report;
      verdict(6, rows_ok(p) && rows_ok(c) && p.table.goal.ratio < 0.5 && c.table.goal.ratio < 0.5,
              "point ratio " + fmt("%.3f", p.table.goal.ratio) + ", circle ratio " + fmt("%.3f", c.table.goal.ratio));
    }
    {  // 7. W^{1,p} mode
      const auto& r = runs.at("w1p-point").report;
      verdict(7, rows_ok(r) && r.spec.n == 3 && r.spec.mode.p == 6.0 && r.spec.params.at("alpha") == 0.6 &&
                     r.verdicts.eps_sup_d2_variation < 0.25 && r.table.annulus.ratio < 0.5,
              "eps^{1+n/p} sup|ddg| variation " + fmt("%.3f", r.verdicts.eps_sup_d2_variation) +
                  ", annulus ratio " + fmt("%.3f", r.table.annulus.ratio));
    }
    {  // 8. Minkowski content
      const json eps = {0.2, 0.1, 0.05, 0.025};
      auto content = [&](json set) {
        return scenario::run_content(scenario::parse_scenario(
                                         {{"scenario", "flat"}, {"singular_set", set}, {"content", {{"eps", eps}}}}))
            .study.liminf_estimate;
      };
      const double point = content(json::array({{{"type", "point"}, {"at", {0.0, 0.0, 0.0}}}}));
      const double seg = content(json::array({{{"type", "segment"}, {"from", {-1.0, 0.0, 0.0}}, {"to", {1.0, 0.0, 0.0}}}}));
      const double circ = content(json::array(
          {{{"type", "circle"}, {"center", {0.0, 0.0, 0.0}}, {"radius", 1.0}, {"normal", {0.0, 0.0, 1.0}}}}));
      verdict(8, std::abs(point - 1.0) <= 0.02 && std::abs(seg / 2.0 - 1.0) <= 0.05 &&
                     std::abs(circ / (2.0 * std::numbers::pi) - 1.0) <= 0.05,
              "point " + fmt("%.4f", point) + ", segment " + fmt("%.4f", seg) + ", circle " + fmt("%.4f", circ));
    }
    {  // 9. Conformal correction
      const double a = 0.1;
      auto u = std::make_shared<geometry::RadialField>(3, Vec::Zero(3), [a](double r) {
        return geometry::RadialJet{1.0 + a / r, -a / (r * r), 2.0 * a / (r * r * r)};
      });
      const double shift = conformal::conformal_mass_shift(geometry::flat_metric(3), u, {8.0, 16.0, 32.0, 64.0});
      const auto& r = runs.at("lipschitz-point").report;
      const auto& v = r.verdicts;
      double final_mass = INFINITY;
      bool any = false;
      for (const auto& [name, run] : runs)
        if (run.report.verdicts.conformal_min_final_mass) {
          any = true;
          final_mass = std::min(final_mass, *run.report.verdicts.conformal_min_final_mass);
        }
      const bool ok = rows_ok(r) && r.conformal.size() >= 3 && std::abs(shift / (2 * a) - 1.0) <= 0.01 &&
                      opt_or(v.conformal_min_u, 0.0) >= 1.0 && opt_or(v.conformal_worst_curvature, 0.0) >= -1e-3 &&
                      opt_or(v.conformal_dm_ratio, INFINITY) <= 0.5 && any && final_mass >= -1e-3;
      verdict(9, ok,
              "harmonic shift/2a " + fmt("%.5f", shift / (2 * a)) + ", min u " + fmt("%.6f", opt_or(v.conformal_min_u, NAN)) +
                  ", worst corrected R " + fmt("%.2e", opt_or(v.conformal_worst_curvature, 0.0)) + ", |dm| ratio " +
                  fmt("%.3f", opt_or(v.conformal_dm_ratio, NAN)) + ", min final mass " + fmt("%.6f", final_mass));
    }
    {  // 10. Contrast case
      const auto& r = runs.at("corner-sphere").report;
      verdict(10, rows_ok(r) && r.table.goal.ratio > 0.5 && r.label == "out-of-theorem contrast",
              "goal ratio " + fmt("%.3f", r.table.goal.ratio) + ", label '" + r.label + "'");
    }
    {  // 11. Numerical hygiene
      const double ratio = fd_error(0.02) / fd_error(0.01);
      bool same = true;
      for (const char* name : {"schwarzschild", "flat"})
        same = same && outputs(runs.at(name).report) == outputs(run_config(name).report);
      const auto small = scenario::parse_scenario({{"scenario", "lipschitz-point"},
                                                   {"eps", {0.2, 0.1, 0.05}},
                                                   {"conformal", {{"enabled", true}, {"rho", 4.0}}},
                                                   {"width_report", {{"enabled", false}}}});
      same = same && outputs(scenario::run_pipeline(small)) == outputs(scenario::run_pipeline(small));
      verdict(11, ratio >= 3.0 && ratio <= 5.0 && same,
              "FD error ratio " + fmt("%.3f", ratio) + ", repeated runs " + (same ? "byte-identical" : "differ"));
    }
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 100;
  }
  std::printf("%d criteria failed\n", failed);
  return std::min(failed, 100);
}
