#include "scenario/pipeline.hpp"

#include "common/fit.hpp"
#include "conformal/conformal.hpp"
#include "geometry/curvature.hpp"

#include <chrono>
#include <cmath>

namespace lipmass::scenario {
namespace {

class Stopwatch {
 public:
  Stopwatch(std::map<std::string, double>& sink, std::string name)
      : sink_(sink), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    sink_[name_] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::map<std::string, double>& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

double lattice_deviation(const mollifier::MollifiedMetric& gm) {
  if (!gm.has_lattice()) return 0.0;
  const auto& lat = gm.lattice();
  const auto& src = gm.source();
  Mat a, b;
  double worst = 0.0;
  for (const auto& t : gm.tube_nodes()) {
    const Index idx = lat.multi(t.node);
    gm.node_metric(idx, a);
    src.metric_at(lat.position(idx), b);
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }
  return worst;
}

ConformalRow correct(const std::shared_ptr<const mollifier::MollifiedMetric>& gm, const ScenarioSpec& spec,
                     double base_mass, const mass::FluxOptions& flux) {
  ConformalRow row;
  row.eps = gm->epsilon();
  try {
    conformal::ConformalOptions co;
    co.rho = spec.conformal_rho();
    co.tol = spec.conformal.tol;
    co.growth = spec.conformal.growth;
    co.max_spacing_fraction = spec.conformal.max_spacing_fraction;
    co.max_iterations = spec.conformal.max_iterations;
    row.rho = co.rho;
    auto rneg = conformal::negative_part_field(std::make_shared<conformal::ScalarCurvatureField>(gm));
    auto cs = conformal::solve_conformal_factor(*gm, *rneg, co);
    row.amplitude = cs->amplitude();
    row.min_u = cs->min_u();
    row.residual = cs->residual();
    row.pointwise_residual = cs->pointwise_residual();
    row.iterations = cs->iterations();
    row.unknowns = cs->unknowns();
    const conformal::MassShift shift = conformal::corrected_metric_and_mass_shift(gm, cs, base_mass, flux);
    row.dm = shift.dm;
    row.flux_shift = shift.flux_shift;
    row.cross_check_error = shift.cross_check_error;
    row.worst_corrected_curvature = shift.worst_corrected_curvature;
    row.worst_node = shift.worst_node;
    row.negative_nodes = shift.negative_nodes;
    row.final_mass = shift.final_mass;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

void assemble_verdicts(Report& r) {
  Verdicts& v = r.verdicts;
  v.goal = r.table.goal;
  v.annulus = r.table.annulus;
  std::vector<double> d1, d2;
  for (const auto& row : r.table.rows) {
    if (!row.ok) continue;
    d1.push_back(row.sup_d1);
    d2.push_back(row.eps_sup_d2);
    v.max_locality_deviation = std::max(v.max_locality_deviation, row.locality_deviation);
    v.max_dmass = std::max(v.max_dmass, row.dmass);
  }
  v.sup_d1_variation = relative_variation(d1);
  v.eps_sup_d2_variation = relative_variation(d2);

  std::vector<double> wd2;
  for (const auto& w : r.width) {
    if (!w.ok) continue;
    wd2.push_back(w.bounds.eps_sup_d2);
    v.width_sup_d1 = std::max(v.width_sup_d1.value_or(0.0), w.bounds.sup_d1);
    v.width_certificate_violations += w.bounds.plateau_violations + w.bounds.zero_violations;
  }
  if (!wd2.empty()) v.width_d2_variation = relative_variation(wd2);

  std::vector<const ConformalRow*> ok;
  for (const auto& c : r.conformal)
    if (c.ok) ok.push_back(&c);
  if (!ok.empty()) {
    const double first = std::abs(ok.front()->dm), last = std::abs(ok.back()->dm);
    v.conformal_dm_ratio = first > 0.0 ? last / first : (last > 0.0 ? INFINITY : 0.0);
    double min_u = INFINITY, worst = INFINITY, final_mass = INFINITY, cross = 0.0;
    for (const ConformalRow* c : ok) {
      min_u = std::min(min_u, c->min_u);
      if (c->negative_nodes > 0) worst = std::min(worst, c->worst_corrected_curvature);
      final_mass = std::min(final_mass, c->final_mass);
      cross = std::max(cross, c->cross_check_error);
    }
    v.conformal_min_u = min_u;
    if (std::isfinite(worst)) v.conformal_worst_curvature = worst;
    v.conformal_min_final_mass = final_mass;
    v.conformal_max_cross_check = cross;
  }
}

}  // namespace

bool Report::row_failures() const {
  for (const auto& r : table.rows)
    if (!r.ok) return true;
  for (const auto& w : width)
    if (!w.ok) return true;
  for (const auto& c : conformal)
    if (!c.ok) return true;
  return false;
}

std::string theorem_label(const singular::SingularSet& s) {
  return 2 * s.manifold_dimension() >= s.dim() ? "out-of-theorem contrast" : "in-theorem";
}

HypothesisCheck check_nonnegative_curvature(const geometry::MetricField& g, const singular::SingularSet& s,
                                            const HypothesisSpec& h, std::uint64_t seed, double inner) {
  const int n = g.dim();
  HypothesisCheck out;
  out.tolerance = h.tolerance;
  out.half_width = h.half_width.value_or(std::max(2.0, s.bounding_radius() + 1.0));
  out.worst = Vec::Zero(n);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  double min_r = INFINITY;
  for (int i = 0; i < h.samples; ++i) {
    Vec x(n);
    for (int k = 0; k < n; ++k) x[k] = out.half_width * (2.0 * rng.uniform() - 1.0);
    if ((!s.empty() && s.distance(x) < h.exclusion) || x.norm() <= inner) {
      ++out.skipped;
      continue;
    }
    ++out.samples;
    const double r = geometry::scalar_curvature(g, x);
    if (r < -h.tolerance) ++out.negative;
    if (r < min_r) {
      min_r = r;
      out.worst = x;
    }
  }
  out.min_curvature = std::isfinite(min_r) ? min_r : 0.0;
  out.holds = out.negative == 0;
  return out;
}

Report run_pipeline(const ScenarioSpec& spec) {
  Report rep;
  rep.spec = spec;
  const int n = spec.n;
  geometry::MetricFieldPtr source;
  std::shared_ptr<singular::SingularSet> set;
  {
    Stopwatch sw(rep.timings, "setup");
    source = build_metric(spec.scenario, n, spec.params);
    set = build_singular_set(spec.singular_set, n);
  }
  rep.singular_dimension = set->manifold_dimension();
  rep.label = theorem_label(*set);

  mass::FluxOptions flux;
  flux.sphere_order = spec.flux.sphere_order;
  flux.mc_samples = spec.flux.mc_samples;
  flux.seed = spec.seed;

  {
    Stopwatch sw(rep.timings, "hypotheses");
    const double inner = excluded_radius(spec.scenario, spec.params);
    rep.hypothesis = check_nonnegative_curvature(*source, *set, spec.hypothesis, spec.seed, inner);
    rep.decay = geometry::decay_fit(*source, spec.flux.radii, 16, 1e-11, spec.seed);
    const double b = std::max(rep.hypothesis.half_width, 2.0 * inner);
    rep.equivalence_constant = geometry::uniform_equivalence_constant(
        *source, inner > 0.0 ? geometry::SampleDomain::annulus(inner, b, 12)
                             : geometry::SampleDomain::box(Vec::Constant(n, -b), Vec::Constant(n, b), n == 3 ? 13 : 7));
  }
  {
    Stopwatch sw(rep.timings, "source_mass");
    rep.source_mass = mass::adm_mass(*source, spec.flux.radii, flux, spec.flux.fit_tolerance);
  }

  mass::DecayStudyInputs in;
  in.source = source;
  in.set = set;
  in.n = n;
  in.eps = spec.eps;
  in.mollify.quadrature_order = spec.kernel.quadrature_order;
  in.mollify.h_over_eps = spec.grid.h_over_eps;
  in.mollify.spacing = spec.grid.h;
  in.mollify.margin_nodes = spec.grid.margin_nodes;
  in.width_order = spec.kernel.width_order;
  in.mode = spec.mode;
  in.curvature_exponent = spec.curvature_exponent;
  in.flux_radii = spec.flux.radii;
  in.flux = flux;
  in.fit_tolerance = spec.flux.fit_tolerance;
  const double eps_last = spec.eps.back();
  in.row_hook = [&](mass::DecayRow& row, const std::shared_ptr<const mollifier::MollifiedMetric>& gm) {
    ConvergenceRow conv;
    conv.eps = row.eps;
    conv.max_node_deviation = lattice_deviation(*gm);
    if (auto L = source->lipschitz_constant()) conv.lipschitz_bound = *L * row.eps;
    rep.convergence.push_back(conv);
    if (spec.width_report.enabled && !set->empty()) {
      Stopwatch sw(rep.timings, "width_report");
      WidthRow w;
      w.eps = row.eps;
      try {
        w.bounds = mollifier::width_bound_report(gm->width(), row.eps / spec.width_report.h_over_eps);
      } catch (const std::exception& e) {
        w.ok = false;
        w.error = e.what();
      }
      rep.width.push_back(w);
    }
    if (spec.conformal.enabled) {
      Stopwatch sw(rep.timings, "conformal");
      rep.conformal.push_back(correct(gm, spec, row.mass, flux));
    }
    if (!spec.output.lattice.empty() && row.eps == eps_last && gm->has_lattice())
      gm->dump(spec.output.lattice,
               spec.output.lattice_format == "binary" ? geometry::LatticeFormat::kBinary : geometry::LatticeFormat::kText);
  };
  {
    Stopwatch sw(rep.timings, "decay_study");
    rep.table = mass::decay_study(in);
  }
  assemble_verdicts(rep);
  return rep;
}

ContentReport run_content(const ScenarioSpec& spec) {
  ContentReport out;
  out.spec = spec;
  const auto set = build_singular_set(spec.singular_set, spec.n);
  require(!set->empty(), ErrorCode::kValidation, "content study needs a nonempty singular set");
  const double m = spec.content.m.value_or(static_cast<double>(set->manifold_dimension()));
  out.study = singular::minkowski_content(*set, m, spec.content.eps, spec.content.tube);
  return out;
}

}  // namespace lipmass::scenario
