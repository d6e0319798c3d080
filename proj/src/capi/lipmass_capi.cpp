#include "lipmass/lipmass.h"

#include "geometry/curvature.hpp"
#include "mass/flux.hpp"
#include "scenario/report.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct lipmass_scenario {
  lipmass::scenario::ScenarioSpec spec;
};

struct lipmass_report {
  lipmass::scenario::Report report;
};

struct lipmass_metric {
  lipmass::geometry::MetricFieldPtr g;
};

namespace {

thread_local std::string last_error;

lipmass_status to_status(lipmass::ErrorCode c) {
  switch (c) {
    case lipmass::ErrorCode::kInvalidArgument: return LIPMASS_ERR_INVALID_ARGUMENT;
    case lipmass::ErrorCode::kDomain: return LIPMASS_ERR_DOMAIN;
    case lipmass::ErrorCode::kNumerical: return LIPMASS_ERR_NUMERICAL;
    case lipmass::ErrorCode::kValidation: return LIPMASS_ERR_VALIDATION;
    case lipmass::ErrorCode::kIo: return LIPMASS_ERR_IO;
    case lipmass::ErrorCode::kUnsupported: return LIPMASS_ERR_UNSUPPORTED;
  }
  return LIPMASS_ERR_INTERNAL;
}

template <class F>
lipmass_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return LIPMASS_OK;
  } catch (const lipmass::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return LIPMASS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LIPMASS_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw lipmass::Error(lipmass::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string path_or_empty(const char* p) { return p ? std::string(p) : std::string(); }

}  // namespace

extern "C" {

const char* lipmass_version(void) { return "1.0.0"; }

const char* lipmass_last_error(void) { return last_error.c_str(); }

const char* lipmass_status_name(lipmass_status status) {
  switch (status) {
    case LIPMASS_OK: return "ok";
    case LIPMASS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LIPMASS_ERR_DOMAIN: return "domain error";
    case LIPMASS_ERR_NUMERICAL: return "numerical failure";
    case LIPMASS_ERR_VALIDATION: return "validation error";
    case LIPMASS_ERR_IO: return "i/o error";
    case LIPMASS_ERR_UNSUPPORTED: return "unsupported";
    case LIPMASS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void lipmass_string_free(char* s) { std::free(s); }

lipmass_status lipmass_catalog_json(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = copy_string(lipmass::scenario::dump_json(lipmass::scenario::catalog_json()));
  });
}

lipmass_status lipmass_scenario_load_file(const char* path, lipmass_scenario** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new lipmass_scenario{lipmass::scenario::load_scenario(path)};
  });
}

lipmass_status lipmass_scenario_load_string(const char* json, lipmass_scenario** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    *out = new lipmass_scenario{lipmass::scenario::parse_scenario_text(json)};
  });
}

void lipmass_scenario_free(lipmass_scenario* s) { delete s; }

lipmass_status lipmass_scenario_to_json(const lipmass_scenario* s, char** out) {
  return guarded([&] {
    need(s, "scenario");
    need(out, "out");
    *out = copy_string(lipmass::scenario::dump_json(s->spec.to_json()));
  });
}

int lipmass_scenario_dim(const lipmass_scenario* s) { return s ? s->spec.n : 0; }

lipmass_status lipmass_run(const lipmass_scenario* s, lipmass_report** out) {
  return guarded([&] {
    need(s, "scenario");
    need(out, "out");
    *out = nullptr;
    *out = new lipmass_report{lipmass::scenario::run_pipeline(s->spec)};
  });
}

void lipmass_report_free(lipmass_report* r) { delete r; }

lipmass_status lipmass_report_to_json(const lipmass_report* r, char** out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    *out = copy_string(lipmass::scenario::dump_json(lipmass::scenario::report_json(r->report)));
  });
}

lipmass_status lipmass_report_to_csv(const lipmass_report* r, char** out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    *out = copy_string(lipmass::scenario::report_csv(r->report));
  });
}

lipmass_status lipmass_report_emit(const lipmass_report* r, const char* json_path, const char* csv_path) {
  return guarded([&] {
    need(r, "report");
    lipmass::scenario::emit_report(r->report, path_or_empty(json_path), path_or_empty(csv_path));
  });
}

int lipmass_report_has_row_failures(const lipmass_report* r) { return r && r->report.row_failures() ? 1 : 0; }

lipmass_status lipmass_report_timings_json(const lipmass_report* r, char** out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    *out = copy_string(nlohmann::json(r->report.timings).dump());
  });
}

lipmass_status lipmass_content(const lipmass_scenario* s, const char* json_path, const char* csv_path,
                               char** json_out) {
  return guarded([&] {
    need(s, "scenario");
    const auto rep = lipmass::scenario::run_content(s->spec);
    lipmass::scenario::emit_content(rep, path_or_empty(json_path), path_or_empty(csv_path));
    if (json_out) *json_out = copy_string(lipmass::scenario::dump_json(lipmass::scenario::content_json(rep)));
  });
}

lipmass_status lipmass_metric_from_scenario(const lipmass_scenario* s, lipmass_metric** out) {
  return guarded([&] {
    need(s, "scenario");
    need(out, "out");
    *out = nullptr;
    *out = new lipmass_metric{lipmass::scenario::build_metric(s->spec.scenario, s->spec.n, s->spec.params)};
  });
}

void lipmass_metric_free(lipmass_metric* m) { delete m; }

int lipmass_metric_dim(const lipmass_metric* m) { return m ? m->g->dim() : 0; }

lipmass_status lipmass_metric_evaluate(const lipmass_metric* m, const double* x, double* g_out) {
  return guarded([&] {
    need(m, "metric");
    need(x, "x");
    need(g_out, "g_out");
    const int n = m->g->dim();
    const lipmass::Vec p = Eigen::Map<const Eigen::VectorXd>(x, n);
    const lipmass::Mat g = m->g->metric_at(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g_out[i * n + j] = g(i, j);
  });
}

lipmass_status lipmass_metric_scalar_curvature(const lipmass_metric* m, const double* x, double* out) {
  return guarded([&] {
    need(m, "metric");
    need(x, "x");
    need(out, "out");
    *out = lipmass::geometry::scalar_curvature(*m->g, Eigen::Map<const Eigen::VectorXd>(x, m->g->dim()));
  });
}

lipmass_status lipmass_metric_sphere_flux(const lipmass_metric* m, double rho, int order, double* out) {
  return guarded([&] {
    need(m, "metric");
    need(out, "out");
    lipmass::mass::FluxOptions o;
    o.sphere_order = order;
    *out = lipmass::mass::sphere_flux(*m->g, rho, o).value;
  });
}

lipmass_status lipmass_metric_adm_mass(const lipmass_metric* m, const double* radii, size_t count, int order,
                                       double* mass_out) {
  return guarded([&] {
    need(m, "metric");
    need(radii, "radii");
    need(mass_out, "mass_out");
    lipmass::mass::FluxOptions o;
    o.sphere_order = order;
    *mass_out = lipmass::mass::adm_mass(*m->g, std::vector<double>(radii, radii + count), o).mass;
  });
}

}  // extern "C"
