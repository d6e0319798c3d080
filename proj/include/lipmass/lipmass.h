#ifndef LIPMASS_LIPMASS_H
#define LIPMASS_LIPMASS_H

#include <stddef.h>

#if defined(LIPMASS_BUILDING)
#define LIPMASS_API __attribute__((visibility("default")))
#else
#define LIPMASS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lipmass_status {
  LIPMASS_OK = 0,
  LIPMASS_ERR_INVALID_ARGUMENT = 1,
  LIPMASS_ERR_DOMAIN = 2,
  LIPMASS_ERR_NUMERICAL = 3,
  LIPMASS_ERR_VALIDATION = 4,
  LIPMASS_ERR_IO = 5,
  LIPMASS_ERR_UNSUPPORTED = 6,
  LIPMASS_ERR_INTERNAL = 99
} lipmass_status;

typedef struct lipmass_scenario lipmass_scenario;
typedef struct lipmass_report lipmass_report;
typedef struct lipmass_metric lipmass_metric;

LIPMASS_API const char* lipmass_version(void);
/* Message of the last failing call on this thread; empty when none. */
LIPMASS_API const char* lipmass_last_error(void);
LIPMASS_API const char* lipmass_status_name(lipmass_status status);
/* Frees strings returned through char** out-parameters. */
LIPMASS_API void lipmass_string_free(char* s);

/* JSON array describing every catalog scenario and its defaults. */
LIPMASS_API lipmass_status lipmass_catalog_json(char** out);

LIPMASS_API lipmass_status lipmass_scenario_load_file(const char* path, lipmass_scenario** out);
LIPMASS_API lipmass_status lipmass_scenario_load_string(const char* json, lipmass_scenario** out);
LIPMASS_API void lipmass_scenario_free(lipmass_scenario* s);
/* Validated spec with defaults filled in. */
LIPMASS_API lipmass_status lipmass_scenario_to_json(const lipmass_scenario* s, char** out);
LIPMASS_API int lipmass_scenario_dim(const lipmass_scenario* s);

LIPMASS_API lipmass_status lipmass_run(const lipmass_scenario* s, lipmass_report** out);
LIPMASS_API void lipmass_report_free(lipmass_report* r);
LIPMASS_API lipmass_status lipmass_report_to_json(const lipmass_report* r, char** out);
LIPMASS_API lipmass_status lipmass_report_to_csv(const lipmass_report* r, char** out);
/* NULL or empty paths fall back to the spec's output section; both empty writes nothing. */
LIPMASS_API lipmass_status lipmass_report_emit(const lipmass_report* r, const char* json_path, const char* csv_path);
/* 1 when any decay, width or conformal row failed. */
LIPMASS_API int lipmass_report_has_row_failures(const lipmass_report* r);
/* Per-stage wall-clock seconds as a JSON object (not part of the report). */
LIPMASS_API lipmass_status lipmass_report_timings_json(const lipmass_report* r, char** out);

/* Minkowski content study; JSON and CSV texts are returned, paths optional. */
LIPMASS_API lipmass_status lipmass_content(const lipmass_scenario* s, const char* json_path, const char* csv_path,
                                           char** json_out);

/* Closed-form source metric of a scenario. */
LIPMASS_API lipmass_status lipmass_metric_from_scenario(const lipmass_scenario* s, lipmass_metric** out);
LIPMASS_API void lipmass_metric_free(lipmass_metric* m);
LIPMASS_API int lipmass_metric_dim(const lipmass_metric* m);
/* g_ij at x, row-major n*n. */
LIPMASS_API lipmass_status lipmass_metric_evaluate(const lipmass_metric* m, const double* x, double* g_out);
LIPMASS_API lipmass_status lipmass_metric_scalar_curvature(const lipmass_metric* m, const double* x, double* out);
/* Normalized coordinate-sphere flux at radius rho (product rule of the given order for n = 3). */
LIPMASS_API lipmass_status lipmass_metric_sphere_flux(const lipmass_metric* m, double rho, int order, double* out);
/* Extrapolated ADM mass over `count` increasing radii. */
LIPMASS_API lipmass_status lipmass_metric_adm_mass(const lipmass_metric* m, const double* radii, size_t count,
                                                   int order, double* mass_out);

#ifdef __cplusplus
}
#endif

#endif
