// Command-line front end over the C API.
#include "lipmass/lipmass.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRowFailure = 2;

int report_error(const char* what, lipmass_status st) {
  std::fprintf(stderr, "lipmass: %s: %s: %s\n", what, lipmass_status_name(st), lipmass_last_error());
  return kExitInvalid;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  lipmass_string_free(s);
  return out;
}

void print_summary(const std::string& report_json) {
  const auto j = nlohmann::json::parse(report_json);
  const auto& v = j.at("verdicts");
  std::printf("scenario %s (n=%d): %s\n", j.at("scenario").at("scenario").get<std::string>().c_str(),
              j.at("scenario").at("n").get<int>(), j.at("label").get<std::string>().c_str());
  std::printf("source mass %.10g (reliable: %s)\n", j.at("source_mass").at("mass").get<double>(),
              j.at("source_mass").at("reliable").get<bool>() ? "yes" : "no");
  const auto& goal = v.at("goal");
  std::printf("goal integral ratio %s -> %s\n", goal.at("ratio").dump().c_str(),
              goal.at("decaying").get<bool>() ? "decaying" : "not decaying");
  std::printf("nonnegative curvature off S: %s\n",
              j.at("hypotheses").at("nonnegative_curvature").at("holds").get<bool>() ? "holds" : "violated");
  if (!v.at("conformal_dm_ratio").is_null())
    std::printf("conformal |dm| ratio %s, min final mass %s\n", v.at("conformal_dm_ratio").dump().c_str(),
                v.at("conformal_min_final_mass").dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mollification, curvature-decay and mass studies for metrics singular along small sets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lipmass_version()));

  std::string config, json_path, csv_path;
  bool show_timings = false, quiet = false, print_spec = false;

  auto* run = app.add_subcommand("run", "run the full pipeline and emit the report");
  run->add_option("config", config, "scenario config (JSON)")->required();
  run->add_option("--json", json_path, "report path (overrides output.json)");
  run->add_option("--csv", csv_path, "decay table path (overrides output.csv)");
  run->add_flag("--timings", show_timings, "print per-stage wall-clock times to stderr");
  run->add_flag("-q,--quiet", quiet, "suppress the stdout summary");

  auto* validate = app.add_subcommand("validate", "load and validate a config");
  validate->add_option("config", config, "scenario config (JSON)")->required();
  validate->add_flag("--print", print_spec, "print the validated spec with defaults filled in");

  app.add_subcommand("catalog", "list catalog scenarios and their defaults");

  auto* content = app.add_subcommand("content", "lower Minkowski content study of the singular set");
  content->add_option("config", config, "scenario config (JSON)")->required();
  content->add_option("--json", json_path, "content report path");
  content->add_option("--csv", csv_path, "content table path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (app.got_subcommand("catalog")) {
    char* out = nullptr;
    if (lipmass_status st = lipmass_catalog_json(&out)) return report_error("catalog", st);
    std::fputs(take(out).c_str(), stdout);
    return kExitOk;
  }

  lipmass_scenario* spec = nullptr;
  if (lipmass_status st = lipmass_scenario_load_file(config.c_str(), &spec)) return report_error(config.c_str(), st);

  int code = kExitOk;
  if (app.got_subcommand("validate")) {
    if (print_spec) {
      char* out = nullptr;
      if (lipmass_status st = lipmass_scenario_to_json(spec, &out)) code = report_error("validate", st);
      else std::fputs(take(out).c_str(), stdout);
    } else {
      std::printf("%s: valid\n", config.c_str());
    }
  } else if (app.got_subcommand("content")) {
    char* out = nullptr;
    if (lipmass_status st = lipmass_content(spec, json_path.c_str(), csv_path.c_str(), &out)) {
      code = report_error("content", st);
    } else {
      const auto j = nlohmann::json::parse(take(out));
      std::printf("m = %s, liminf estimate %s\n", j.at("m").dump().c_str(), j.at("liminf_estimate").dump().c_str());
    }
  } else {
    lipmass_report* report = nullptr;
    if (lipmass_status st = lipmass_run(spec, &report)) {
      code = report_error("run", st);
    } else {
      if (lipmass_status st = lipmass_report_emit(report, json_path.c_str(), csv_path.c_str())) {
        code = report_error("emit", st);
      } else {
        if (!quiet) {
          char* out = nullptr;
          if (lipmass_report_to_json(report, &out) == LIPMASS_OK) print_summary(take(out));
        }
        if (show_timings) {
          char* out = nullptr;
          if (lipmass_report_timings_json(report, &out) == LIPMASS_OK)
            std::fprintf(stderr, "timings %s\n", take(out).c_str());
        }
        if (lipmass_report_has_row_failures(report)) {
          std::fprintf(stderr, "lipmass: some pipeline rows failed; see the report\n");
          code = kExitRowFailure;
        }
      }
      lipmass_report_free(report);
    }
  }
  lipmass_scenario_free(spec);
  return code;
}
