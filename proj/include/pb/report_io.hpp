#pragma once

#include <json.hpp>

#include "pb/verify.hpp"

namespace pb {

/// Parsed and validated run configuration.  Every parameter is stored as a
/// grid; scalars are one-point grids.  `pb run` demands one run point,
/// `pb sweep` takes the cartesian product.
struct RunConfig {
  std::string model;  // ex1 | ex2 | ex3
  std::map<std::string, std::vector<double>> param_grid;
  int nmax = 8;
  int quasi_nmax = 40;
  std::set<std::string> toggles = SuiteOptions::all_check_names();
  std::map<std::string, double> tol_overrides;
  std::string out_dir = "out";
  std::set<std::string> formats = {"json", "csv", "md"};
  int jobs = 1;
  unsigned seed = 42;

  /// Cartesian product of the grids, validated against the model guards.
  std::vector<ModelParams> run_points() const;

  SuiteOptions suite_options() const;
};

/// Throws std::invalid_argument with the offending key path on unknown
/// keys, malformed values or guard violations.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_file(const std::string& path);

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// Writes report.json / checks.csv / summary.md / plotdata.csv (per the
/// enabled formats) into out_dir.  Returns the written paths.
std::vector<std::string> emit_reports(const std::vector<Report>& reports,
                                      const std::string& out_dir,
                                      const std::set<std::string>& formats);

/// 17-significant-digit decimal form; bit-exact under strtod round-trip.
std::string format_double(double v);

}  // namespace pb
