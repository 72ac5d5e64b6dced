#include <atomic>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pb/report_io.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string model;
  int nmax = -1;
  std::string out_dir;
  std::string formats;  // comma-separated
  int jobs = 0;
};

pb::RunConfig resolve_config(const CliOverrides& cli) {
  nlohmann::json j = nlohmann::json::object();
  if (!cli.config_path.empty()) {
    // Parse once for validation/messages, then re-load raw JSON to overlay
    // the flag overrides before the final parse.
    std::ifstream in(cli.config_path);
    if (!in) throw std::invalid_argument("config file not readable: " + cli.config_path);
    in >> j;
  }
  if (!cli.model.empty()) j["model"] = cli.model;
  if (cli.nmax >= 0) j["nmax"] = cli.nmax;
  if (!cli.out_dir.empty()) j["out"] = cli.out_dir;
  if (cli.jobs > 0) j["jobs"] = cli.jobs;
  if (!cli.formats.empty()) {
    auto arr = nlohmann::json::array();
    std::stringstream ss(cli.formats);
    std::string f;
    while (std::getline(ss, f, ',')) arr.push_back(f);
    j["formats"] = arr;
  }
  if (const char* env = std::getenv("PB_SEED"); env && !j.contains("seed"))
    j["seed"] = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  return pb::parse_config(j);
}

int execute(const pb::RunConfig& cfg, bool sweep) {
  const auto points = cfg.run_points();
  if (!sweep && points.size() != 1) {
    std::cerr << "run takes exactly one parameter point (got " << points.size()
              << "); use `pb sweep` for grids\n";
    return 2;
  }

  const pb::SuiteOptions opt = cfg.suite_options();
  std::vector<pb::Report> reports(points.size());
  const int jobs = std::max(1, std::min<int>(cfg.jobs, points.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < points.size(); ++i)
      reports[i] = pb::run_suite(points[i], opt);
  } else {
    std::vector<std::future<void>> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < jobs; ++w)
      pool.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < points.size(); i = next++)
          reports[i] = pb::run_suite(points[i], opt);
      }));
    for (auto& f : pool) f.get();
  }

  const auto written = pb::emit_reports(reports, cfg.out_dir, cfg.formats);
  for (const auto& p : written) std::cout << "wrote " << p << "\n";

  int failures = 0;
  for (const auto& r : reports) {
    if (!r.error.empty()) {
      ++failures;
      std::cerr << r.model << ": construction failed: " << r.error << "\n";
      continue;
    }
    for (const auto& c : r.checks)
      if (!c.pass) {
        ++failures;
        std::cerr << r.model << " " << c.name
                  << ": max deviation " << pb::format_double(c.max_abs_deviation)
                  << " > tolerance " << pb::format_double(c.tolerance) << "\n";
      }
  }
  if (failures > 0) {
    std::cerr << failures << " check(s) failed\n";
    return 1;
  }
  std::cout << "all checks passed (" << points.size() << " run point(s))\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-bosonic structure verification"};
  app.require_subcommand(1);

  CliOverrides cli;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "JSON configuration file");
    sub->add_option("--model", cli.model, "ex1 | ex2 | ex3")
        ->check(CLI::IsMember({"ex1", "ex2", "ex3"}));
    sub->add_option("--nmax", cli.nmax, "ladder depth for the algebraic checks");
    sub->add_option("--out", cli.out_dir, "output directory (default: out)");
    sub->add_option("--format", cli.formats, "comma-separated: json,csv,md");
    sub->add_option("--jobs", cli.jobs, "concurrent run points");
  };
  CLI::App* run = app.add_subcommand("run", "verify one parameter point");
  CLI::App* sweep = app.add_subcommand("sweep", "verify a parameter grid");
  add_common(run);
  add_common(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cli.config_path.empty() && cli.model.empty()) {
      std::cerr << "need --config and/or --model\n";
      return 2;
    }
    return execute(resolve_config(cli), sweep->parsed());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
