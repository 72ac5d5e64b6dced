#pragma once

#include <random>
#include <set>
#include <variant>

#include "pb/models.hpp"

namespace pb {

struct CheckResult {
  std::string name;
  double max_abs_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// (index-tuple or probe label, deviation) rows.
  std::vector<std::pair<std::string, double>> details;

  void record(std::string label, double dev) {
    details.emplace_back(std::move(label), dev);
    max_abs_deviation = std::max(max_abs_deviation, dev);
  }
  void finish() { pass = max_abs_deviation <= tolerance; }
};

struct Report {
  std::string model;
  std::map<std::string, double> params;
  int nmax = 0;
  unsigned seed = 0;
  std::vector<CheckResult> checks;
  std::map<std::string, double> timings_sec;
  std::string error;  // nonempty when model construction failed

  bool all_passed() const;
};

using ModelParams = std::variant<Ex1Params, Ex2Params, Ex3Params>;

ModelBundle build_model(const ModelParams& p);
std::string model_name(const ModelParams& p);
std::map<std::string, double> params_as_map(const ModelParams& p);
bool params_are_zero(const ModelParams& p);

/// Deterministic probe generator (seeded by PB_SEED in the CLI).
PolyGaussFun random_polygauss(std::mt19937& rng, int nvars = 2, int max_degree = 3);

/// Unit-width Gaussian displaced by a real vector; the quasi-basis probes.
PolyGaussFun displaced_gaussian(const Eigen::Vector2d& center);

struct SuiteOptions {
  int nmax = 8;
  int quasi_nmax = 40;
  unsigned seed = 42;
  std::set<std::string> toggles = all_check_names();
  std::map<std::string, double> tol_overrides;
  int n_probes = 10;

  static std::set<std::string> all_check_names();
  double tol(const std::string& check) const;
};

CheckResult check_ccr(const ModelBundle& bundle,
                      const std::vector<PolyGaussFun>& probes, double tol = 1e-9);
CheckResult check_vacuum(const ModelBundle& bundle, double tol = 1e-10);
CheckResult check_biorthogonality(const LadderFamily& family, double tol = 1e-8);
CheckResult check_eigen(const ModelBundle& bundle, const LadderFamily& family,
                        double tol = 1e-8);
CheckResult check_intertwining(const ModelBundle& bundle, double tol = 1e-10);
CheckResult check_theta_conjugation(const ModelBundle& bundle,
                                    const LadderFamily& family,
                                    const std::vector<PolyGaussFun>& probes,
                                    double tol = 1e-8);
CheckResult check_quasi_basis(const ModelBundle& bundle, int quasi_nmax,
                              const std::vector<std::pair<PolyGaussFun, PolyGaussFun>>& probe_pairs,
                              double tol = 1e-4);
CheckResult check_riesz_growth(const LadderFamily& family, bool nonzero_params,
                               double tol = 1e-10);

Report run_suite(const ModelParams& params, const SuiteOptions& opt = {});

}  // namespace pb
