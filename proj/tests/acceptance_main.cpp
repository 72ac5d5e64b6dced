// Acceptance gate: one line per criterion, exit 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "pb/verify.hpp"

using namespace pb;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(int number, const std::string& what, bool pass,
            const std::string& detail) {
  std::printf("criterion %2d [%s] %s (%s)\n", number, pass ? "PASS" : "FAIL",
              what.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::vector<ModelParams> canonical_points() {
  return {Ex1Params{}, Ex2Params{}, Ex3Params{}};
}

std::vector<ModelParams> random_points(int count_per_model) {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> eps(-0.9, 0.9);
  std::uniform_real_distribution<double> coef(0.25, 2.0);
  std::uniform_real_distribution<double> ab(-0.8, 0.8);
  std::uniform_real_distribution<double> th(-0.15, 0.15);
  std::bernoulli_distribution flip;
  std::vector<ModelParams> pts;
  for (int k = 0; k < count_per_model; ++k) {
    pts.push_back(Ex1Params{.eps = eps(rng), .xi = flip(rng) ? 1 : -1,
                            .a = (flip(rng) ? 1 : -1) * coef(rng),
                            .b = (flip(rng) ? 1 : -1) * coef(rng)});
    pts.push_back(Ex2Params{.A = ab(rng), .B = ab(rng)});
    pts.push_back(Ex3Params{.A = ab(rng), .B = ab(rng), .theta = th(rng),
                            .theta_tilde = th(rng)});
  }
  return pts;
}

CheckResult run_single(const ModelParams& p, const std::string& check,
                       int nmax = 8) {
  SuiteOptions opt;
  opt.nmax = nmax;
  opt.toggles = {check};
  Report r = run_suite(p, opt);
  if (!r.error.empty())
    throw std::runtime_error(model_name(p) + ": " + r.error);
  return r.checks.at(0);
}

void criterion_ccr() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool ok = true;
  std::string note;
  try {
    auto pts = canonical_points();
    for (const auto& p : random_points(20)) pts.push_back(p);
    for (const auto& p : pts) {
      CheckResult c = run_single(p, "ccr", 2);
      worst = std::max(worst, c.max_abs_deviation);
      ok = ok && c.max_abs_deviation <= 1e-9;
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  const double dt = seconds_since(t0);
  ok = ok && dt <= 5.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max residual %.2e over 63 points, %.2fs %s",
                worst, dt, note.c_str());
  report(1, "commutation relations on canonical and random parameters", ok,
         buf);
}

void criterion_vacuum() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool ok = true;
  for (const auto& p : canonical_points()) {
    CheckResult c = run_single(p, "vacuum", 2);
    worst = std::max(worst, c.max_abs_deviation);
    ok = ok && c.pass;
  }
  const double dt = seconds_since(t0);
  ok = ok && dt <= 1.0;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max residual %.2e, %.2fs", worst, dt);
  report(2, "vacuum annihilation for all three models", ok, buf);
}

void criterion_biorthogonality() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool ok = true;
  for (const auto& p : canonical_points()) {
    CheckResult c = run_single(p, "biorthogonality");
    worst = std::max(worst, c.max_abs_deviation);
    ok = ok && c.max_abs_deviation <= 1e-8;
  }
  const double dt = seconds_since(t0);
  ok = ok && dt <= 30.0;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max |<phi,psi> - delta| %.2e, %.2fs", worst,
                dt);
  report(3, "biorthogonality of the 45-state families", ok, buf);
}

void criterion_eigen() {
  double worst_resid = 0.0, worst_oracle = 0.0;
  bool ok = true;
  for (const auto& p : canonical_points()) {
    CheckResult c = run_single(p, "eigen");
    worst_resid = std::max(worst_resid, c.max_abs_deviation);
    ok = ok && c.max_abs_deviation <= 1e-8;

    ModelBundle m = build_model(p);
    auto ev = oracle::hermite_spectrum(m.H, 30, 6);
    std::vector<double> predicted;
    for (int n1 = 0; n1 <= 6; ++n1)
      for (int n2 = 0; n2 <= 6; ++n2) predicted.push_back(m.eigenvalue(n1, n2));
    std::sort(predicted.begin(), predicted.end());
    for (int k = 0; k < 6; ++k) {
      worst_oracle = std::max(worst_oracle, std::abs(ev[k] - predicted[k]));
      ok = ok && std::abs(ev[k] - predicted[k]) <= 1e-6;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max residual %.2e, matrix-oracle gap %.2e", worst_resid,
                worst_oracle);
  report(4, "eigenvalue relations and independent spectra", ok, buf);
}

void criterion_intertwining() {
  double worst = 0.0;
  bool ok = true;
  for (const auto& p : canonical_points()) {
    CheckResult c = run_single(p, "intertwining", 2);
    worst = std::max(worst, c.max_abs_deviation);
    ok = ok && c.max_abs_deviation <= 1e-10;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max coefficient deviation %.2e", worst);
  report(5, "similarity to the self-adjoint partners and generator relations",
         ok, buf);
}

void criterion_theta() {
  double worst = 0.0;
  bool ok = true;
  for (const auto& p : canonical_points()) {
    CheckResult c = run_single(p, "theta_conjugation");
    worst = std::max(worst, c.max_abs_deviation);
    ok = ok && c.max_abs_deviation <= 1e-8;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max deviation %.2e", worst);
  report(6, "metric maps one family onto the other with positivity", ok, buf);
}

void criterion_quasi_basis() {
  double worst = 0.0, worst_quad = 0.0;
  bool ok = true;
  for (const auto& p : canonical_points()) {
    CheckResult c = run_single(p, "quasi_basis");
    worst = std::max(worst, c.max_abs_deviation);
    ok = ok && c.max_abs_deviation <= 1e-4;
  }
  // reference inner products independently confirmed by quadrature
  PolyGaussFun f = displaced_gaussian({0.4, -0.2});
  PolyGaussFun g = displaced_gaussian({-0.3, 0.5});
  PolyGaussFun f2 = displaced_gaussian({0.0, 0.0});
  PolyGaussFun g2 = displaced_gaussian({0.6, 0.1});
  for (auto [a, b] : {std::pair{f, g}, {f2, g2}}) {
    const cplx closed = inner_product(a, b);
    const cplx quad = oracle::quad2d_inner(a, b, 1e-9);
    worst_quad = std::max(worst_quad, std::abs(closed - quad));
    ok = ok && std::abs(closed - quad) <= 1e-6 * std::abs(closed);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max partial-sum gap %.2e, quadrature gap %.2e", worst,
                worst_quad);
  report(7, "weak resolution of the identity at depth 40", ok, buf);
}

void criterion_riesz() {
  bool ok = true;
  std::string note = "canonical growth strict, zero-parameter g == 1";
  for (const auto& p : canonical_points()) {
    CheckResult c = run_single(p, "riesz_growth");
    ok = ok && c.pass;
  }
  CheckResult z = run_single(Ex2Params{.A = 0.0, .B = 0.0}, "riesz_growth");
  ok = ok && z.pass;
  report(8, "norm-product growth separates the families from a Riesz basis",
         ok, note);
}

void criterion_reduction() {
  double worst = 0.0;
  ModelBundle m2 = build_example2(Ex2Params{.A = 0.3, .B = 0.2});
  ModelBundle m3 = build_example3(
      Ex3Params{.A = 0.3, .B = 0.2, .theta = 0.0, .theta_tilde = 0.0});
  worst = std::max(worst, w_coeff_distance(m3.H, m2.H));
  PolyGaussFun dv = pg_add(m3.vacuum_phi, pg_scale(-1.0, m2.vacuum_phi));
  worst = std::max(worst, dv.max_abs_coeff());

  ModelBundle flat = build_example2(Ex2Params{.A = 0.0, .B = 0.0});
  WeylOp osc = 0.5 * (WeylOp::momentum(2, 0) * WeylOp::momentum(2, 0) +
                      WeylOp::position(2, 0) * WeylOp::position(2, 0) +
                      WeylOp::momentum(2, 1) * WeylOp::momentum(2, 1) +
                      WeylOp::position(2, 1) * WeylOp::position(2, 1));
  worst = std::max(worst, w_coeff_distance(flat.H, osc));

  ModelBundle e1 = build_example1(Ex1Params{.eps = 0.0});
  for (int n1 = 0; n1 <= 4; ++n1)
    for (int n2 = 0; n2 <= 4; ++n2)
      worst = std::max(worst, std::abs(e1.eigenvalue(n1, n2) -
                                       (2.0 * (n1 + n2) + 3.0)));
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max deviation %.2e", worst);
  report(9, "limit-parameter reductions between the models", worst <= 1e-10,
         buf);
}

void criterion_cli() {
#ifndef PB_CLI_PATH
  report(10, "full default run of the command-line tool", false,
         "CLI path not configured");
#else
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (const char* cfg : {"ex1.json", "ex2.json", "ex3.json"}) {
    const std::string cmd = std::string(PB_CLI_PATH) + " run --config " +
                            PB_CONFIG_DIR + "/" + cfg +
                            " --out acceptance_out > /dev/null 2>&1";
    ok = ok && std::system(cmd.c_str()) == 0;
  }
  const double dt = seconds_since(t0);
  ok = ok && dt <= 60.0;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "three configs, %.2fs", dt);
  report(10, "full default run of the command-line tool", ok, buf);
#endif
}

}  // namespace

int main() {
  criterion_ccr();
  criterion_vacuum();
  criterion_biorthogonality();
  criterion_eigen();
  criterion_intertwining();
  criterion_theta();
  criterion_quasi_basis();
  criterion_riesz();
  criterion_reduction();
  criterion_cli();
  if (g_failures > 0) {
    std::fprintf(stderr, "%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
