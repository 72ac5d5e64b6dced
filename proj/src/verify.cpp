#include "pb/verify.hpp"

#include <chrono>
#include <cmath>

namespace pb {

namespace {

std::string idx(int n1, int n2) {
  return "(" + std::to_string(n1) + "," + std::to_string(n2) + ")";
}

double rel_residual(const PolyGaussFun& num, double denom) {
  return denom == 0.0 ? norm(num) : norm(num) / denom;
}

}  // namespace

bool Report::all_passed() const {
  if (!error.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ModelBundle build_model(const ModelParams& p) {
  return std::visit(
      [](const auto& q) -> ModelBundle {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, Ex1Params>)
          return build_example1(q);
        else if constexpr (std::is_same_v<T, Ex2Params>)
          return build_example2(q);
        else
          return build_example3(q);
      },
      p);
}

std::string model_name(const ModelParams& p) {
  switch (p.index()) {
    case 0: return "ex1";
    case 1: return "ex2";
    default: return "ex3";
  }
}

std::map<std::string, double> params_as_map(const ModelParams& p) {
  std::map<std::string, double> m;
  if (const auto* q = std::get_if<Ex1Params>(&p)) {
    m = {{"eps", q->eps}, {"xi", double(q->xi)}, {"a", q->a}, {"b", q->b}};
  } else if (const auto* q = std::get_if<Ex2Params>(&p)) {
    m = {{"A", q->A}, {"B", q->B}};
  } else if (const auto* q = std::get_if<Ex3Params>(&p)) {
    m = {{"A", q->A}, {"B", q->B}, {"theta", q->theta}, {"theta_tilde", q->theta_tilde}};
  }
  return m;
}

bool params_are_zero(const ModelParams& p) {
  if (const auto* q = std::get_if<Ex1Params>(&p)) return q->eps == 0.0;
  if (const auto* q = std::get_if<Ex2Params>(&p)) return q->A == 0.0 && q->B == 0.0;
  const auto* q = std::get_if<Ex3Params>(&p);
  return q->A == 0.0 && q->B == 0.0 && q->theta == 0.0 && q->theta_tilde == 0.0;
}

PolyGaussFun random_polygauss(std::mt19937& rng, int nvars, int max_degree) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto rc = [&](double scale) { return cplx(scale * uni(rng), scale * uni(rng)); };

  CMat M = 0.5 * CMat::Identity(nvars, nvars);
  for (int i = 0; i < nvars; ++i)
    for (int j = i; j < nvars; ++j) {
      const cplx d = rc(0.05);
      M(i, j) += d;
      M(j, i) = M(i, j);
    }
  CVec v(nvars);
  for (int i = 0; i < nvars; ++i) v(i) = rc(0.3);
  GaussEnvelope env(M, v);

  CPoly poly(nvars);
  MultiIndex g(nvars, 0);
  std::uniform_int_distribution<int> deg(0, max_degree);
  for (int t = 0; t < 4; ++t) {
    int remaining = deg(rng);
    for (int j = 0; j < nvars; ++j) {
      std::uniform_int_distribution<int> pick(0, remaining);
      g[j] = pick(rng);
      remaining -= g[j];
    }
    poly.add_term(g, rc(1.0));
  }
  if (poly.is_zero()) poly = CPoly::constant(nvars, 1.0);
  return PolyGaussFun(std::move(poly), std::move(env));
}

PolyGaussFun displaced_gaussian(const Eigen::Vector2d& center) {
  CMat M = 0.5 * CMat::Identity(2, 2);
  CVec v = -center.cast<cplx>();
  const cplx s = 0.5 * center.squaredNorm();
  return PolyGaussFun(CPoly::constant(2, 1.0), GaussEnvelope(M, v, s));
}

std::set<std::string> SuiteOptions::all_check_names() {
  return {"ccr",          "vacuum",        "biorthogonality",   "eigen",
          "intertwining", "theta_conjugation", "quasi_basis", "riesz_growth"};
}

double SuiteOptions::tol(const std::string& check) const {
  static const std::map<std::string, double> defaults = {
      {"ccr", 1e-9},          {"vacuum", 1e-10},
      {"biorthogonality", 1e-8}, {"eigen", 1e-8},
      {"intertwining", 1e-10}, {"theta_conjugation", 1e-8},
      {"quasi_basis", 1e-4},   {"riesz_growth", 1e-10}};
  if (auto it = tol_overrides.find(check); it != tol_overrides.end()) return it->second;
  return defaults.at(check);
}

CheckResult check_ccr(const ModelBundle& bundle,
                      const std::vector<PolyGaussFun>& probes, double tol) {
  CheckResult r{.name = "ccr", .tolerance = tol};
  const WeylOp* as[2] = {&bundle.a1, &bundle.a2};
  const WeylOp* bs[2] = {&bundle.b1, &bundle.b2};
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      WeylOp comm = w_commutator(*as[j], *bs[k]);
      if (j == k) comm -= WeylOp::identity(bundle.n);
      int pi = 0;
      for (const auto& f : probes) {
        const double dev = rel_residual(w_apply(comm, f), norm(f));
        r.record("[a" + std::to_string(j + 1) + ",b" + std::to_string(k + 1) +
                     "] probe " + std::to_string(pi++),
                 dev);
      }
    }
  // The a-a and b-b commutators vanish as well; coefficient-level check.
  r.record("[a1,a2]", w_commutator(bundle.a1, bundle.a2).max_abs_coeff());
  r.record("[b1,b2]", w_commutator(bundle.b1, bundle.b2).max_abs_coeff());
  r.finish();
  return r;
}

CheckResult check_vacuum(const ModelBundle& bundle, double tol) {
  CheckResult r{.name = "vacuum", .tolerance = tol};
  const double nphi = norm(bundle.vacuum_phi);
  const double npsi = norm(bundle.vacuum_psi);
  r.record("|a1 phi00|", rel_residual(w_apply(bundle.a1, bundle.vacuum_phi), nphi));
  r.record("|a2 phi00|", rel_residual(w_apply(bundle.a2, bundle.vacuum_phi), nphi));
  r.record("|b1+ psi00|",
           rel_residual(w_apply(w_adjoint(bundle.b1), bundle.vacuum_psi), npsi));
  r.record("|b2+ psi00|",
           rel_residual(w_apply(w_adjoint(bundle.b2), bundle.vacuum_psi), npsi));
  r.record("<phi00,psi00>-1",
           std::abs(inner_product(bundle.vacuum_phi, bundle.vacuum_psi) - 1.0));
  r.finish();
  return r;
}

CheckResult check_biorthogonality(const LadderFamily& family, double tol) {
  CheckResult r{.name = "biorthogonality", .tolerance = tol};
  const int N = family.nmax();
  double worst = 0.0;
  std::string worst_label;
  for (int n1 = 0; n1 <= N; ++n1)
    for (int n2 = 0; n1 + n2 <= N; ++n2)
      for (int m1 = 0; m1 <= N; ++m1)
        for (int m2 = 0; m1 + m2 <= N; ++m2) {
          const cplx ip = inner_product(family.phi(n1, n2), family.psi(m1, m2));
          const double expected = (n1 == m1 && n2 == m2) ? 1.0 : 0.0;
          const double dev = std::abs(ip - expected);
          if (dev > worst) {
            worst = dev;
            worst_label = idx(n1, n2) + "x" + idx(m1, m2);
          }
        }
  r.record("max over pairs " + worst_label, worst);
  r.finish();
  return r;
}

CheckResult check_eigen(const ModelBundle& bundle, const LadderFamily& family,
                        double tol) {
  CheckResult r{.name = "eigen", .tolerance = tol};
  const WeylOp Hdag = w_adjoint(bundle.H);
  constexpr double kRealnessTol = 1e-12;
  for (int n1 = 0; n1 <= family.nmax(); ++n1)
    for (int n2 = 0; n1 + n2 <= family.nmax(); ++n2) {
      const double E = bundle.eigenvalue(n1, n2);
      const auto& phi = family.phi(n1, n2);
      const auto& psi = family.psi(n1, n2);
      const PolyGaussFun hphi = w_apply(bundle.H, phi);
      r.record("|H phi - E phi| " + idx(n1, n2),
               rel_residual(pg_add(hphi, pg_scale(-E, phi)), norm(phi)));
      r.record("|H+ psi - E psi| " + idx(n1, n2),
               rel_residual(pg_add(w_apply(Hdag, psi), pg_scale(-E, psi)), norm(psi)));
      // Realness of E through the biorthogonal expectation <psi, H phi>;
      // the 1e-12 bound is mapped onto this check's tolerance scale.
      const cplx emp = inner_product(psi, hphi);
      r.record("im<psi,H phi>*" + idx(n1, n2),
               std::abs(emp.imag()) * (tol / kRealnessTol));
    }
  r.finish();
  return r;
}

CheckResult check_intertwining(const ModelBundle& bundle, double tol) {
  CheckResult r{.name = "intertwining", .tolerance = tol};
  if (bundle.orientation == IntertwineOrientation::kHamiltonianToPartner) {
    r.record("T H T^-1 = h",
             w_coeff_distance(explin_conjugate_weyl(bundle.T, bundle.H), bundle.h_ref));
  } else {
    r.record("T h T^-1 = H",
             w_coeff_distance(explin_conjugate_weyl(bundle.T, bundle.h_ref), bundle.H));
  }
  for (const auto& rel : bundle.generator_relations)
    r.record(rel.name,
             w_coeff_distance(explin_conjugate_weyl(bundle.T, rel.generator), rel.target));
  r.finish();
  return r;
}

CheckResult check_theta_conjugation(const ModelBundle& bundle,
                                    const LadderFamily& family,
                                    const std::vector<PolyGaussFun>& probes,
                                    double tol) {
  CheckResult r{.name = "theta_conjugation", .tolerance = tol};
  for (int n1 = 0; n1 <= family.nmax(); ++n1)
    for (int n2 = 0; n1 + n2 <= family.nmax(); ++n2) {
      const auto& psi = family.psi(n1, n2);
      const PolyGaussFun theta_phi = explin_apply(bundle.Theta, family.phi(n1, n2));
      r.record("|psi - Theta phi| " + idx(n1, n2),
               rel_residual(pg_add(psi, pg_scale(-1.0, theta_phi)), norm(psi)));
    }
  // Crypto-hermiticity N f = Theta^-1 N+ Theta f on probes.
  const ExpLinOp theta_inv = bundle.Theta.inverse();
  const WeylOp* Ns[2] = {&bundle.N1, &bundle.N2};
  for (int j = 0; j < 2; ++j) {
    const WeylOp Ndag = w_adjoint(*Ns[j]);
    int pi = 0;
    for (const auto& f : probes) {
      const PolyGaussFun lhs = w_apply(*Ns[j], f);
      const PolyGaussFun rhs = explin_apply(
          theta_inv, w_apply(Ndag, explin_apply(bundle.Theta, f)));
      r.record("N" + std::to_string(j + 1) + " crypto probe " + std::to_string(pi++),
               rel_residual(pg_add(lhs, pg_scale(-1.0, rhs)), norm(f)));
    }
  }
  // Positivity <f, Theta f> > 0; a nonpositive value is a hard failure.
  int pi = 0;
  for (const auto& f : probes) {
    const cplx q = inner_product(f, explin_apply(bundle.Theta, f));
    const double dev =
        (q.real() > 0.0) ? std::abs(q.imag()) / std::abs(q) : 1.0;
    r.record("<f,Theta f> probe " + std::to_string(pi++), dev);
  }
  r.finish();
  return r;
}

CheckResult check_quasi_basis(const ModelBundle& bundle, int quasi_nmax,
                              const std::vector<std::pair<PolyGaussFun, PolyGaussFun>>& probe_pairs,
                              double tol) {
  CheckResult r{.name = "quasi_basis", .tolerance = tol};
  const int N = quasi_nmax;
  // Floating-point floor for the tail-monotonicity requirement: once the
  // partial sums sit at rounding noise the sequence may jitter.
  constexpr double kMonotoneSlack = 1e-12;
  int pairno = 0;
  for (const auto& [f, g] : probe_pairs) {
    const cplx ref = inner_product(f, g);
    // S_N = sum <f, psi_n><phi_n, g>; the overlaps come from the
    // generating-function route, which stays accurate at depths where the
    // explicit polynomial states would lose all precision.
    const Eigen::MatrixXcd fp = ladder_overlaps(
        f, w_adjoint(bundle.a1), w_adjoint(bundle.a2), bundle.vacuum_psi, N);
    const Eigen::MatrixXcd gq =
        ladder_overlaps(g, bundle.b1, bundle.b2, bundle.vacuum_phi, N);
    std::vector<double> dev_by_level;
    cplx partial = 0.0;
    for (int level = 0; level <= N; ++level) {
      for (int n1 = 0; n1 <= level; ++n1)
        partial += fp(n1, level - n1) * std::conj(gq(n1, level - n1));
      dev_by_level.push_back(std::abs(partial - ref));
      r.details.emplace_back("pair " + std::to_string(pairno) + " S_N dev N=" +
                                 std::to_string(level),
                             dev_by_level.back());
    }
    double dev = dev_by_level.back();
    for (int k = std::max(0, N - 5); k + 1 <= N; ++k)
      if (dev_by_level[k + 1] > dev_by_level[k] + kMonotoneSlack)
        dev = std::max(dev, 2.0 * tol);
    r.max_abs_deviation = std::max(r.max_abs_deviation, dev);
    ++pairno;
  }
  r.finish();
  return r;
}

CheckResult check_riesz_growth(const LadderFamily& family, bool nonzero_params,
                               double tol) {
  CheckResult r{.name = "riesz_growth", .tolerance = tol};
  std::vector<double> g;
  for (int k = 0; 2 * k <= family.nmax(); ++k) {
    g.push_back(norm(family.phi(k, k)) * norm(family.psi(k, k)));
    // Raw value row (not a deviation); feeds the growth plot data.
    r.details.emplace_back("g_value_" + std::to_string(k), g.back());
    // Cauchy-Schwarz with <phi_n, psi_n> = 1 forces g_k >= 1.
    r.record("g_" + std::to_string(k) + " >= 1", std::max(0.0, 1.0 - g.back()));
  }
  if (nonzero_params) {
    for (std::size_t k = 0; k + 1 < g.size(); ++k)
      r.record("g growth step " + std::to_string(k),
               g[k + 1] > g[k] ? 0.0 : 2.0 * tol);
  } else {
    for (std::size_t k = 0; k < g.size(); ++k)
      r.record("g_" + std::to_string(k) + " == 1", std::abs(g[k] - 1.0));
  }
  r.finish();
  return r;
}

Report run_suite(const ModelParams& params, const SuiteOptions& opt) {
  Report rep;
  rep.model = model_name(params);
  rep.params = params_as_map(params);
  rep.nmax = opt.nmax;
  rep.seed = opt.seed;

  using clock = std::chrono::steady_clock;
  auto timed = [&](const std::string& name, auto&& fn) {
    if (!opt.toggles.count(name)) return;
    const auto t0 = clock::now();
    rep.checks.push_back(fn());
    rep.timings_sec[name] =
        std::chrono::duration<double>(clock::now() - t0).count();
  };

  try {
    const ModelBundle bundle = build_model(params);

    std::mt19937 rng(opt.seed);
    std::vector<PolyGaussFun> probes;
    for (int i = 0; i < opt.n_probes; ++i) probes.push_back(random_polygauss(rng));

    const bool need_family =
        opt.toggles.count("biorthogonality") || opt.toggles.count("eigen") ||
        opt.toggles.count("theta_conjugation") || opt.toggles.count("riesz_growth");
    LadderFamily family(0);
    if (need_family) family = generate_family(bundle, opt.nmax);

    timed("ccr", [&] { return check_ccr(bundle, probes, opt.tol("ccr")); });
    timed("vacuum", [&] { return check_vacuum(bundle, opt.tol("vacuum")); });
    timed("biorthogonality",
          [&] { return check_biorthogonality(family, opt.tol("biorthogonality")); });
    timed("eigen", [&] { return check_eigen(bundle, family, opt.tol("eigen")); });
    timed("intertwining",
          [&] { return check_intertwining(bundle, opt.tol("intertwining")); });
    timed("theta_conjugation", [&] {
      return check_theta_conjugation(bundle, family, probes,
                                     opt.tol("theta_conjugation"));
    });
    timed("quasi_basis", [&] {
      std::vector<std::pair<PolyGaussFun, PolyGaussFun>> pairs;
      pairs.emplace_back(displaced_gaussian({0.4, -0.2}),
                         displaced_gaussian({-0.3, 0.5}));
      pairs.emplace_back(displaced_gaussian({0.0, 0.0}),
                         displaced_gaussian({0.6, 0.1}));
      return check_quasi_basis(bundle, opt.quasi_nmax, pairs,
                               opt.tol("quasi_basis"));
    });
    timed("riesz_growth", [&] {
      return check_riesz_growth(family, !params_are_zero(params),
                                opt.tol("riesz_growth"));
    });
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  return rep;
}

}  // namespace pb
