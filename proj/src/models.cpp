#include "pb/models.hpp"

#include <cmath>

namespace pb {

namespace {

constexpr int kN = 2;
const cplx kI{0.0, 1.0};

WeylOp X(int j) { return WeylOp::position(kN, j); }
WeylOp P(int j) { return WeylOp::momentum(kN, j); }
WeylOp Id() { return WeylOp::identity(kN); }

struct LinearOpData {
  cplx c;   // scalar part
  CVec px;  // coefficients of x_j
  CVec qd;  // coefficients of d_j
};

LinearOpData extract_linear(const WeylOp& A) {
  LinearOpData d{cplx(0.0), CVec::Zero(kN), CVec::Zero(kN)};
  for (const auto& [key, c] : A.terms()) {
    const int dx = mi_total_degree(key.first);
    const int dd = mi_total_degree(key.second);
    if (dx + dd > 1)
      throw std::invalid_argument("solve_vacuum: operator is not first order");
    if (dx == 0 && dd == 0) {
      d.c = c;
    } else if (dx == 1) {
      for (int j = 0; j < kN; ++j)
        if (key.first[j] == 1) d.px(j) = c;
    } else {
      for (int j = 0; j < kN; ++j)
        if (key.second[j] == 1) d.qd(j) = c;
    }
  }
  return d;
}

double relative_residual(const WeylOp& A, const PolyGaussFun& f) {
  const double nf = norm(f);
  return nf == 0.0 ? 0.0 : norm(w_apply(A, f)) / nf;
}

/// Scales f so the single leading coefficient is 1; vacua are one-term
/// functions with a constant polynomial.
PolyGaussFun with_positive_phase(const PolyGaussFun& f) {
  const auto& t = f.terms().front();
  const cplx lead = t.poly.terms().begin()->second;
  return pg_scale(std::abs(lead) / lead, f);
}

/// Common tail of the three builders: solve vacua, fix the gauge, attach
/// the Theta scalar.
void finalize_bundle(ModelBundle& bundle, const ExpLinOp& theta_raw) {
  PolyGaussFun phi_raw = solve_vacuum(bundle.a1, bundle.a2);
  PolyGaussFun psi_raw = solve_vacuum(w_adjoint(bundle.b1), w_adjoint(bundle.b2));

  PolyGaussFun phi = with_positive_phase(pg_scale(1.0 / norm(phi_raw), phi_raw));
  const cplx pairing = inner_product(phi, psi_raw);
  if (std::abs(pairing) < 1e-14)
    throw std::runtime_error("finalize_bundle: degenerate <phi00, psi00> pairing");
  PolyGaussFun psi = pg_scale(1.0 / pairing, psi_raw);

  // Theta = theta_raw / <phi00, theta_raw phi00>; the scalar is the gauge
  // freedom left by the unit-norm convention and makes psi_n = Theta phi_n
  // exact.
  const cplx kappa = inner_product(phi, explin_apply(theta_raw, phi));
  if (!(kappa.real() > 0.0) || std::abs(kappa.imag()) > 1e-10 * std::abs(kappa))
    throw std::runtime_error("finalize_bundle: <phi00, Theta phi00> not positive");
  bundle.Theta = theta_raw.scaled(-std::log(kappa.real()));
  bundle.diagnostics["theta_gauge_log_scale"] = -std::log(kappa.real());

  bundle.vacuum_phi = std::move(phi);
  bundle.vacuum_psi = std::move(psi);
  bundle.N1 = bundle.b1 * bundle.a1;
  bundle.N2 = bundle.b2 * bundle.a2;
}

}  // namespace

PolyGaussFun solve_vacuum(const WeylOp& a1, const WeylOp& a2) {
  const LinearOpData d1 = extract_linear(a1);
  const LinearOpData d2 = extract_linear(a2);

  // Ansatz exp(-x^T M x - v^T x).  a_j = c_j + p_j.x + q_j.d annihilates it
  // iff  p_j - 2 M q_j = 0  and  c_j - q_j.v = 0: a linear system in the
  // packed unknowns (M11, M12, M22, v1, v2).
  Eigen::MatrixXcd A(6, 5);
  Eigen::VectorXcd rhs(6);
  A.setZero();
  int row = 0;
  for (const LinearOpData* d : {&d1, &d2}) {
    for (int l = 0; l < kN; ++l) {
      // coefficient of x_l:  p_l - 2 sum_k q_k M_{kl} = 0
      A(row, 0) = -2.0 * (l == 0 ? d->qd(0) : cplx(0.0));            // M11
      A(row, 1) = -2.0 * (l == 0 ? d->qd(1) : d->qd(0));             // M12
      A(row, 2) = -2.0 * (l == 1 ? d->qd(1) : cplx(0.0));            // M22
      rhs(row) = -d->px(l);
      ++row;
    }
    A(row, 3) = -d->qd(0);
    A(row, 4) = -d->qd(1);
    rhs(row) = -d->c;
    ++row;
  }
  const Eigen::VectorXcd sol = A.completeOrthogonalDecomposition().solve(rhs);

  CMat M(kN, kN);
  M << sol(0), sol(1), sol(1), sol(2);
  CVec v(kN);
  v << sol(3), sol(4);

  GaussEnvelope env(M, v);
  if (env.min_re_eig() <= 1e-12)
    throw std::domain_error(
        "solve_vacuum: no integrable vacuum (Re M not positive definite)");
  PolyGaussFun f(CPoly::constant(kN, 1.0), env);
  if (relative_residual(a1, f) > 1e-9 || relative_residual(a2, f) > 1e-9)
    throw std::runtime_error("solve_vacuum: annihilation conditions not solvable");
  return f;
}

ModelBundle build_example1(const Ex1Params& p) {
  if (p.xi != 1 && p.xi != -1)
    throw std::invalid_argument("example1: xi must be +1 or -1");
  if (std::abs(p.eps) > 1.0 - p.delta_guard)
    throw std::domain_error("example1: |eps| too close to 1 (singular parameter)");
  if (p.a == 0.0 || p.b == 0.0)
    throw std::invalid_argument("example1: a and b must be nonzero");

  const double exi = p.eps * p.xi;
  const double wp = std::sqrt(1.0 + exi);
  const double wm = std::sqrt(1.0 - exi);
  const double xi = p.xi;
  const double one_m_eps2 = 1.0 - p.eps * p.eps;

  ModelBundle m;
  m.model = "ex1";

  const cplx np = 1.0 / (2.0 * std::sqrt(wp));
  const cplx nm = 1.0 / (2.0 * std::sqrt(wm));
  m.a1 = np * ((kI * P(0) + wp * X(0)) + xi * (kI * P(1) + wp * X(1)) +
               (kI * xi / wp) * Id());
  m.a2 = nm * ((kI * P(0) + wm * X(0)) - xi * (kI * P(1) + wm * X(1)) -
               (kI * xi / wm) * Id());
  m.b1 = np * ((-kI * P(0) + wp * X(0)) + xi * (-kI * P(1) + wp * X(1)) +
               (kI * xi / wp) * Id());
  m.b2 = nm * ((-kI * P(0) + wm * X(0)) - xi * (-kI * P(1) + wm * X(1)) -
               (kI * xi / wm) * Id());

  m.H = P(0) * P(0) + X(0) * X(0) + P(1) * P(1) + X(1) * X(1) +
        (2.0 * kI) * X(1) + (2.0 * p.eps) * (X(0) * X(1));
  m.h_ref = P(0) * P(0) + X(0) * X(0) + P(1) * P(1) + X(1) * X(1) +
            (2.0 * p.eps) * (X(0) * X(1)) + (1.0 / one_m_eps2) * Id();
  m.orientation = IntertwineOrientation::kHamiltonianToPartner;

  // T = exp((p2 - eps p1)/(1 - eps^2)); with p = -i d this is a pure
  // complex translation.
  CVec w(kN);
  w << kI * p.eps / one_m_eps2, -kI / one_m_eps2;
  m.T = ExpLinOp(CVec::Zero(kN), w);
  m.diagnostics["derived_delta1"] = w(0);
  m.diagnostics["derived_delta2"] = w(1);
  m.diagnostics["printed_delta1"] = kI * (p.a * p.eps - xi) / one_m_eps2;
  m.diagnostics["printed_delta2"] = kI * (p.b * p.eps + xi) / one_m_eps2;

  m.e1 = 2.0 * wp;
  m.e2 = 2.0 * wm;
  m.e0 = wp + wm + 1.0 / one_m_eps2;

  finalize_bundle(m, m.T.pow(2));
  return m;
}

ModelBundle build_example2(const Ex2Params& p) {
  const cplx C = kI * p.A - p.B;
  const cplx D = kI * p.A + p.B;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  ModelBundle m;
  m.model = "ex2";
  m.a1 = inv_sqrt2 * (X(0) + kI * P(0) + C * Id());
  m.a2 = inv_sqrt2 * (X(1) + kI * P(1) + C * Id());
  m.b1 = inv_sqrt2 * (X(0) - kI * P(0) + D * Id());
  m.b2 = inv_sqrt2 * (X(1) - kI * P(1) + D * Id());

  m.H = 0.5 * (P(0) * P(0) + X(0) * X(0)) + 0.5 * (P(1) * P(1) + X(1) * X(1)) +
        kI * (p.A * (X(0) + X(1)) + p.B * (P(0) + P(1)));
  m.h_ref = 0.5 * (P(0) * P(0) + X(0) * X(0)) + 0.5 * (P(1) * P(1) + X(1) * X(1)) +
            (p.A * p.A + p.B * p.B) * Id();
  m.orientation = IntertwineOrientation::kPartnerToHamiltonian;

  // T = exp(-A(p1+p2) + B(x1+x2)).
  CVec u(kN), w(kN);
  u << p.B, p.B;
  w << kI * p.A, kI * p.A;
  m.T = ExpLinOp(u, w);

  m.e1 = 1.0;
  m.e2 = 1.0;
  m.e0 = p.A * p.A + p.B * p.B + 1.0;

  finalize_bundle(m, m.T.pow(-2));
  return m;
}

ModelBundle build_example3(const Ex3Params& p) {
  if (std::abs(p.theta) > p.regime_guard || std::abs(p.theta_tilde) > p.regime_guard)
    throw std::domain_error("example3: theta outside the perturbative regime");

  const double A = p.A, B = p.B, th = p.theta, tt = p.theta_tilde;
  const cplx k1 = A * (1.0 - tt / 2.0) * (kI - 1.0) + B * (th / 2.0 - 1.0) * (kI + 1.0);
  const cplx k2 = A * (1.0 + tt / 2.0) * (1.0 - kI) + B * (th / 2.0 + 1.0) * (kI + 1.0);
  const cplx kt1 = A * (1.0 - tt / 2.0) * (kI + 1.0) + B * (th / 2.0 - 1.0) * (kI - 1.0);
  const cplx kt2 = -A * (1.0 + tt / 2.0) * (kI + 1.0) + B * (th / 2.0 + 1.0) * (kI - 1.0);

  ModelBundle m;
  m.model = "ex3";
  m.a1 = 0.5 * (X(0) + kI * P(0) + kI * X(1) - P(1) + k1 * Id());
  m.a2 = 0.5 * (-kI * X(0) + P(0) - X(1) - kI * P(1) + k2 * Id());
  m.b1 = 0.5 * (X(0) - kI * P(0) - kI * X(1) - P(1) + kt1 * Id());
  m.b2 = 0.5 * (kI * X(0) + P(0) - X(1) + kI * P(1) + kt2 * Id());

  const double sum_t = 0.5 * (th + tt);
  const WeylOp n1 = m.b1 * m.a1;
  const WeylOp n2 = m.b2 * m.a2;
  // Hamiltonian in its linear-order form (N1 + N2 + 1) +
  // (theta+tilde)/2 (N1 - N2) + (A^2+B^2).
  m.H = n1 + n2 + Id() + sum_t * (n1 - n2) + (A * A + B * B) * Id();

  // Mode-rotated bosonic pair: c_g = (c1 + i c2)/sqrt2, c_d = -i(c1 - i c2)/sqrt2.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const WeylOp c1 = inv_sqrt2 * (X(0) + kI * P(0));
  const WeylOp c2 = inv_sqrt2 * (X(1) + kI * P(1));
  const WeylOp cg = inv_sqrt2 * (c1 + kI * c2);
  const WeylOp cd = (-kI * inv_sqrt2) * (c1 - kI * c2);
  const WeylOp cgd = w_adjoint(cg);
  const WeylOp cdd = w_adjoint(cd);

  m.h_ref = cgd * cg + cdd * cd + Id() + sum_t * (cgd * cg - cdd * cd) +
            (A * A + B * B) * Id();
  m.orientation = IntertwineOrientation::kPartnerToHamiltonian;

  const WeylOp L = -0.5 * (k1 * cgd + k2 * cdd + std::conj(k1) * cg + std::conj(k2) * cd);
  m.T = ExpLinOp::from_exponent(L);

  m.generator_relations = {
      {"T cg T^-1 = a1", cg, m.a1},
      {"T cd T^-1 = a2", cd, m.a2},
      {"T cg+ T^-1 = b1", cgd, m.b1},
      {"T cd+ T^-1 = b2", cdd, m.b2},
  };

  m.diagnostics["k1"] = k1;
  m.diagnostics["k2"] = k2;
  m.diagnostics["alpha1"] = 0.5 * (k1 + kI * k2);
  m.diagnostics["alpha2"] = (k1 - kI * k2) / (2.0 * kI);

  m.e1 = 1.0 + sum_t;
  m.e2 = 1.0 - sum_t;
  m.e0 = 1.0 + A * A + B * B;

  finalize_bundle(m, m.T.pow(-2));
  return m;
}

const PolyGaussFun& LadderFamily::at(const Grid& g, int n1, int n2) {
  if (n1 < 0 || n2 < 0 || n1 >= static_cast<int>(g.size()) ||
      n2 >= static_cast<int>(g[n1].size()))
    throw std::out_of_range("LadderFamily: index outside the triangle");
  return g[n1][n2];
}

LadderFamily generate_family(const ModelBundle& bundle, int nmax) {
  if (nmax < 0) throw std::invalid_argument("generate_family: nmax must be >= 0");
  LadderFamily fam(nmax);
  const WeylOp a1d = w_adjoint(bundle.a1);
  const WeylOp a2d = w_adjoint(bundle.a2);

  fam.phi_.resize(nmax + 1);
  fam.psi_.resize(nmax + 1);
  for (int n1 = 0; n1 <= nmax; ++n1) {
    for (int n2 = 0; n2 + n1 <= nmax; ++n2) {
      PolyGaussFun phi = PolyGaussFun::zero(bundle.n);
      PolyGaussFun psi = PolyGaussFun::zero(bundle.n);
      if (n1 == 0 && n2 == 0) {
        phi = bundle.vacuum_phi;
        psi = bundle.vacuum_psi;
      } else if (n2 == 0) {
        phi = pg_scale(1.0 / std::sqrt(double(n1)), w_apply(bundle.b1, fam.phi_[n1 - 1][0]));
        psi = pg_scale(1.0 / std::sqrt(double(n1)), w_apply(a1d, fam.psi_[n1 - 1][0]));
      } else {
        phi = pg_scale(1.0 / std::sqrt(double(n2)), w_apply(bundle.b2, fam.phi_[n1][n2 - 1]));
        psi = pg_scale(1.0 / std::sqrt(double(n2)), w_apply(a2d, fam.psi_[n1][n2 - 1]));
      }
      fam.phi_[n1].push_back(std::move(phi));
      fam.psi_[n1].push_back(std::move(psi));
    }
  }
  return fam;
}

Eigen::MatrixXcd ladder_overlaps(const PolyGaussFun& probe, const WeylOp& r1,
                                 const WeylOp& r2, const PolyGaussFun& vac,
                                 int nmax) {
  if (nmax < 0) throw std::invalid_argument("ladder_overlaps: nmax must be >= 0");
  const double scale =
      std::max({1.0, r1.max_abs_coeff(), r2.max_abs_coeff()});
  if (w_commutator(r1, r2).max_abs_coeff() > 1e-12 * scale * scale)
    throw std::invalid_argument("ladder_overlaps: raising operators must commute");

  const LinearOpData L1 = extract_linear(r1);
  const LinearOpData L2 = extract_linear(r2);
  CMat U(kN, kN), W(kN, kN);
  U.col(0) = L1.px;
  U.col(1) = L2.px;
  W.col(0) = L1.qd;
  W.col(1) = L2.qd;
  CVec cvec(kN);
  cvec << L1.c, L2.c;

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nmax + 1, nmax + 1);
  for (const auto& tp : probe.terms()) {
    for (const auto& tv : vac.terms()) {
      if (tp.poly.total_degree() > 0 || tv.poly.total_degree() > 0)
        throw std::invalid_argument(
            "ladder_overlaps: probe and vacuum must be pure Gaussians");
      const cplx cp = tp.poly.terms().begin()->second;
      const cplx cv = tv.poly.terms().begin()->second;

      const CMat& M = tv.env.M;
      const CVec& v0 = tv.env.v;
      // exp(z.L) vac: v(z) = v0 + R z, s(z) = s0 + sigma.z + z^T S z / 2.
      const CMat R = 2.0 * (M * W) - U;
      const CVec sigma = W.transpose() * v0 - cvec;
      const CMat S = 2.0 * (W.transpose() * M * W) -
                     0.5 * (U.transpose() * W + W.transpose() * U);

      const CMat Mc = tp.env.M.conjugate() + M;
      const CVec vc0 = tp.env.v.conjugate() + v0;
      const auto lu = Mc.partialPivLu();
      const CVec beta = 0.5 * R.transpose() * lu.solve(vc0) - sigma;
      const CMat Gamma = 0.5 * R.transpose() * lu.solve(R) - S;

      const cplx K = std::conj(cp) * cv * gaussian_base_integral(Mc, vc0) *
                     std::exp(-std::conj(tp.env.s) - tv.env.s);

      // Taylor coefficients of exp(beta.z + z^T Gamma z / 2) from
      // d/dz1 = (beta1 + Gamma11 z1 + Gamma12 z2) * (...).
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(nmax + 1, nmax + 1);
      e(0, 0) = 1.0;
      for (int n2 = 0; n2 <= nmax; ++n2) {
        if (n2 > 0) {
          cplx acc = beta(1) * e(0, n2 - 1);
          if (n2 >= 2) acc += Gamma(1, 1) * e(0, n2 - 2);
          e(0, n2) = acc / static_cast<double>(n2);
        }
        for (int n1 = 1; n1 <= nmax; ++n1) {
          cplx acc = beta(0) * e(n1 - 1, n2);
          if (n1 >= 2) acc += Gamma(0, 0) * e(n1 - 2, n2);
          if (n2 >= 1) acc += Gamma(0, 1) * e(n1 - 1, n2 - 1);
          e(n1, n2) = acc / static_cast<double>(n1);
        }
      }
      for (int n1 = 0; n1 <= nmax; ++n1)
        for (int n2 = 0; n2 <= nmax; ++n2)
          out(n1, n2) += K * e(n1, n2) *
                         std::exp(0.5 * (std::lgamma(n1 + 1.0) +
                                         std::lgamma(n2 + 1.0)));
    }
  }
  return out;
}

}  // namespace pb
