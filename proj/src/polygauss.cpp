#include "pb/polygauss.hpp"

#include <cmath>

namespace pb {

GaussEnvelope::GaussEnvelope(CMat M_, CVec v_, cplx s_)
    : M(std::move(M_)), v(std::move(v_)), s(s_) {
  if (M.rows() != M.cols() || M.rows() != v.size())
    throw std::invalid_argument("GaussEnvelope: shape mismatch");
  // Symmetrize; the construction paths only ever produce symmetric M,
  // this removes rounding asymmetry.
  M = 0.5 * (M + M.transpose()).eval();
}

double GaussEnvelope::min_re_eig() const {
  Eigen::MatrixXd R = M.real();
  R = 0.5 * (R + R.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
  return es.eigenvalues().minCoeff();
}

cplx GaussEnvelope::eval(const std::vector<cplx>& x) const {
  const int n = nvars();
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("GaussEnvelope::eval: dimension mismatch");
  cplx e = -s;
  for (int i = 0; i < n; ++i) {
    e -= v(i) * x[i];
    for (int j = 0; j < n; ++j) e -= x[i] * M(i, j) * x[j];
  }
  return std::exp(e);
}

GaussEnvelope GaussEnvelope::conjugated() const {
  return GaussEnvelope(M.conjugate(), v.conjugate(), std::conj(s));
}

bool GaussEnvelope::approx_equal(const GaussEnvelope& o, double tol) const {
  if (o.nvars() != nvars()) return false;
  auto close = [tol](cplx a, cplx b) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
  };
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (!close(M(i, j), o.M(i, j))) return false;
  for (int i = 0; i < v.size(); ++i)
    if (!close(v(i), o.v(i))) return false;
  return close(s, o.s);
}

GaussEnvelope GaussEnvelope::isotropic(int nvars, cplx w) {
  return GaussEnvelope(w * CMat::Identity(nvars, nvars), CVec::Zero(nvars));
}

PolyGaussFun::PolyGaussFun(CPoly p, GaussEnvelope e) : n_(p.nvars()) {
  append(std::move(p), std::move(e));
  canonicalize();
}

void PolyGaussFun::append(CPoly p, GaussEnvelope e) {
  if (p.nvars() != n_ || e.nvars() != n_)
    throw std::invalid_argument("PolyGaussFun: dimension mismatch");
  terms_.push_back(PolyGaussTerm{std::move(p), std::move(e)});
}

void PolyGaussFun::canonicalize() {
  std::vector<PolyGaussTerm> merged;
  for (auto& t : terms_) {
    // The scalar offset s is redundant with the coefficients; zeroing it
    // makes equal envelopes compare equal regardless of construction path.
    if (t.env.s != 0.0) {
      t.poly *= std::exp(-t.env.s);
      t.env.s = 0.0;
    }
    bool found = false;
    for (auto& m : merged) {
      if (m.env.approx_equal(t.env, kEnvMergeTol)) {
        m.poly += t.poly;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(std::move(t));
  }
  terms_.clear();
  for (auto& m : merged) {
    m.poly.prune(kCoeffPruneTol);
    if (!m.poly.is_zero()) terms_.push_back(std::move(m));
  }
}

double PolyGaussFun::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, t.poly.max_abs_coeff());
  return m;
}

int PolyGaussFun::max_poly_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.poly.total_degree());
  return d;
}

cplx PolyGaussFun::eval(const std::vector<cplx>& x) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += t.poly.eval(x) * t.env.eval(x);
  return acc;
}

PolyGaussFun pg_add(const PolyGaussFun& f, const PolyGaussFun& g) {
  if (f.nvars() != g.nvars())
    throw std::invalid_argument("pg_add: dimension mismatch");
  PolyGaussFun r(f.nvars());
  for (const auto& t : f.terms()) r.append(t.poly, t.env);
  for (const auto& t : g.terms()) r.append(t.poly, t.env);
  r.canonicalize();
  return r;
}

PolyGaussFun pg_scale(cplx c, const PolyGaussFun& f) {
  PolyGaussFun r(f.nvars());
  for (const auto& t : f.terms()) r.append(c * t.poly, t.env);
  r.canonicalize();
  return r;
}

PolyGaussFun pg_mul_poly(const CPoly& p, const PolyGaussFun& f) {
  if (p.nvars() != f.nvars())
    throw std::invalid_argument("pg_mul_poly: dimension mismatch");
  PolyGaussFun r(f.nvars());
  for (const auto& t : f.terms()) r.append(p * t.poly, t.env);
  r.canonicalize();
  return r;
}

PolyGaussFun pg_differentiate(const PolyGaussFun& f, int j) {
  const int n = f.nvars();
  if (j < 0 || j >= n) throw std::out_of_range("pg_differentiate: bad index");
  PolyGaussFun r(n);
  for (const auto& t : f.terms()) {
    // d_j(P e^E) = (d_j P + P * d_j E) e^E,  d_j E = -(2 M x + v)_j.
    CPoly q = t.poly.differentiate(j);
    CPoly lin(n);
    MultiIndex g(n, 0);
    lin.add_term(g, -t.env.v(j));
    for (int k = 0; k < n; ++k) {
      MultiIndex h(n, 0);
      h[k] = 1;
      lin.add_term(h, -2.0 * t.env.M(j, k));
    }
    q += lin * t.poly;
    r.append(std::move(q), t.env);
  }
  r.canonicalize();
  return r;
}

PolyGaussFun pg_translate(const PolyGaussFun& f, const CVec& delta) {
  const int n = f.nvars();
  if (delta.size() != n) throw std::invalid_argument("pg_translate: dimension mismatch");
  std::vector<cplx> d(delta.data(), delta.data() + n);
  PolyGaussFun r(n);
  for (const auto& t : f.terms()) {
    // exponent: -(x+d)^T M (x+d) - v^T (x+d) - s; M is untouched.
    CVec v2 = t.env.v + 2.0 * (t.env.M * delta);
    cplx s2 = t.env.s + (delta.transpose() * t.env.M * delta).value() +
              (t.env.v.transpose() * delta).value();
    r.append(t.poly.shifted(d), GaussEnvelope(t.env.M, v2, s2));
  }
  r.canonicalize();
  return r;
}

PolyGaussFun pg_mul_exp_linear(const PolyGaussFun& f, const CVec& u, cplx c) {
  const int n = f.nvars();
  if (u.size() != n)
    throw std::invalid_argument("pg_mul_exp_linear: dimension mismatch");
  PolyGaussFun r(n);
  for (const auto& t : f.terms())
    r.append(t.poly, GaussEnvelope(t.env.M, t.env.v - u, t.env.s - c));
  r.canonicalize();
  return r;
}

PolyGaussFun pg_conjugate(const PolyGaussFun& f) {
  PolyGaussFun r(f.nvars());
  for (const auto& t : f.terms()) r.append(t.poly.conjugated(), t.env.conjugated());
  r.canonicalize();
  return r;
}

cplx pg_eval(const PolyGaussFun& f, const std::vector<cplx>& x) { return f.eval(x); }

PolyGaussFun pg_mul(const PolyGaussFun& f, const PolyGaussFun& g) {
  if (f.nvars() != g.nvars()) throw std::invalid_argument("pg_mul: dimension mismatch");
  PolyGaussFun r(f.nvars());
  for (const auto& a : f.terms())
    for (const auto& b : g.terms())
      r.append(a.poly * b.poly,
               GaussEnvelope(a.env.M + b.env.M, a.env.v + b.env.v, a.env.s + b.env.s));
  r.canonicalize();
  return r;
}

}  // namespace pb
