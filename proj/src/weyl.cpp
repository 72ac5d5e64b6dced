#include "pb/weyl.hpp"

#include <cmath>

namespace pb {

namespace {

double binom(int a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (a - i) / (i + 1);
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Integer power by repeated multiplication; 0^0 = 1 (std::pow would NaN).
cplx ipow(cplx base, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

WeylOp WeylOp::identity(int nvars) {
  WeylOp r(nvars);
  r.add_term(MultiIndex(nvars, 0), MultiIndex(nvars, 0), 1.0);
  return r;
}

WeylOp WeylOp::position(int nvars, int j) {
  if (j < 0 || j >= nvars) throw std::out_of_range("WeylOp::position: bad index");
  WeylOp r(nvars);
  MultiIndex x(nvars, 0), d(nvars, 0);
  x[j] = 1;
  r.add_term(x, d, 1.0);
  return r;
}

WeylOp WeylOp::derivative(int nvars, int j) {
  if (j < 0 || j >= nvars) throw std::out_of_range("WeylOp::derivative: bad index");
  WeylOp r(nvars);
  MultiIndex x(nvars, 0), d(nvars, 0);
  d[j] = 1;
  r.add_term(x, d, 1.0);
  return r;
}

WeylOp WeylOp::momentum(int nvars, int j) {
  WeylOp r = derivative(nvars, j);
  return cplx(0.0, -1.0) * r;
}

void WeylOp::add_term(const MultiIndex& xpow, const MultiIndex& dpow, cplx c) {
  if (static_cast<int>(xpow.size()) != n_ || static_cast<int>(dpow.size()) != n_)
    throw std::invalid_argument("WeylOp: multi-index length mismatch");
  if (c == cplx(0.0)) return;
  Key k{xpow, dpow};
  auto [it, inserted] = terms_.emplace(std::move(k), c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx WeylOp::coeff(const MultiIndex& xpow, const MultiIndex& dpow) const {
  auto it = terms_.find(Key{xpow, dpow});
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int WeylOp::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_)
    d = std::max(d, mi_total_degree(k.first) + mi_total_degree(k.second));
  return d;
}

double WeylOp::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void WeylOp::prune(double abs_tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= abs_tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

WeylOp& WeylOp::operator+=(const WeylOp& o) {
  if (o.n_ != n_) throw std::invalid_argument("WeylOp: dimension mismatch");
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
  return *this;
}

WeylOp& WeylOp::operator-=(const WeylOp& o) {
  if (o.n_ != n_) throw std::invalid_argument("WeylOp: dimension mismatch");
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
  return *this;
}

WeylOp& WeylOp::operator*=(cplx c) {
  if (c == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

WeylOp w_compose(const WeylOp& A, const WeylOp& B) {
  if (A.n_ != B.n_) throw std::invalid_argument("w_compose: dimension mismatch");
  const int n = A.n_;
  WeylOp r(n);
  MultiIndex xo(n), dd(n);
  std::vector<int> k(n);
  for (const auto& [ka, ca] : A.terms_) {
    const MultiIndex& ax = ka.first;
    const MultiIndex& ad = ka.second;
    for (const auto& [kb, cb] : B.terms_) {
      const MultiIndex& bx = kb.first;
      const MultiIndex& bd = kb.second;
      int deg = 0;
      for (int j = 0; j < n; ++j) deg += ax[j] + bx[j] + ad[j] + bd[j];
      if (deg > WeylOp::kDegreeGuard)
        throw std::domain_error("w_compose: operator degree guard exceeded");
      // Per-variable reordering: d^b x^g = sum_k C(b,k) C(g,k) k! x^{g-k} d^{b-k}.
      std::fill(k.begin(), k.end(), 0);
      while (true) {
        cplx w = ca * cb;
        bool ok = true;
        for (int j = 0; j < n; ++j) {
          if (k[j] > std::min(ad[j], bx[j])) {
            ok = false;
            break;
          }
          w *= binom(ad[j], k[j]) * binom(bx[j], k[j]) * factorial(k[j]);
          xo[j] = ax[j] + bx[j] - k[j];
          dd[j] = ad[j] + bd[j] - k[j];
        }
        if (ok) r.add_term(xo, dd, w);
        int j = 0;
        while (j < n && k[j] == std::min(ad[j], bx[j])) k[j++] = 0;
        if (j == n) break;
        ++k[j];
      }
    }
  }
  return r;
}

WeylOp w_commutator(const WeylOp& a, const WeylOp& b) {
  return w_compose(a, b) - w_compose(b, a);
}

WeylOp w_adjoint(const WeylOp& A) {
  const int n = A.nvars();
  WeylOp r(n);
  MultiIndex xo(n), dd(n);
  std::vector<int> k(n);
  for (const auto& [key, c] : A.terms()) {
    const MultiIndex& ax = key.first;
    const MultiIndex& ad = key.second;
    const double sign = mi_total_degree(ad) % 2 == 0 ? 1.0 : -1.0;
    const cplx base = sign * std::conj(c);
    // Normal-order d^ad x^ax.
    std::fill(k.begin(), k.end(), 0);
    while (true) {
      cplx w = base;
      bool ok = true;
      for (int j = 0; j < n; ++j) {
        if (k[j] > std::min(ad[j], ax[j])) {
          ok = false;
          break;
        }
        w *= binom(ad[j], k[j]) * binom(ax[j], k[j]) * factorial(k[j]);
        xo[j] = ax[j] - k[j];
        dd[j] = ad[j] - k[j];
      }
      if (ok) r.add_term(xo, dd, w);
      int j = 0;
      while (j < n && k[j] == std::min(ad[j], ax[j])) k[j++] = 0;
      if (j == n) break;
      ++k[j];
    }
  }
  return r;
}

PolyGaussFun w_apply(const WeylOp& A, const PolyGaussFun& f) {
  if (A.nvars() != f.nvars()) throw std::invalid_argument("w_apply: dimension mismatch");
  const int n = f.nvars();
  PolyGaussFun acc = PolyGaussFun::zero(n);
  for (const auto& [key, c] : A.terms()) {
    PolyGaussFun g = f;
    for (int j = 0; j < n; ++j)
      for (int rep = 0; rep < key.second[j]; ++rep) g = pg_differentiate(g, j);
    g = pg_mul_poly(CPoly::monomial(n, key.first, c), g);
    acc = pg_add(acc, g);
  }
  return acc;
}

double w_coeff_distance(const WeylOp& a, const WeylOp& b) {
  double m = 0.0;
  for (const auto& [k, c] : a.terms())
    m = std::max(m, std::abs(c - b.coeff(k.first, k.second)));
  for (const auto& [k, c] : b.terms())
    m = std::max(m, std::abs(c - a.coeff(k.first, k.second)));
  return m;
}

ExpLinOp::ExpLinOp(CVec u, CVec w, cplx c0)
    : u_(std::move(u)), w_(std::move(w)), c0_(c0) {
  if (u_.size() != w_.size())
    throw std::invalid_argument("ExpLinOp: shape mismatch");
}

ExpLinOp ExpLinOp::from_exponent(const WeylOp& L) {
  const int n = L.nvars();
  CVec u = CVec::Zero(n), w = CVec::Zero(n);
  cplx c0 = 0.0;
  for (const auto& [key, c] : L.terms()) {
    const int dx = mi_total_degree(key.first);
    const int dd = mi_total_degree(key.second);
    if (dx + dd > 1)
      throw std::invalid_argument("ExpLinOp::from_exponent: exponent not linear");
    if (dx == 0 && dd == 0) {
      c0 = c;
    } else if (dx == 1) {
      for (int j = 0; j < n; ++j)
        if (key.first[j] == 1) u(j) = c;
    } else {
      for (int j = 0; j < n; ++j)
        if (key.second[j] == 1) w(j) = c;
    }
  }
  return ExpLinOp(std::move(u), std::move(w), c0);
}

bool ExpLinOp::is_formally_self_adjoint(double tol) const {
  for (int j = 0; j < nvars(); ++j) {
    if (std::abs(u_(j).imag()) > tol) return false;
    if (std::abs(w_(j).real()) > tol) return false;
  }
  return std::abs(c0_.imag()) <= tol;
}

PolyGaussFun explin_apply(const ExpLinOp& T, const PolyGaussFun& f) {
  if (T.nvars() != f.nvars())
    throw std::invalid_argument("explin_apply: dimension mismatch");
  // exp(u.x + w.d + c0) = exp(u.x) exp(w.d) exp(c0 + u.w/2); the scalar
  // follows from [u.x, w.d] = -u.w being central.
  const cplx scal = T.c0_ + 0.5 * (T.u_.transpose() * T.w_).value();
  PolyGaussFun r = pg_translate(f, T.w_);
  return pg_mul_exp_linear(r, T.u_, scal);
}

WeylOp explin_conjugate_weyl(const ExpLinOp& T, const WeylOp& A) {
  if (T.nvars() != A.nvars())
    throw std::invalid_argument("explin_conjugate_weyl: dimension mismatch");
  const int n = A.nvars();
  // Generator substitution x_j -> x_j + w_j, d_j -> d_j - u_j; exact since
  // the adjoint action of a linear exponent truncates after one commutator.
  WeylOp r(n);
  MultiIndex xo(n), dd(n);
  std::vector<int> a(n), b(n);
  for (const auto& [key, c] : A.terms()) {
    const MultiIndex& ax = key.first;
    const MultiIndex& ad = key.second;
    std::fill(a.begin(), a.end(), 0);
    while (true) {  // choose kept x-powers a_j <= ax_j
      cplx wx = c;
      for (int j = 0; j < n; ++j)
        wx *= binom(ax[j], a[j]) * ipow(T.w_(j), ax[j] - a[j]);
      std::fill(b.begin(), b.end(), 0);
      while (true) {  // choose kept d-powers b_j <= ad_j
        cplx w = wx;
        for (int j = 0; j < n; ++j) {
          w *= binom(ad[j], b[j]) * ipow(-T.u_(j), ad[j] - b[j]);
          xo[j] = a[j];
          dd[j] = b[j];
        }
        r.add_term(xo, dd, w);
        int j = 0;
        while (j < n && b[j] == ad[j]) b[j++] = 0;
        if (j == n) break;
        ++b[j];
      }
      int j = 0;
      while (j < n && a[j] == ax[j]) a[j++] = 0;
      if (j == n) break;
      ++a[j];
    }
  }
  return r;
}

ExpLinOp explin_inverse(const ExpLinOp& T) { return T.inverse(); }

}  // namespace pb
