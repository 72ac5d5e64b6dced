#pragma once

#include <map>
#include <utility>

#include "pb/polygauss.hpp"

namespace pb {

/// Normal-ordered differential operator  sum c * x^alpha d^beta
/// (all position factors to the left of all derivative factors).
///
/// Momentum enters only through the factories: p_j := -i d_j.
class WeylOp {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;  // (xpow, dpow)

  explicit WeylOp(int nvars) : n_(nvars) {
    if (nvars < 1) throw std::invalid_argument("WeylOp: nvars must be >= 1");
  }

  static WeylOp zero(int nvars) { return WeylOp(nvars); }
  static WeylOp identity(int nvars);
  static WeylOp position(int nvars, int j);    // x_j
  static WeylOp derivative(int nvars, int j);  // d/dx_j
  static WeylOp momentum(int nvars, int j);    // p_j = -i d_j

  int nvars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, cplx>& terms() const { return terms_; }

  void add_term(const MultiIndex& xpow, const MultiIndex& dpow, cplx c);
  cplx coeff(const MultiIndex& xpow, const MultiIndex& dpow) const;

  /// Largest x-degree + d-degree over the stored terms.
  int degree() const;
  double max_abs_coeff() const;
  void prune(double abs_tol = 0.0);

  WeylOp& operator+=(const WeylOp& o);
  WeylOp& operator-=(const WeylOp& o);
  WeylOp& operator*=(cplx c);
  friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
  friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }
  friend WeylOp operator*(cplx c, WeylOp a) { return a *= c; }
  friend WeylOp operator*(const WeylOp& a, const WeylOp& b) { return w_compose(a, b); }

  /// Compositions past this combined degree abort: the models need <= 4.
  static constexpr int kDegreeGuard = 16;

  friend WeylOp w_compose(const WeylOp& a, const WeylOp& b);

 private:
  int n_;
  std::map<Key, cplx> terms_;
};

WeylOp w_commutator(const WeylOp& a, const WeylOp& b);

/// Formal L^2(R^n) adjoint: c x^a d^b -> conj(c) (-1)^|b| d^b x^a, normal
/// ordered.
WeylOp w_adjoint(const WeylOp& a);

PolyGaussFun w_apply(const WeylOp& a, const PolyGaussFun& f);

/// Max |coefficient| of a - b over the union of their terms.
double w_coeff_distance(const WeylOp& a, const WeylOp& b);

/// exp(u.x + w.d + c0): exponential of a linear combination of positions
/// and derivatives.  Closed under inversion and integer powers; conjugation
/// A -> T A T^{-1} stays inside the Weyl algebra because the exponent is
/// linear.
class ExpLinOp {
 public:
  ExpLinOp(CVec u, CVec w, cplx c0 = 0.0);

  static ExpLinOp identity(int nvars) {
    return ExpLinOp(CVec::Zero(nvars), CVec::Zero(nvars));
  }

  /// Extracts (u, w, c0) from a degree <= 1 WeylOp exponent.
  static ExpLinOp from_exponent(const WeylOp& L);

  int nvars() const { return static_cast<int>(u_.size()); }
  const CVec& u() const { return u_; }
  const CVec& w() const { return w_; }
  cplx c0() const { return c0_; }

  ExpLinOp inverse() const { return ExpLinOp(-u_, -w_, -c0_); }
  /// exp(L)^k = exp(kL); valid for any integer k since [L, L] = 0.
  ExpLinOp pow(int k) const {
    return ExpLinOp(static_cast<double>(k) * u_, static_cast<double>(k) * w_,
                    static_cast<double>(k) * c0_);
  }
  /// Multiply by a scalar: exp(L) -> exp(L + c).
  ExpLinOp scaled(cplx c) const { return ExpLinOp(u_, w_, c0_ + c); }

  /// Formally self-adjoint iff u, c0 real and w purely imaginary.
  bool is_formally_self_adjoint(double tol = 1e-12) const;

  friend PolyGaussFun explin_apply(const ExpLinOp& T, const PolyGaussFun& f);
  friend WeylOp explin_conjugate_weyl(const ExpLinOp& T, const WeylOp& A);

 private:
  CVec u_, w_;
  cplx c0_;
};

ExpLinOp explin_inverse(const ExpLinOp& T);

}  // namespace pb
