#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pb/cpoly.hpp"

namespace pb {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Complex Gaussian envelope exp(-x^T M x - v^T x - s), x real.
///
/// M is kept exactly symmetric by construction; Re M must be positive
/// definite so the function is integrable over R^n.
struct GaussEnvelope {
  CMat M;
  CVec v;
  cplx s = 0.0;

  GaussEnvelope(CMat M_, CVec v_, cplx s_ = 0.0);

  int nvars() const { return static_cast<int>(v.size()); }

  /// Smallest eigenvalue of sym(Re M); positive for a valid envelope.
  double min_re_eig() const;

  /// exp(-x^T M x - v^T x - s) at a (complex) point.
  cplx eval(const std::vector<cplx>& x) const;

  GaussEnvelope conjugated() const;

  /// Entrywise closeness of (M, v, s) relative to 1 + magnitude.
  bool approx_equal(const GaussEnvelope& o, double tol) const;

  /// Standard isotropic envelope exp(-w * |x|^2).
  static GaussEnvelope isotropic(int nvars, cplx w = cplx(0.5));
};

struct PolyGaussTerm {
  CPoly poly;
  GaussEnvelope env;
};

/// Finite sum of (polynomial x Gaussian) terms; the working dense domain.
/// The zero function is the empty term list.  Values are immutable in
/// practice: every operation returns a fresh canonicalized function.
class PolyGaussFun {
 public:
  explicit PolyGaussFun(int nvars) : n_(nvars) {}
  PolyGaussFun(CPoly p, GaussEnvelope e);

  static PolyGaussFun zero(int nvars) { return PolyGaussFun(nvars); }

  int nvars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<PolyGaussTerm>& terms() const { return terms_; }

  void append(CPoly p, GaussEnvelope e);

  /// Merges tolerance-equal envelopes and drops vanishing polynomials.
  void canonicalize();

  double max_abs_coeff() const;
  int max_poly_degree() const;

  cplx eval(const std::vector<cplx>& x) const;

  static constexpr double kEnvMergeTol = 1e-12;
  static constexpr double kCoeffPruneTol = 1e-15;

 private:
  int n_;
  std::vector<PolyGaussTerm> terms_;
};

PolyGaussFun pg_add(const PolyGaussFun& f, const PolyGaussFun& g);
PolyGaussFun pg_scale(cplx c, const PolyGaussFun& f);
PolyGaussFun pg_mul_poly(const CPoly& p, const PolyGaussFun& f);
PolyGaussFun pg_differentiate(const PolyGaussFun& f, int j);
PolyGaussFun pg_translate(const PolyGaussFun& f, const CVec& delta);
PolyGaussFun pg_mul_exp_linear(const PolyGaussFun& f, const CVec& u, cplx c);
PolyGaussFun pg_conjugate(const PolyGaussFun& f);
cplx pg_eval(const PolyGaussFun& f, const std::vector<cplx>& x);

/// Pointwise product (envelopes add); used by the inner product.
PolyGaussFun pg_mul(const PolyGaussFun& f, const PolyGaussFun& g);

}  // namespace pb
