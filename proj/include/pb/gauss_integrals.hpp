#pragma once

#include <unordered_map>

#include "pb/polygauss.hpp"

namespace pb {

/// Closed-form value of  int_{R^n} exp(-x^T M x - v^T x) dx
///   = pi^{n/2} det(M)^{-1/2} exp(v^T M^{-1} v / 4),
/// with det^{-1/2} on the branch reached continuously from Re M.
/// Throws std::domain_error when Re M is not positive definite.
cplx gaussian_base_integral(const CMat& M, const CVec& v);

/// Moment machinery for one envelope: mean, covariance, 0th moment and a
/// memo of centered moments.
class MomentContext {
 public:
  MomentContext(const CMat& M, const CVec& v, int moment_cap = kDefaultMomentCap);

  const CVec& mean() const { return mean_; }
  const CMat& cov() const { return cov_; }
  cplx base() const { return base_; }

  /// Centered Gaussian moment E[y^gamma] (Isserlis), evaluated through the
  /// pairing recurrence and memoized.
  cplx wick_moment(const MultiIndex& gamma);

  static constexpr int kDefaultMomentCap = 64;

 private:
  CVec mean_;
  CMat cov_;
  cplx base_;
  int cap_;
  std::unordered_map<std::size_t, cplx> memo_;

  std::size_t key(const MultiIndex& g) const;
};

/// Centered moment against an explicit covariance (test-facing entry point).
cplx wick_moment(const CMat& cov, const MultiIndex& gamma,
                 int moment_cap = MomentContext::kDefaultMomentCap);

cplx integrate_polygauss(const PolyGaussFun& f);

/// <f, g> = int conj(f) g; conjugate-linear in f.
cplx inner_product(const PolyGaussFun& f, const PolyGaussFun& g);

/// sqrt(<f,f>); throws when <f,f> is not real nonnegative within tolerance.
double norm(const PolyGaussFun& f);

}  // namespace pb
