#pragma once

#include <map>
#include <string>
#include <vector>

#include "pb/gauss_integrals.hpp"
#include "pb/weyl.hpp"

namespace pb {

struct Ex1Params {
  double eps = 0.5;
  int xi = 1;  // +1 or -1
  double a = 1.0;
  double b = 1.0;
  double delta_guard = 1e-3;  // |eps| <= 1 - delta_guard
};

struct Ex2Params {
  double A = 0.3;
  double B = 0.2;
};

struct Ex3Params {
  double A = 0.3;
  double B = 0.2;
  double theta = 0.05;
  double theta_tilde = 0.03;
  double regime_guard = 0.2;  // |theta|, |theta_tilde| <= guard
};

/// Which way the similarity transform is stated for the model:
/// T H T^{-1} = h_ref, or H = T h_ref T^{-1}.
enum class IntertwineOrientation { kHamiltonianToPartner, kPartnerToHamiltonian };

/// A relation T G T^{-1} = target, checked coefficient-wise.
struct GeneratorRelation {
  std::string name;
  WeylOp generator;
  WeylOp target;
};

/// Everything the checks need about one model at one parameter point.
///
/// Gauge convention: vacuum_phi has unit norm with a real positive
/// coefficient; vacuum_psi is fixed by <phi00, psi00> = 1; Theta carries a
/// positive scalar on top of T^{+-2} so that psi_n = Theta phi_n holds
/// exactly in this gauge.
struct ModelBundle {
  std::string model;
  int n = 2;

  WeylOp a1, a2, b1, b2;
  WeylOp N1, N2;  // N_j = b_j a_j
  WeylOp H;
  WeylOp h_ref;  // isospectral self-adjoint partner
  ExpLinOp T = ExpLinOp::identity(2);
  ExpLinOp Theta = ExpLinOp::identity(2);
  IntertwineOrientation orientation = IntertwineOrientation::kHamiltonianToPartner;
  std::vector<GeneratorRelation> generator_relations;

  PolyGaussFun vacuum_phi = PolyGaussFun::zero(2);
  PolyGaussFun vacuum_psi = PolyGaussFun::zero(2);

  // E(n1, n2) = e0 + e1 n1 + e2 n2 (all three models are linear in the
  // quantum numbers).
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  double eigenvalue(int n1, int n2) const { return e0 + e1 * n1 + e2 * n2; }

  /// Reporting-only quantities (e.g. the derived vs printed T-shift of
  /// example one, the Theta gauge scalar).
  std::map<std::string, cplx> diagnostics;

  ModelBundle() : a1(2), a2(2), b1(2), b2(2), N1(2), N2(2), H(2), h_ref(2) {}
};

/// Biorthogonal ladder families phi_{n1,n2}, psi_{n1,n2} for n1+n2 <= nmax,
/// built strictly by the raising recursion from the gauge-fixed vacua.
class LadderFamily {
 public:
  LadderFamily(int nmax) : nmax_(nmax) {}

  int nmax() const { return nmax_; }
  const PolyGaussFun& phi(int n1, int n2) const { return at(phi_, n1, n2); }
  const PolyGaussFun& psi(int n1, int n2) const { return at(psi_, n1, n2); }

  /// Number of states with n1 + n2 <= nmax.
  int size() const { return (nmax_ + 1) * (nmax_ + 2) / 2; }

  friend LadderFamily generate_family(const ModelBundle& bundle, int nmax);

 private:
  using Grid = std::vector<std::vector<PolyGaussFun>>;
  static const PolyGaussFun& at(const Grid& g, int n1, int n2);
  int nmax_;
  Grid phi_, psi_;
};

ModelBundle build_example1(const Ex1Params& p);
ModelBundle build_example2(const Ex2Params& p);
ModelBundle build_example3(const Ex3Params& p);

/// Gaussian-ansatz solve of a1 f = a2 f = 0 for first-order operators.
/// Returns the unnormalized exp(-x^T M x - v^T x); throws when no
/// integrable solution exists.
PolyGaussFun solve_vacuum(const WeylOp& a1, const WeylOp& a2);

LadderFamily generate_family(const ModelBundle& bundle, int nmax);

/// Overlap table t(n1, n2) = <probe, r1^{n1} r2^{n2} vac> / sqrt(n1! n2!)
/// for commuting first-order raising operators r1, r2 and Gaussian probe
/// and vacuum, via the generating function
///   <probe, exp(z1 r1 + z2 r2) vac> = K exp(beta.z + z^T Gamma z / 2).
/// Stable at depths where the explicit polynomial states are not.
Eigen::MatrixXcd ladder_overlaps(const PolyGaussFun& probe, const WeylOp& r1,
                                 const WeylOp& r2, const PolyGaussFun& vac,
                                 int nmax);

}  // namespace pb
