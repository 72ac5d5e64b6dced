#include "pb/gauss_integrals.hpp"

#include <cmath>
#include <numbers>

namespace pb {

namespace {

constexpr double kPdTol = 1e-12;
constexpr double kMinBranchStep = 1e-6;

void require_re_pd(const CMat& M) {
  Eigen::MatrixXd R = M.real();
  R = 0.5 * (R + R.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
  if (es.eigenvalues().minCoeff() <= kPdTol)
    throw std::domain_error("gaussian integral: Re M not positive definite");
}

// Unwrapped phase of det(M(t)) along M(t) = Re M + t i Im M, t: 0 -> 1.
// Step halving keeps each phase increment below pi/2 so the branch of
// det^{-1/2} is tracked continuously from the positive-definite real part.
double tracked_det_phase(const CMat& M) {
  const CMat R = M.real().cast<cplx>();
  const CMat I = cplx(0.0, 1.0) * M.imag().cast<cplx>();
  double phase = 0.0;
  cplx det_prev = R.determinant();
  double t = 0.0, step = 0.25;
  while (t < 1.0) {
    const double tn = std::min(1.0, t + step);
    const cplx det_cur = (R + tn * I).determinant();
    const double dphase = std::arg(det_cur / det_prev);
    if (std::abs(dphase) > std::numbers::pi / 2.0 && step > kMinBranchStep) {
      step *= 0.5;
      continue;
    }
    phase += dphase;
    det_prev = det_cur;
    t = tn;
  }
  return phase;
}

}  // namespace

cplx gaussian_base_integral(const CMat& M, const CVec& v) {
  require_re_pd(M);
  const int n = static_cast<int>(v.size());
  const cplx det = M.determinant();
  const double phase = tracked_det_phase(M);
  const cplx det_invsqrt = std::exp(-0.5 * (std::log(std::abs(det)) + cplx(0.0, phase)));
  const CVec Minv_v = M.partialPivLu().solve(v);
  const cplx quad = 0.25 * (v.transpose() * Minv_v).value();
  return std::pow(std::numbers::pi, 0.5 * n) * det_invsqrt * std::exp(quad);
}

MomentContext::MomentContext(const CMat& M, const CVec& v, int moment_cap)
    : cap_(moment_cap) {
  require_re_pd(M);
  const CMat Minv = M.inverse();
  mean_ = -0.5 * (Minv * v);
  cov_ = 0.5 * Minv;
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  base_ = gaussian_base_integral(M, v);
}

std::size_t MomentContext::key(const MultiIndex& g) const {
  std::size_t k = 0;
  for (int e : g) k = k * static_cast<std::size_t>(cap_ + 1) + static_cast<std::size_t>(e);
  return k;
}

cplx MomentContext::wick_moment(const MultiIndex& gamma) {
  const int total = mi_total_degree(gamma);
  if (total > cap_) throw std::domain_error("wick_moment: moment cap exceeded");
  if (total == 0) return 1.0;
  if (total % 2 == 1) return 0.0;
  const std::size_t k = key(gamma);
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;

  // Pairing recurrence: E[y_i y^g] = sum_j cov(i,j) g_j E[y^{g - e_j}].
  const int n = static_cast<int>(gamma.size());
  int i = 0;
  while (gamma[i] == 0) ++i;
  MultiIndex g = gamma;
  g[i] -= 1;
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    if (g[j] == 0) continue;
    MultiIndex h = g;
    h[j] -= 1;
    acc += cov_(i, j) * static_cast<double>(g[j]) * wick_moment(h);
  }
  memo_.emplace(k, acc);
  return acc;
}

cplx wick_moment(const CMat& cov, const MultiIndex& gamma, int moment_cap) {
  // Standalone entry point: builds a context whose covariance is the given
  // one (M = cov^{-1}/2) and evaluates the centered moment.
  MomentContext ctx(0.5 * cov.inverse(), CVec::Zero(cov.rows()), moment_cap);
  return ctx.wick_moment(gamma);
}

cplx integrate_polygauss(const PolyGaussFun& f) {
  cplx acc = 0.0;
  for (const auto& t : f.terms()) {
    MomentContext ctx(t.env.M, t.env.v);
    std::vector<cplx> mu(ctx.mean().data(), ctx.mean().data() + ctx.mean().size());
    const CPoly recentered = t.poly.shifted(mu);
    cplx poly_moment = 0.0;
    for (const auto& [g, c] : recentered.terms()) poly_moment += c * ctx.wick_moment(g);
    acc += ctx.base() * std::exp(-t.env.s) * poly_moment;
  }
  return acc;
}

cplx inner_product(const PolyGaussFun& f, const PolyGaussFun& g) {
  return integrate_polygauss(pg_mul(pg_conjugate(f), g));
}

double norm(const PolyGaussFun& f) {
  const cplx ip = inner_product(f, f);
  const double scale = 1.0 + std::abs(ip);
  if (std::abs(ip.imag()) > 1e-10 * scale)
    throw std::runtime_error("norm: <f,f> has a non-real part beyond tolerance");
  if (ip.real() < -1e-10 * scale)
    throw std::runtime_error("norm: <f,f> negative beyond tolerance");
  return std::sqrt(std::max(ip.real(), 0.0));
}

}  // namespace pb
