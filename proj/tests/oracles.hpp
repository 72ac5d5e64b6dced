#pragma once

#include <functional>

#include "pb/models.hpp"

// Independent reference implementations used only by the test suite.  None
// of these share code paths with the library routines they validate.
namespace oracle {

using pb::cplx;
using pb::PolyGaussFun;
using pb::WeylOp;

// Composite Gauss-Legendre quadrature of f over [lo,hi]^2, panel-doubling
// until successive refinements agree to rel_tol.
cplx quad2d(const std::function<cplx(double, double)>& f, double lo = -8.0,
            double hi = 8.0, double rel_tol = 1e-9);

cplx quad2d_polygauss(const PolyGaussFun& f, double rel_tol = 1e-9);

// <f, g> by quadrature of conj(f) * g.
cplx quad2d_inner(const PolyGaussFun& f, const PolyGaussFun& g,
                  double rel_tol = 1e-9);

// Fourth-order central finite difference of d/dx_j at a real point.
cplx fd_partial(const PolyGaussFun& f, int j, const std::vector<double>& x,
                double h = 1e-3);

// exp(L) f as the truncated series sum_{k<=K} L^k f / k!, K grown until the
// added term is below tail_tol in max coefficient.
PolyGaussFun explin_series_apply(const WeylOp& L, const PolyGaussFun& f,
                                 double tail_tol = 1e-10, int max_terms = 60);

// Matrix of a two-variable WeylOp in the tensor Hermite-function basis with
// basis_n functions per mode (dimension basis_n^2).
Eigen::MatrixXcd hermite_matrix(const WeylOp& A, int basis_n);

// Eigenvalues of a dense complex matrix via LAPACK zgeev, sorted by real
// part (then imaginary part).
std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXcd& m);

// Lowest `count` eigenvalues of the truncated Hermite-basis matrix of A.
std::vector<cplx> hermite_spectrum(const WeylOp& A, int basis_n, int count);

// Orthonormal 1D Hermite function H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi))
// evaluated by the stable three-term recurrence.
double hermite_function(int n, double x);

}  // namespace oracle
