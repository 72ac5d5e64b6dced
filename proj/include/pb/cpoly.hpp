#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace pb {

using cplx = std::complex<double>;

/// Exponent tuple for a monomial x_1^{g_1}...x_n^{g_n}.
using MultiIndex = std::vector<int>;

inline int mi_total_degree(const MultiIndex& g) {
  int d = 0;
  for (int e : g) d += e;
  return d;
}

/// Sparse multivariate polynomial with complex coefficients.
///
/// Invariant: no stored coefficient is exactly zero; all keys share the
/// same length n.  std::map keeps term order deterministic.
class CPoly {
 public:
  explicit CPoly(int nvars) : n_(nvars) {
    if (nvars < 1) throw std::invalid_argument("CPoly: nvars must be >= 1");
  }

  static CPoly constant(int nvars, cplx c) {
    CPoly p(nvars);
    p.add_term(MultiIndex(nvars, 0), c);
    return p;
  }

  static CPoly monomial(int nvars, const MultiIndex& g, cplx c) {
    CPoly p(nvars);
    p.add_term(g, c);
    return p;
  }

  /// The variable x_j (0-based).
  static CPoly variable(int nvars, int j);

  int nvars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<MultiIndex, cplx>& terms() const { return terms_; }

  cplx coeff(const MultiIndex& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  void add_term(const MultiIndex& g, cplx c);

  int total_degree() const;
  int max_degree_in(int j) const;
  double max_abs_coeff() const;

  CPoly& operator+=(const CPoly& o);
  CPoly& operator-=(const CPoly& o);
  CPoly& operator*=(cplx c);

  friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
  friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
  friend CPoly operator*(cplx c, CPoly p) { return p *= c; }
  friend CPoly operator*(const CPoly& a, const CPoly& b);

  /// Partial derivative with respect to x_j (of the polynomial only).
  CPoly differentiate(int j) const;

  /// Returns q with q(x) = p(x + delta).
  CPoly shifted(const std::vector<cplx>& delta) const;

  CPoly conjugated() const;

  cplx eval(const std::vector<cplx>& x) const;

  /// Drops coefficients with |c| <= rel_tol * max|c|.
  void prune(double rel_tol = 1e-15);

 private:
  void check_index(const MultiIndex& g) const;

  int n_;
  std::map<MultiIndex, cplx> terms_;
};

}  // namespace pb
