#include "pb/cpoly.hpp"

#include <algorithm>
#include <cmath>

namespace pb {

void CPoly::check_index(const MultiIndex& g) const {
  if (static_cast<int>(g.size()) != n_)
    throw std::invalid_argument("CPoly: multi-index length mismatch");
  for (int e : g)
    if (e < 0) throw std::invalid_argument("CPoly: negative exponent");
}

CPoly CPoly::variable(int nvars, int j) {
  if (j < 0 || j >= nvars) throw std::out_of_range("CPoly::variable: bad index");
  MultiIndex g(nvars, 0);
  g[j] = 1;
  return monomial(nvars, g, 1.0);
}

void CPoly::add_term(const MultiIndex& g, cplx c) {
  check_index(g);
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.emplace(g, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

int CPoly::total_degree() const {
  int d = 0;
  for (const auto& [g, c] : terms_) d = std::max(d, mi_total_degree(g));
  return d;
}

int CPoly::max_degree_in(int j) const {
  int d = 0;
  for (const auto& [g, c] : terms_) d = std::max(d, g[j]);
  return d;
}

double CPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [g, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

CPoly& CPoly::operator+=(const CPoly& o) {
  if (o.n_ != n_) throw std::invalid_argument("CPoly: dimension mismatch");
  for (const auto& [g, c] : o.terms_) add_term(g, c);
  return *this;
}

CPoly& CPoly::operator-=(const CPoly& o) {
  if (o.n_ != n_) throw std::invalid_argument("CPoly: dimension mismatch");
  for (const auto& [g, c] : o.terms_) add_term(g, -c);
  return *this;
}

CPoly& CPoly::operator*=(cplx c) {
  if (c == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [g, v] : terms_) v *= c;
  return *this;
}

CPoly operator*(const CPoly& a, const CPoly& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("CPoly: dimension mismatch");
  CPoly r(a.n_);
  MultiIndex g(a.n_);
  for (const auto& [ga, ca] : a.terms_)
    for (const auto& [gb, cb] : b.terms_) {
      for (int j = 0; j < a.n_; ++j) g[j] = ga[j] + gb[j];
      r.add_term(g, ca * cb);
    }
  return r;
}

CPoly CPoly::differentiate(int j) const {
  if (j < 0 || j >= n_) throw std::out_of_range("CPoly::differentiate: bad index");
  CPoly r(n_);
  for (const auto& [g, c] : terms_) {
    if (g[j] == 0) continue;
    MultiIndex h = g;
    h[j] -= 1;
    r.add_term(h, c * static_cast<double>(g[j]));
  }
  return r;
}

CPoly CPoly::shifted(const std::vector<cplx>& delta) const {
  if (static_cast<int>(delta.size()) != n_)
    throw std::invalid_argument("CPoly::shifted: dimension mismatch");
  // Powers of delta_j and binomial rows, up to the max degree per variable.
  std::vector<std::vector<cplx>> dpow(n_);
  int dmax = 0;
  for (int j = 0; j < n_; ++j) dmax = std::max(dmax, max_degree_in(j));
  std::vector<std::vector<double>> binom(dmax + 1);
  for (int a = 0; a <= dmax; ++a) {
    binom[a].assign(a + 1, 1.0);
    for (int k = 1; k < a; ++k) binom[a][k] = binom[a - 1][k - 1] + binom[a - 1][k];
  }
  for (int j = 0; j < n_; ++j) {
    dpow[j].assign(dmax + 1, 1.0);
    for (int k = 1; k <= dmax; ++k) dpow[j][k] = dpow[j][k - 1] * delta[j];
  }

  CPoly r(n_);
  MultiIndex h(n_);
  // (x+d)^g expands variable by variable.
  std::vector<int> k(n_, 0);
  for (const auto& [g, c] : terms_) {
    std::fill(k.begin(), k.end(), 0);
    while (true) {
      cplx w = c;
      for (int j = 0; j < n_; ++j) {
        w *= binom[g[j]][k[j]] * dpow[j][g[j] - k[j]];
        h[j] = k[j];
      }
      r.add_term(h, w);
      int j = 0;
      while (j < n_ && k[j] == g[j]) k[j++] = 0;
      if (j == n_) break;
      ++k[j];
    }
  }
  return r;
}

CPoly CPoly::conjugated() const {
  CPoly r(n_);
  for (const auto& [g, c] : terms_) r.add_term(g, std::conj(c));
  return r;
}

cplx CPoly::eval(const std::vector<cplx>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("CPoly::eval: dimension mismatch");
  cplx acc = 0.0;
  for (const auto& [g, c] : terms_) {
    cplx t = c;
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < g[j]; ++k) t *= x[j];
    acc += t;
  }
  return acc;
}

void CPoly::prune(double rel_tol) {
  const double cut = rel_tol * max_abs_coeff();
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= cut)
      it = terms_.erase(it);
    else
      ++it;
  }
}

}  // namespace pb
