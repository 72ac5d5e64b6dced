#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pb/models.hpp"
#include "pb/polygauss.hpp"

using namespace pb;

namespace {

PolyGaussFun unit_gauss2(cplx w = 0.5) {
  return PolyGaussFun(CPoly::constant(2, 1.0), GaussEnvelope::isotropic(2, w));
}

double fn_distance(const PolyGaussFun& f, const PolyGaussFun& g) {
  double worst = 0.0;
  for (double x : {-1.5, -0.4, 0.0, 0.7, 2.1})
    for (double y : {-1.1, 0.3, 1.8})
      worst = std::max(worst, std::abs(pg_eval(f, {x, y}) - pg_eval(g, {x, y})));
  return worst;
}

PolyGaussFun random_fun(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  CMat M = 0.6 * CMat::Identity(2, 2);
  M(0, 1) = M(1, 0) = cplx(0.1 * u(rng), 0.1 * u(rng));
  M(0, 0) += cplx(0.2 * u(rng), 0.2 * u(rng));
  CVec v(2);
  v << cplx(u(rng), u(rng)), cplx(u(rng), u(rng));
  CPoly p(2);
  for (int t = 0; t < 3; ++t)
    p.add_term({std::uniform_int_distribution<int>(0, 2)(rng),
                std::uniform_int_distribution<int>(0, 2)(rng)},
               cplx(u(rng), u(rng)));
  if (p.is_zero()) p.add_term({0, 0}, 1.0);
  return PolyGaussFun(p, GaussEnvelope(M, v));
}

}  // namespace

TEST_CASE("envelope requires matching shapes and stays symmetric") {
  CMat M(2, 2);
  M << 1.0, cplx(0.2, 0.1), cplx(0.2, 0.1), 1.5;
  GaussEnvelope e(M, CVec::Zero(2));
  CHECK(e.M(0, 1) == e.M(1, 0));
  CHECK(e.min_re_eig() > 0.0);
}

TEST_CASE("addition identities") {
  PolyGaussFun f = unit_gauss2();
  CHECK(fn_distance(pg_add(f, PolyGaussFun::zero(2)), f) == 0.0);

  PolyGaussFun diff = pg_add(f, pg_scale(-1.0, f));
  CHECK(diff.is_zero());

  PolyGaussFun twice = pg_add(f, f);
  CHECK(twice.terms().size() == 1);
  CHECK(std::abs(pg_eval(twice, {0.0, 0.0}) - 2.0) < 1e-14);

  CHECK_THROWS_AS(pg_add(f, PolyGaussFun::zero(1)), std::invalid_argument);
}

TEST_CASE("polynomial multiplication accumulates monomials") {
  PolyGaussFun f = unit_gauss2(1.0);  // exp(-x1^2 - x2^2)
  CHECK(fn_distance(pg_mul_poly(CPoly::constant(2, 1.0), f), f) == 0.0);

  const CPoly x1 = CPoly::variable(2, 0);
  PolyGaussFun xf = pg_mul_poly(x1, f);
  CHECK(xf.terms().front().poly.coeff({1, 0}) == cplx(1.0));
  PolyGaussFun xxf = pg_mul_poly(x1, xf);
  CHECK(xxf.terms().front().poly.coeff({2, 0}) == cplx(1.0));
  CHECK(xxf.terms().front().poly.size() == 1);
}

TEST_CASE("differentiation of gaussians") {
  PolyGaussFun f = unit_gauss2();  // exp(-(x1^2+x2^2)/2)
  PolyGaussFun df = pg_differentiate(f, 0);
  // expect (-x1) * f
  PolyGaussFun expect = pg_mul_poly(-1.0 * CPoly::variable(2, 0), f);
  CHECK(fn_distance(df, expect) < 1e-15);

  PolyGaussFun x1f = pg_mul_poly(CPoly::variable(2, 0), f);
  PolyGaussFun dx1f = pg_differentiate(x1f, 0);
  // expect (1 - x1^2) * f
  CPoly q = CPoly::constant(2, 1.0) - CPoly::variable(2, 0) * CPoly::variable(2, 0);
  CHECK(fn_distance(dx1f, pg_mul_poly(q, f)) < 1e-15);

  CHECK_THROWS_AS(pg_differentiate(f, 2), std::out_of_range);
}

TEST_CASE("second derivative of a model vacuum matches finite differences") {
  ModelBundle m = build_example1(Ex1Params{});
  PolyGaussFun d2 = pg_differentiate(pg_differentiate(m.vacuum_phi, 1), 1);
  PolyGaussFun d1 = pg_differentiate(m.vacuum_phi, 1);
  for (auto [x, y] : {std::pair{0.0, 0.0}, {0.5, -0.3}, {-1.0, 0.2},
                      {0.8, 0.8}, {-0.4, -1.1}}) {
    const cplx fd = oracle::fd_partial(d1, 1, {x, y});
    const cplx got = pg_eval(d2, {x, y});
    CHECK(std::abs(got - fd) <= 1e-6 * (1.0 + std::abs(got)));
  }
}

TEST_CASE("translation updates the exponent exactly") {
  PolyGaussFun f = unit_gauss2();
  CHECK(fn_distance(pg_translate(f, CVec::Zero(2)), f) == 0.0);

  // real shift: e^{-x^2/2} -> e^{-x^2/2 - dx - d^2/2} in the first variable
  CVec d = CVec::Zero(2);
  d(0) = 0.7;
  PolyGaussFun g = pg_translate(f, d);
  for (double x : {-1.0, 0.0, 0.4, 1.3})
    CHECK(std::abs(pg_eval(g, {x, 0.0}) -
                   std::exp(-0.5 * (x + 0.7) * (x + 0.7))) < 1e-14);

  // imaginary shift: e^{-x^2/2} -> e^{-x^2/2 - ix + 1/2}
  CVec di = CVec::Zero(2);
  di(0) = cplx(0.0, 1.0);
  PolyGaussFun gi = pg_translate(f, di);
  for (double x : {-0.8, 0.0, 0.9}) {
    const cplx expect =
        std::exp(-0.5 * x * x + 0.5) * std::exp(cplx(0.0, -x));
    CHECK(std::abs(pg_eval(gi, {x, 0.0}) - expect) < 1e-13);
  }
}

TEST_CASE("translation composes additively") {
  std::mt19937 rng(7);
  PolyGaussFun f = random_fun(rng);
  CVec d1(2), d2(2);
  d1 << cplx(0.3, -0.2), cplx(-0.1, 0.5);
  d2 << cplx(-0.6, 0.1), cplx(0.2, 0.2);
  PolyGaussFun twice = pg_translate(pg_translate(f, d1), d2);
  PolyGaussFun once = pg_translate(f, d1 + d2);
  PolyGaussFun diff = pg_add(twice, pg_scale(-1.0, once));
  CHECK(diff.max_abs_coeff() <= 1e-12 * (1.0 + once.max_abs_coeff()));
}

TEST_CASE("derivative commutes with translation") {
  std::mt19937 rng(11);
  PolyGaussFun f = random_fun(rng);
  CVec d(2);
  d << cplx(0.4, 0.3), cplx(-0.2, -0.6);
  PolyGaussFun lhs = pg_differentiate(pg_translate(f, d), 0);
  PolyGaussFun rhs = pg_translate(pg_differentiate(f, 0), d);
  CHECK(fn_distance(lhs, rhs) < 1e-12);
}

TEST_CASE("linear exponential multiplication") {
  PolyGaussFun f = unit_gauss2(1.0);
  CHECK(fn_distance(pg_mul_exp_linear(f, CVec::Zero(2), 0.0), f) == 0.0);

  CVec u = CVec::Zero(2);
  u(0) = 1.0;  // multiply by e^{x1}
  PolyGaussFun g = pg_mul_exp_linear(f, u, 0.0);
  for (double x : {-1.0, 0.2, 1.1})
    CHECK(std::abs(pg_eval(g, {x, 0.0}) - std::exp(-x * x + x)) < 1e-14);
  for (const auto& t : g.terms()) CHECK(t.env.min_re_eig() > 0.0);
}

TEST_CASE("conjugation is an involution and matches pointwise conjugates") {
  PolyGaussFun f = unit_gauss2();
  CHECK(fn_distance(pg_conjugate(f), f) == 0.0);  // real function

  std::mt19937 rng(3);
  PolyGaussFun g = random_fun(rng);
  CHECK(fn_distance(pg_conjugate(pg_conjugate(g)), g) == 0.0);
  for (double x : {-0.7, 0.0, 1.2}) {
    const cplx direct = std::conj(pg_eval(g, {x, 0.4}));
    CHECK(std::abs(pg_eval(pg_conjugate(g), {x, 0.4}) - direct) < 1e-13);
  }

  // conj(e^{-x^2 - ix}) = e^{-x^2 + ix}
  CVec u = CVec::Zero(2);
  u(0) = cplx(0.0, -1.0);
  PolyGaussFun h = pg_mul_exp_linear(unit_gauss2(1.0), u, 0.0);
  PolyGaussFun hc = pg_conjugate(h);
  for (double x : {-0.5, 0.8})
    CHECK(std::abs(pg_eval(hc, {x, 0.0}) -
                   std::exp(-x * x) * std::exp(cplx(0.0, x))) < 1e-14);
}

TEST_CASE("evaluation basics") {
  CHECK(pg_eval(unit_gauss2(1.0), {0.0, 0.0}) == cplx(1.0));
  CHECK(pg_eval(PolyGaussFun::zero(2), {1.3, -2.2}) == cplx(0.0));

  // Example-2 vacuum against its closed form at (1,1).
  Ex2Params p;
  ModelBundle m = build_example2(p);
  const cplx C(-p.B, p.A);
  auto closed = [&](double x1, double x2) {
    return std::exp(-0.5 * (x1 * x1 + x2 * x2) - C * (x1 + x2));
  };
  const cplx ratio_ref = pg_eval(m.vacuum_phi, {0.0, 0.0}) / closed(0, 0);
  const cplx got = pg_eval(m.vacuum_phi, {1.0, 1.0});
  CHECK(std::abs(got - ratio_ref * closed(1.0, 1.0)) <=
        1e-12 * std::abs(got));
}

TEST_CASE("operations are linear in the function argument") {
  std::mt19937 rng(19);
  PolyGaussFun f = random_fun(rng), g = random_fun(rng);
  const cplx alpha(0.7, -0.4), beta(-0.3, 0.9);
  PolyGaussFun combo = pg_add(pg_scale(alpha, f), pg_scale(beta, g));
  CVec d(2);
  d << cplx(0.2, 0.1), cplx(-0.3, 0.4);

  auto lin_check = [&](auto op) {
    PolyGaussFun lhs = op(combo);
    PolyGaussFun rhs =
        pg_add(pg_scale(alpha, op(f)), pg_scale(beta, op(g)));
    CHECK(fn_distance(lhs, rhs) < 1e-12);
  };
  lin_check([](const PolyGaussFun& h) { return pg_differentiate(h, 1); });
  lin_check([&](const PolyGaussFun& h) { return pg_translate(h, d); });
  lin_check([&](const PolyGaussFun& h) {
    return pg_mul_poly(CPoly::variable(2, 0), h);
  });

  // antilinearity of conjugation
  PolyGaussFun lhs = pg_conjugate(combo);
  PolyGaussFun rhs = pg_add(pg_scale(std::conj(alpha), pg_conjugate(f)),
                            pg_scale(std::conj(beta), pg_conjugate(g)));
  CHECK(fn_distance(lhs, rhs) < 1e-12);
}

TEST_CASE("pointwise product adds envelopes") {
  std::mt19937 rng(23);
  PolyGaussFun f = random_fun(rng), g = random_fun(rng);
  PolyGaussFun prod = pg_mul(f, g);
  for (double x : {-0.9, 0.1, 0.8}) {
    const cplx expect = pg_eval(f, {x, -x}) * pg_eval(g, {x, -x});
    CHECK(std::abs(pg_eval(prod, {x, -x}) - expect) <=
          1e-12 * (1.0 + std::abs(expect)));
  }
}
