// Core function algebra: atom evaluation, exact and quadrature inner
// products, norms, and atom transformations.
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "replift/evaluator.hpp"
#include "replift/inner_product.hpp"
#include "replift/quadrature.hpp"
#include "replift/shannon.hpp"

using namespace replift;

namespace {

TensorAtom box_atom(double a, double b, double ya = 0.0, double yb = 1.0) {
  TensorAtom t;
  t.radial = {0.0, {a, b}, 0.0, 0.0};
  t.fiber = {{ya, yb}, 0.0};
  return t;
}

AtomSum as_sum(const TensorAtom& t) { return AtomSum(t); }

// Power series for the unit Fresnel-type integral: int_0^1 e^{pi i r^2} dr
// = sum_k (pi i)^k / (k! (2k+1)).
complex_t fresnel_unit_series() {
  complex_t sum{0.0, 0.0};
  complex_t term{1.0, 0.0};
  const complex_t z{0.0, kPi};
  for (int k = 0; k < 60; ++k) {
    sum += term / static_cast<double>(2 * k + 1);
    term *= z / static_cast<double>(k + 1);
  }
  return sum;
}

std::mt19937_64 rng(12345);

TensorAtom random_exactable_atom() {
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  std::uniform_real_distribution<double> iv(0.1, 3.0);
  TensorAtom t;
  double a = iv(rng), b = iv(rng);
  if (a > b) std::swap(a, b);
  if (a == b) b += 0.5;
  t.coeff = {ud(rng), ud(rng)};
  t.radial = {0.0, {a, b}, ud(rng), 0.0};
  double c = ud(rng), d = ud(rng);
  if (c > d) std::swap(c, d);
  if (c == d) d += 0.5;
  t.fiber = {{c, d}, ud(rng)};
  return t;
}

}  // namespace

TEST_CASE("atom evaluation at points") {
  TensorAtom t = box_atom(1.0, 2.0);
  CHECK(eval_atom(t, 1.5, 0.5) == complex_t{1.0, 0.0});
  CHECK(eval_atom(t, 2.5, 0.5) == complex_t{0.0, 0.0});
  CHECK(eval_atom(t, 0.5, 0.5) == complex_t{0.0, 0.0});
  // half-open radial interval (a, b]
  CHECK(eval_atom(t, 1.0, 0.5) == complex_t{0.0, 0.0});
  CHECK(eval_atom(t, 2.0, 0.5) == complex_t{1.0, 0.0});

  TensorAtom phased = box_atom(1.0, 3.0);
  phased.radial.lin_phase = 0.25;
  // e^{2 pi i * 0.25 * 2} = e^{pi i} = -1
  CHECK(std::abs(eval_atom(phased, 2.0, 0.5) - complex_t{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("exact inner products: indicators and orthogonality") {
  // <f_1 x e_{0,0}, f_1 x e_{0,0}> with w = 0 is the length of (1/2, 1]
  TensorAtom f1;
  f1.radial = band_indicator(1);
  f1.fiber = fiber_basis_line(0, 0);
  CHECK(inner_product_exact(f1, f1, RadialWeight{0.0}) == complex_t{0.5, 0.0});

  // Shannon atoms with distinct m are exactly orthogonal over one band
  TensorAtom s0 = shannon_atom(0, 0), s1 = shannon_atom(0, 1);
  complex_t ip = inner_product_exact(s0, s1, RadialWeight{0.0});
  CHECK(std::abs(ip) < 1e-15);
  CHECK(std::abs(inner_product_exact(s0, s0, RadialWeight{0.0}) -
                 complex_t{1.0, 0.0}) < 1e-15);

  // disjoint radial supports: exactly zero
  CHECK(inner_product_exact(box_atom(0.0, 1.0), box_atom(1.0, 2.0),
                            RadialWeight{0.0}) == complex_t{0.0, 0.0});
}

TEST_CASE("exact oscillatory pair matches closed form and quadrature") {
  TensorAtom a = box_atom(1.0, 2.0);
  a.radial.lin_phase = 0.3;
  TensorAtom b = box_atom(1.0, 2.0);
  complex_t got = inner_product_exact(a, b, RadialWeight{0.0});
  const complex_t i2pi{0.0, 2.0 * kPi * 0.3};
  complex_t want = (std::exp(i2pi * 2.0) - std::exp(i2pi * 1.0)) / i2pi;
  CHECK(std::abs(got - want) < 1e-14);

  auto q = inner_product_quadrature(to_evaluator(as_sum(a)),
                                    to_evaluator(as_sum(b)), RadialWeight{0.0},
                                    1e-12);
  CHECK(std::abs(got - q.value) < 1e-10);
}

TEST_CASE("quadrature handles the Fresnel phase") {
  TensorAtom a = box_atom(1e-12, 1.0);  // (0,1] up to measure zero at 0
  a.radial.quad_phase = 1.0;
  TensorAtom b = box_atom(1e-12, 1.0);
  auto q = inner_product_quadrature(to_evaluator(as_sum(a)),
                                    to_evaluator(as_sum(b)), RadialWeight{0.0},
                                    1e-12);
  CHECK(std::abs(q.value - fresnel_unit_series()) < 1e-10);
  // the exact path must refuse this pair
  CHECK_THROWS_AS(inner_product_exact(a, b, RadialWeight{0.0}), NonExactPair);
}

TEST_CASE("quadrature basics") {
  auto f = to_evaluator(as_sum(box_atom(1.0, 2.0)));
  auto q = inner_product_quadrature(f, f, RadialWeight{0.0}, 1e-10);
  CHECK(std::abs(q.value - complex_t{1.0, 0.0}) < 1e-10);
  CHECK(q.error_estimate <= 1e-10);

  auto g = to_evaluator(as_sum(box_atom(3.0, 4.0)));
  auto disjoint = inner_product_quadrature(f, g, RadialWeight{0.0}, 1e-10);
  CHECK(disjoint.value == complex_t{0.0, 0.0});
  CHECK(disjoint.error_estimate == 0.0);

  PointEvaluator unbounded = f;
  unbounded.support.first.b = kInf;
  CHECK_THROWS_AS(inner_product_quadrature(unbounded, f, RadialWeight{0.0}, 1e-10),
                  UnboundedSupport);
}

TEST_CASE("norms of the building blocks") {
  // ||f_m||^2 under ds/s = log 2 for every band
  for (int m = 1; m <= 20; ++m) {
    TensorAtom fm;
    fm.radial = band_indicator(m);
    fm.fiber = {{0.0, 1.0}, 0.0};
    double n = norm_exact(AtomSum(fm), RadialWeight{-1.0});
    CHECK(std::abs(n * n - kLog2) < 1e-14);
  }
  // ||e_{k,l}|| = 1 under the Lebesgue fiber measure
  TensorAtom e;
  e.radial = {0.0, {0.5, 1.5}, 0.0, 0.0};
  e.fiber = fiber_basis_line(2, -3);
  double n = norm_exact(AtomSum(e), RadialWeight{0.0});
  CHECK(std::abs(n * n - 1.0) < 1e-14);

  // truncated lift norm is a geometric sum
  auto lift = LazyShannonLift::line();
  AtomSum trunc(lift.fiber);
  double expect = 0.0;
  for (int b = 1; b <= 8; ++b) {
    trunc.add(lift.band_term(b));
    expect += std::exp2(-b);
  }
  double tn = norm_exact(trunc, RadialWeight{0.0});
  CHECK(std::abs(tn * tn - expect) < 1e-15);
}

TEST_CASE("atom transformations") {
  TensorAtom t = box_atom(1.0, 2.0);
  TensorAtom d = transform_atom(t, AtomAction::dilation(4.0));
  CHECK(d.coeff == complex_t{2.0, 0.0});
  CHECK(d.radial.interval.a == 0.25);
  CHECK(d.radial.interval.b == 0.5);

  TensorAtom id = transform_atom(t, AtomAction::identity());
  CHECK(id.coeff == t.coeff);
  CHECK(id.radial.interval.a == t.radial.interval.a);

  // dilation round trip restores the fields
  TensorAtom round = transform_atom(d, AtomAction::dilation(0.25));
  CHECK(std::abs(round.coeff - t.coeff) < 1e-15);
  CHECK(std::abs(round.radial.interval.a - 1.0) < 1e-15);
  CHECK(std::abs(round.radial.interval.b - 2.0) < 1e-15);

  // square-root substitution: (a,b] -> (sqrt a, sqrt b]
  TensorAtom sq = transform_atom(t, AtomAction::square_subst());
  CHECK(std::abs(sq.radial.interval.a - 1.0) < 1e-15);
  CHECK(std::abs(sq.radial.interval.b - std::sqrt(2.0)) < 1e-15);

  // a quadratic phase cannot pass through r -> r^2 inside the algebra
  TensorAtom vphased = t;
  vphased.radial.quad_phase = 1.0;
  CHECK_THROWS_AS(transform_atom(vphased, AtomAction::square_subst()),
                  UnsupportedAction);
}

TEST_CASE("conjugate symmetry on both paths") {
  for (int trial = 0; trial < 100; ++trial) {
    TensorAtom a = random_exactable_atom();
    TensorAtom b = random_exactable_atom();
    b.radial.lin_phase = a.radial.lin_phase;  // keep the pair exactly integrable
    complex_t fg = inner_product_exact(a, b, RadialWeight{0.0});
    complex_t gf = inner_product_exact(b, a, RadialWeight{0.0});
    CHECK(std::abs(fg - std::conj(gf)) < 1e-15 * std::max(1.0, std::abs(fg)));
  }
  for (int trial = 0; trial < 10; ++trial) {
    TensorAtom a = random_exactable_atom();
    TensorAtom b = random_exactable_atom();
    auto fe = to_evaluator(as_sum(a));
    auto ge = to_evaluator(as_sum(b));
    complex_t fg = inner_product_quadrature(fe, ge, RadialWeight{0.0}, 1e-11).value;
    complex_t gf = inner_product_quadrature(ge, fe, RadialWeight{0.0}, 1e-11).value;
    CHECK(std::abs(fg - std::conj(gf)) < 1e-10);
  }
}

TEST_CASE("exact path agrees with quadrature on random pairs") {
  for (int trial = 0; trial < 50; ++trial) {
    TensorAtom a = random_exactable_atom();
    TensorAtom b = random_exactable_atom();
    b.radial.lin_phase = a.radial.lin_phase;
    complex_t exact = inner_product_exact(a, b, RadialWeight{0.0});
    complex_t quad =
        inner_product_quadrature(to_evaluator(as_sum(a)), to_evaluator(as_sum(b)),
                                 RadialWeight{0.0}, 1e-10)
            .value;
    CHECK(std::abs(exact - quad) < 1e-9);
  }
}
