// Band-indexed generating functions: bijections, band atoms, lazy term
// lookup, partial sums, and the chart-side generators.
#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "replift/shannon.hpp"
#include "replift/inner_product.hpp"

using namespace replift;

TEST_CASE("canonical pairing bijection") {
  auto d = BijectionDR::canonical();
  CHECK(d.map(0, 0) == 1);
  CHECK(d.map(1, 0) == 2);
  auto kl = d.inv(2);
  CHECK(kl.first == 1);
  CHECK(kl.second == 0);

  // injective on [-50, 50]^2 and inverse-consistent for n in [1, 10201]
  std::set<std::int64_t> seen;
  for (std::int64_t k = -50; k <= 50; ++k)
    for (std::int64_t l = -50; l <= 50; ++l) {
      std::int64_t n = d.map(k, l);
      CHECK(n >= 1);
      CHECK(seen.insert(n).second);
    }
  for (std::int64_t n = 1; n <= 10201; ++n) {
    auto [k, l] = d.inv(n);
    CHECK(d.map(k, l) == n);
  }
  CHECK_THROWS_AS(d.inv(0), std::out_of_range);

  auto dt = BijectionDT::canonical();
  std::set<std::int64_t> seen1;
  for (std::int64_t l = -100; l <= 100; ++l) CHECK(seen1.insert(dt.map(l)).second);
  for (std::int64_t n = 1; n <= 201; ++n) CHECK(dt.map(dt.inv(n)) == n);
}

TEST_CASE("band atoms") {
  TensorAtom s = shannon_atom(0, 0);
  CHECK(s.coeff == complex_t{1.0, 0.0});
  CHECK(s.radial.interval.a == 1.0);
  CHECK(s.radial.interval.b == 2.0);
  CHECK(s.radial.lin_phase == 0.0);

  s = shannon_atom(1, 0);
  CHECK(std::abs(s.coeff - complex_t{std::sqrt(2.0), 0.0}) < 1e-15);
  CHECK(s.radial.interval.a == 0.5);
  CHECK(s.radial.interval.b == 1.0);

  for (int m : {-2, 0, 3})
    for (int mp : {-2, 0, 3}) {
      complex_t ip = inner_product_exact(shannon_atom(1, m), shannon_atom(1, mp),
                                         RadialWeight{0.0});
      CHECK(std::abs(ip - (m == mp ? complex_t{1.0, 0.0} : complex_t{0.0, 0.0})) <
            1e-15);
    }
}

TEST_CASE("single-term lookup") {
  auto lift = LazyShannonLift::line();
  auto t = lift.term_at(0.75);
  REQUIRE(t.has_value());
  CHECK(t->radial.interval.a == 0.5);
  CHECK(t->radial.interval.b == 1.0);
  CHECK(t->fiber.interval.a == 0.0);  // e_{0,0}
  CHECK(t->fiber.freq == 0.0);

  t = lift.term_at(0.3);
  REQUIRE(t.has_value());
  CHECK(t->radial.interval.a == 0.25);
  CHECK(t->fiber.interval.a == 1.0);  // e_{1,0}
  CHECK(t->fiber.freq == 0.0);

  CHECK_FALSE(lift.term_at(1.5).has_value());
  CHECK_FALSE(lift.term_at(0.0).has_value());
  // exact band edges: (2^-n, 2^-n+1] is half open
  auto edge = lift.term_at(1.0);
  REQUIRE(edge.has_value());
  CHECK(edge->radial.interval.b == 1.0);
  auto half = lift.term_at(0.5);
  REQUIRE(half.has_value());
  CHECK(half->radial.interval.b == 0.5);
}

TEST_CASE("partial sums and norm telescoping") {
  auto lift = LazyShannonLift::line();
  AtomSum s0 = lift.partial_sum(0);
  REQUIRE(s0.atoms.size() == 1);
  double n0 = norm_exact(s0, RadialWeight{0.0});
  CHECK(std::abs(n0 * n0 - 0.5) < 1e-15);

  double prev_tail = 1.0;
  for (int N = 0; N <= 3; ++N) {
    AtomSum s = lift.partial_sum(N);
    double expect = 0.0;
    for (std::int64_t k = -N; k <= N; ++k)
      for (std::int64_t l = -N; l <= N; ++l)
        expect += std::exp2(static_cast<double>(-lift.map(k, l)));
    double n = norm_exact(s, RadialWeight{0.0});
    CHECK(std::abs(n * n - expect) < 1e-15);
    double tail = 1.0 - n * n;
    CHECK(tail >= 0.0);
    CHECK(tail <= prev_tail);
    prev_tail = tail;
  }

  auto circle = LazyShannonLift::circle();
  AtomSum c1 = circle.partial_sum(1);
  REQUIRE(c1.atoms.size() == 3);
  auto dt = BijectionDT::canonical();
  double expect = std::exp2(-static_cast<double>(dt.map(-1))) +
                  std::exp2(-static_cast<double>(dt.map(0))) +
                  std::exp2(-static_cast<double>(dt.map(1)));
  double n = norm_exact(c1, RadialWeight{0.0});
  CHECK(std::abs(n * n - expect) < 1e-15);
}

TEST_CASE("partial sums agree with the lazy lookup at 1000 points") {
  auto lift = LazyShannonLift::line();
  const int N = 6;
  AtomSum s = lift.partial_sum(N);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uxi(1e-4, 1.0);
  std::uniform_real_distribution<double> uy(-2.0, 2.0);
  int covered = 0;
  for (int i = 0; i < 1000; ++i) {
    double xi = uxi(rng), y = uy(rng);
    auto t = lift.term_at(xi);
    REQUIRE(t.has_value());
    auto [k, l] = lift.inv(band_of(xi).value());
    if (std::abs(k) > N || std::abs(l) > N) continue;
    ++covered;
    CHECK(std::abs(s.eval(xi, y) - eval_atom(*t, xi, y)) < 1e-15);
  }
  CHECK(covered > 0);
}

TEST_CASE("quadratic-side lift") {
  auto q = lifted_generator_q(LazyShannonLift::line());
  auto t = q.term_at(0.9);  // 0.81 in (1/2, 1]
  REQUIRE(t.has_value());
  CHECK(std::abs(t->coeff - complex_t{std::sqrt(2.0), 0.0}) < 1e-15);
  CHECK(t->radial.power == 0.5);
  CHECK(std::abs(t->radial.interval.a - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(t->radial.interval.b == 1.0);
  CHECK(t->fiber.interval.a == 0.0);

  CHECK_FALSE(q.term_at(1.1).has_value());

  // unitarity on truncations
  AtomSum base(FiberKind::Line), lifted(FiberKind::Line);
  for (int b = 1; b <= 10; ++b) {
    base.add(q.base.band_term(b));
    lifted.add(q.band_term(b));
  }
  double n0 = norm_exact(base, RadialWeight{0.0});
  double n1 = norm_exact(lifted, RadialWeight{0.0});
  CHECK(std::abs(n1 - n0) < 1e-14);
}

TEST_CASE("chart-side generator") {
  auto lift = LazyShannonLift::line();
  // case I at alpha = -1: identical to the quadratic-side lift
  PointEvaluator g = generator_J(CaseTag::I(-1.0), lift, 40);
  auto q = lifted_generator_q(lift);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ur(0.05, 0.999);
  std::uniform_real_distribution<double> uy(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    double r = ur(rng), y = uy(rng);
    auto t = q.term_at(r);
    REQUIRE(t.has_value());  // r in (0.05, 1) keeps r^2 within 40 bands
    complex_t want = eval_atom(*t, r, y);
    CHECK(std::abs(g(r, y) - want) < 1e-13);
  }

  // case II: weight x1^{-1/2} times the quadratic-side value at the warped point
  PointEvaluator g2 = generator_J(CaseTag::II(), lift, 40);
  {
    double x1 = 0.9, x2 = 0.0;
    auto warped = chart_forward(CaseTag::II(), {x1, x2});
    auto t = q.term_at(warped.first);
    REQUIRE(t.has_value());
    complex_t want = std::pow(x1, -0.5) * eval_atom(*t, warped.first, warped.second);
    CHECK(std::abs(g2(x1, x2) - want) < 1e-13);
  }

  // support bound transported by the charts: zero beyond first coordinate 1
  for (const auto& c : {CaseTag::I(-0.5), CaseTag::II()}) {
    PointEvaluator gj = generator_J(c, lift, 40);
    CHECK(gj(1.25, 0.1) == complex_t{0.0, 0.0});
  }
  PointEvaluator g3 = generator_J(CaseTag::III(0.7), LazyShannonLift::circle(), 40);
  CHECK(g3(1.25, 0.1) == complex_t{0.0, 0.0});

  // fiber mismatch is rejected
  CHECK_THROWS_AS(generator_J(CaseTag::III(0.7), lift, 40), CaseMismatch);
  CHECK_THROWS_AS(generator_J(CaseTag::II(), LazyShannonLift::circle(), 40),
                  CaseMismatch);
}
