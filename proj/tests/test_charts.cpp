// Coordinate charts: closed forms, round trips, Jacobians, the polar and
// hyperbolic transfers, and the dilation invariance of the second coordinate.
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "replift/charts.hpp"

using namespace replift;

namespace {

std::mt19937_64 rng(4242);

std::vector<CaseTag> chart_cases() {
  std::vector<CaseTag> out;
  for (double a : {-1.0, -0.5, -0.1}) out.push_back(CaseTag::I(a));
  out.push_back(CaseTag::II());
  for (double a : {0.0, 0.7, 2.0}) out.push_back(CaseTag::III(a));
  for (double a : {0.0, 0.7, 2.0}) out.push_back(CaseTag::IV(a));
  return out;
}

ChartPoint random_point(const CaseTag& c) {
  std::uniform_real_distribution<double> ux(0.05, 4.0);
  std::uniform_real_distribution<double> uy(-3.0, 3.0);
  std::uniform_real_distribution<double> uth(0.0, 1.0);
  double second = (c.kind == CaseKind::III) ? uth(rng) : uy(rng);
  return {ux(rng), second};
}

}  // namespace

TEST_CASE("chart closed forms") {
  auto p = chart_forward(CaseTag::I(-0.5), {2.0, 3.0});
  CHECK(p.first == 2.0);
  CHECK(std::abs(p.second - 6.0) < 1e-14);

  p = chart_forward(CaseTag::II(), {1.0, 5.0});
  CHECK(p.first == 1.0);
  CHECK(std::abs(p.second - 5.0) < 1e-14);

  p = chart_forward(CaseTag::I(-1.0), {1.7, -2.3});
  CHECK(p.first == 1.7);
  CHECK(std::abs(p.second + 2.3) < 1e-15);

  CHECK_THROWS_AS(chart_forward(CaseTag::II(), {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(chart_forward(CaseTag::II(), {-1.0, 1.0}), DomainError);
}

TEST_CASE("round trips to 1e-14 on 500 points per case") {
  for (const auto& c : chart_cases()) {
    for (int i = 0; i < 500; ++i) {
      ChartPoint p = random_point(c);
      ChartPoint q = chart_backward(c, chart_forward(c, p));
      CHECK(std::abs(q.first - p.first) < 1e-14 * std::max(1.0, p.first));
      double d2 = std::abs(q.second - p.second);
      if (c.kind == CaseKind::III) d2 = std::min(d2, 1.0 - d2);
      CHECK(d2 < 1e-13 * std::max(1.0, std::abs(p.second)));
    }
  }
}

TEST_CASE("analytic Jacobians match central differences") {
  const double h = 1e-6;
  for (const auto& c : chart_cases()) {
    for (int i = 0; i < 100; ++i) {
      ChartPoint p = random_point(c);
      double jac = chart_jacobian(c, p);
      double up = chart_backward(c, {p.first, p.second + h}).second;
      double dn = chart_backward(c, {p.first, p.second - h}).second;
      if (c.kind == CaseKind::III) {
        // unwrap the circle difference
        double diff = up - dn;
        diff -= std::round(diff);
        up = dn + diff;
      }
      double fd = (up - dn) / (2.0 * h);
      CHECK(std::abs(jac - fd) < 1e-6 * std::max(1.0, std::abs(jac)));
    }
  }
}

TEST_CASE("dilation flow leaves the second new coordinate invariant") {
  std::uniform_real_distribution<double> ut(-1.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    double t = ut(rng);
    // case I: (x1, x2) -> (e^{-alpha t} x1, e^{-(alpha+1) t} x2)
    for (double a : {-1.0, -0.5, -0.1}) {
      CaseTag c = CaseTag::I(a);
      ChartPoint p = random_point(c);
      double y2 = chart_forward(c, p).second;
      double y2t = chart_forward(c, {std::exp(-a * t) * p.first,
                                     std::exp(-(a + 1.0) * t) * p.second})
                       .second;
      CHECK(std::abs(y2t - y2) < 1e-12 * std::max(1.0, std::abs(y2)));
    }
    // case II: (x1, x2) -> (e^{-t} x1, e^{-t}(x2 - t x1))
    {
      CaseTag c = CaseTag::II();
      ChartPoint p = random_point(c);
      double y2 = chart_forward(c, p).second;
      double s = std::exp(-t);
      double y2t = chart_forward(c, {s * p.first, s * (p.second - t * p.first)})
                       .second;
      CHECK(std::abs(y2t - y2) < 1e-12 * std::max(1.0, std::abs(y2)));
    }
    // case III: (r, theta) -> (e^{-t} r, theta - alpha t mod 1)
    for (double a : {0.0, 0.7, 2.0}) {
      CaseTag c = CaseTag::III(a);
      ChartPoint p = random_point(c);
      double y2 = chart_forward(c, p).second;
      double y2t = chart_forward(c, {std::exp(-t) * p.first,
                                     wrap_unit(p.second - a * t)})
                       .second;
      double d = std::abs(y2t - y2);
      d = std::min(d, 1.0 - d);
      CHECK(d < 1e-12);
    }
    // case IV: (r, theta) -> (e^{-t} r, theta - alpha t)
    for (double a : {0.0, 0.7, 2.0}) {
      CaseTag c = CaseTag::IV(a);
      ChartPoint p = random_point(c);
      double y2 = chart_forward(c, p).second;
      double y2t =
          chart_forward(c, {std::exp(-t) * p.first, p.second - a * t}).second;
      CHECK(std::abs(y2t - y2) < 1e-12 * std::max(1.0, std::abs(y2)));
    }
  }
}

TEST_CASE("polar transfer") {
  PointEvaluator disk;
  disk.tag = DomainTag::Plane;
  disk.support = {{-1.0, 1.0}, {-1.0, 1.0}};
  disk.fn = [](double x1, double x2) {
    return (x1 * x1 + x2 * x2 <= 1.0) ? complex_t{1.0, 0.0} : complex_t{0.0, 0.0};
  };
  PointEvaluator p = to_polar(disk);
  for (double th : {0.0, 0.2, 0.5, 0.9})
    CHECK(p(0.5, th) == complex_t{1.0, 0.0});

  PointEvaluator x1fn;
  x1fn.tag = DomainTag::Plane;
  x1fn.support = {{-2.0, 2.0}, {-2.0, 2.0}};
  x1fn.fn = [](double x1, double) { return complex_t{x1, 0.0}; };
  PointEvaluator xp = to_polar(x1fn);
  CHECK(std::abs(xp(1.3, 0.27) -
                 complex_t{1.3 * std::cos(2.0 * kPi * 0.27), 0.0}) < 1e-14);

  // round trip through the Cartesian view
  PointEvaluator back = from_polar(xp);
  CHECK(std::abs(back(0.4, -0.9) - x1fn(0.4, -0.9)) < 1e-13);
}

TEST_CASE("hyperbolic transfer") {
  PointEvaluator f;
  f.tag = DomainTag::Plane;
  f.support = {{0.0, 5.0}, {-5.0, 5.0}};
  f.fn = [](double x1, double x2) { return complex_t{x1 + 2.0 * x2, 0.0}; };
  PointEvaluator h = to_hyperbolic(f, {{0.0, 3.0}, {-2.0, 2.0}});
  CHECK(std::abs(h(1.0, 0.0) - f(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(h(1.5, 0.8) - f(1.5 * std::cosh(0.8), 1.5 * std::sinh(0.8))) <
        1e-13);

  PointEvaluator back = from_hyperbolic(h);
  CHECK(std::abs(back(2.0, 0.5) - f(2.0, 0.5)) < 1e-12);
  // outside the cone x1 > |x2| the Cartesian view vanishes
  CHECK(back(0.5, 1.0) == complex_t{0.0, 0.0});
  CHECK(back(-1.0, 0.0) == complex_t{0.0, 0.0});
}
