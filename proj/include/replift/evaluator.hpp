/**
 * @file evaluator.hpp
 * @brief Pointwise-evaluable complex functions on a chart with declared support.
 */
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "replift/atoms.hpp"

namespace replift {

/// Chart a PointEvaluator lives on.
enum class DomainTag {
  HalfPlane,       ///< (x1, x2) with x1 > 0, x2 in R
  Plane,           ///< (x1, x2) in R^2
  PolarChart,      ///< (r, theta) with r > 0, theta in [0,1) (circle)
  HyperbolicChart  ///< (r, theta) with r > 0, theta in R; image is x1 > |x2|
};

/// Axis-aligned support box; the first coordinate is radial (or x1).
struct SupportBox {
  Interval first;   ///< r or x1 range
  Interval second;  ///< y, x2 or theta range

  bool bounded() const {
    return std::isfinite(first.a) && std::isfinite(first.b) &&
           std::isfinite(second.a) && std::isfinite(second.b);
  }
};

/// A pure, deterministic point -> complex rule with declared support.
/// Breakpoint lists mark known discontinuity loci for the quadrature engine.
struct PointEvaluator {
  DomainTag tag = DomainTag::HalfPlane;
  std::function<complex_t(double, double)> fn;
  SupportBox support;
  std::vector<double> first_breaks;   ///< radial breakpoints inside support
  std::vector<double> second_breaks;  ///< fiber breakpoints inside support

  complex_t operator()(double a, double b) const { return fn(a, b); }
};

/// Wrap an AtomSum as an evaluator on the half plane (or polar chart for a
/// circle fiber), with band edges exported as breakpoints.
inline PointEvaluator to_evaluator(const AtomSum& f) {
  PointEvaluator ev;
  ev.tag = (f.fiber_domain == FiberKind::Circle) ? DomainTag::PolarChart
                                                 : DomainTag::HalfPlane;
  double r0 = kInf, r1 = 0.0, y0 = kInf, y1 = -kInf;
  for (const auto& a : f.atoms) {
    r0 = std::min(r0, a.radial.interval.a);
    r1 = std::max(r1, a.radial.interval.b);
    ev.first_breaks.push_back(a.radial.interval.a);
    ev.first_breaks.push_back(a.radial.interval.b);
    if (f.fiber_domain == FiberKind::Line) {
      y0 = std::min(y0, a.fiber.interval.a);
      y1 = std::max(y1, a.fiber.interval.b);
      ev.second_breaks.push_back(a.fiber.interval.a);
      ev.second_breaks.push_back(a.fiber.interval.b);
    }
  }
  if (f.fiber_domain == FiberKind::Circle) { y0 = 0.0; y1 = 1.0; }
  if (f.atoms.empty()) { r0 = 0.0; r1 = 0.0; y0 = 0.0; y1 = 0.0; }
  ev.support = {{r0, r1}, {y0, y1}};
  AtomSum copy = f;
  ev.fn = [copy](double r, double y) { return copy.eval(r, y); };
  return ev;
}

}  // namespace replift
