/**
 * @file charts.hpp
 * @brief Coordinate charts for cases I-IV, their Jacobians, and the
 *        polar / hyperbolic-polar transfers.
 *
 * Forward maps remove the effect of dilations from the second coordinate:
 *   I:   (x1, x2)   -> (x1, x1^{-(alpha+1)/alpha} x2)
 *   II:  (x1, x2)   -> (x1, (x2 - x1 log x1) / x1)
 *   III: (r, theta) -> (r, theta - alpha log r)   (theta mod 1)
 *   IV:  (r, theta) -> (r, theta - alpha log r)
 */
#pragma once

#include <optional>
#include <utility>

#include "replift/evaluator.hpp"
#include "replift/groups.hpp"

namespace replift {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ChartPoint = std::pair<double, double>;

namespace detail {

inline void require_positive_first(double x) {
  if (!(x > 0.0)) throw DomainError("chart: first coordinate must be positive");
}

/// x1-exponent of the case-I second coordinate, -(alpha+1)/alpha.
inline double case1_exponent(double alpha) { return -(alpha + 1.0) / alpha; }

}  // namespace detail

inline ChartPoint chart_forward(const CaseTag& c, ChartPoint p) {
  detail::require_positive_first(p.first);
  switch (c.kind) {
    case CaseKind::I:
      return {p.first,
              std::pow(p.first, detail::case1_exponent(c.alpha)) * p.second};
    case CaseKind::II:
      return {p.first, (p.second - p.first * std::log(p.first)) / p.first};
    case CaseKind::III:
      return {p.first, wrap_unit(p.second - c.alpha * std::log(p.first))};
    case CaseKind::IV:
      return {p.first, p.second - c.alpha * std::log(p.first)};
    default:
      throw CaseMismatch("chart_forward: charts exist for cases I-IV only");
  }
}

inline ChartPoint chart_backward(const CaseTag& c, ChartPoint p) {
  detail::require_positive_first(p.first);
  switch (c.kind) {
    case CaseKind::I:
      return {p.first,
              std::pow(p.first, -detail::case1_exponent(c.alpha)) * p.second};
    case CaseKind::II:
      return {p.first, p.first * p.second + p.first * std::log(p.first)};
    case CaseKind::III:
      return {p.first, wrap_unit(p.second + c.alpha * std::log(p.first))};
    case CaseKind::IV:
      return {p.first, p.second + c.alpha * std::log(p.first)};
    default:
      throw CaseMismatch("chart_backward: charts exist for cases I-IV only");
  }
}

/// d x2 / d y2 of the backward map, evaluated at the new coordinates.
inline double chart_jacobian(const CaseTag& c, ChartPoint p) {
  detail::require_positive_first(p.first);
  switch (c.kind) {
    case CaseKind::I:
      return std::pow(p.first, -detail::case1_exponent(c.alpha));
    case CaseKind::II:
      return p.first;
    case CaseKind::III:
    case CaseKind::IV:
      return 1.0;
    default:
      throw CaseMismatch("chart_jacobian: charts exist for cases I-IV only");
  }
}

// --- polar transfers ---------------------------------------------------------

/// f_p(r, theta) = f(r cos 2 pi theta, r sin 2 pi theta), theta in [0,1).
/// The L^2(R^2) measure becomes r dr dtheta in this parametrization (the 2 pi
/// is absorbed into the theta normalization used throughout).
inline PointEvaluator to_polar(const PointEvaluator& f,
                               std::optional<SupportBox> support = {}) {
  if (f.tag != DomainTag::Plane)
    throw DomainError("to_polar: expected a plane evaluator");
  PointEvaluator out;
  out.tag = DomainTag::PolarChart;
  auto base = f.fn;
  out.fn = [base](double r, double theta) {
    if (!(r > 0.0)) throw DomainError("to_polar: r must be positive");
    double ang = 2.0 * kPi * wrap_unit(theta);
    return base(r * std::cos(ang), r * std::sin(ang));
  };
  if (support) {
    out.support = *support;
  } else {
    double rmax = 0.0;
    for (double x : {f.support.first.a, f.support.first.b})
      for (double y : {f.support.second.a, f.support.second.b})
        rmax = std::max(rmax, std::hypot(x, y));
    out.support = {{0.0, rmax}, {0.0, 1.0}};
  }
  return out;
}

/// f_h(r, theta) = f(r cosh theta, r sinh theta); covers the cone x1 > |x2|
/// for r > 0.  The plane measure restricted to the cone is r dr dtheta.
inline PointEvaluator to_hyperbolic(const PointEvaluator& f, SupportBox support) {
  if (f.tag != DomainTag::Plane && f.tag != DomainTag::HalfPlane)
    throw DomainError("to_hyperbolic: expected a plane evaluator");
  PointEvaluator out;
  out.tag = DomainTag::HyperbolicChart;
  auto base = f.fn;
  out.fn = [base](double r, double theta) {
    if (!(r > 0.0)) throw DomainError("to_hyperbolic: r must be positive");
    return base(r * std::cosh(theta), r * std::sinh(theta));
  };
  out.support = support;
  return out;
}

/// Cartesian view of a polar-chart evaluator (zero off the plane origin ray
/// set is immaterial; r = 0 evaluates to 0).
inline PointEvaluator from_polar(const PointEvaluator& f) {
  if (f.tag != DomainTag::PolarChart)
    throw DomainError("from_polar: expected a polar-chart evaluator");
  PointEvaluator out;
  out.tag = DomainTag::Plane;
  auto base = f.fn;
  out.fn = [base](double x1, double x2) {
    double r = std::hypot(x1, x2);
    if (r == 0.0) return complex_t{0.0, 0.0};
    double theta = std::atan2(x2, x1) / (2.0 * kPi);
    return base(r, wrap_unit(theta));
  };
  double rb = f.support.first.b;
  out.support = {{-rb, rb}, {-rb, rb}};
  return out;
}

/// Cartesian view of a hyperbolic-chart evaluator; zero outside the cone
/// x1 > |x2| (the stated Hilbert space restricts to that component).
inline PointEvaluator from_hyperbolic(const PointEvaluator& f) {
  if (f.tag != DomainTag::HyperbolicChart)
    throw DomainError("from_hyperbolic: expected a hyperbolic-chart evaluator");
  PointEvaluator out;
  out.tag = DomainTag::Plane;
  auto base = f.fn;
  out.fn = [base](double x1, double x2) {
    if (!(x1 > std::abs(x2))) return complex_t{0.0, 0.0};
    double r = std::sqrt((x1 - x2) * (x1 + x2));
    double theta = std::asinh(x2 / r);
    return base(r, theta);
  };
  double rb = f.support.first.b;
  double th = std::max(std::abs(f.support.second.a), std::abs(f.support.second.b));
  out.support = {{0.0, rb * std::cosh(th)}, {-rb * std::sinh(th), rb * std::sinh(th)}};
  return out;
}

}  // namespace replift
