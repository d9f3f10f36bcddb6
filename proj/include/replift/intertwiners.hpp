/**
 * @file intertwiners.hpp
 * @brief The unitary maps U (l <-> q side) and U^J (case J <-> q side).
 *
 * U f(r, y) = (2 r)^{1/2} f(r^2, y).  Within the atom algebra the forward map
 * turns a linear phase into a quadratic one and the inverse map turns a
 * quadratic phase into a linear one; the remaining directions (quadratic
 * phase under U, linear phase under U^{-1}) leave the algebra and the atom
 * must be demoted to an evaluator.
 */
#pragma once

#include "replift/charts.hpp"

namespace replift {

/// U on a single atom: coeff * sqrt(2), power 2p + 1/2, interval
/// (sqrt a, sqrt b], linear phase u becomes quadratic phase 2u.
inline TensorAtom apply_U(const TensorAtom& atom) {
  TensorAtom out = substitute_square(atom);
  out.radial.power += 0.5;
  out.coeff *= std::sqrt(2.0);
  return out;
}

/// U^{-1} on a single atom: coeff / sqrt(2), power p/2 - 1/4, interval
/// (a^2, b^2], quadratic phase v becomes linear phase v/2.
inline TensorAtom apply_U_inv(const TensorAtom& atom) {
  TensorAtom out = substitute_sqrt(atom);
  out.radial.power -= 0.25;
  out.coeff /= std::sqrt(2.0);
  return out;
}

inline AtomSum apply_U(const AtomSum& f) {
  AtomSum out(f.fiber_domain);
  for (const auto& a : f.atoms) out.atoms.push_back(apply_U(a));
  return out;
}

inline AtomSum apply_U_inv(const AtomSum& f) {
  AtomSum out(f.fiber_domain);
  for (const auto& a : f.atoms) out.atoms.push_back(apply_U_inv(a));
  return out;
}

/// Pointwise U for functions demoted out of the atom algebra.
inline PointEvaluator apply_U(const PointEvaluator& f) {
  PointEvaluator out;
  out.tag = f.tag;
  auto base = f.fn;
  out.fn = [base](double r, double y) {
    return std::sqrt(2.0 * r) * base(r * r, y);
  };
  out.support = {{std::sqrt(std::max(0.0, f.support.first.a)),
                  std::sqrt(f.support.first.b)},
                 f.support.second};
  for (double x : f.first_breaks)
    out.first_breaks.push_back(std::sqrt(std::max(0.0, x)));
  out.second_breaks = f.second_breaks;
  return out;
}

inline PointEvaluator apply_U_inv(const PointEvaluator& f) {
  PointEvaluator out;
  out.tag = f.tag;
  auto base = f.fn;
  out.fn = [base](double r, double y) {
    return base(std::sqrt(r), y) / std::sqrt(2.0 * std::sqrt(r));
  };
  out.support = {{f.support.first.a * f.support.first.a,
                  f.support.first.b * f.support.first.b},
                 f.support.second};
  for (double x : f.first_breaks) out.first_breaks.push_back(x * x);
  out.second_breaks = f.second_breaks;
  return out;
}

namespace detail {

/// Range of the chart's second output coordinate over a support box,
/// sampled along the first coordinate (the maps are affine in the second
/// argument for fixed first coordinate), with a small safety margin.
template <typename Map>
Interval second_range(const SupportBox& box, Map&& second_of) {
  double lo = kInf, hi = -kInf;
  constexpr int kSamples = 48;
  for (int i = 0; i <= kSamples; ++i) {
    double x1 = box.first.a + (box.first.b - box.first.a) * i / kSamples;
    if (!(x1 > 0.0)) continue;
    for (double x2 : {box.second.a, box.second.b}) {
      double v = second_of(x1, x2);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  double pad = 0.02 * (hi - lo) + 1e-12;
  return {lo - pad, hi + pad};
}

/// U^J amplitude exponent: y1^{(alpha+1)/(2 alpha)} for I, y1^{1/2} for II,
/// (r')^{1/2} for III and IV.
inline double uj_weight_exponent(const CaseTag& c) {
  switch (c.kind) {
    case CaseKind::I: return (c.alpha + 1.0) / (2.0 * c.alpha);
    case CaseKind::II:
    case CaseKind::III:
    case CaseKind::IV: return 0.5;
    default: throw CaseMismatch("U^J is defined for cases I-IV only");
  }
}

}  // namespace detail

/// U^J f (new coords) = weight(first) * f(chart_backward(point)).  For I/II
/// the input lives on the half plane; for III/IV on the polar / hyperbolic
/// chart (Cartesian plane inputs are transferred first).
inline PointEvaluator apply_U_J(const CaseTag& c, const PointEvaluator& fin) {
  PointEvaluator f = fin;
  if (c.kind == CaseKind::III && f.tag == DomainTag::Plane) f = to_polar(f);
  if (c.kind == CaseKind::IV && f.tag == DomainTag::Plane)
    throw DomainError("apply_U_J(IV): transfer with to_hyperbolic (explicit support) first");
  const double w = detail::uj_weight_exponent(c);
  const CaseTag cc = c;
  PointEvaluator out;
  out.tag = f.tag;
  auto base = f.fn;
  out.fn = [base, cc, w](double y1, double y2) {
    ChartPoint p = chart_backward(cc, {y1, y2});
    return std::pow(y1, w) * base(p.first, p.second);
  };
  out.first_breaks = f.first_breaks;
  switch (c.kind) {
    case CaseKind::III:
      out.support = {f.support.first, {0.0, 1.0}};
      break;
    default:
      out.support = {f.support.first,
                     detail::second_range(f.support, [&](double x1, double x2) {
                       return chart_forward(cc, {x1, x2}).second;
                     })};
      break;
  }
  return out;
}

/// Inverse: f(point) = first^{-w} * g(chart_forward(point)).
inline PointEvaluator apply_U_J_inv(const CaseTag& c, const PointEvaluator& g) {
  const double w = detail::uj_weight_exponent(c);
  const CaseTag cc = c;
  PointEvaluator out;
  out.tag = g.tag;
  auto base = g.fn;
  out.fn = [base, cc, w](double x1, double x2) {
    ChartPoint p = chart_forward(cc, {x1, x2});
    return std::pow(x1, -w) * base(p.first, p.second);
  };
  out.first_breaks = g.first_breaks;
  switch (c.kind) {
    case CaseKind::III:
      out.support = {g.support.first, {0.0, 1.0}};
      break;
    default:
      out.support = {g.support.first,
                     detail::second_range(g.support, [&](double y1, double y2) {
                       return chart_backward(cc, {y1, y2}).second;
                     })};
      break;
  }
  return out;
}

}  // namespace replift
