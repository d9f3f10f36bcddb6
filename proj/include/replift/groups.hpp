/**
 * @file groups.hpp
 * @brief The six parameter groups: composition, Haar densities, lattices,
 *        and the unitary actions on functions.
 *
 * Cases L and Q act on atom sums over R+ x Y (dilation plus a linear or
 * quadratic phase).  Cases I-IV act pointwise on evaluators: I and II on the
 * half plane x1 > 0, III on the polar chart (r, theta mod 1), IV on the
 * hyperbolic chart covering the cone x1 > |x2|.
 */
#pragma once

#include <string>

#include "replift/atoms.hpp"
#include "replift/evaluator.hpp"

namespace replift {

inline constexpr double kLog2 = 0.6931471805599453094172321214581766;

enum class CaseKind { L, Q, I, II, III, IV };

struct CaseMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Case identifier with the extra parameter alpha where the case has one.
struct CaseTag {
  CaseKind kind = CaseKind::L;
  double alpha = 0.0;

  static CaseTag L() { return {CaseKind::L, 0.0}; }
  static CaseTag Q() { return {CaseKind::Q, 0.0}; }
  static CaseTag I(double alpha) { return validated({CaseKind::I, alpha}); }
  static CaseTag II() { return {CaseKind::II, 0.0}; }
  static CaseTag III(double alpha) { return validated({CaseKind::III, alpha}); }
  static CaseTag IV(double alpha) { return validated({CaseKind::IV, alpha}); }

  bool multiplicative() const { return kind == CaseKind::L || kind == CaseKind::Q; }
  bool has_alpha() const {
    return kind == CaseKind::I || kind == CaseKind::III || kind == CaseKind::IV;
  }

  static CaseTag validated(CaseTag tag) {
    switch (tag.kind) {
      case CaseKind::I:
        if (!(tag.alpha >= -1.0 && tag.alpha < 0.0))
          throw CaseMismatch("case I requires alpha in [-1, 0)");
        break;
      case CaseKind::III:
      case CaseKind::IV:
        if (!(tag.alpha >= 0.0))
          throw CaseMismatch("cases III/IV require alpha >= 0");
        break;
      default:
        tag.alpha = 0.0;
        break;
    }
    return tag;
  }

  std::string name() const {
    switch (kind) {
      case CaseKind::L: return "L";
      case CaseKind::Q: return "Q";
      case CaseKind::I: return "I";
      case CaseKind::II: return "II";
      case CaseKind::III: return "III";
      case CaseKind::IV: return "IV";
    }
    return "?";
  }
};

/// Group element (u, t).  For L and Q, t is the multiplicative parameter
/// (s or t > 0); for I-IV, t is additive.
struct GroupElement {
  double u = 0.0;
  double t = 0.0;
};

inline void check_element(const CaseTag& c, const GroupElement& g) {
  if (c.multiplicative() && !(g.t > 0.0))
    throw CaseMismatch("cases L/Q require t > 0");
}

inline GroupElement identity(const CaseTag& c) {
  return c.multiplicative() ? GroupElement{0.0, 1.0} : GroupElement{0.0, 0.0};
}

/// Group law: g2 o g1 (g1 applied first).
inline GroupElement compose(const CaseTag& c, const GroupElement& g2,
                            const GroupElement& g1) {
  check_element(c, g1);
  check_element(c, g2);
  switch (c.kind) {
    case CaseKind::L:
      return {g2.t * g1.u + g2.u, g2.t * g1.t};
    case CaseKind::Q:
      return {g2.t * g2.t * g1.u + g2.u, g2.t * g1.t};
    case CaseKind::I:
      return {g2.u + std::exp(-2.0 * c.alpha * g2.t) * g1.u, g2.t + g1.t};
    default:  // II, III, IV share the law
      return {g2.u + std::exp(-2.0 * g2.t) * g1.u, g2.t + g1.t};
  }
}

inline GroupElement inverse(const CaseTag& c, const GroupElement& g) {
  check_element(c, g);
  switch (c.kind) {
    case CaseKind::L:
      return {-g.u / g.t, 1.0 / g.t};
    case CaseKind::Q:
      return {-g.u / (g.t * g.t), 1.0 / g.t};
    case CaseKind::I:
      return {-std::exp(2.0 * c.alpha * g.t) * g.u, -g.t};
    default:
      return {-std::exp(2.0 * g.t) * g.u, -g.t};
  }
}

/// Density of the left Haar measure with respect to du dt at g.
inline double haar_density(const CaseTag& c, const GroupElement& g) {
  check_element(c, g);
  switch (c.kind) {
    case CaseKind::L: return 1.0 / (g.t * g.t);
    case CaseKind::Q: return 1.0 / (g.t * g.t * g.t);
    case CaseKind::I: return -c.alpha * std::exp(2.0 * c.alpha * g.t);
    default: return std::exp(2.0 * g.t);
  }
}

/// Lattice point indexed by (k, m) in Z^2.
inline GroupElement lattice_element(const CaseTag& c, int k, int m) {
  const double twok = std::exp2(static_cast<double>(k));
  switch (c.kind) {
    case CaseKind::L:
      return {twok * m, twok};
    case CaseKind::Q:
      return {2.0 * twok * m, std::exp2(0.5 * k)};
    case CaseKind::I:
      return {2.0 * twok * m, -kLog2 * k / (2.0 * c.alpha)};
    default:
      return {2.0 * twok * m, -kLog2 * k / 2.0};
  }
}

// --- actions ----------------------------------------------------------------

/// mu^(l)_(u,s) f = s^{1/2} f(s xi, y) e^{2 pi i u xi}  or
/// mu^(q)_(v,t) f = t^{1/2} f(t r, y) e^{pi i v r^2}, within the atom algebra.
inline AtomSum act(const CaseTag& c, const GroupElement& g, const AtomSum& f) {
  check_element(c, g);
  if (c.kind == CaseKind::L)
    return transform(transform(f, AtomAction::dilation(g.t)),
                     AtomAction::lin_phase(g.u));
  if (c.kind == CaseKind::Q)
    return transform(transform(f, AtomAction::dilation(g.t)),
                     AtomAction::quad_phase(g.u));
  throw CaseMismatch("act: cases I-IV act on evaluators, not atom sums");
}

namespace detail {

inline Interval scaled(const Interval& iv, double s) {
  return {iv.a * s, iv.b * s};
}

inline std::vector<double> scaled(const std::vector<double>& xs, double s) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(x * s);
  return out;
}

}  // namespace detail

/// Pointwise action of all six cases on an evaluator.  L and Q expect the
/// half-plane or polar chart; I/II the half plane; III the polar chart; IV
/// the hyperbolic chart.
inline PointEvaluator act(const CaseTag& c, const GroupElement& g,
                          const PointEvaluator& f) {
  check_element(c, g);
  PointEvaluator out;
  out.tag = f.tag;
  const double u = g.u;
  auto base = f.fn;
  switch (c.kind) {
    case CaseKind::L: {
      const double s = g.t;
      out.fn = [base, s, u](double xi, double y) {
        return std::sqrt(s) * base(s * xi, y) *
               std::polar(1.0, 2.0 * kPi * u * xi);
      };
      out.support = {detail::scaled(f.support.first, 1.0 / s), f.support.second};
      out.first_breaks = detail::scaled(f.first_breaks, 1.0 / s);
      out.second_breaks = f.second_breaks;
      return out;
    }
    case CaseKind::Q: {
      const double t = g.t;
      out.fn = [base, t, u](double r, double y) {
        return std::sqrt(t) * base(t * r, y) * std::polar(1.0, kPi * u * r * r);
      };
      out.support = {detail::scaled(f.support.first, 1.0 / t), f.support.second};
      out.first_breaks = detail::scaled(f.first_breaks, 1.0 / t);
      out.second_breaks = f.second_breaks;
      return out;
    }
    case CaseKind::I: {
      if (f.tag != DomainTag::HalfPlane)
        throw CaseMismatch("act(I): expected a half-plane evaluator");
      const double a = c.alpha, t = g.t;
      const double s1 = std::exp(-a * t), s2 = std::exp(-(a + 1.0) * t);
      const double amp = std::exp(-(2.0 * a + 1.0) * t / 2.0);
      out.fn = [base, s1, s2, amp, u](double x1, double x2) {
        return amp * std::polar(1.0, kPi * u * x1 * x1) * base(s1 * x1, s2 * x2);
      };
      out.support = {detail::scaled(f.support.first, 1.0 / s1),
                     detail::scaled(f.support.second, 1.0 / s2)};
      out.first_breaks = detail::scaled(f.first_breaks, 1.0 / s1);
      out.second_breaks = detail::scaled(f.second_breaks, 1.0 / s2);
      return out;
    }
    case CaseKind::II: {
      if (f.tag != DomainTag::HalfPlane)
        throw CaseMismatch("act(II): expected a half-plane evaluator");
      const double t = g.t, s = std::exp(-t);
      out.fn = [base, s, t, u](double x1, double x2) {
        return s * std::polar(1.0, kPi * u * x1 * x1) *
               base(s * x1, s * (x2 - t * x1));
      };
      Interval x1r = detail::scaled(f.support.first, 1.0 / s);
      // x2 = y/s + t*x1 over the support corners
      double lo = f.support.second.a / s, hi = f.support.second.b / s;
      double shift_lo = std::min(t * x1r.a, t * x1r.b);
      double shift_hi = std::max(t * x1r.a, t * x1r.b);
      out.support = {x1r, {lo + shift_lo, hi + shift_hi}};
      out.first_breaks = detail::scaled(f.first_breaks, 1.0 / s);
      return out;
    }
    case CaseKind::III: {
      if (f.tag != DomainTag::PolarChart)
        throw CaseMismatch("act(III): expected a polar-chart evaluator");
      const double a = c.alpha, t = g.t, s = std::exp(-t);
      out.fn = [base, s, a, t, u](double r, double theta) {
        return s * std::polar(1.0, kPi * u * r * r) *
               base(s * r, wrap_unit(theta - a * t));
      };
      out.support = {detail::scaled(f.support.first, 1.0 / s), {0.0, 1.0}};
      out.first_breaks = detail::scaled(f.first_breaks, 1.0 / s);
      for (double y : {f.support.second.a, f.support.second.b})
        out.second_breaks.push_back(wrap_unit(y + a * t));
      return out;
    }
    case CaseKind::IV: {
      if (f.tag != DomainTag::HyperbolicChart)
        throw CaseMismatch("act(IV): expected a hyperbolic-chart evaluator");
      const double a = c.alpha, t = g.t, s = std::exp(-t);
      out.fn = [base, s, a, t, u](double r, double theta) {
        return s * std::polar(1.0, kPi * u * r * r) * base(s * r, theta - a * t);
      };
      out.support = {detail::scaled(f.support.first, 1.0 / s),
                     {f.support.second.a + a * t, f.support.second.b + a * t}};
      out.first_breaks = detail::scaled(f.first_breaks, 1.0 / s);
      for (double y : f.second_breaks) out.second_breaks.push_back(y + a * t);
      return out;
    }
  }
  throw std::logic_error("act: unreachable");
}

/// The q-side image of a case I-IV element under the intertwining transfer:
/// (u, t) -> (u, e^{-alpha t}) for case I, (u, e^{-t}) for II-IV.
inline GroupElement q_side_element(const CaseTag& c, const GroupElement& g) {
  switch (c.kind) {
    case CaseKind::I: return {g.u, std::exp(-c.alpha * g.t)};
    case CaseKind::II:
    case CaseKind::III:
    case CaseKind::IV: return {g.u, std::exp(-g.t)};
    default: throw CaseMismatch("q_side_element: only defined for cases I-IV");
  }
}

}  // namespace replift
