/**
 * @file shannon.hpp
 * @brief Shannon atoms, index bijections, and the lazily indexed lifted
 *        generating functions on the l- and q-sides.
 *
 * Building blocks: f_m = chi_{(2^-m, 2^-m+1]} (m >= 1) on R+ and
 * e_{k,l}(y) = chi_{(k,k+1]}(y) e^{2 pi i l y} on the line (e_{0,l} with
 * integer l on the circle).  A lift pairs band m = D(k,l) with fiber (k,l);
 * at every xi in (0,1] exactly one term is non-zero, and the lift vanishes
 * for xi > 1.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "replift/groups.hpp"
#include "replift/inner_product.hpp"
#include "replift/intertwiners.hpp"

namespace replift {

// --- canonical index bijections ---------------------------------------------

/// Z -> N0 zig-zag: 0, 1, -1, 2, -2, ... -> 0, 1, 2, 3, 4, ...
inline std::int64_t zigzag(std::int64_t k) { return (k > 0) ? 2 * k - 1 : -2 * k; }

inline std::int64_t zigzag_inv(std::int64_t n) {
  return (n % 2 == 1) ? (n + 1) / 2 : -n / 2;
}

/// Cantor pairing N0 x N0 -> N0.
inline std::int64_t cantor_pair(std::int64_t a, std::int64_t b) {
  return (a + b) * (a + b + 1) / 2 + b;
}

inline std::pair<std::int64_t, std::int64_t> cantor_unpair(std::int64_t n) {
  std::int64_t w = static_cast<std::int64_t>((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0);
  while (w * (w + 1) / 2 > n) --w;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  std::int64_t b = n - w * (w + 1) / 2;
  return {w - b, b};
}

/// Bijection Z^2 -> N = {1, 2, ...} and its inverse.
struct BijectionDR {
  std::function<std::int64_t(std::int64_t, std::int64_t)> map;
  std::function<std::pair<std::int64_t, std::int64_t>(std::int64_t)> inv;

  static BijectionDR canonical() {
    BijectionDR d;
    d.map = [](std::int64_t k, std::int64_t l) {
      return cantor_pair(zigzag(k), zigzag(l)) + 1;
    };
    d.inv = [](std::int64_t n) {
      if (n < 1) throw std::out_of_range("BijectionDR: n must be >= 1");
      auto [a, b] = cantor_unpair(n - 1);
      return std::pair{zigzag_inv(a), zigzag_inv(b)};
    };
    return d;
  }

  /// Table-backed bijection over a declared box; validated for injectivity.
  static BijectionDR from_table(
      const std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>& table) {
    auto fwd = std::make_shared<
        std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>>(table);
    auto bwd = std::make_shared<
        std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>>>();
    for (const auto& [kl, n] : *fwd) {
      if (n < 1) throw std::invalid_argument("bijection table: n must be >= 1");
      if (!bwd->emplace(n, kl).second)
        throw std::invalid_argument("bijection table: duplicate image, not injective");
    }
    BijectionDR d;
    d.map = [fwd](std::int64_t k, std::int64_t l) {
      auto it = fwd->find({k, l});
      if (it == fwd->end()) throw std::out_of_range("bijection table: (k,l) outside box");
      return it->second;
    };
    d.inv = [bwd](std::int64_t n) {
      auto it = bwd->find(n);
      if (it == bwd->end()) throw std::out_of_range("bijection table: n outside image");
      return it->second;
    };
    return d;
  }
};

/// Bijection Z -> N and its inverse (circle fiber).
struct BijectionDT {
  std::function<std::int64_t(std::int64_t)> map;
  std::function<std::int64_t(std::int64_t)> inv;

  static BijectionDT canonical() {
    BijectionDT d;
    d.map = [](std::int64_t l) { return zigzag(l) + 1; };
    d.inv = [](std::int64_t n) {
      if (n < 1) throw std::out_of_range("BijectionDT: n must be >= 1");
      return zigzag_inv(n - 1);
    };
    return d;
  }
};

// --- building blocks ---------------------------------------------------------

/// f_m = chi_{(2^-m, 2^-m+1]} as a radial factor, m >= 1.
inline RadialFactor band_indicator(std::int64_t m) {
  if (m < 1) throw std::out_of_range("band_indicator: m must be >= 1");
  return {0.0, {std::exp2(static_cast<double>(-m)),
                std::exp2(static_cast<double>(-m + 1))}, 0.0, 0.0};
}

/// e_{k,l} as a fiber factor on the line.
inline FiberFactor fiber_basis_line(std::int64_t k, std::int64_t l) {
  return {{static_cast<double>(k), static_cast<double>(k + 1)},
          static_cast<double>(l)};
}

/// e_{0,l} on the circle.
inline FiberFactor fiber_basis_circle(std::int64_t l) {
  return {{0.0, 1.0}, static_cast<double>(l)};
}

/// Shannon wavelet atom psi^S_{(k,m)} on R+ (trivial fiber):
/// 2^{k/2} chi_{(1,2]}(2^k xi) e^{2 pi i 2^k m xi}.
inline TensorAtom shannon_atom(std::int64_t k, std::int64_t m) {
  const double twok = std::exp2(static_cast<double>(k));
  TensorAtom a;
  a.coeff = std::sqrt(twok);
  a.radial = {0.0, {1.0 / twok, 2.0 / twok}, twok * static_cast<double>(m), 0.0};
  a.fiber = {{0.0, 1.0}, 0.0};
  a.fiber_domain = FiberKind::Line;
  return a;
}

/// Dyadic band index: the unique n with xi in (2^-n, 2^-n+1]; 0 if xi > 1,
/// absent for xi <= 0.
inline std::optional<std::int64_t> band_of(double xi) {
  if (!(xi > 0.0)) return std::nullopt;
  if (xi > 1.0) return 0;
  int e = 0;
  double m = std::frexp(xi, &e);  // xi = m * 2^e, m in [0.5, 1)
  std::int64_t n = (m == 0.5) ? 2 - e : 1 - e;
  return std::max<std::int64_t>(n, 1);
}

// --- lazy lifts ---------------------------------------------------------------

/// Lazily indexed generating function: psi^{D_R} (line fiber) or psi^{D_T}
/// (circle fiber).  Never materialized; lookups go through the bijection.
struct LazyShannonLift {
  FiberKind fiber = FiberKind::Line;
  std::function<std::int64_t(std::int64_t, std::int64_t)> map;  ///< (k,l) -> n; k ignored on the circle
  std::function<std::pair<std::int64_t, std::int64_t>(std::int64_t)> inv;

  static LazyShannonLift line(BijectionDR d = BijectionDR::canonical()) {
    LazyShannonLift lift;
    lift.fiber = FiberKind::Line;
    lift.map = d.map;
    lift.inv = d.inv;
    return lift;
  }

  static LazyShannonLift circle(BijectionDT d = BijectionDT::canonical()) {
    LazyShannonLift lift;
    lift.fiber = FiberKind::Circle;
    lift.map = [m = d.map](std::int64_t, std::int64_t l) { return m(l); };
    lift.inv = [i = d.inv](std::int64_t n) { return std::pair<std::int64_t, std::int64_t>{0, i(n)}; };
    return lift;
  }

  /// The single term f_n x e_{k,l} covering band n.
  TensorAtom band_term(std::int64_t n) const {
    auto [k, l] = inv(n);
    TensorAtom a;
    a.radial = band_indicator(n);
    a.fiber = (fiber == FiberKind::Line) ? fiber_basis_line(k, l)
                                         : fiber_basis_circle(l);
    a.fiber_domain = fiber;
    return a;
  }

  /// The unique non-zero term at xi, or nullopt for xi outside (0, 1].
  std::optional<TensorAtom> term_at(double xi) const {
    auto n = band_of(xi);
    if (!n || *n == 0) return std::nullopt;
    return band_term(*n);
  }

  /// S_N: the |k|,|l| <= N truncation (|l| <= N on the circle).
  AtomSum partial_sum(std::int64_t N) const {
    AtomSum out(fiber);
    if (fiber == FiberKind::Line) {
      for (std::int64_t k = -N; k <= N; ++k)
        for (std::int64_t l = -N; l <= N; ++l) out.add(band_term(map(k, l)));
    } else {
      for (std::int64_t l = -N; l <= N; ++l) out.add(band_term(map(0, l)));
    }
    return out;
  }

  /// Largest fiber index magnitude appearing among bands 1..depth.
  std::int64_t fiber_reach(std::int64_t depth) const {
    std::int64_t reach = 0;
    for (std::int64_t n = 1; n <= depth; ++n) {
      auto [k, l] = inv(n);
      reach = std::max({reach, std::abs(k) + 1, std::abs(l)});
    }
    return reach;
  }
};

/// Default band depth for exact lazy computations; the omitted tail of any
/// band sum is below 2^-60.
inline constexpr std::int64_t kDefaultBandDepth = 60;

/// Pointwise evaluator of the l-side lift psi^D on R+ x Y.
inline PointEvaluator lift_evaluator(const LazyShannonLift& lift,
                                     std::int64_t depth = kDefaultBandDepth) {
  PointEvaluator ev;
  ev.tag = (lift.fiber == FiberKind::Circle) ? DomainTag::PolarChart
                                             : DomainTag::HalfPlane;
  double reach = static_cast<double>(lift.fiber_reach(depth));
  ev.support = {{0.0, 1.0},
                (lift.fiber == FiberKind::Circle) ? Interval{0.0, 1.0}
                                                  : Interval{-reach, reach + 1.0}};
  for (std::int64_t n = 1; n <= depth; ++n)
    ev.first_breaks.push_back(std::exp2(static_cast<double>(-n)));
  LazyShannonLift copy = lift;
  ev.fn = [copy](double xi, double y) {
    auto term = copy.term_at(xi);
    return term ? eval_atom(*term, xi, y) : complex_t{0.0, 0.0};
  };
  return ev;
}

/// The q-side generating function U psi^D, still lazily indexed: the unique
/// term at radius r is determined by the band of r^2.
struct QShannonLift {
  LazyShannonLift base;

  /// Term at radius r: sqrt(2) r^{1/2} 1_{(2^{-n/2}, 2^{-(n-1)/2}]}(r) e_{k,l},
  /// or nullopt for r outside (0, 1].
  std::optional<TensorAtom> term_at(double r) const {
    if (!(r > 0.0) || r > 1.0) return std::nullopt;
    auto n = band_of(r * r);
    if (!n || *n == 0) return std::nullopt;
    return apply_U(base.band_term(*n));
  }

  TensorAtom band_term(std::int64_t n) const { return apply_U(base.band_term(n)); }
};

inline QShannonLift lifted_generator_q(const LazyShannonLift& lift) {
  return {lift};
}

/// Pointwise evaluator of U psi^D on R+ x Y with band-edge breakpoints.
inline PointEvaluator q_lift_evaluator(const QShannonLift& qlift,
                                       std::int64_t depth = kDefaultBandDepth) {
  PointEvaluator ev;
  ev.tag = (qlift.base.fiber == FiberKind::Circle) ? DomainTag::PolarChart
                                                   : DomainTag::HalfPlane;
  double reach = static_cast<double>(qlift.base.fiber_reach(depth));
  ev.support = {{0.0, 1.0},
                (qlift.base.fiber == FiberKind::Circle)
                    ? Interval{0.0, 1.0}
                    : Interval{-reach, reach + 1.0}};
  for (std::int64_t n = 1; n <= depth; ++n)
    ev.first_breaks.push_back(std::exp2(-0.5 * static_cast<double>(n)));
  QShannonLift copy = qlift;
  ev.fn = [copy](double r, double y) {
    auto term = copy.term_at(r);
    return term ? eval_atom(*term, r, y) : complex_t{0.0, 0.0};
  };
  return ev;
}

/// psi^{J,D} = (U^J)^{-1} U psi^D as a pointwise evaluator on the case's
/// chart (half plane for I/II, polar chart for III, hyperbolic chart for IV).
inline PointEvaluator generator_J(const CaseTag& c, const LazyShannonLift& lift,
                                  std::int64_t depth = kDefaultBandDepth) {
  if (c.kind == CaseKind::III && lift.fiber != FiberKind::Circle)
    throw CaseMismatch("generator_J: case III requires the circle lift");
  if (c.kind != CaseKind::III && lift.fiber != FiberKind::Line)
    throw CaseMismatch("generator_J: cases I/II/IV require the line lift");
  PointEvaluator q = q_lift_evaluator(lifted_generator_q(lift), depth);
  PointEvaluator out = apply_U_J_inv(c, q);
  if (c.kind == CaseKind::IV) out.tag = DomainTag::HyperbolicChart;
  return out;
}

// --- exact inner products with lattice-transformed lifts ----------------------

/// Exact <act(rep, g, psi^D), act(rep, h, psi^D)> under the given weight.
/// Fiber orthonormality pairs equal bands only; bands are summed to `depth`.
inline complex_t transformed_lift_inner(const CaseTag& rep,
                                        const GroupElement& g,
                                        const GroupElement& h,
                                        const LazyShannonLift& lift,
                                        RadialWeight weight,
                                        std::int64_t depth = kDefaultBandDepth) {
  complex_t sum{0.0, 0.0};
  for (std::int64_t n = 1; n <= depth; ++n) {
    TensorAtom base = lift.band_term(n);
    AtomSum a = act(rep, g, AtomSum(base));
    AtomSum b = act(rep, h, AtomSum(base));
    sum += inner_product_exact(a.atoms.front(), b.atoms.front(), weight);
  }
  return sum;
}

/// Exact <f, act(rep, g, psi^D)> for a finite atom sum f.
inline complex_t atoms_vs_transformed_lift(const AtomSum& f, const CaseTag& rep,
                                           const GroupElement& g,
                                           const LazyShannonLift& lift,
                                           RadialWeight weight,
                                           std::int64_t depth = kDefaultBandDepth) {
  complex_t sum{0.0, 0.0};
  for (std::int64_t n = 1; n <= depth; ++n) {
    AtomSum b = act(rep, g, AtomSum(lift.band_term(n)));
    for (const auto& a : f.atoms)
      sum += inner_product_exact(a, b.atoms.front(), weight);
  }
  return sum;
}

}  // namespace replift
