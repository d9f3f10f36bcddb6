/**
 * @file atoms.hpp
 * @brief Closed-form tensor atoms on R+ x Y and finite sums thereof.
 *
 * A TensorAtom is one term
 *     coeff * r^p * 1_{(a,b]}(r) * e^{2 pi i u r} * e^{pi i v r^2}
 *           * [fiber indicator] * e^{2 pi i l y},
 * with the fiber Y either the real line or the circle [0,1).  The algebra
 * is closed under radial dilation, linear/quadratic phase shifts,
 * multiplication by powers of r, and the substitutions r -> r^2, r -> sqrt(r).
 */
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace replift {

using complex_t = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fiber domain Y: the real line, or the circle parametrized as [0,1).
enum class FiberKind { Line, Circle };

/// Reduce a circle coordinate to [0,1).
inline double wrap_unit(double y) {
  double r = y - std::floor(y);
  return (r >= 1.0) ? r - 1.0 : r;  // guard against floor rounding
}

/// Half-open interval (a, b].  Empty iff a >= b.
struct Interval {
  double a = 0.0;
  double b = 0.0;

  bool contains(double x) const { return x > a && x <= b; }
  bool empty() const { return !(a < b); }
  double length() const { return b - a; }

  Interval intersect(const Interval& o) const {
    return {std::max(a, o.a), std::min(b, o.b)};
  }
};

/// Radial factor r^p * 1_{(a,b]}(r) * e^{2 pi i u r} * e^{pi i v r^2}.
struct RadialFactor {
  double power = 0.0;     ///< exponent p
  Interval interval;      ///< support (a, b], 0 <= a < b <= inf
  double lin_phase = 0.0; ///< u
  double quad_phase = 0.0;///< v

  void validate() const {
    if (interval.a < 0.0 || !(interval.a < interval.b))
      throw std::invalid_argument("RadialFactor: need 0 <= a < b");
    if (std::isinf(interval.b) && !(power < -0.5))
      throw std::invalid_argument("RadialFactor: b = inf requires p < -1/2");
  }
};

/// Fiber factor: 1_{(c,d]}(y) e^{2 pi i l y} on the line, e^{2 pi i l y} on
/// the circle (l integer, y mod 1).
struct FiberFactor {
  Interval interval;  ///< (c, d]; ignored on the circle
  double freq = 0.0;  ///< l; integer when the domain is the circle
};

struct TensorAtom {
  complex_t coeff{1.0, 0.0};
  RadialFactor radial;
  FiberFactor fiber;
  FiberKind fiber_domain = FiberKind::Line;

  void validate() const {
    radial.validate();
    if (fiber_domain == FiberKind::Line) {
      if (!(fiber.interval.a < fiber.interval.b))
        throw std::invalid_argument("TensorAtom: fiber interval must satisfy c < d");
    } else {
      if (fiber.freq != std::floor(fiber.freq))
        throw std::invalid_argument("TensorAtom: circle frequency must be an integer");
    }
  }
};

/// Pointwise value of the radial factor (total function, 0 off support).
inline complex_t eval_radial(const RadialFactor& rf, double r) {
  if (!rf.interval.contains(r)) return {0.0, 0.0};
  double amp = (rf.power == 0.0) ? 1.0 : std::pow(r, rf.power);
  double phase = 2.0 * kPi * rf.lin_phase * r + kPi * rf.quad_phase * r * r;
  return std::polar(amp, phase);
}

/// Pointwise value of the fiber factor.
inline complex_t eval_fiber(const FiberFactor& ff, FiberKind kind, double y) {
  if (kind == FiberKind::Line) {
    if (!ff.interval.contains(y)) return {0.0, 0.0};
    return std::polar(1.0, 2.0 * kPi * ff.freq * y);
  }
  return std::polar(1.0, 2.0 * kPi * ff.freq * wrap_unit(y));
}

/// Value of an atom at (r, y).  Exactly 0 outside the supports.
inline complex_t eval_atom(const TensorAtom& atom, double r, double y) {
  complex_t rad = eval_radial(atom.radial, r);
  if (rad == complex_t{0.0, 0.0}) return rad;
  complex_t fib = eval_fiber(atom.fiber, atom.fiber_domain, y);
  return atom.coeff * rad * fib;
}

/// Finite sum of atoms over a common fiber domain.
struct AtomSum {
  std::vector<TensorAtom> atoms;
  FiberKind fiber_domain = FiberKind::Line;

  AtomSum() = default;
  explicit AtomSum(FiberKind kind) : fiber_domain(kind) {}
  explicit AtomSum(TensorAtom a) : fiber_domain(a.fiber_domain) {
    atoms.push_back(std::move(a));
  }

  void add(TensorAtom a) {
    if (a.fiber_domain != fiber_domain)
      throw std::invalid_argument("AtomSum: mixed fiber domains");
    atoms.push_back(std::move(a));
  }

  complex_t eval(double r, double y) const {
    complex_t s{0.0, 0.0};
    for (const auto& a : atoms) s += eval_atom(a, r, y);
    return s;
  }
};

/// Measure r^w dr on R+.  w = 0 is Lebesgue, w = -1 is ds/s, w = -2 is dr/r^2.
struct RadialWeight {
  double exponent = 0.0;
};

// --- atom transformations -------------------------------------------------

/// s^{1/2} f(s r): support (a/s, b/s], coeff * s^{1/2+p}, u -> s u, v -> s^2 v.
inline TensorAtom dilate(const TensorAtom& atom, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("dilate: s must be positive");
  TensorAtom out = atom;
  out.coeff *= std::pow(s, 0.5 + atom.radial.power);
  out.radial.interval = {atom.radial.interval.a / s, atom.radial.interval.b / s};
  out.radial.lin_phase = atom.radial.lin_phase * s;
  out.radial.quad_phase = atom.radial.quad_phase * s * s;
  return out;
}

/// Multiply by e^{2 pi i u r}.
inline TensorAtom add_lin_phase(const TensorAtom& atom, double u) {
  TensorAtom out = atom;
  out.radial.lin_phase += u;
  return out;
}

/// Multiply by e^{pi i v r^2}.
inline TensorAtom add_quad_phase(const TensorAtom& atom, double v) {
  TensorAtom out = atom;
  out.radial.quad_phase += v;
  return out;
}

/// Multiply by r^q.
inline TensorAtom mul_power(const TensorAtom& atom, double q) {
  TensorAtom out = atom;
  out.radial.power += q;
  return out;
}

/// Raised when a transformation would leave the atom algebra.
struct UnsupportedAction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Substitution r -> r^2, i.e. g(r) = f(r^2).  A linear phase e^{2 pi i u xi}
/// becomes the quadratic phase e^{pi i (2u) r^2}; a quadratic phase would
/// become an r^4 phase and leaves the algebra.
inline TensorAtom substitute_square(const TensorAtom& atom) {
  if (atom.radial.quad_phase != 0.0)
    throw UnsupportedAction("substitute_square: quadratic phase leaves the algebra");
  TensorAtom out = atom;
  out.radial.interval = {std::sqrt(atom.radial.interval.a),
                         std::sqrt(atom.radial.interval.b)};
  out.radial.power = 2.0 * atom.radial.power;
  out.radial.lin_phase = 0.0;
  out.radial.quad_phase = 2.0 * atom.radial.lin_phase;
  return out;
}

/// Substitution r -> sqrt(r), i.e. g(r) = f(sqrt(r)).  A quadratic phase
/// e^{pi i v xi^2} becomes the linear phase e^{2 pi i (v/2) r}; a linear
/// phase would become an e^{2 pi i u sqrt(r)} factor and leaves the algebra.
inline TensorAtom substitute_sqrt(const TensorAtom& atom) {
  if (atom.radial.lin_phase != 0.0)
    throw UnsupportedAction("substitute_sqrt: linear phase leaves the algebra");
  TensorAtom out = atom;
  out.radial.interval = {atom.radial.interval.a * atom.radial.interval.a,
                         atom.radial.interval.b * atom.radial.interval.b};
  out.radial.power = 0.5 * atom.radial.power;
  out.radial.lin_phase = 0.5 * atom.radial.quad_phase;
  out.radial.quad_phase = 0.0;
  return out;
}

/// One of the closed-algebra actions, as a tagged descriptor.
struct AtomAction {
  enum class Kind { Identity, Dilation, LinPhase, QuadPhase, MulPower, SquareSubst, SqrtSubst };
  Kind kind = Kind::Identity;
  double value = 0.0;  ///< s, u, v, or q where applicable

  static AtomAction identity() { return {}; }
  static AtomAction dilation(double s) { return {Kind::Dilation, s}; }
  static AtomAction lin_phase(double u) { return {Kind::LinPhase, u}; }
  static AtomAction quad_phase(double v) { return {Kind::QuadPhase, v}; }
  static AtomAction power(double q) { return {Kind::MulPower, q}; }
  static AtomAction square_subst() { return {Kind::SquareSubst, 0.0}; }
  static AtomAction sqrt_subst() { return {Kind::SqrtSubst, 0.0}; }
};

inline TensorAtom transform_atom(const TensorAtom& atom, const AtomAction& action) {
  using K = AtomAction::Kind;
  switch (action.kind) {
    case K::Identity: return atom;
    case K::Dilation: return dilate(atom, action.value);
    case K::LinPhase: return add_lin_phase(atom, action.value);
    case K::QuadPhase: return add_quad_phase(atom, action.value);
    case K::MulPower: return mul_power(atom, action.value);
    case K::SquareSubst: return substitute_square(atom);
    case K::SqrtSubst: return substitute_sqrt(atom);
  }
  throw std::logic_error("transform_atom: unreachable");
}

inline AtomSum transform(const AtomSum& f, const AtomAction& action) {
  AtomSum out(f.fiber_domain);
  out.atoms.reserve(f.atoms.size());
  for (const auto& a : f.atoms) out.atoms.push_back(transform_atom(a, action));
  return out;
}

}  // namespace replift
