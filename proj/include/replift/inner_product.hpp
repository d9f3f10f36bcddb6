/**
 * @file inner_product.hpp
 * @brief Exact weighted inner products of atom sums.
 *
 * The inner product is <f,g> = integral f conj(g) r^w dr dkappa(y), linear in
 * f and conjugate-linear in g.  A pair of atoms is exactly integrable when
 * the quadratic phases cancel and either the linear phases cancel (any real
 * combined radial exponent) or the combined exponent is a non-negative
 * integer (phase-polynomial antiderivative).  Other pairs raise NonExactPair
 * and must be routed to quadrature.
 */
#pragma once

#include <cstdint>
#include <cstdlib>

#include "replift/atoms.hpp"

namespace replift {

/// An atom pair violates the exact-path precondition.
struct NonExactPair : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr double kIntegerSlack = 1e-12;

/// integral_a^b r^P dr, closed form.  Requires convergence (P < -1 if b=inf).
inline double power_integral(double a, double b, double P) {
  if (std::isinf(b)) {
    if (!(P < -1.0))
      throw NonExactPair("power_integral: divergent integral over unbounded interval");
    return -std::pow(a, P + 1.0) / (P + 1.0);
  }
  if (std::abs(P + 1.0) < 1e-14) return std::log(b / a);
  return (std::pow(b, P + 1.0) - std::pow(a, P + 1.0)) / (P + 1.0);
}

/// Antiderivative of r^n e^{i w r} at r (n >= 0 integer, w != 0):
///   e^{i w r} sum_{j=0}^{n} (-1)^j n!/(n-j)! r^{n-j} / (i w)^{j+1}.
inline complex_t poly_phase_antideriv(std::int64_t n, double w, double r) {
  const complex_t iw{0.0, w};
  complex_t inv = 1.0 / iw;
  complex_t term = inv;             // j = 0 factor
  double fact = 1.0;                // n!/(n-j)!
  double rpow = std::pow(r, static_cast<double>(n));
  complex_t sum{0.0, 0.0};
  for (std::int64_t j = 0; j <= n; ++j) {
    sum += term * fact * rpow;
    if (j == n) break;
    term *= -inv;
    fact *= static_cast<double>(n - j);
    rpow /= r;
  }
  return std::polar(1.0, w * r) * sum;
}

/// integral_a^b r^n e^{i w r} dr with n a non-negative integer, finite b.
inline complex_t poly_phase_integral(std::int64_t n, double w, double a, double b) {
  return poly_phase_antideriv(n, w, b) - poly_phase_antideriv(n, w, a);
}

/// integral over (c,d] of e^{i w y} dy (w may be 0).
inline complex_t line_phase_integral(double w, double c, double d) {
  if (w == 0.0) return {d - c, 0.0};
  const complex_t iw{0.0, w};
  return (std::polar(1.0, w * d) - std::polar(1.0, w * c)) / iw;
}

}  // namespace detail

/// Exact radial integral of radA * conj(radB) * r^w over the intersected
/// support.  Throws NonExactPair when no closed form applies.
inline complex_t radial_pair_integral(const RadialFactor& ra, const RadialFactor& rb,
                                      RadialWeight weight) {
  Interval iv = ra.interval.intersect(rb.interval);
  if (iv.empty()) return {0.0, 0.0};
  const double dv = ra.quad_phase - rb.quad_phase;
  if (dv != 0.0)
    throw NonExactPair("radial_pair_integral: quadratic phases do not cancel");
  const double du = ra.lin_phase - rb.lin_phase;
  const double P = ra.power + rb.power + weight.exponent;
  if (du == 0.0) return {detail::power_integral(iv.a, iv.b, P), 0.0};
  const double Pr = std::round(P);
  if (!(Pr >= 0.0) || std::abs(P - Pr) > detail::kIntegerSlack || std::isinf(iv.b))
    throw NonExactPair("radial_pair_integral: oscillatory pair with non-integer exponent");
  return detail::poly_phase_integral(static_cast<std::int64_t>(Pr), 2.0 * kPi * du,
                                     iv.a, iv.b);
}

/// Exact fiber integral of fibA * conj(fibB) over Y.
inline complex_t fiber_pair_integral(const FiberFactor& fa, const FiberFactor& fb,
                                     FiberKind kind) {
  const double dl = fa.freq - fb.freq;
  if (kind == FiberKind::Circle) {
    // integer frequencies: orthogonality over one period, applied symbolically
    return (dl == 0.0) ? complex_t{1.0, 0.0} : complex_t{0.0, 0.0};
  }
  Interval iv = fa.interval.intersect(fb.interval);
  if (iv.empty()) return {0.0, 0.0};
  return detail::line_phase_integral(2.0 * kPi * dl, iv.a, iv.b);
}

/// Exact inner product of one atom pair.
inline complex_t inner_product_exact(const TensorAtom& a, const TensorAtom& b,
                                     RadialWeight weight) {
  if (a.fiber_domain != b.fiber_domain)
    throw std::invalid_argument("inner_product_exact: mixed fiber domains");
  complex_t fib = fiber_pair_integral(a.fiber, b.fiber, a.fiber_domain);
  if (fib == complex_t{0.0, 0.0}) return fib;
  // disjoint radial supports are exactly orthogonal under any weight
  if (a.radial.interval.intersect(b.radial.interval).empty()) return {0.0, 0.0};
  complex_t rad = radial_pair_integral(a.radial, b.radial, weight);
  return a.coeff * std::conj(b.coeff) * rad * fib;
}

inline complex_t inner_product_exact(const AtomSum& f, const AtomSum& g,
                                     RadialWeight weight) {
  complex_t sum{0.0, 0.0};
  for (const auto& a : f.atoms)
    for (const auto& b : g.atoms) sum += inner_product_exact(a, b, weight);
  return sum;
}

/// sqrt of the real part of <f,f>; asserts the imaginary part is negligible.
inline double norm_exact(const AtomSum& f, RadialWeight weight) {
  complex_t ip = inner_product_exact(f, f, weight);
  if (std::abs(ip.imag()) > 1e-13 * std::max(1.0, std::abs(ip.real())))
    throw std::logic_error("norm_exact: <f,f> has a non-negligible imaginary part");
  return std::sqrt(std::max(0.0, ip.real()));
}

}  // namespace replift
