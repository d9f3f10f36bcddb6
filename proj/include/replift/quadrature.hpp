/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod quadrature for oscillatory inner products.
 *
 * 1-D panels use the embedded (G7, K15) pair; panels are bisected until the
 * local error fits a proportional share of the requested tolerance.  Callers
 * seed the panel list with known breakpoints (support edges, dyadic band
 * edges) and with an oscillation-aware pre-split that keeps at least 8 nodes
 * per period of the fastest phase.  The subdivision budget is 2^16 panels.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "replift/evaluator.hpp"

namespace replift {

struct MaxSubdivision : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnboundedSupport : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace quad {

inline constexpr int kPanelBudget = 1 << 16;

// Kronrod-15 abscissae (positive half) and weights; Gauss-7 weights embedded.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  complex_t value;
  double error;
};

/// (G7, K15) on [a, b]; error = |K15 - G7| with the usual damping exponent.
template <typename F>
PanelResult gk15(F&& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  complex_t resk{0.0, 0.0}, resg{0.0, 0.0};
  for (int i = 0; i < 8; ++i) {
    if (i == 7) {
      complex_t fc = f(c);
      resk += kWgk[7] * fc;
      resg += kWg[3] * fc;
      break;
    }
    const double dx = h * kXgk[i];
    complex_t fsum = f(c - dx) + f(c + dx);
    resk += kWgk[i] * fsum;
    if (i % 2 == 1) resg += kWg[i / 2] * fsum;
  }
  resk *= h;
  resg *= h;
  double diff = std::abs(resk - resg);
  double err = (diff > 0.0) ? std::min(diff, 200.0 * diff * std::sqrt(diff))
                            : 0.0;
  return {resk, std::max(err, diff)};
}

/// Initial panel edges: [a, b] cut at the supplied breakpoints plus an
/// oscillation-aware split (periods = expected full phase cycles on [a,b]).
inline std::vector<double> initial_edges(double a, double b,
                                         const std::vector<double>& breaks,
                                         double periods) {
  std::vector<double> edges{a, b};
  for (double x : breaks)
    if (x > a && x < b) edges.push_back(x);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (periods > 1.0) {
    // K15 has 15 nodes per panel; <= 1.5 periods per panel keeps >= 8/period
    int extra = static_cast<int>(std::min(4096.0, std::ceil(periods / 1.5)));
    std::vector<double> refined;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      refined.push_back(edges[i]);
      double len = edges[i + 1] - edges[i];
      int cuts = static_cast<int>(std::ceil(extra * len / (b - a)));
      for (int j = 1; j < cuts; ++j)
        refined.push_back(edges[i] + len * j / cuts);
    }
    refined.push_back(edges.back());
    edges.swap(refined);
  }
  return edges;
}

/// Adaptive integration over [a, b].  Deterministic depth-first refinement.
template <typename F>
PanelResult integrate(F&& f, double a, double b, double tol,
                      const std::vector<double>& breaks = {},
                      double periods = 0.0) {
  if (!(b > a)) return {{0.0, 0.0}, 0.0};
  if (std::isinf(a) || std::isinf(b))
    throw UnboundedSupport("integrate: unbounded interval");
  struct Panel {
    double a, b;
    PanelResult r;
  };
  std::vector<double> edges = initial_edges(a, b, breaks, periods);
  std::vector<Panel> stack;
  int panels = static_cast<int>(edges.size()) - 1;
  for (std::size_t i = edges.size(); i-- > 1;) {
    Panel p{edges[i - 1], edges[i], {}};
    p.r = gk15(f, p.a, p.b);
    stack.push_back(p);
  }
  const double total = b - a;
  complex_t value{0.0, 0.0};
  double error = 0.0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    double share = tol * (p.b - p.a) / total;
    if (p.r.error <= std::max(share, 1e-300) || (p.b - p.a) < 1e-15 * total) {
      value += p.r.value;
      error += p.r.error;
      continue;
    }
    if (panels >= kPanelBudget)
      throw MaxSubdivision("integrate: panel budget exhausted");
    double m = 0.5 * (p.a + p.b);
    Panel right{m, p.b, gk15(f, m, p.b)};
    Panel left{p.a, m, gk15(f, p.a, m)};
    stack.push_back(right);
    stack.push_back(left);
    ++panels;
  }
  return {value, error};
}

}  // namespace quad

/// Result of a quadrature inner product.
struct QuadratureResult {
  complex_t value;
  double error_estimate;
};

/// Adaptive nested quadrature of  integral f conj(g) r^w dr dy  over the
/// intersected support boxes.  Both supports must be bounded.
inline QuadratureResult inner_product_quadrature(const PointEvaluator& f,
                                                 const PointEvaluator& g,
                                                 RadialWeight weight,
                                                 double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("inner_product_quadrature: tol <= 0");
  if (!f.support.bounded() || !g.support.bounded())
    throw UnboundedSupport("inner_product_quadrature: unbounded support box");
  Interval ri = f.support.first.intersect(g.support.first);
  Interval yi = f.support.second.intersect(g.support.second);
  if (ri.empty() || yi.empty()) return {{0.0, 0.0}, 0.0};

  std::vector<double> rbreaks = f.first_breaks;
  rbreaks.insert(rbreaks.end(), g.first_breaks.begin(), g.first_breaks.end());
  std::vector<double> ybreaks = f.second_breaks;
  ybreaks.insert(ybreaks.end(), g.second_breaks.begin(), g.second_breaks.end());

  // bound of the radial weight on the box, for inner-tolerance allocation
  double wmax = std::max(std::pow(std::max(ri.a, 1e-12), weight.exponent),
                         std::pow(ri.b, weight.exponent));
  double inner_tol = tol / (4.0 * std::max(1e-12, ri.length()) * std::max(1.0, wmax));
  double inner_err_bound = 0.0;

  auto cross_section = [&](double r) {
    auto res = quad::integrate(
        [&](double y) { return f(r, y) * std::conj(g(r, y)); }, yi.a, yi.b,
        inner_tol, ybreaks);
    inner_err_bound = std::max(inner_err_bound, res.error);
    double w = std::pow(r, weight.exponent);
    return res.value * w;
  };
  auto outer = quad::integrate(cross_section, ri.a, ri.b, 0.5 * tol, rbreaks);
  double est = outer.error + inner_err_bound * ri.length() * std::max(1.0, wmax);
  return {outer.value, est};
}

/// Norm via quadrature; asserts the imaginary part is negligible.
inline double norm_quadrature(const PointEvaluator& f, RadialWeight weight,
                              double tol) {
  auto r = inner_product_quadrature(f, f, weight, tol);
  if (std::abs(r.value.imag()) > 1e-10 * std::max(1.0, std::abs(r.value.real())))
    throw std::logic_error("norm_quadrature: <f,f> has a non-negligible imaginary part");
  return std::sqrt(std::max(0.0, r.value.real()));
}

}  // namespace replift
