/**
 * @file verification.hpp
 * @brief Defect checks: orthonormality Grams, isometry criteria, discrete
 *        isometry sampling, the band-limited summation identity, kernel-table
 *        Grams, and pointwise intertwining defects.
 *
 * Every check reports the maximum absolute deviation ("defect") of a computed
 * quantity from its exact theoretical value.  The l-side checks are exact up
 * to band-depth truncation (tail below 2^-60); q-side and case I-IV checks
 * are validated through the unitary transfer of their parameters to the
 * l-side, with quadrature spot checks confirming the transfer numerically.
 */
#pragma once

#include <chrono>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "replift/quadrature.hpp"
#include "replift/shannon.hpp"

namespace replift {

struct TruncationTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TailBoundExceedsTol : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SupportViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Outcome of one verification check.
struct VerificationReport {
  std::string check_name;
  std::string case_params;
  double max_defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::int64_t sample_count = 0;
  double runtime_seconds = 0.0;
  std::string notes;
  std::vector<std::pair<std::string, double>> metrics;  ///< named side results
};

/// Worker count for parallel sections: REPLIFT_WORKERS, else hardware.
inline int worker_count() {
  if (const char* env = std::getenv("REPLIFT_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace detail {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

/// Deterministic parallel max of fn(i) over i in [0, n): static chunking,
/// ordered reduction; the first exception (lowest chunk) is rethrown.
template <typename Fn>
double parallel_max(std::int64_t n, Fn&& fn) {
  int workers = std::min<std::int64_t>(worker_count(), std::max<std::int64_t>(n, 1));
  if (workers <= 1) {
    double best = 0.0;
    for (std::int64_t i = 0; i < n; ++i) best = std::max(best, fn(i));
    return best;
  }
  std::vector<double> local(workers, 0.0);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    std::int64_t lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] {
      try {
        double best = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) best = std::max(best, fn(i));
        local[w] = best;
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  double best = 0.0;
  for (double v : local) best = std::max(best, v);
  return best;
}

/// Van der Corput base-2 low-discrepancy point, i >= 1.
inline double van_der_corput(std::int64_t i) {
  double r = 0.0, f = 0.5;
  while (i > 0) {
    if (i & 1) r += f;
    f *= 0.5;
    i >>= 1;
  }
  return r;
}

/// Deterministic sample set in (0, 1]: van der Corput points plus dyadic
/// band midpoints.
inline std::vector<double> unit_samples(int count, int midpoint_bands = 12) {
  std::vector<double> xs;
  xs.reserve(count + midpoint_bands);
  for (int i = 1; xs.size() < static_cast<std::size_t>(count); ++i) {
    double x = van_der_corput(i);
    if (x > 0.0) xs.push_back(x);
  }
  for (int n = 1; n <= midpoint_bands; ++n)
    xs.push_back(1.5 * std::exp2(static_cast<double>(-n)));
  return xs;
}

/// The l-side element carrying the lattice index (k, m) for any case: the
/// q-side lattice transfers to the l-side one, and each case I-IV lattice
/// transfers to the q-side one.
inline GroupElement l_side_lattice(const CaseTag& c, int k, int m) {
  GroupElement lam = lattice_element(c, k, m);
  if (c.kind == CaseKind::L) return lam;
  GroupElement q = (c.kind == CaseKind::Q) ? lam : q_side_element(c, lam);
  return {q.u / 2.0, q.t * q.t};
}

inline std::string format_params(const CaseTag& c) {
  std::ostringstream os;
  os << "case=" << c.name();
  if (c.has_alpha()) os << ";alpha=" << c.alpha;
  return os.str();
}

}  // namespace detail

/// Truncated lattice index box.
struct IndexBox {
  int k_min = -2, k_max = 2;
  int m_min = -4, m_max = 4;

  std::int64_t size() const {
    return static_cast<std::int64_t>(k_max - k_min + 1) * (m_max - m_min + 1);
  }
};

// --- gram ---------------------------------------------------------------------

struct GramOptions {
  std::int64_t depth = kDefaultBandDepth;  ///< exact band-sum depth
  int spot_checks = 0;        ///< quadrature cross-checks for non-l reps
  int spot_bands = 10;        ///< truncation used by the spot checks
  double spot_tol = 1e-9;     ///< quadrature tolerance of the spot checks
};

/// Gram defect of {mu_lambda psi^D} over the index box against the identity
/// matrix.  All reps reduce to exact l-side inner products through the
/// unitary parameter transfer; non-l reps additionally run quadrature spot
/// checks of the transfer on a truncated generator (metric "spotDefect").
inline VerificationReport gram_defect(const CaseTag& rep,
                                      const LazyShannonLift& lift,
                                      const IndexBox& box, double tol,
                                      const GramOptions& opt = {}) {
  detail::Stopwatch clock;
  VerificationReport rep_out;
  rep_out.check_name = "gram";
  rep_out.case_params = detail::format_params(rep);
  rep_out.tolerance = tol;

  std::vector<GroupElement> elems;
  for (int k = box.k_min; k <= box.k_max; ++k)
    for (int m = box.m_min; m <= box.m_max; ++m)
      elems.push_back(detail::l_side_lattice(rep, k, m));
  const std::int64_t n = static_cast<std::int64_t>(elems.size());

  const CaseTag lrep = CaseTag::L();
  rep_out.max_defect = detail::parallel_max(n * n, [&](std::int64_t idx) {
    std::int64_t i = idx / n, j = idx % n;
    complex_t entry = transformed_lift_inner(lrep, elems[i], elems[j], lift,
                                             RadialWeight{0.0}, opt.depth);
    double expect = (i == j) ? 1.0 : 0.0;
    return std::abs(entry - expect);
  });
  rep_out.sample_count = n * n;

  if (rep.kind != CaseKind::L && opt.spot_checks > 0) {
    AtomSum trunc(lift.fiber);
    for (std::int64_t b = 1; b <= opt.spot_bands; ++b)
      trunc.add(lift.band_term(b));
    AtomSum qtrunc = apply_U(trunc);

    // deterministic pair list: leading diagonal entries, then first row
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; static_cast<int>(pairs.size()) < opt.spot_checks && i < n; ++i)
      pairs.emplace_back(i, i);
    for (int j = 1; static_cast<int>(pairs.size()) < opt.spot_checks && j < n; ++j)
      pairs.emplace_back(0, j);

    double spot = detail::parallel_max(
        static_cast<std::int64_t>(pairs.size()), [&](std::int64_t p) {
          auto [i, j] = pairs[p];
          int ki = box.k_min + static_cast<int>(i) / (box.m_max - box.m_min + 1);
          int mi = box.m_min + static_cast<int>(i) % (box.m_max - box.m_min + 1);
          int kj = box.k_min + static_cast<int>(j) / (box.m_max - box.m_min + 1);
          int mj = box.m_min + static_cast<int>(j) % (box.m_max - box.m_min + 1);
          complex_t exact = inner_product_exact(
              act(lrep, detail::l_side_lattice(rep, ki, mi), trunc),
              act(lrep, detail::l_side_lattice(rep, kj, mj), trunc),
              RadialWeight{0.0});
          complex_t approx;
          if (rep.kind == CaseKind::Q) {
            PointEvaluator a = to_evaluator(
                act(rep, lattice_element(rep, ki, mi), qtrunc));
            PointEvaluator b = to_evaluator(
                act(rep, lattice_element(rep, kj, mj), qtrunc));
            approx = inner_product_quadrature(a, b, RadialWeight{0.0},
                                              opt.spot_tol).value;
          } else {
            PointEvaluator gen = apply_U_J_inv(rep, to_evaluator(qtrunc));
            if (rep.kind == CaseKind::IV) gen.tag = DomainTag::HyperbolicChart;
            PointEvaluator a = act(rep, lattice_element(rep, ki, mi), gen);
            PointEvaluator b = act(rep, lattice_element(rep, kj, mj), gen);
            double w = (rep.kind == CaseKind::III || rep.kind == CaseKind::IV)
                           ? 1.0
                           : 0.0;
            approx = inner_product_quadrature(a, b, RadialWeight{w},
                                              opt.spot_tol).value;
          }
          return std::abs(approx - exact);
        });
    rep_out.metrics.emplace_back("spotDefect", spot);
    rep_out.metrics.emplace_back("spotChecks", static_cast<double>(pairs.size()));
  }

  rep_out.pass = rep_out.max_defect <= tol;
  rep_out.runtime_seconds = clock.seconds();
  std::ostringstream note;
  note << "bandDepth=" << opt.depth << ";workers=" << worker_count();
  rep_out.notes = note.str();
  return rep_out;
}

// --- parseval -----------------------------------------------------------------

enum class ParsevalMode { Analytic, Direct };

/// Parseval defect | ||f||^2 - sum_lambda |<f, mu_lambda psi>|^2 | over the
/// lattice box.  Analytic mode performs the m-sum in closed form through the
/// band-limited summation identity (exact up to band-depth tail); Direct mode
/// sums the coefficients of the box one by one (monotone in the box, but with
/// a slowly decaying m-tail).  Coefficients are unitary-transfer invariants,
/// so all reps share the same value.
inline VerificationReport parseval_defect(const AtomSum& f, const CaseTag& rep,
                                          const LazyShannonLift& lift,
                                          const IndexBox& box, double tol,
                                          ParsevalMode mode = ParsevalMode::Analytic,
                                          std::int64_t depth = kDefaultBandDepth) {
  detail::Stopwatch clock;
  VerificationReport out;
  out.check_name = "parseval";
  out.case_params = detail::format_params(rep);
  out.tolerance = tol;

  const double nrm = norm_exact(f, RadialWeight{0.0});
  const double norm2 = nrm * nrm;
  double sum = 0.0;

  if (mode == ParsevalMode::Direct) {
    std::vector<double> parts(box.size());
    detail::parallel_max(box.size(), [&](std::int64_t idx) {
      int k = box.k_min + static_cast<int>(idx) / (box.m_max - box.m_min + 1);
      int m = box.m_min + static_cast<int>(idx) % (box.m_max - box.m_min + 1);
      complex_t c = atoms_vs_transformed_lift(
          f, CaseTag::L(), detail::l_side_lattice(rep, k, m), lift,
          RadialWeight{0.0}, depth);
      parts[idx] = std::norm(c);
      return 0.0;
    });
    for (double p : parts) sum += p;
    out.sample_count = box.size();
  } else {
    // F_k(xi) = int_Y f(xi, y) conj(2^{k/2} psi(2^k xi, y)) dy is a finite
    // radial atom sum; sum_m |<f, mu_{(k,m)} psi>|^2 = 2^{-k} int |F_k|^2.
    auto cross_section = [&](int k) {
      AtomSum Fk(FiberKind::Line);
      const double twok = std::exp2(static_cast<double>(k));
      for (const auto& a : f.atoms) {
        for (std::int64_t nb = 1; nb <= depth; ++nb) {
          TensorAtom band = lift.band_term(nb);
          complex_t fib = fiber_pair_integral(a.fiber, band.fiber, f.fiber_domain);
          if (fib == complex_t{0.0, 0.0}) continue;
          Interval scaled{band.radial.interval.a / twok,
                          band.radial.interval.b / twok};
          Interval iv = a.radial.interval.intersect(scaled);
          if (iv.empty()) continue;
          TensorAtom term;
          term.coeff = a.coeff * std::sqrt(twok) * fib;
          term.radial = {a.radial.power, iv, a.radial.lin_phase,
                         a.radial.quad_phase};
          term.fiber = {{0.0, 1.0}, 0.0};
          Fk.add(term);
        }
      }
      return Fk;
    };

    auto energy = [&](int k) {
      AtomSum Fk = cross_section(k);
      if (Fk.atoms.empty()) return 0.0;
      complex_t e2;
      try {
        e2 = inner_product_exact(Fk, Fk, RadialWeight{0.0});
      } catch (const NonExactPair&) {
        e2 = inner_product_quadrature(to_evaluator(Fk), to_evaluator(Fk),
                                      RadialWeight{0.0}, 1e-13).value;
      }
      return e2.real() / std::exp2(static_cast<double>(k));
    };

    // scan the full k-range that can carry energy for f; the part outside
    // the box is reported and must stay negligible against the tolerance
    double a_min = kInf, b_max = 0.0;
    for (const auto& a : f.atoms) {
      a_min = std::min(a_min, a.radial.interval.a);
      b_max = std::max(b_max, a.radial.interval.b);
    }
    int k_hi = static_cast<int>(std::ceil(-std::log2(std::max(a_min, 1e-300)))) + 1;
    int k_lo = static_cast<int>(std::floor(-std::log2(std::max(b_max, 1e-300)))) -
               static_cast<int>(depth) - 1;
    k_hi = std::max(k_hi, box.k_max);
    k_lo = std::min(k_lo, box.k_min);

    std::vector<double> parts(k_hi - k_lo + 1, 0.0);
    detail::parallel_max(static_cast<std::int64_t>(parts.size()),
                         [&](std::int64_t idx) {
                           parts[idx] = energy(k_lo + static_cast<int>(idx));
                           return 0.0;
                         });
    double omitted = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
      if (k >= box.k_min && k <= box.k_max)
        sum += parts[k - k_lo];
      else
        omitted += parts[k - k_lo];
    }
    if (omitted > 0.5 * tol)
      throw TruncationTooSmall(
          "parseval_defect: f carries coefficient energy outside the k-range "
          "of the box");
    out.metrics.emplace_back("omittedTail", omitted);
    out.sample_count = static_cast<std::int64_t>(box.k_max - box.k_min + 1);
  }

  out.max_defect = std::abs(norm2 - sum);
  out.pass = out.max_defect <= tol;
  out.runtime_seconds = clock.seconds();
  std::ostringstream note;
  note << "mode=" << (mode == ParsevalMode::Analytic ? "analytic" : "direct")
       << ";bandDepth=" << depth << ";workers=" << worker_count();
  out.notes = note.str();
  out.metrics.emplace_back("normSquared", norm2);
  out.metrics.emplace_back("coefficientSum", sum);
  return out;
}

// --- continuous isometry --------------------------------------------------------

/// Gram of the fiber-averaging operator g -> (s -> int_Y conj(psi(s,y)) g(y))
/// on the truncated fiber basis, under the codomain weight (w = -1 on the
/// l-side, w = -2 on the q-side), compared against (log 2) * Identity.
inline VerificationReport isometry_defect_continuous(const AtomSum& psi,
                                                     bool q_side, int N,
                                                     double tol) {
  detail::Stopwatch clock;
  VerificationReport out;
  out.check_name = "isometry";
  out.case_params = q_side ? "rep=q" : "rep=l";
  out.tolerance = tol;
  const RadialWeight w{q_side ? -2.0 : -1.0};

  std::vector<FiberFactor> basis;
  if (psi.fiber_domain == FiberKind::Circle) {
    for (int l = -N; l <= N; ++l) basis.push_back(fiber_basis_circle(l));
  } else {
    for (int k = -N; k <= N; ++k)
      for (int l = -N; l <= N; ++l) basis.push_back(fiber_basis_line(k, l));
  }
  const std::int64_t n = static_cast<std::int64_t>(basis.size());

  // overlap coefficients phi[a][i] = int fib_a conj(e_i)
  std::vector<std::vector<complex_t>> phi(psi.atoms.size());
  for (std::size_t a = 0; a < psi.atoms.size(); ++a) {
    phi[a].resize(n);
    for (std::int64_t i = 0; i < n; ++i)
      phi[a][i] =
          fiber_pair_integral(psi.atoms[a].fiber, basis[i], psi.fiber_domain);
  }

  out.max_defect = detail::parallel_max(n * n, [&](std::int64_t idx) {
    std::int64_t i = idx / n, j = idx % n;
    complex_t gram{0.0, 0.0};
    for (std::size_t a = 0; a < psi.atoms.size(); ++a)
      for (std::size_t b = 0; b < psi.atoms.size(); ++b) {
        complex_t fibs = std::conj(psi.atoms[a].coeff * phi[a][i]) *
                         psi.atoms[b].coeff * phi[b][j];
        if (fibs == complex_t{0.0, 0.0}) continue;
        gram += fibs *
                radial_pair_integral(psi.atoms[b].radial, psi.atoms[a].radial, w);
      }
    double expect = (i == j) ? kLog2 : 0.0;
    return std::abs(gram - expect);
  });
  out.sample_count = n * n;
  out.pass = out.max_defect <= tol;
  out.runtime_seconds = clock.seconds();
  std::ostringstream note;
  note << "fiberBox=" << N << ";workers=" << worker_count();
  out.notes = note.str();
  return out;
}

/// Convenience overload: runs the check on the band truncation of a lazy
/// lift (l-side) or its U image (q-side).
inline VerificationReport isometry_defect_continuous(
    const LazyShannonLift& lift, bool q_side, int N, double tol,
    std::int64_t depth = kDefaultBandDepth) {
  // make sure the truncation reaches every band indexed by the N-box
  for (int k = -N; k <= N; ++k)
    for (int l = -N; l <= N; ++l) depth = std::max(depth, lift.map(k, l));
  AtomSum psi(lift.fiber);
  for (std::int64_t b = 1; b <= depth; ++b)
    psi.add(q_side ? apply_U(lift.band_term(b)) : lift.band_term(b));
  return isometry_defect_continuous(psi, q_side, N, tol);
}

// --- discrete isometry -----------------------------------------------------------

/// Finite combination of fiber basis elements e_{k,l}.
struct FiberCombo {
  FiberKind kind = FiberKind::Line;
  std::vector<std::tuple<int, int, complex_t>> terms;  ///< (k, l, coefficient)

  FiberFactor factor(std::size_t i) const {
    auto [k, l, c] = terms[i];
    return (kind == FiberKind::Line) ? fiber_basis_line(k, l)
                                     : fiber_basis_circle(l);
  }
};

namespace detail {

/// <f, e> for a fiber combo against one basis factor, exact.
inline complex_t combo_against(const FiberCombo& f, const FiberFactor& e) {
  complex_t s{0.0, 0.0};
  for (std::size_t i = 0; i < f.terms.size(); ++i)
    s += std::get<2>(f.terms[i]) * fiber_pair_integral(f.factor(i), e, f.kind);
  return s;
}

/// Exact <f, g> of two fiber combos.
inline complex_t combo_inner(const FiberCombo& f, const FiberCombo& g) {
  complex_t s{0.0, 0.0};
  for (std::size_t i = 0; i < f.terms.size(); ++i)
    for (std::size_t j = 0; j < g.terms.size(); ++j)
      s += std::get<2>(f.terms[i]) * std::conj(std::get<2>(g.terms[j])) *
           fiber_pair_integral(f.factor(i), g.factor(j), f.kind);
  return s;
}

/// Kernel second coordinate of the case tables at (r, y).
inline double kernel_second(const CaseTag& c, double r, double y) {
  switch (c.kind) {
    case CaseKind::I: return std::pow(r, (c.alpha + 1.0) / c.alpha) * y;
    case CaseKind::II: return r * y + r * std::log(r);
    case CaseKind::III: return wrap_unit(y + c.alpha * std::log(r));
    case CaseKind::IV: return y + c.alpha * std::log(r);
    default: throw CaseMismatch("kernel_second: cases I-IV only");
  }
}

}  // namespace detail

struct DiscreteOptions {
  int k_min = -70, k_max = 40;
  int samples = 256;
  std::int64_t depth = kDefaultBandDepth;
  double quad_tol = 1e-12;  ///< per-integral tolerance of the case I-IV path
};

/// Sampled defect of the almost-everywhere discrete isometry identity.
/// rep L: <f,g> = sum_k (int conj(psi(2^k xi, y)) f)(int psi(2^k xi, y) conj g);
/// rep Q: the 1/(2r) sum_k 2^{-k/2} variant at psi = U psi^D;
/// reps I-IV: the kernel-table variant with weight 2^{k/(2 alpha)} (I) or 1,
/// kernels evaluated through the chart generator by quadrature in y.
inline VerificationReport discrete_isometry_defect(const CaseTag& rep,
                                                   const LazyShannonLift& lift,
                                                   const FiberCombo& f,
                                                   const FiberCombo& g,
                                                   double tol,
                                                   const DiscreteOptions& opt = {}) {
  detail::Stopwatch clock;
  VerificationReport out;
  out.check_name = "discrete";
  out.case_params = detail::format_params(rep);
  out.tolerance = tol;

  if (f.kind != lift.fiber || g.kind != lift.fiber)
    throw CaseMismatch("discrete_isometry_defect: fiber mismatch");
  // support hypothesis: the lift vanishes beyond xi = 1 by construction
  if (lift.term_at(1.0 + 1e-9))
    throw SupportViolation("discrete_isometry_defect: generator exceeds (0,1]");

  const complex_t exact = detail::combo_inner(f, g);
  std::vector<double> xs = detail::unit_samples(opt.samples);

  std::optional<PointEvaluator> gen;
  if (!rep.multiplicative()) gen = generator_J(rep, lift, opt.depth);

  out.max_defect = detail::parallel_max(
      static_cast<std::int64_t>(xs.size()), [&](std::int64_t si) {
        const double x = xs[si];
        complex_t sum{0.0, 0.0};
        for (int k = opt.k_min; k <= opt.k_max; ++k) {
          const double twokh = std::exp2(0.5 * k);
          if (rep.kind == CaseKind::L) {
            auto n = band_of(std::exp2(static_cast<double>(k)) * x);
            if (!n || *n == 0 || *n > opt.depth) continue;
            FiberFactor e = lift.band_term(*n).fiber;
            complex_t A = detail::combo_against(f, e);
            complex_t B = detail::combo_against(g, e);
            sum += A * std::conj(B);
          } else if (rep.kind == CaseKind::Q) {
            const double rho = twokh * x;
            // band of 2^k x^2, with the power of two applied as an exact
            // exponent shift (rho * rho can straddle a band edge by an ulp)
            int ex = 0;
            double mant = std::frexp(x * x, &ex);
            std::int64_t nn = (mant == 0.5 ? 2 : 1) - (ex + k);
            if (nn < 1 || nn > opt.depth) continue;
            auto n = std::optional<std::int64_t>(nn);
            FiberFactor e = lift.band_term(*n).fiber;
            double amp2 = 2.0 * rho;  // |sqrt(2) rho^{1/2}|^2
            complex_t A = detail::combo_against(f, e);
            complex_t B = detail::combo_against(g, e);
            sum += amp2 / (2.0 * x) * std::exp2(-0.5 * k) * A * std::conj(B);
          } else {
            const double rr = twokh * x;
            if (!(rr > 0.0) || rr * rr < std::exp2(-static_cast<double>(opt.depth)))
              continue;
            if (rr > 1.0) continue;
            auto kernel = [&](double y) {
              double second = detail::kernel_second(rep, rr, y);
              double amp = (rep.kind == CaseKind::I)
                               ? std::pow(x, 1.0 / (2.0 * rep.alpha))
                               : 1.0;
              return amp / std::sqrt(2.0) * (*gen)(rr, second);
            };
            auto coef = [&](const FiberCombo& h) {
              complex_t acc{0.0, 0.0};
              for (std::size_t i = 0; i < h.terms.size(); ++i) {
                FiberFactor e = h.factor(i);
                Interval iv = (h.kind == FiberKind::Circle)
                                  ? Interval{0.0, 1.0}
                                  : e.interval;
                auto res = quad::integrate(
                    [&](double y) {
                      return std::conj(kernel(y)) *
                             eval_fiber(e, h.kind, y);
                    },
                    iv.a, iv.b, opt.quad_tol);
                acc += std::get<2>(h.terms[i]) * res.value;
              }
              return acc;
            };
            double weight = (rep.kind == CaseKind::I)
                                ? std::exp2(k / (2.0 * rep.alpha))
                                : 1.0;
            sum += weight * coef(f) * std::conj(coef(g));
          }
        }
        return std::abs(sum - exact);
      });
  out.sample_count = static_cast<std::int64_t>(xs.size());
  out.pass = out.max_defect <= tol;
  out.runtime_seconds = clock.seconds();
  std::ostringstream note;
  note << "k=" << opt.k_min << ".." << opt.k_max << ";bandDepth=" << opt.depth
       << ";workers=" << worker_count();
  out.notes = note.str();
  return out;
}

// --- band-limited summation identity ---------------------------------------------

/// Fourier transform of a radial atom sum at frequency omega (exact; needs
/// non-negative integer powers and no quadratic phase).
inline complex_t atom_fourier(const AtomSum& f, double omega) {
  complex_t s{0.0, 0.0};
  for (const auto& a : f.atoms) {
    if (a.radial.quad_phase != 0.0)
      throw NonExactPair("atom_fourier: quadratic phase has no closed transform");
    double p = a.radial.power;
    if (p < 0.0 || p != std::floor(p))
      throw NonExactPair("atom_fourier: need non-negative integer power");
    double w = 2.0 * kPi * (a.radial.lin_phase - omega);
    const Interval& iv = a.radial.interval;
    complex_t val = (w == 0.0)
                        ? complex_t{detail::power_integral(iv.a, iv.b, p), 0.0}
                        : detail::poly_phase_integral(
                              static_cast<std::int64_t>(p), w, iv.a, iv.b);
    s += a.coeff * val;
  }
  return s;
}

/// Defect of  int_0^{2^-k} f conj(g)  =  2^k sum_m fhat(2^k m) conj(ghat(2^k m)),
/// the m-sum truncated at |m| <= m_max with an explicit variation-based tail
/// bound (metric "tailBound"; throws if the bound alone exceeds tol).
inline VerificationReport bandlimited_identity_defect(const AtomSum& f,
                                                      const AtomSum& g, int k,
                                                      std::int64_t m_max,
                                                      double tol) {
  detail::Stopwatch clock;
  VerificationReport out;
  out.check_name = "bandlimited";
  {
    std::ostringstream os;
    os << "k=" << k << ";mMax=" << m_max;
    out.case_params = os.str();
  }
  out.tolerance = tol;

  const double bound = std::exp2(static_cast<double>(-k));
  auto check_support = [&](const AtomSum& h) {
    for (const auto& a : h.atoms)
      if (a.radial.interval.b > bound * (1.0 + 1e-12))
        throw SupportViolation("bandlimited_identity_defect: support exceeds [0, 2^-k]");
  };
  check_support(f);
  check_support(g);

  complex_t lhs = inner_product_exact(f, g, RadialWeight{0.0});

  const double twok = std::exp2(static_cast<double>(k));
  std::vector<complex_t> parts(2 * m_max + 1);
  detail::parallel_max(static_cast<std::int64_t>(parts.size()),
                       [&](std::int64_t idx) {
                         std::int64_t m = idx - m_max;
                         double om = twok * static_cast<double>(m);
                         parts[idx] = atom_fourier(f, om) *
                                      std::conj(atom_fourier(g, om));
                         return 0.0;
                       });
  complex_t rhs{0.0, 0.0};
  for (const auto& p : parts) rhs += p;
  rhs *= twok;

  // the transforms of BV atoms decay like 1/m; the product envelope C/m^2 is
  // calibrated on a window past the truncation, so sum_{|m|>M} <= C * 2/M.
  double envelope = 0.0;
  for (std::int64_t m = m_max + 1; m <= m_max + 64; ++m)
    for (double s : {-1.0, 1.0}) {
      double om = twok * s * static_cast<double>(m);
      double prod = std::abs(atom_fourier(f, om) * std::conj(atom_fourier(g, om)));
      envelope = std::max(envelope, prod * static_cast<double>(m) *
                                        static_cast<double>(m));
    }
  double tail = twok * envelope * 2.0 / static_cast<double>(m_max);
  if (tail > tol)
    throw TailBoundExceedsTol("bandlimited_identity_defect: tail bound exceeds tolerance");

  out.max_defect = std::abs(lhs - rhs);
  out.sample_count = 2 * m_max + 1;
  out.metrics.emplace_back("tailBound", tail);
  out.pass = out.max_defect <= tol;
  out.runtime_seconds = clock.seconds();
  std::ostringstream note;
  note << "workers=" << worker_count();
  out.notes = note.str();
  return out;
}

// --- kernel tables -----------------------------------------------------------------

struct KernelOptions {
  std::int64_t depth = kDefaultBandDepth;
  double quad_tol = 1e-13;
};

/// Gram of the case-table integral operator on the truncated fiber basis,
/// computed by nested quadrature against the chart generator psi^{J,D},
/// compared to (log 2) * Identity (the exact q-side value).  Codomain weight:
/// r^{(1-alpha)/alpha} dr for case I, dr/r for II-IV.
inline VerificationReport kernel_isometry_defect(const CaseTag& c,
                                                 const LazyShannonLift& lift,
                                                 int N, double tol,
                                                 const KernelOptions& opt = {}) {
  detail::Stopwatch clock;
  VerificationReport out;
  out.check_name = "kernel";
  out.case_params = detail::format_params(c);
  out.tolerance = tol;

  PointEvaluator gen = generator_J(c, lift, opt.depth);
  const double w_exp = (c.kind == CaseKind::I) ? (1.0 - c.alpha) / c.alpha : -1.0;

  struct Basis {
    FiberFactor e;
    Interval y;        ///< integration range of the fiber variable
    Interval band;     ///< radial support of W e (a sqrt dyadic band)
  };
  std::vector<Basis> basis;
  auto band_of_index = [&](std::int64_t n) {
    return Interval{std::exp2(-0.5 * static_cast<double>(n)),
                    std::exp2(-0.5 * static_cast<double>(n - 1))};
  };
  if (lift.fiber == FiberKind::Circle) {
    for (int l = -N; l <= N; ++l)
      basis.push_back({fiber_basis_circle(l), {0.0, 1.0},
                       band_of_index(lift.map(0, l))});
  } else {
    for (int k = -N; k <= N; ++k)
      for (int l = -N; l <= N; ++l)
        basis.push_back({fiber_basis_line(k, l),
                         {static_cast<double>(k), static_cast<double>(k + 1)},
                         band_of_index(lift.map(k, l))});
  }
  const std::int64_t n = static_cast<std::int64_t>(basis.size());

  auto We = [&](const Basis& b, double r) {
    auto res = quad::integrate(
        [&](double y) {
          double second = detail::kernel_second(c, r, y);
          return std::conj(gen(r, second)) * eval_fiber(b.e, lift.fiber, y);
        },
        b.y.a, b.y.b, opt.quad_tol);
    return res.value;
  };

  out.max_defect = detail::parallel_max(n * n, [&](std::int64_t idx) {
    std::int64_t i = idx / n, j = idx % n;
    double expect = (i == j) ? kLog2 : 0.0;
    Interval iv = basis[i].band.intersect(basis[j].band);
    if (iv.empty()) return std::abs(complex_t{0.0, 0.0} - expect);
    auto res = quad::integrate(
        [&](double r) {
          return We(basis[i], r) * std::conj(We(basis[j], r)) *
                 std::pow(r, w_exp);
        },
        iv.a, iv.b, opt.quad_tol * 10.0);
    return std::abs(res.value - expect);
  });
  out.sample_count = n * n;
  out.pass = out.max_defect <= tol;
  out.runtime_seconds = clock.seconds();
  std::ostringstream note;
  note << "fiberBox=" << N << ";bandDepth=" << opt.depth
       << ";workers=" << worker_count();
  out.notes = note.str();
  return out;
}

// --- intertwining -----------------------------------------------------------------

struct IntertwineOptions {
  int elements = 20;
  int points = 64;
  std::uint64_t seed = 20260823;
  std::int64_t trunc_bands = 12;  ///< generator truncation for cases I-IV
};

/// Pointwise intertwining defect.  For rep L/Q this checks
/// mu^(q)_{(2u, sqrt s)} U f = U mu^(l)_{(u,s)} f on random elements and
/// points, plus an exact unitarity metric for U.  For cases I-IV it checks
/// U^J mu^J_{(u,t)} f = mu^(q)_{(u, e^{-alpha t} or e^{-t})} U^J f.
inline VerificationReport intertwine_defect(const CaseTag& c, double tol,
                                            const LazyShannonLift& lift,
                                            const IntertwineOptions& opt = {}) {
  detail::Stopwatch clock;
  VerificationReport out;
  out.check_name = "intertwine";
  out.case_params = detail::format_params(c);
  out.tolerance = tol;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uu(-3.0, 3.0);
  std::uniform_real_distribution<double> us(0.25, 4.0);
  std::uniform_real_distribution<double> ut(-1.5, 1.5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  double defect = 0.0;
  std::int64_t samples = 0;

  if (c.multiplicative()) {
    // phase-free test atoms so U applies within the algebra on both sides
    std::vector<AtomSum> tests;
    for (std::int64_t b = 1; b <= 4; ++b) {
      AtomSum t(lift.fiber);
      t.add(lift.band_term(b));
      tests.push_back(t);
    }
    double unit = 0.0;
    for (const auto& t : tests) {
      double nl = norm_exact(t, RadialWeight{0.0});
      double nq = norm_exact(apply_U(t), RadialWeight{0.0});
      unit = std::max(unit, std::abs(nl * nl - nq * nq));
    }
    out.metrics.emplace_back("unitarityDefect", unit);

    for (int e = 0; e < opt.elements; ++e) {
      GroupElement gl{uu(rng), us(rng)};
      GroupElement gq{2.0 * gl.u, std::sqrt(gl.t)};
      for (const auto& t : tests) {
        AtomSum lhs = act(CaseTag::Q(), gq, apply_U(t));
        AtomSum rhs = apply_U(act(CaseTag::L(), gl, t));
        for (int p = 0; p < opt.points; ++p) {
          double r = 1e-3 + 1.999 * u01(rng);
          double y = (lift.fiber == FiberKind::Circle)
                         ? u01(rng)
                         : -6.0 + 12.0 * u01(rng);
          defect = std::max(defect, std::abs(lhs.eval(r, y) - rhs.eval(r, y)));
          ++samples;
        }
      }
    }
  } else {
    AtomSum trunc(lift.fiber);
    for (std::int64_t b = 1; b <= opt.trunc_bands; ++b)
      trunc.add(lift.band_term(b));
    PointEvaluator qgen = to_evaluator(apply_U(trunc));
    PointEvaluator f = apply_U_J_inv(c, qgen);
    if (c.kind == CaseKind::IV) f.tag = DomainTag::HyperbolicChart;

    for (int e = 0; e < opt.elements; ++e) {
      GroupElement gj{uu(rng), ut(rng)};
      PointEvaluator lhs = apply_U_J(c, act(c, gj, f));
      PointEvaluator rhs = act(CaseTag::Q(), q_side_element(c, gj),
                               apply_U_J(c, f));
      // sample inside the q-side support of the right hand side
      Interval ri = rhs.support.first;
      Interval yi = rhs.support.second;
      for (int p = 0; p < opt.points; ++p) {
        double r = 0.0, y = 0.0;
        do {
          r = ri.a + (ri.b - ri.a) * u01(rng);
        } while (!(r > 0.0));
        y = yi.a + (yi.b - yi.a) * u01(rng);
        defect = std::max(defect, std::abs(lhs(r, y) - rhs(r, y)));
        ++samples;
      }
    }
  }

  out.max_defect = defect;
  out.sample_count = samples;
  out.pass = defect <= tol;
  out.runtime_seconds = clock.seconds();
  std::ostringstream note;
  note << "elements=" << opt.elements << ";points=" << opt.points
       << ";seed=" << opt.seed << ";workers=" << worker_count();
  out.notes = note.str();
  return out;
}

}  // namespace replift
