// Defect checks: Gram matrices, Parseval sums, isometry criteria, the
// discrete sampled identity, the band-limited summation identity, and the
// error paths.
#include <catch2/catch_amalgamated.hpp>

#include "replift/verification.hpp"

using namespace replift;

namespace {

AtomSum band_function(const LazyShannonLift& lift, int band,
                      complex_t coeff = {1.0, 0.0}) {
  AtomSum f(lift.fiber);
  TensorAtom t = lift.band_term(band);
  t.coeff = coeff;
  f.add(t);
  return f;
}

}  // namespace

TEST_CASE("gram: linear-phase side over a small box") {
  auto lift = LazyShannonLift::line();
  IndexBox box{-1, 1, -2, 2};
  auto rep = gram_defect(CaseTag::L(), lift, box, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.max_defect <= 1e-12);
  CHECK(rep.sample_count == box.size() * box.size());
}

TEST_CASE("gram: quadratic side transfers to the same entries") {
  auto lift = LazyShannonLift::line();
  IndexBox box{-1, 1, -1, 1};
  auto rep = gram_defect(CaseTag::Q(), lift, box, 1e-12, {60, 3, 8, 1e-9});
  CHECK(rep.pass);
  double spot = -1.0;
  for (const auto& [k, v] : rep.metrics)
    if (k == "spotDefect") spot = v;
  CHECK(spot >= 0.0);
  CHECK(spot <= 1e-8);
}

TEST_CASE("gram: trivial single-atom system") {
  // a lift whose band 1 already has unit norm is its own orthonormal system
  // at the identity lattice point; use a 1x1 box at (0,0)
  auto lift = LazyShannonLift::line();
  IndexBox box{0, 0, 0, 0};
  auto rep = gram_defect(CaseTag::L(), lift, box, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.sample_count == 1);
}

TEST_CASE("parseval: basis element and two-term sums") {
  auto lift = LazyShannonLift::line();
  IndexBox box;  // default |k|<=2, |m|<=4
  AtomSum f = band_function(lift, 1);
  auto rep = parseval_defect(f, CaseTag::L(), lift, box, 1e-12);
  CHECK(rep.pass);
  for (const auto& [k, v] : rep.metrics)
    if (k == "normSquared") CHECK(std::abs(v - 0.5) < 1e-15);

  AtomSum two = band_function(lift, 2);
  TensorAtom second = lift.band_term(3);
  second.coeff = {0.5, 0.25};
  two.add(second);
  auto rep2 = parseval_defect(two, CaseTag::L(), lift, box, 1e-12);
  CHECK(rep2.pass);

  // zero function: defect exactly 0
  AtomSum zero(lift.fiber);
  auto rep0 = parseval_defect(zero, CaseTag::L(), lift, box, 1e-12);
  CHECK(rep0.pass);
  CHECK(rep0.max_defect == 0.0);
}

TEST_CASE("parseval: truncation guard") {
  auto lift = LazyShannonLift::line();
  AtomSum f = band_function(lift, 1);
  IndexBox tiny{2, 3, -4, 4};  // the k = 0 coefficient band falls outside
  CHECK_THROWS_AS(parseval_defect(f, CaseTag::L(), lift, tiny, 1e-12),
                  TruncationTooSmall);
}

TEST_CASE("parseval: direct mode is monotone over nested boxes") {
  auto lift = LazyShannonLift::line();
  AtomSum f = band_function(lift, 1);
  double prev = kInf;
  for (int grow = 0; grow < 5; ++grow) {
    IndexBox box{-grow, grow, -2 - 4 * grow, 2 + 4 * grow};
    auto rep = parseval_defect(f, CaseTag::L(), lift, box, 1e-12,
                               ParsevalMode::Direct, 30);
    CHECK(rep.max_defect <= prev + 1e-15);
    prev = rep.max_defect;
  }
}

TEST_CASE("isometry: rank-one system") {
  AtomSum psi(FiberKind::Line);
  TensorAtom t;
  t.radial = band_indicator(1);
  t.fiber = fiber_basis_line(0, 0);
  psi.add(t);
  // single-atom system: only the (0,0) diagonal entry carries log 2, the
  // others vanish, so compare on the 1x1 fiber box
  auto rep = isometry_defect_continuous(psi, false, 0, 1e-12);
  CHECK(rep.pass);
}

TEST_CASE("isometry: both sides of the lift") {
  auto lift = LazyShannonLift::line();
  auto repl = isometry_defect_continuous(lift, false, 2, 1e-12);
  CHECK(repl.pass);
  auto repq = isometry_defect_continuous(lift, true, 2, 1e-12);
  CHECK(repq.pass);
  auto repc = isometry_defect_continuous(LazyShannonLift::circle(), false, 2,
                                         1e-12);
  CHECK(repc.pass);
}

TEST_CASE("discrete isometry: identities and orthogonality") {
  auto lift = LazyShannonLift::line();
  FiberCombo e00{FiberKind::Line, {{0, 0, {1.0, 0.0}}}};
  FiberCombo e11{FiberKind::Line, {{1, 1, {1.0, 0.0}}}};
  DiscreteOptions opt;
  opt.samples = 64;

  auto rep = discrete_isometry_defect(CaseTag::L(), lift, e00, e00, 1e-12, opt);
  CHECK(rep.pass);

  // orthogonal pair: the sampled sum collapses to ~0
  auto orto = discrete_isometry_defect(CaseTag::L(), lift, e00, e11, 1e-12, opt);
  CHECK(orto.pass);

  auto repq = discrete_isometry_defect(CaseTag::Q(), lift, e00, e00, 1e-12, opt);
  CHECK(repq.pass);

  // fiber mismatch is a configuration error
  FiberCombo circ{FiberKind::Circle, {{0, 0, {1.0, 0.0}}}};
  CHECK_THROWS_AS(discrete_isometry_defect(CaseTag::L(), lift, circ, circ,
                                           1e-12, opt),
                  CaseMismatch);
}

TEST_CASE("discrete isometry: chart cases at reduced sampling") {
  FiberCombo e00{FiberKind::Line, {{0, 0, {1.0, 0.0}}}};
  DiscreteOptions opt;
  opt.samples = 8;
  auto lift = LazyShannonLift::line();
  auto rep1 = discrete_isometry_defect(CaseTag::I(-1.0), lift, e00, e00,
                                       1e-10, opt);
  CHECK(rep1.pass);
  auto rep2 = discrete_isometry_defect(CaseTag::II(), lift, e00, e00, 1e-10,
                                       opt);
  CHECK(rep2.pass);
  FiberCombo c0{FiberKind::Circle, {{0, 0, {1.0, 0.0}}}};
  auto rep3 = discrete_isometry_defect(CaseTag::III(0.7),
                                       LazyShannonLift::circle(), c0, c0,
                                       1e-10, opt);
  CHECK(rep3.pass);
}

TEST_CASE("band-limited identity") {
  auto box = [](double a, double b) {
    TensorAtom t;
    t.radial = {0.0, {a, b}, 0.0, 0.0};
    t.fiber = {{0.0, 1.0}, 0.0};
    return AtomSum(t);
  };
  const int k = 3;
  const double bk = std::exp2(-k);

  auto full = bandlimited_identity_defect(box(0.0, bk), box(0.0, bk), k, 1 << 12,
                                          1e-8);
  CHECK(full.pass);
  // both sides are 2^-k for the full-band indicator pair
  CHECK(full.max_defect <= 1e-12);

  auto half = bandlimited_identity_defect(box(0.0, bk / 2.0), box(0.0, bk), k,
                                          1 << 14, 1e-8);
  CHECK(half.pass);

  auto shifted = bandlimited_identity_defect(box(0.0, bk / 2.0),
                                             box(0.0, bk / 2.0), k + 1, 1 << 12,
                                             1e-8);
  CHECK(shifted.pass);

  // support beyond [0, 2^-k] violates the hypothesis
  CHECK_THROWS_AS(
      bandlimited_identity_defect(box(0.0, 2.0 * bk), box(0.0, bk), k, 64, 1e-8),
      SupportViolation);

  // a too-short m-sum fails loudly through the tail bound; the half/half
  // pair has genuinely decaying transforms, so the tail does not vanish
  CHECK_THROWS_AS(bandlimited_identity_defect(box(0.0, bk / 2.0),
                                              box(0.0, bk / 2.0), k, 16, 1e-8),
                  TailBoundExceedsTol);
}

TEST_CASE("kernel gram at a small fiber box") {
  auto rep = kernel_isometry_defect(CaseTag::I(-1.0), LazyShannonLift::line(),
                                    0, 1e-12, {40, 1e-12});
  CHECK(rep.pass);
  auto rep2 = kernel_isometry_defect(CaseTag::II(), LazyShannonLift::line(), 0,
                                     1e-10, {40, 1e-12});
  CHECK(rep2.pass);
}

TEST_CASE("intertwine defects") {
  auto lift = LazyShannonLift::line();
  IntertwineOptions opt;
  opt.elements = 5;
  opt.points = 16;
  auto repl = intertwine_defect(CaseTag::L(), 1e-12, lift, opt);
  CHECK(repl.pass);
  double unit = -1.0;
  for (const auto& [k, v] : repl.metrics)
    if (k == "unitarityDefect") unit = v;
  CHECK(unit >= 0.0);
  CHECK(unit <= 1e-10);

  auto rep1 = intertwine_defect(CaseTag::I(-1.0), 1e-12, lift, opt);
  CHECK(rep1.pass);
  auto rep2 = intertwine_defect(CaseTag::II(), 1e-10, lift, opt);
  CHECK(rep2.pass);
}

TEST_CASE("reports are deterministic") {
  auto lift = LazyShannonLift::line();
  IndexBox box{-1, 1, -1, 1};
  auto a = gram_defect(CaseTag::L(), lift, box, 1e-12);
  auto b = gram_defect(CaseTag::L(), lift, box, 1e-12);
  CHECK(a.max_defect == b.max_defect);
  CHECK(a.sample_count == b.sample_count);
  CHECK(a.notes == b.notes);
}
