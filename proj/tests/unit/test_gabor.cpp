#include <catch_amalgamated.hpp>

#include <complex>
#include <numbers>

#include "support.hpp"

using namespace ssframe;
using testing::Gen;
using testing::kCases;
using testing::q;

namespace {

std::vector<Rational> range(long long lo, long long hi) {
  std::vector<Rational> v;
  for (long long k = lo; k <= hi; ++k) v.emplace_back(k);
  return v;
}

WindowFunction two_interval() {
  return WindowFunction({{{q(0), q(1, 2)}, 1.0}, {{q(1), q(3, 2)}, 1.0}});
}

double value_at(const WindowFunction& g, double x) {
  for (const auto& p : g.pieces()) {
    if (p.interval.lo.to_double() <= x && x < p.interval.hi.to_double()) return p.value;
  }
  return 0.0;
}

// Midpoint rule for int e^{2 pi i l x} g(x - p) conj(e^{2 pi i l2 x} g(x - p2)) dx.
std::complex<double> midpoint_inner(const WindowFunction& g, double l, double p, double l2, double p2) {
  const double a = g.pieces().front().interval.lo.to_double() + std::min(p, p2);
  const double b = g.pieces().back().interval.hi.to_double() + std::max(p, p2);
  const int steps = 100000;
  const double h = (b - a) / steps;
  std::complex<double> s(0.0, 0.0);
  for (int i = 0; i < steps; ++i) {
    const double x = a + (i + 0.5) * h;
    const double w = value_at(g, x - p) * value_at(g, x - p2);
    if (w != 0.0) s += w * std::polar(1.0, 2.0 * std::numbers::pi * (l - l2) * x);
  }
  return s * h;
}

WindowFunction random_window(Gen& gen) {
  std::vector<WindowPiece> pieces;
  Rational at = gen.rational(-1, 1, 6);
  const int n = static_cast<int>(gen.integer(1, 3));
  for (int i = 0; i < n; ++i) {
    at += gen.rational(0, 1, 6);
    const Rational hi = at + q(gen.integer(1, 6), 6);
    pieces.push_back({{at, hi}, gen.real(0.2, 2.0)});
    at = hi;
  }
  return WindowFunction(pieces);
}

}  // namespace

TEST_CASE("WindowFunction validation and measures", "[gabor]") {
  CHECK_THROWS_AS(WindowFunction(std::vector<WindowPiece>{}), InputError);
  CHECK_THROWS_AS(WindowFunction({{{q(0), q(0)}, 1.0}}), InputError);
  CHECK_THROWS_AS(WindowFunction({{{q(0), q(1)}, -1.0}}), InputError);
  CHECK_THROWS_AS(WindowFunction({{{q(0), q(1)}, 1.0}, {{q(1, 2), q(2)}, 1.0}}), InputError);
  const auto g = two_interval();
  CHECK(g.support_measure() == q(1));
  CHECK(g.norm_squared() == Catch::Approx(1.0));
  CHECK(g.support().size() == 2);
  CHECK(WindowFunction::indicator(q(0), q(1, 2), 2.0).norm_squared() == Catch::Approx(2.0));
  CHECK_THROWS_AS(GaborSystemSpec(g, {q(0), q(0)}, {q(0)}), InputError);
  CHECK_THROWS_AS(GaborSystemSpec(g, {}, {q(0)}), InputError);
}

TEST_CASE("gabor_gram examples", "[gabor]") {
  const GaborSystemSpec unit(WindowFunction::indicator(q(0), q(1)), range(-1, 1), {q(0)});
  const auto gram = gabor_gram(unit);
  REQUIRE(gram.rows() == 3);
  CHECK((gram - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  const GaborSystemSpec one(WindowFunction::indicator(q(0), q(1, 2), 2.0), {q(0)}, {q(0)});
  CHECK(gabor_gram(one)(0, 0).real() == Catch::Approx(2.0));

  const GaborSystemSpec half(WindowFunction::indicator(q(0), q(1)), {q(0), q(1, 2)}, {q(0)});
  CHECK(std::abs(gabor_gram(half)(0, 1)) == Catch::Approx(2.0 / std::numbers::pi));

  // index = i_lambda * |J| + i_p
  const GaborSystemSpec grid(WindowFunction::indicator(q(0), q(3, 2)), {q(0), q(1)}, {q(0), q(1)});
  const auto gg = gabor_gram(grid);
  CHECK(std::abs(gg(0, 1) - std::complex<double>(0.5, 0.0)) < 1e-12);
  // same shift, frequencies 0 and 1 on [0, 3/2]: |int| = 1/pi
  CHECK(std::abs(std::abs(gg(0, 2)) - 1.0 / std::numbers::pi) < 1e-12);

  Config cfg;
  cfg.gabor_size_cap = 2;
  CHECK_THROWS_AS(gabor_gram(unit, cfg), ResourceError);
}

TEST_CASE("gabor_inner matches midpoint quadrature", "[gabor][property]") {
  Gen gen(51);
  for (int i = 0; i < kCases; ++i) {
    const auto g = random_window(gen);
    const Rational l = gen.rational(-2, 2, 4);
    const Rational l2 = gen.rational(-2, 2, 4);
    const Rational p = gen.rational(-1, 1, 6);
    const Rational p2 = gen.rational(-1, 1, 6);
    const auto exact = gabor_inner(g, l, p, l2, p2);
    const auto approx = midpoint_inner(g, l.to_double(), p.to_double(), l2.to_double(), p2.to_double());
    REQUIRE(std::abs(exact - approx) < 2e-3);
  }
}

TEST_CASE("gabor_gram structure", "[gabor][property]") {
  Gen gen(52);
  for (int i = 0; i < kCases; ++i) {
    const auto g = random_window(gen);
    std::vector<Rational> lambda;
    for (int k = 0; k < 3; ++k) lambda.push_back(gen.rational(-3, 3, 4));
    std::sort(lambda.begin(), lambda.end());
    lambda.erase(std::unique(lambda.begin(), lambda.end()), lambda.end());
    std::vector<Rational> shifts{q(0), gen.rational(1, 4, 3)};
    const GaborSystemSpec spec(g, lambda, shifts);
    const auto gram = gabor_gram(spec);
    const bool packing = claim2_disjointness(spec).packing;
    const auto nj = static_cast<Eigen::Index>(spec.shifts.size());
    for (Eigen::Index r = 0; r < gram.rows(); ++r) {
      REQUIRE(std::abs(gram(r, r) - g.norm_squared()) < 1e-9);
      for (Eigen::Index c = 0; c < gram.cols(); ++c) {
        REQUIRE(std::abs(gram(r, c) - std::conj(gram(c, r))) < 1e-12);
        if (packing && r % nj != c % nj) REQUIRE(std::abs(gram(r, c)) == 0.0);
      }
    }
  }
}

TEST_CASE("gabor_inner is translation and modulation covariant", "[gabor][property]") {
  Gen gen(53);
  for (int i = 0; i < kCases; ++i) {
    const auto g = random_window(gen);
    const Rational l = gen.rational(-2, 2, 5);
    const Rational l2 = gen.rational(-2, 2, 5);
    const Rational p = gen.rational(-1, 1, 4);
    const Rational p2 = gen.rational(-1, 1, 4);
    const Rational s = gen.rational(-3, 3, 7);
    const auto base = gabor_inner(g, l, p, l2, p2);
    const auto phase = std::polar(1.0, 2.0 * std::numbers::pi * ((l - l2) * s).to_double());
    REQUIRE(std::abs(gabor_inner(g, l, p + s, l2, p2 + s) - phase * base) < 1e-9);
    REQUIRE(std::abs(gabor_inner(g, l + s, p, l2 + s, p2) - base) < 1e-9);
  }
}

TEST_CASE("claim1_covering examples", "[gabor]") {
  const auto unit = WindowFunction::indicator(q(0), q(1));
  CHECK(claim1_covering(GaborSystemSpec(unit, {q(0)}, range(0, 4)), {q(0), q(5)}).covered);
  const auto gap = claim1_covering(GaborSystemSpec(unit, {q(0)}, {q(0), q(2)}), {q(0), q(3)});
  CHECK_FALSE(gap.covered);
  REQUIRE(gap.gap);
  CHECK(*gap.gap == Interval{q(1), q(2)});
  CHECK(claim1_covering(GaborSystemSpec(two_interval(), {q(0)}, {q(0), q(1, 2)}), {q(0), q(2)}).covered);
  const auto hole = claim1_covering(GaborSystemSpec(two_interval(), {q(0)}, {q(0), q(2)}), {q(0), q(7, 2)});
  REQUIRE(hole.gap);
  CHECK(*hole.gap == Interval{q(1, 2), q(1)});
}

TEST_CASE("claim2_disjointness examples", "[gabor]") {
  const auto r = claim2_disjointness(GaborSystemSpec(WindowFunction::indicator(q(0), q(3, 2)), {q(0)}, {q(0), q(1)}));
  CHECK_FALSE(r.packing);
  REQUIRE(r.overlap);
  CHECK(*r.overlap == Interval{q(1), q(3, 2)});
  CHECK(claim2_disjointness(GaborSystemSpec(two_interval(), {q(0)}, {q(0), q(1, 2)})).packing);
  CHECK(claim2_disjointness(GaborSystemSpec(two_interval(), {q(0)}, {q(0), q(2)})).packing);
  CHECK_FALSE(claim2_disjointness(GaborSystemSpec(two_interval(), {q(0)}, {q(0), q(1)})).packing);
  CHECK(claim2_disjointness(GaborSystemSpec(WindowFunction::indicator(q(0), q(1)), {q(0)}, range(-3, 3))).packing);
}

TEST_CASE("claim3_spectrum examples", "[gabor]") {
  const auto unit = WindowFunction::indicator(q(0), q(1));
  const auto s = claim3_spectrum(GaborSystemSpec(unit, range(-30, 30), {q(0)}), {0.25});
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].q >= 0.99);
  CHECK(s.points[0].q <= 1.0 + 1e-12);
  // sum over all l of sin^2(pi x) / (pi (x + l))^2 = 1; the tail beyond 30 is small
  double tail = 0.0;
  for (int l = 31; l < 200000; ++l) {
    for (double y : {0.25 + l, 0.25 - l}) tail += 0.5 / (std::numbers::pi * std::numbers::pi * y * y);
  }
  CHECK(s.points[0].q == Catch::Approx(1.0 - tail).margin(1e-5));

  const auto wide = claim3_spectrum(GaborSystemSpec(unit, range(-30, 30), {q(0)}), {0.25}, range(31, 60));
  CHECK(wide.points[0].q >= s.points[0].q);
  CHECK_THROWS_AS(claim3_spectrum(GaborSystemSpec(WindowFunction::indicator(q(0), q(1), 0.0), {q(0)}, {q(0)}), {0.1}),
                  InputError);
}

TEST_CASE("claim3_spectrum is monotone in Lambda", "[gabor][property]") {
  Gen gen(54);
  for (int i = 0; i < kCases; ++i) {
    const auto g = random_window(gen);
    std::vector<Rational> lambda;
    for (int k = 0; k < 4; ++k) lambda.push_back(gen.rational(-5, 5, 3));
    std::sort(lambda.begin(), lambda.end());
    lambda.erase(std::unique(lambda.begin(), lambda.end()), lambda.end());
    std::vector<Rational> extra{gen.rational(-8, 8, 3), gen.rational(-8, 8, 3)};
    const std::vector<double> grid{gen.real(-1, 1), gen.real(-1, 1)};
    const GaborSystemSpec spec(g, lambda, {q(0)});
    const auto a = claim3_spectrum(spec, grid);
    const auto b = claim3_spectrum(spec, grid, extra);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      REQUIRE(b.points[k].q >= a.points[k].q - 1e-12);
      REQUIRE(a.points[k].q >= 0.0);
    }
  }
}

TEST_CASE("constant_modulus_check", "[gabor]") {
  const auto unit = constant_modulus_check(WindowFunction::indicator(q(0), q(1)));
  CHECK(unit.constant);
  CHECK(unit.value == Catch::Approx(1.0));
  const WindowFunction bumpy({{{q(0), q(1, 2)}, 0.7071067811865476}, {{q(1, 2), q(1)}, 1.224744871391589}});
  const auto b = constant_modulus_check(bumpy);
  CHECK_FALSE(b.constant);
  CHECK(b.expected == Catch::Approx(1.0));
  // a scaled indicator is still constant modulus
  CHECK(constant_modulus_check(WindowFunction::indicator(q(0), q(1, 4), 2.0)).constant);
}

TEST_CASE("gabor_onb_verdict", "[gabor]") {
  std::vector<double> grid;
  for (int i = 0; i < 32; ++i) grid.push_back((i + 0.5) / 32.0);
  const auto unit = WindowFunction::indicator(q(0), q(1));
  const auto good = gabor_onb_verdict(GaborSystemSpec(unit, range(-20, 20), range(-3, 3)), {q(-3), q(4)}, grid);
  CHECK(good.all_pass());
  CHECK(good.checks.size() == 5);
  CHECK(good.forward_consistent);
  CHECK(good.converse_consistent);

  const WindowFunction bumpy({{{q(0), q(1, 2)}, 0.7071067811865476}, {{q(1, 2), q(1)}, 1.224744871391589}});
  const auto nc = gabor_onb_verdict(GaborSystemSpec(bumpy, range(-20, 20), range(-3, 3)), {q(-3), q(4)}, grid);
  CHECK_FALSE(nc.all_pass());
  CHECK_FALSE(nc.checks[4].pass);
  CHECK_FALSE(nc.checks[0].pass);

  const auto holes = gabor_onb_verdict(GaborSystemSpec(unit, range(-20, 20), {q(0), q(2)}), {q(0), q(3)}, grid);
  CHECK_FALSE(holes.checks[1].pass);
  CHECK(holes.checks[0].pass);  // still orthonormal, just incomplete
}
