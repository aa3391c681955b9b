#include <catch_amalgamated.hpp>

#include <bit>
#include <map>
#include <set>

#include "support.hpp"

using namespace ssframe;
using testing::Gen;
using testing::kCases;
using testing::q;

namespace {

using Ints = std::vector<std::int64_t>;

// Independent residue count for D + E = Z_n.
bool direct_sum_is_Zn(const Ints& d, const std::vector<std::uint64_t>& e, std::uint64_t n) {
  std::vector<int> hits(n, 0);
  for (auto x : d) {
    for (auto y : e) ++hits[(static_cast<std::uint64_t>(x) + y) % n];
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

// Exhaustive oracle: some period n <= bound and some subset E of Z_n with
// D + E = Z_n.
bool tiles_by_subsets(const Ints& d, std::uint64_t bound) {
  for (std::uint64_t n = d.size(); n <= bound; n += d.size()) {
    const std::uint64_t want = n / d.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (static_cast<std::uint64_t>(std::popcount(mask)) != want) continue;
      std::vector<std::uint64_t> e;
      for (std::uint64_t b = 0; b < n; ++b) {
        if ((mask >> b) & 1U) e.push_back(b);
      }
      if (direct_sum_is_Zn(d, e, n)) return true;
    }
  }
  return false;
}

WindowedSet integers(std::int64_t lo, std::int64_t hi) { return WindowedSet::arithmetic(lo, hi, 1); }

// Depth-m union of word images of the hull, merged independently.
std::vector<std::pair<Rational, Rational>> brute_cover(const IfsSpec& ifs, int depth) {
  std::vector<std::pair<Rational, Rational>> cells{{ifs.hull().lo, ifs.hull().hi}};
  for (int k = 0; k < depth; ++k) {
    std::vector<std::pair<Rational, Rational>> next;
    for (const auto& [a, b] : cells) {
      for (const auto& dg : ifs.digits()) next.emplace_back(ifs.ratio() * a + dg, ifs.ratio() * b + dg);
    }
    cells = std::move(next);
  }
  std::sort(cells.begin(), cells.end());
  std::vector<std::pair<Rational, Rational>> merged;
  for (const auto& c : cells) {
    if (!merged.empty() && c.first <= merged.back().second) {
      merged.back().second = ssframe::max(merged.back().second, c.second);
    } else {
      merged.push_back(c);
    }
  }
  return merged;
}

Ints brute_g(const std::vector<std::pair<Rational, Rational>>& cover, const Rational& t) {
  Ints g;
  for (std::int64_t j = -2; j <= 40; ++j) {
    const Rational x = t + Rational(static_cast<long long>(j));
    for (const auto& [a, b] : cover) {
      if (a <= x && x <= b) {
        g.push_back(j);
        break;
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("DigitSet normalizes", "[tiling]") {
  CHECK(DigitSet({7, 3, 5, 3}).elements() == Ints{0, 1, 2});
  CHECK(DigitSet({0, 4, 10, 14}).elements() == Ints{0, 2, 5, 7});
  CHECK(DigitSet({-2, 1}).elements() == Ints{0, 1});
  CHECK_THROWS_AS(DigitSet(Ints{}), InputError);
}

TEST_CASE("integerize_digits examples", "[tiling]") {
  const auto a = integerize_digits(std::vector<Rational>{q(0), q(4, 21), q(10, 21), q(2, 3)});
  CHECK(a.digits.elements() == Ints{0, 2, 5, 7});
  CHECK(a.scale == q(21, 2));
  CHECK(a.shift == q(0));
  const auto b = integerize_digits(std::vector<Rational>{q(0), q(1)});
  CHECK(b.digits.elements() == Ints{0, 1});
  CHECK(b.scale == q(1));
  CHECK(integerize_digits(std::vector<Rational>{q(0), q(1, 2), q(3, 2)}).digits.elements() == Ints{0, 1, 3});
  CHECK_THROWS_AS(integerize_digits(std::vector<Rational>{q(1, 2)}), InputError);
}

TEST_CASE("integerize_digits is scale invariant", "[tiling][property]") {
  Gen gen(41);
  for (int i = 0; i < kCases; ++i) {
    std::vector<Rational> b;
    const int n = static_cast<int>(gen.integer(2, 5));
    while (static_cast<int>(b.size()) < n) {
      auto x = gen.rational(-3, 3, 10);
      if (std::find(b.begin(), b.end(), x) == b.end()) b.push_back(x);
    }
    const Rational c = q(gen.integer(1, 50), gen.integer(1, 50));
    std::vector<Rational> cb;
    for (const auto& x : b) cb.push_back(c * x);
    const auto base = integerize_digits(b);
    REQUIRE(integerize_digits(cb).digits == base.digits);
    // and D really is scale * (B - shift)
    std::set<std::int64_t> expect;
    for (const auto& x : b) {
      const Rational d = base.scale * (x - base.shift);
      REQUIRE(d.is_integer());
      expect.insert(d.numerator().convert_to<std::int64_t>());
    }
    REQUIRE(Ints(expect.begin(), expect.end()) == base.digits.elements());
  }
}

TEST_CASE("tiles_Z examples", "[tiling]") {
  const auto a = tiles_Z(DigitSet({0, 2, 5, 7}));
  REQUIRE(a.witness);
  CHECK(a.witness->period == 4);
  CHECK(a.witness->complement == std::vector<std::uint64_t>{0});

  const auto z = tiles_Z(DigitSet({0}));
  REQUIRE(z.witness);
  CHECK(z.witness->period == 1);
  CHECK(z.witness->complement == std::vector<std::uint64_t>{0});

  const auto n = tiles_Z(DigitSet({0, 1, 3}));
  CHECK_FALSE(n.witness);
  CHECK(n.search_bound >= 8);
  CHECK_FALSE(n.budget_exhausted);

  // {0,1,4,5} = {0,1} + {0,4} does not inject into Z_4
  const auto two = tiles_Z(DigitSet({0, 1, 4, 5}));
  REQUIRE(two.witness);
  CHECK(two.witness->period == 8);
  CHECK(direct_sum_is_Zn({0, 1, 4, 5}, two.witness->complement, 8));

  CHECK(tiles_Z(DigitSet({0, 1, 3}), 3).search_bound == 3);
}

TEST_CASE("tiles_Z matches exhaustive subset search", "[tiling][property]") {
  Gen gen(42);
  int tiling = 0;
  for (int i = 0; i < kCases; ++i) {
    Ints raw{0};
    const auto diam = gen.integer(1, 4);
    raw.push_back(diam);
    const int extra = static_cast<int>(gen.integer(0, 2));
    for (int k = 0; k < extra; ++k) raw.push_back(gen.integer(0, diam));
    const DigitSet d(raw);
    const auto r = tiles_Z(d);
    const std::uint64_t bound = std::max<std::uint64_t>(std::uint64_t{1} << d.diameter(), d.size());
    REQUIRE(r.search_bound == bound);
    REQUIRE(r.witness.has_value() == tiles_by_subsets(d.elements(), bound));
    tiling += r.witness ? 1 : 0;
  }
  CHECK(tiling > 20);
}

TEST_CASE("tiling witnesses verify independently", "[tiling][property]") {
  Gen gen(43);
  for (int i = 0; i < kCases; ++i) {
    Ints raw{0};
    const int size = static_cast<int>(gen.integer(1, 5));
    for (int k = 0; k < size; ++k) raw.push_back(gen.integer(1, 12));
    const DigitSet d(raw);
    const auto r = tiles_Z(d, 256);
    if (!r.witness) continue;
    const auto& w = *r.witness;
    REQUIRE(w.period % d.size() == 0);
    std::set<std::uint64_t> residues;
    for (auto x : d.elements()) residues.insert(static_cast<std::uint64_t>(x) % w.period);
    REQUIRE(residues.size() == d.size());
    REQUIRE(direct_sum_is_Zn(d.elements(), w.complement, w.period));
    REQUIRE(verify_tiling_witness(d, w));
  }
  CHECK_FALSE(verify_tiling_witness(DigitSet({0, 1}), TilingWitness{4, {0, 1}}));
  CHECK_FALSE(verify_tiling_witness(DigitSet({0, 1}), TilingWitness{4, {0, 3}}));
}

TEST_CASE("tiles_Z respects its node budget", "[tiling]") {
  Config cfg;
  cfg.tiling_node_budget = 1;
  const auto r = tiles_Z(DigitSet({0, 1, 4, 5}), std::nullopt, cfg);
  CHECK_FALSE(r.witness);
  CHECK(r.budget_exhausted);
}

TEST_CASE("verify_self_replicating examples", "[tiling]") {
  CHECK(verify_self_replicating(integers(-64, 64), 2, {0, 1}).status == WindowStatus::Consistent);
  CHECK(verify_self_replicating(WindowedSet::arithmetic(-64, 64, 2), 2, {0, 2}).status == WindowStatus::Consistent);
  // 2Z + {0,3}: even x = 2j + 0, odd x = 2j + 3, uniquely
  const auto z03 = verify_self_replicating(integers(-64, 64), 2, {0, 3});
  CHECK(z03.status == WindowStatus::Consistent);
  CHECK(z03.checked > 100);
  const auto bad = verify_self_replicating(integers(-64, 64), 2, {0, 2});
  CHECK(bad.status == WindowStatus::Violation);
  REQUIRE(bad.element);
  CHECK(bad.reason.find("decompositions") != std::string::npos);
  CHECK(verify_self_replicating(WindowedSet::arithmetic(-64, 64, 2), 2, {0, 1}).status == WindowStatus::Violation);
}

TEST_CASE("Z is self-replicating for base-N digits", "[tiling][property]") {
  for (std::int64_t n = 2; n <= 5; ++n) {
    Ints d;
    for (std::int64_t k = 0; k < n; ++k) d.push_back(k);
    REQUIRE(verify_self_replicating(integers(-200, 200), n, d).status == WindowStatus::Consistent);
  }
  // Z = N Z + D exactly when D is a complete residue system mod N
  Gen gen(44);
  for (int i = 0; i < kCases; ++i) {
    const auto n = gen.integer(2, 6);
    Ints d;
    std::set<std::int64_t> residues;
    for (std::int64_t k = 0; k < n; ++k) {
      d.push_back(gen.integer(-10, 10));
      residues.insert(((d.back() % n) + n) % n);
    }
    const bool complete = static_cast<std::int64_t>(residues.size()) == n;
    REQUIRE((verify_self_replicating(integers(-300, 300), n, d).status == WindowStatus::Consistent) == complete);
  }
}

TEST_CASE("verify_tiling_complement examples", "[tiling]") {
  CHECK(verify_tiling_complement({0, 1}, WindowedSet::arithmetic(-40, 40, 2), -30, 30).status ==
        WindowStatus::Consistent);
  CHECK(verify_tiling_complement({0}, integers(-40, 40), -30, 30).status == WindowStatus::Consistent);
  const auto v = verify_tiling_complement({0, 1}, WindowedSet::arithmetic(-40, 40, 3), 0, 10);
  CHECK(v.status == WindowStatus::Violation);
  REQUIRE(v.element);
  CHECK(*v.element == 2);
  CHECK(verify_tiling_complement({0, 1}, integers(-40, 40), 0, 10).status == WindowStatus::Violation);
}

TEST_CASE("classify_G_sets examples", "[tiling]") {
  const auto unit = classify_G_sets(ifs_from_digit_set(2, {0, 1}), 512, 4);
  REQUIRE(unit.classes.size() == 1);
  CHECK(unit.classes[0].g == Ints{0});
  CHECK(unit.grid_mismatches == 0);

  const auto two = classify_G_sets(ifs_from_digit_set(2, {0, 2}), 512, 4);
  REQUIRE(two.classes.size() == 1);
  CHECK(two.classes[0].g == Ints{0, 1});

  // X = [0,1] u [2,3]
  const auto ifs = ifs_from_digit_set(4, {0, 1, 8, 9});
  CHECK(cylinder_cover(ifs, 8).components() == std::vector<Interval>{{q(0), q(1)}, {q(2), q(3)}});
  const auto g = classify_G_sets(ifs, 4096, 8);
  REQUIRE(g.classes.size() == 1);
  CHECK(g.classes[0].g == Ints{0, 2});
  CHECK(g.classes[0].cells.size() == 1);
  CHECK(g.classes[0].grid_points == 4096);
  CHECK(g.grid_mismatches == 0);
  CHECK(g.empty_cells.empty());

  CHECK_THROWS_AS(classify_G_sets(IfsSpec::uniform(q(1, 3), {q(0), q(1, 3), q(1), q(4, 3)}), 16, 2), InputError);
}

TEST_CASE("classify_G_sets at refine 10", "[tiling]") {
  const auto g = classify_G_sets(ifs_from_digit_set(4, {0, 1, 8, 9}), 4096, 10);
  REQUIRE(g.classes.size() == 1);
  CHECK(g.classes[0].g == Ints{0, 2});
  CHECK(g.grid_mismatches == 0);
}

TEST_CASE("classify_G_sets agrees with a depth-8 brute-force cover", "[tiling]") {
  const auto ifs = ifs_from_digit_set(4, {0, 1, 8, 9});
  const auto cover = brute_cover(ifs, 8);
  const auto g = classify_G_sets(ifs, 64, 8);
  for (int i = 0; i < 1000; ++i) {
    const Rational t = q(2 * i + 1, 2000);
    const auto expect = brute_g(cover, t);
    for (const auto& c : g.classes) {
      for (const auto& cell : c.cells) {
        if (cell.contains(t)) REQUIRE(c.g == expect);
      }
    }
  }
}

TEST_CASE("classify_G_sets partitions [0,1)", "[tiling][property]") {
  Gen gen(45);
  for (int i = 0; i < kCases; ++i) {
    const auto n = gen.integer(2, 4);
    std::set<std::int64_t> ds{0};
    while (static_cast<std::int64_t>(ds.size()) < n) ds.insert(gen.integer(1, 3 * n));
    const auto ifs = ifs_from_digit_set(n, Ints(ds.begin(), ds.end()));
    const int refine = static_cast<int>(gen.integer(1, 3));
    const auto r = classify_G_sets(ifs, 64, refine);
    REQUIRE(r.grid_mismatches == 0);

    std::vector<Interval> all = r.uncertain;
    all.insert(all.end(), r.empty_cells.begin(), r.empty_cells.end());
    for (const auto& c : r.classes) all.insert(all.end(), c.cells.begin(), c.cells.end());
    std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    REQUIRE(all.front().lo == q(0));
    REQUIRE(all.back().hi == q(1));
    for (std::size_t k = 1; k < all.size(); ++k) REQUIRE(all[k - 1].hi == all[k].lo);

    std::set<Rational> cuts;
    for (const auto& c : cylinder_cover(ifs, refine).components()) {
      for (const Rational* e : {&c.lo, &c.hi}) {
        Rational frac = *e;
        while (frac >= q(1)) frac -= q(1);
        while (frac < q(0)) frac += q(1);
        cuts.insert(frac);
      }
    }
    REQUIRE(r.uncertain_length() <= Rational(2 * static_cast<long long>(cuts.size() + 1)) * r.tolerance);

    // G on each cell matches the cover at the cell midpoint
    const auto cover = brute_cover(ifs, refine);
    for (const auto& c : r.classes) {
      for (const auto& cell : c.cells) REQUIRE(brute_g(cover, (cell.lo + cell.hi) / q(2)) == c.g);
    }
  }
}
