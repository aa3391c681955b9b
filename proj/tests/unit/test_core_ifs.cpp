#include <catch_amalgamated.hpp>

#include <functional>
#include <map>

#include "support.hpp"

using namespace ssframe;
using testing::Gen;
using testing::kCases;
using testing::q;

namespace {

IfsSpec eq44() { return IfsSpec(q(1, 3), {q(0), q(4, 21), q(10, 21), q(2, 3)}, {q(1, 3), q(1, 6), q(1, 6), q(1, 3)}); }
IfsSpec cantor() { return IfsSpec::uniform(q(1, 3), {q(0), q(2, 3)}); }

// Oracle: apply the maps one at a time, innermost (last letter) first, and
// read off offset and slope from the images of 0 and 1.
std::pair<Rational, Rational> sequential(const IfsSpec& ifs, const Word& w) {
  Rational at0(0);
  Rational at1(1);
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    at0 = ifs.ratio() * at0 + ifs.digit(*it);
    at1 = ifs.ratio() * at1 + ifs.digit(*it);
  }
  return {at0, at1 - at0};
}

// Every word of the given length, lexicographic.
std::vector<Word> all_words(int letters, int length) {
  std::vector<Word> out{Word{}};
  for (int i = 0; i < length; ++i) {
    std::vector<Word> next;
    for (const auto& w : out) {
      for (int l = 1; l <= letters; ++l) {
        Word x = w;
        x.push_back(l);
        next.push_back(x);
      }
    }
    out = next;
  }
  return out;
}

// Exact hull images of every length-k word; for an interval attractor this
// is tau(X) itself.
bool oracle_is_interval(const IfsSpec& ifs) {
  const Rational lo = ifs.digits().front() / (Rational(1) - ifs.ratio());
  const Rational hi = ifs.digits().back() / (Rational(1) - ifs.ratio());
  Rational reach = lo;
  for (const auto& b : ifs.digits()) {
    const Rational a = ifs.ratio() * lo + b;
    if (a > reach) return false;
    reach = ssframe::max(reach, ifs.ratio() * hi + b);
  }
  return reach == hi;
}

}  // namespace

TEST_CASE("IfsSpec validates its input", "[core_ifs]") {
  CHECK_THROWS_AS(IfsSpec(q(1), {q(0), q(1)}, {q(1, 2), q(1, 2)}), InputError);
  CHECK_THROWS_AS(IfsSpec(q(1, 2), {q(0)}, {q(1)}), InputError);
  CHECK_THROWS_AS(IfsSpec(q(1, 2), {q(0), q(1)}, {q(1, 3), q(1, 3)}), InputError);
  CHECK_THROWS_AS(IfsSpec(q(1, 2), {q(1), q(0)}, {q(1, 2), q(1, 2)}), InputError);
  CHECK_THROWS_AS(IfsSpec(q(1, 2), {q(0), q(0)}, {q(1, 2), q(1, 2)}), InputError);
  CHECK_THROWS_AS(IfsSpec(q(1, 2), {q(0), q(1)}, {q(0), q(1)}), InputError);
  const auto sorted = IfsSpec::from_pairs(q(1, 3), {{q(2, 3), q(2, 3)}, {q(0), q(1, 3)}});
  CHECK(sorted.digits() == std::vector<Rational>{q(0), q(2, 3)});
  CHECK(sorted.weights() == std::vector<Rational>{q(1, 3), q(2, 3)});
}

TEST_CASE("normalize maps the hull onto [0,1]", "[core_ifs]") {
  const auto n = normalize(IfsSpec::uniform(q(1, 2), {q(1), q(3)}));
  CHECK(n.changed);
  CHECK(n.spec.is_canonical());
  CHECK(n.spec.hull() == Interval{q(0), q(1)});
  // y = scale (x - shift) sends hull [2, 6] to [0, 1]
  CHECK(n.scale * (q(2) - n.shift) == q(0));
  CHECK(n.scale * (q(6) - n.shift) == q(1));
  CHECK_FALSE(normalize(cantor()).changed);
}

TEST_CASE("compose_word examples", "[core_ifs]") {
  const auto t23 = compose_word(eq44(), {2, 3});
  CHECK(t23.offset == q(22, 63));
  CHECK(t23.scale == q(1, 9));
  CHECK(t23.power == 2);

  const auto t1 = compose_word(eq44(), {1});
  CHECK(t1.power == 1);
  CHECK(t1.offset == q(0));

  const auto half = IfsSpec::uniform(q(1, 2), {q(0), q(1, 4), q(1, 2)});
  CHECK(compose_word(half, {1, 3}).offset == q(1, 4));
  CHECK(compose_word(half, {2, 1}).offset == q(1, 4));
  CHECK(compose_word(half, {1, 3}) == compose_word(half, {2, 1}));

  CHECK_THROWS_AS(compose_word(half, {4}), InputError);
  CHECK_THROWS_AS(compose_word(half, {0}), InputError);
}

TEST_CASE("compose_word agrees with sequential application", "[core_ifs][property]") {
  Gen gen(11);
  for (int i = 0; i < kCases; ++i) {
    const auto ifs = gen.ifs();
    const auto w = gen.word(ifs.size(), static_cast<int>(gen.integer(0, 8)));
    const auto m = compose_word(ifs, w);
    const auto [offset, slope] = sequential(ifs, w);
    REQUIRE(m.offset == offset);
    REQUIRE(m.scale == slope);
    REQUIRE(m.power == static_cast<int>(w.size()));
  }
}

TEST_CASE("composition law", "[core_ifs][property]") {
  Gen gen(12);
  for (int i = 0; i < kCases; ++i) {
    const auto ifs = gen.ifs();
    const auto u = gen.word(ifs.size(), static_cast<int>(gen.integer(0, 6)));
    const auto v = gen.word(ifs.size(), static_cast<int>(gen.integer(0, 6)));
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    const auto lhs = compose_word(ifs, uv).offset;
    const auto rhs = compose_word(ifs, u).offset +
                     pow(ifs.ratio(), static_cast<unsigned>(u.size())) * compose_word(ifs, v).offset;
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("fixed_point examples", "[core_ifs]") {
  CHECK(fixed_point(compose_word(eq44(), {2, 3})) == q(11, 28));
  CHECK(fixed_point(compose_word(eq44(), {1, 1})) == q(0));
  const auto t22 = compose_word(cantor(), {2, 2});
  CHECK(t22.offset == q(8, 9));
  CHECK(fixed_point(t22, cantor()) == q(1));
}

TEST_CASE("fixed_point solves tau(x) = x exactly", "[core_ifs][property]") {
  Gen gen(13);
  for (int i = 0; i < kCases; ++i) {
    const auto ifs = gen.ifs();
    const auto m = compose_word(ifs, gen.word(ifs.size(), static_cast<int>(gen.integer(1, 7))));
    const Rational x = fixed_point(m, ifs);
    REQUIRE(m.scale * x + m.offset - x == Rational(0));
  }
}

TEST_CASE("equivalence_classes examples", "[core_ifs]") {
  const auto t = equivalence_classes(eq44(), 2);
  CHECK(t.classes.size() == 16);
  for (const auto& c : t.classes) CHECK(c.words.size() == 1);
  const auto c23 = t.find({2, 3});
  REQUIRE(c23);
  CHECK(t.classes[*c23].weight == q(1, 36));

  const auto one = equivalence_classes(eq44(), 1);
  REQUIRE(one.classes.size() == 4);
  for (int l = 1; l <= 4; ++l) CHECK(one.classes[static_cast<std::size_t>(l - 1)].weight == eq44().weight(l));

  const auto half = IfsSpec::uniform(q(1, 2), {q(0), q(1, 4), q(1, 2)});
  const auto h = equivalence_classes(half, 2);
  // offsets b_a + b_b / 2: 1/4 and 1/2 are each hit twice
  CHECK(h.classes.size() == 7);
  int found = 0;
  for (const auto& c : h.classes) {
    if (c.map.offset == q(1, 4)) {
      ++found;
      CHECK(c.weight == q(2, 9));
      CHECK(c.words == std::vector<Word>{{1, 3}, {2, 1}});
    }
    if (c.map.offset == q(1, 2)) {
      ++found;
      CHECK(c.weight == q(2, 9));
      CHECK(c.words == std::vector<Word>{{2, 3}, {3, 1}});
    }
  }
  CHECK(found == 2);
}

TEST_CASE("equivalence_classes respects the enumeration cap", "[core_ifs]") {
  Config cfg;
  cfg.enumeration_cap = 100;
  CHECK_THROWS_AS(equivalence_classes(eq44(), 4, cfg), ResourceError);
  CHECK_NOTHROW(equivalence_classes(eq44(), 3, cfg));
}

TEST_CASE("class weights sum to one and match a brute-force grouping", "[core_ifs][property]") {
  Gen gen(14);
  for (int i = 0; i < kCases; ++i) {
    // small digit grids make coincidences likely
    const int n = static_cast<int>(gen.integer(2, 4));
    const long long den = gen.integer(2, 4);
    std::vector<Rational> digits;
    for (int d = 0; d < n; ++d) digits.push_back(q(d * gen.integer(1, 2), den * 2));
    std::sort(digits.begin(), digits.end());
    digits.erase(std::unique(digits.begin(), digits.end()), digits.end());
    if (digits.size() < 2) continue;
    const IfsSpec ifs(q(1, den), digits, gen.weights(static_cast<int>(digits.size())));
    const int k = static_cast<int>(gen.integer(1, 4));
    const auto t = equivalence_classes(ifs, k);
    REQUIRE(t.total_weight() == Rational(1));

    std::map<Rational, Rational> oracle;
    for (const auto& w : all_words(ifs.size(), k)) {
      Rational p(1);
      for (int l : w) p *= ifs.weight(l);
      oracle[sequential(ifs, w).first] += p;
    }
    REQUIRE(t.classes.size() == oracle.size());
    for (const auto& c : t.classes) REQUIRE(oracle.at(c.map.offset) == c.weight);
  }
}

TEST_CASE("middle-third classes are all singletons", "[core_ifs][property]") {
  for (int k = 1; k <= 10; ++k) {
    const auto t = equivalence_classes(cantor(), k);
    REQUIRE(t.classes.size() == (std::size_t{1} << k));
    for (const auto& c : t.classes) REQUIRE(c.words.size() == 1);
  }
}

TEST_CASE("cylinder_cover examples", "[core_ifs]") {
  const auto c1 = cylinder_cover(cantor(), 1);
  REQUIRE(c1.cells.size() == 2);
  CHECK(c1.cells[0].interval == Interval{q(0), q(1, 3)});
  CHECK(c1.cells[1].interval == Interval{q(2, 3), q(1)});

  CHECK(compose_word(eq44(), {2, 2}).apply(eq44().hull()) == Interval{q(16, 63), q(23, 63)});
  const auto c2 = cylinder_cover(eq44(), 2);
  bool seen = false;
  for (const auto& cell : c2.cells) {
    if (cell.word == Word{2, 2}) {
      seen = true;
      CHECK(cell.interval == Interval{q(16, 63), q(23, 63)});
    }
  }
  CHECK(seen);

  const auto dy = cylinder_cover(IfsSpec::uniform(q(1, 2), {q(0), q(1, 2)}), 3);
  REQUIRE(dy.cells.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(dy.cells[i].interval == Interval{q(static_cast<long long>(i), 8), q(static_cast<long long>(i) + 1, 8)});
    CHECK(dy.cells[i].measure == q(1, 8));
  }
  CHECK(dy.components() == std::vector<Interval>{{q(0), q(1)}});
}

TEST_CASE("cylinder covers are nested", "[core_ifs][property]") {
  Gen gen(15);
  for (int i = 0; i < kCases; ++i) {
    const auto ifs = gen.ifs(3);
    const int n = static_cast<int>(gen.integer(0, 4));
    const auto parent = cylinder_cover(ifs, n);
    const auto child = cylinder_cover(ifs, n + 1);
    std::map<Word, Interval> by_word;
    for (const auto& c : parent.cells) by_word.emplace(c.word, c.interval);
    REQUIRE(child.total_measure() == Rational(1));
    for (const auto& c : child.cells) {
      const Word prefix(c.word.begin(), c.word.end() - 1);
      const Interval& p = by_word.at(prefix);
      REQUIRE(p.lo <= c.interval.lo);
      REQUIRE(c.interval.hi <= p.hi);
    }
  }
}

TEST_CASE("cover_union matches the merged word cover", "[core_ifs][property]") {
  Gen gen(17);
  for (int i = 0; i < kCases; ++i) {
    const auto ifs = gen.ifs(4);
    const int depth = static_cast<int>(gen.integer(0, 4));
    REQUIRE(cover_union(ifs, depth) == cylinder_cover(ifs, depth).components());
  }
  // {0,1,8,9}/4 keeps two components at every depth, far past the word cap
  const auto two = IfsSpec::uniform(q(1, 4), {q(0), q(1, 4), q(2), q(9, 4)});
  CHECK(cover_union(two, 10) == std::vector<Interval>{{q(0), q(1)}, {q(2), q(3)}});
  CHECK_THROWS_AS(cylinder_cover(two, 10), ResourceError);
  Config cfg;
  cfg.enumeration_cap = 10;
  CHECK_THROWS_AS(cover_union(IfsSpec::uniform(q(1, 3), {q(0), q(2, 3)}), 4, cfg), ResourceError);
}

TEST_CASE("no_overlap_check examples", "[core_ifs]") {
  CHECK(no_overlap_check(cantor(), 4).status == OverlapStatus::NoOverlap);
  CHECK(no_overlap_check(IfsSpec::uniform(q(1, 2), {q(0), q(1, 2)}), 4).status == OverlapStatus::NoOverlap);
  const auto r = no_overlap_check(eq44(), 1);
  CHECK(r.status == OverlapStatus::OverlapWitness);
  CHECK(r.has_pair(2, 3));
  bool exact = false;
  for (const auto& c : r.candidates) {
    if (c.letter_a == 2 && c.letter_b == 3) exact = c.intersection == Interval{q(10, 21), q(11, 21)};
  }
  CHECK(exact);
}

TEST_CASE("attractor_is_interval", "[core_ifs]") {
  CHECK(attractor_is_interval(eq44()));
  CHECK_FALSE(attractor_is_interval(cantor()));
  CHECK(attractor_is_interval(IfsSpec::uniform(q(2, 3), {q(0), q(1, 3)})));
  Gen gen(16);
  for (int i = 0; i < kCases; ++i) {
    const auto ifs = gen.ifs();
    REQUIRE(attractor_is_interval(ifs) == oracle_is_interval(ifs));
  }
}

TEST_CASE("fixed_point_condition examples", "[core_ifs]") {
  const auto r = fixed_point_condition(eq44(), 2, 1);
  CHECK(r.attractor_is_interval);
  CHECK(r.overall == FixedPointStatus::Holds);
  const auto i23 = r.table.find({2, 3});
  REQUIRE(i23);
  const auto& c = r.per_class[*i23];
  CHECK(c.fixed_point == q(11, 28));
  CHECK(c.status == FixedPointStatus::Holds);
  REQUIRE(c.nearest_left);
  REQUIRE(c.nearest_right);
  CHECK(c.nearest_left->interval == Interval{q(16, 63), q(23, 63)});
  CHECK(r.table.classes[c.nearest_left->class_index].words.front() == Word{2, 2});
  CHECK(c.nearest_right->interval == Interval{q(26, 63), q(33, 63)});
  CHECK(r.table.classes[c.nearest_right->class_index].words.front() == Word{2, 4});

  const auto k1 = fixed_point_condition(cantor(), 1, 0);
  CHECK(k1.per_class[0].status == FixedPointStatus::Holds);
  CHECK(k1.per_class[0].fixed_point == q(0));

  const auto wide = fixed_point_condition(IfsSpec::uniform(q(2, 3), {q(0), q(1, 3)}), 1, 1);
  CHECK(wide.per_class[0].status == FixedPointStatus::Holds);
  CHECK(wide.per_class[0].fixed_point == q(0));
  CHECK(wide.overall == FixedPointStatus::Holds);
}

TEST_CASE("fixed_point_condition is sound on interval attractors", "[core_ifs][property]") {
  Gen gen(17);
  int tested = 0;
  while (tested < kCases) {
    // ratio >= 1/N with digits spaced closely enough keeps X an interval
    const int n = static_cast<int>(gen.integer(2, 4));
    const long long den = gen.integer(2, 6);
    const Rational ratio = q(gen.integer(1, den - 1), den);
    std::vector<Rational> digits{q(0)};
    for (int d = 1; d < n; ++d) digits.push_back(digits.back() + gen.rational(0, 1, 6) * ratio + q(1, 97));
    const IfsSpec ifs(ratio, digits, gen.weights(n));
    if (!oracle_is_interval(ifs)) continue;
    ++tested;
    const int k = static_cast<int>(gen.integer(1, 3));
    const auto r = fixed_point_condition(ifs, k, 1);
    REQUIRE(r.attractor_is_interval);
    const Interval h = ifs.hull();
    for (std::size_t c = 0; c < r.table.classes.size(); ++c) {
      const Rational x = fixed_point(r.table.classes[c].map, ifs);
      bool inside_other = false;
      for (std::size_t o = 0; o < r.table.classes.size(); ++o) {
        if (o == c) continue;
        const auto [off, slope] = sequential(ifs, r.table.classes[o].words.front());
        inside_other = inside_other || Interval{slope * h.lo + off, slope * h.hi + off}.contains(x);
      }
      REQUIRE(r.per_class[c].status != FixedPointStatus::Unknown);
      REQUIRE((r.per_class[c].status == FixedPointStatus::Holds) == !inside_other);
    }
  }
}
