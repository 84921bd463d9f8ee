#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "knotflow/errors.hpp"
#include "knotflow/knotinv.hpp"
#include "knotflow/lorenz_template.hpp"
#include "oracles.hpp"

using namespace knotflow;
using namespace knotflow::lorenz;

namespace {

std::string random_word(oracle::Rng& rng, int max_len) {
  for (;;) {
    const int n = rng.integer(1, max_len);
    std::string s;
    for (int i = 0; i < n; ++i) s += rng.coin() ? 'x' : 'y';
    if (CyclicWord(s).aperiodic()) return s;
  }
}

// Shift permutation from a plain sort of the rotations.
std::vector<int> shift_permutation(const std::string& w) {
  const int n = static_cast<int>(w.size());
  std::vector<std::string> rot(n);
  for (int i = 0; i < n; ++i) rot[i] = w.substr(i) + w.substr(0, i);
  std::vector<std::string> sorted = rot;
  std::sort(sorted.begin(), sorted.end());
  auto rank = [&](const std::string& r) {
    return static_cast<int>(std::find(sorted.begin(), sorted.end(), r) - sorted.begin());
  };
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[rank(rot[i])] = rank(rot[(i + 1) % n]);
  return perm;
}

int inversions(const std::vector<int>& p) {
  int c = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) c += p[i] > p[j];
  return c;
}

}  // namespace

TEST_CASE("cyclic words") {
  CHECK(CyclicWord("yxx").symbols() == "xxy");
  CHECK(CyclicWord("yxyx").symbols() == "xyxy");
  CHECK_FALSE(CyclicWord("yxyx").aperiodic());
  CHECK(CyclicWord("xyy").aperiodic());
  CHECK(CyclicWord("xxyxy").count('y') == 2);
  CHECK(CyclicWord("xyy").rotation(1) == "yyx");
  CHECK(CyclicWord("yxy") == CyclicWord("xyy"));
  CHECK(CyclicWord("y") > CyclicWord("x"));
  CHECK(CyclicWord("xy") > CyclicWord("y"));
  CHECK_THROWS_AS(CyclicWord(""), std::invalid_argument);
  CHECK_THROWS_AS(CyclicWord("xz"), std::invalid_argument);
}

TEST_CASE("necklace enumeration matches brute force") {
  const std::vector<CyclicWord> all = enumerate_words(12);
  std::map<std::size_t, long> counts;
  for (const CyclicWord& w : all) ++counts[w.length()];
  for (int n = 1; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(counts[static_cast<std::size_t>(n)] == oracle::necklaces_bruteforce(n));
  }
  CHECK(counts[12] == 335);
  CHECK(std::is_sorted(all.begin(), all.end()));
  for (const CyclicWord& w : all) CHECK(w.aperiodic());
  CHECK_THROWS_AS(enumerate_words(0), std::invalid_argument);
}

TEST_CASE("universality") {
  CHECK(universal_predicate(0, -1, false) == Universality::Universal);
  CHECK(universal_predicate(0, 0, false) == Universality::NotUniversal);
  CHECK(universal_predicate(0, 3, false) == Universality::NotUniversal);
  CHECK(universal_predicate(-2, 0, false) == Universality::Universal);
  CHECK(universal_predicate(1, 2, false) == Universality::NotUniversal);
  CHECK(universal_predicate(-1, -2, false) == Universality::NotUniversal);
  CHECK(universal_predicate(0, 5, true) == Universality::Universal);
  CHECK(universal_predicate(1, -1, false) == Universality::Unknown);
  CHECK(std::string(to_string(Universality::Unknown)) == "Unknown");
}

TEST_CASE("braid words") {
  const BraidWord b(3, {{1, 1}, {2, -1}});
  CHECK(b.to_string() == "s1 s2^-1");
  CHECK(BraidWord(2).to_string() == "1");
  CHECK(b.exponent_sum() == 0);
  CHECK_FALSE(b.positive());
  CHECK(b.components() == 1);
  CHECK(BraidWord(2, {{1, 1}, {1, 1}}).components() == 2);
  CHECK_THROWS_AS(BraidWord(2, {{2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(BraidWord(2, {{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(BraidWord(0), std::invalid_argument);
}

TEST_CASE("Lorenz braids of short words") {
  const TemplateSpec l00 = lorenz_like(0, 0, false);
  CHECK(word_to_braid(l00, CyclicWord("xy")).to_string() == "s1");
  CHECK(word_to_braid(l00, CyclicWord("xxy")).to_string() == "s2 s1");
  CHECK(word_to_braid(l00, CyclicWord("xyxyy")).to_string() == "s2 s3 s4 s1 s2 s3");
  CHECK(word_to_braid(l00, CyclicWord("x")).strands() == 1);
  CHECK(word_to_braid(lorenz_like(0, 0, true), CyclicWord("xxy")).to_string() == "s2^-1 s1^-1");
  // x block of xxy has two strands: one negative full twist adds s1^-2.
  const BraidWord tw = word_to_braid(lorenz_like(-1, 0, false), CyclicWord("xxy"));
  CHECK(tw.crossings() == 4);
  CHECK(tw.exponent_sum() == 0);
  CHECK_THROWS_AS(word_to_braid(l00, CyclicWord("xyxy")), PeriodicWord);
}

TEST_CASE("braid structure on random words and templates") {
  oracle::Rng rng(101);
  for (int k = 0; k < 150; ++k) {
    const int m = rng.integer(-2, 2), n = rng.integer(-2, 2);
    const bool star = rng.coin();
    const std::string s = random_word(rng, 10);
    const CyclicWord w(s);
    const BraidWord b = word_to_braid(lorenz_like(m, n, star), w);
    CAPTURE(s);
    CAPTURE(m);
    CAPTURE(n);
    CHECK(b.strands() == static_cast<int>(s.size()));
    CHECK(b.components() == 1);
    CHECK(b.permutation() == shift_permutation(w.symbols()));

    const int nx = static_cast<int>(w.count('x')), ny = static_cast<int>(w.count('y'));
    const int inv = inversions(shift_permutation(w.symbols()));
    const int twists = std::abs(m) * nx * (nx - 1) + std::abs(n) * ny * (ny - 1);
    CHECK(b.crossings() == inv + twists);
    const int sm = (m > 0) - (m < 0), sn = (n > 0) - (n < 0);
    CHECK(b.exponent_sum() ==
          (star ? -1 : 1) * inv + sm * std::abs(m) * nx * (nx - 1) + sn * std::abs(n) * ny * (ny - 1));
    if (m >= 0 && n >= 0 && !star) CHECK(b.positive());
  }
}

TEST_CASE("pair linking") {
  CHECK(pair_linking(lorenz_like(0, 0, false), CyclicWord("x"), CyclicWord("y")) == 0);
  CHECK(pair_linking(lorenz_like(0, -1, false), CyclicWord("xy"), CyclicWord("y")) == -1);
  CHECK(pair_linking(lorenz_like(0, 1, false), CyclicWord("xy"), CyclicWord("y")) == 1);
  CHECK_THROWS_AS(pair_linking(lorenz_like(0, 0, false), CyclicWord("xy"), CyclicWord("yx")), SameOrbit);

  oracle::Rng rng(7);
  for (int k = 0; k < 40; ++k) {
    const TemplateSpec t = lorenz_like(rng.integer(-2, 2), rng.integer(-2, 2), rng.coin());
    const CyclicWord a(random_word(rng, 6)), b(random_word(rng, 6));
    if (a == b) continue;
    CHECK(pair_linking(t, a, b) == pair_linking(t, b, a));
    // The standard and starred templates are mirror images.
    const TemplateSpec mirror = lorenz_like(-t.m, -t.n, !t.starred);
    CHECK(pair_linking(mirror, a, b) == -pair_linking(t, a, b));
  }
}

TEST_CASE("joint braids label their components") {
  std::vector<int> comp;
  const BraidWord b = orbits_braid(lorenz_like(0, 0, false), {CyclicWord("x"), CyclicWord("xy")}, &comp);
  CHECK(b.strands() == 3);
  CHECK(comp.size() == 3);
  CHECK(std::count(comp.begin(), comp.end(), 0) == 1);
  CHECK(b.components() == 2);
  CHECK_THROWS_AS(orbits_braid(lorenz_like(0, 0, false), {CyclicWord("xy"), CyclicWord("yx")}), SameOrbit);
  CHECK_THROWS_AS(orbits_braid(lorenz_like(0, 0, false), {}), std::invalid_argument);
}

TEST_CASE("embedded curves") {
  const TemplateSpec t = lorenz_like(0, -1, false);
  const PLCurve c = word_to_curve(t, CyclicWord("xxyxy"));
  CHECK(c.size() >= 5 * 24);

  SUBCASE("curve linking follows the combinatorial count") {
    oracle::Rng rng(13);
    for (int k = 0; k < 12; ++k) {
      const TemplateSpec s = lorenz_like(rng.integer(-1, 1), rng.integer(-1, 1), rng.coin());
      const CyclicWord a(random_word(rng, 4)), b(random_word(rng, 4));
      if (a == b) continue;
      const std::vector<PLCurve> cs = words_to_curves(s, {a, b});
      CAPTURE(a.symbols());
      CAPTURE(b.symbols());
      CHECK(std::lround(oracle::gauss_linking_midpoint(cs[0], cs[1])) == pair_linking(s, a, b));
    }
  }
  CurveGeometry bad;
  bad.samples_per_arc = 2;
  CHECK_THROWS_AS(word_to_curve(t, CyclicWord("xy"), bad), std::invalid_argument);
}
