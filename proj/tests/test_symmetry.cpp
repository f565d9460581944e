#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "abgame/symmetry.hpp"

using namespace abgame;

namespace {

Code apply(const Code& q, const std::vector<int>& sigma, const std::vector<int>& phi) {
  Code out = q;
  for (int i = 0; i < q.size(); ++i) out[sigma[static_cast<std::size_t>(i)]] = static_cast<Color>(phi[q[i]]);
  return out;
}

bool preserves(const Feature& f, int pegs, const std::vector<int>& sigma, const std::vector<int>& phi) {
  for (int i = 0; i < pegs; ++i) {
    ColorMask image = 0;
    for (std::size_t k = 0; k < phi.size(); ++k)
      if (f[static_cast<std::size_t>(i)] & color_bit(static_cast<int>(k))) image |= color_bit(phi[k]);
    if (image != f[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])]) return false;
  }
  return true;
}

// Lexicographically smallest image over every (sigma, phi) preserving all features.
Code brute_canonical(const Code& q, int pegs, int universe, const std::vector<Feature>& features) {
  Code best = q;
  std::vector<int> sigma(static_cast<std::size_t>(pegs));
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    std::vector<int> phi(static_cast<std::size_t>(universe));
    std::iota(phi.begin(), phi.end(), 0);
    do {
      if (std::all_of(features.begin(), features.end(), [&](const Feature& f) { return preserves(f, pegs, sigma, phi); }))
        best = std::min(best, apply(q, sigma, phi));
    } while (std::next_permutation(phi.begin(), phi.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

std::vector<Code> all_tuples(int p, int universe) {
  std::vector<Code> out;
  std::vector<int> d(static_cast<std::size_t>(p), 0);
  for (;;) {
    Code c;
    for (int v : d) c.push_back(v);
    out.push_back(c);
    int i = p - 1;
    while (i >= 0 && ++d[static_cast<std::size_t>(i)] == universe) d[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return out;
  }
}

}  // namespace

TEST(SymmetryGroup, EmptyHistoryHasFullGroup) {
  SymmetryGroup g(3, 5, {});
  EXPECT_FALSE(g.trivial());
  EXPECT_EQ(g.position_permutations(), 6u);
  EXPECT_EQ(g.canonical({4, 2, 3}), (Code{0, 1, 2}));
  EXPECT_EQ(g.canonical({4, 4, 3}), (Code{0, 0, 1}));
}

TEST(SymmetryGroup, MatchesBruteForce) {
  std::mt19937 rng(7);
  const int universe = 5;
  for (int p = 2; p <= 3; ++p) {
    const auto tuples = all_tuples(p, universe);
    for (int trial = 0; trial < 12; ++trial) {
      std::vector<Feature> features;
      const int nf = trial % 3;
      for (int f = 0; f < nf; ++f) {
        Feature feat{};
        for (int i = 0; i < p; ++i) feat[static_cast<std::size_t>(i)] = rng() % (ColorMask{1} << universe);
        features.push_back(feat);
      }
      if (trial == 11) features = {code_feature(p == 3 ? Code{0, 1, 2} : Code{0, 1})};
      SymmetryGroup g(p, universe, features);
      for (const Code& q : tuples) ASSERT_EQ(g.canonical(q), brute_canonical(q, p, universe, features)) << to_string(q);
    }
  }
}

TEST(SymmetryGroup, FixedColorStaysPut) {
  std::vector<Feature> features{fixed_color_feature(2, 3)};
  SymmetryGroup g(2, 4, features);
  EXPECT_EQ(g.canonical({3, 2}), (Code{0, 3}));
  EXPECT_EQ(g.canonical({2, 3}), (Code{0, 3}));
  EXPECT_EQ(g.canonical({2, 1}), (Code{0, 1}));
}

TEST(CanonicalCodeSet, EqualExactlyForColorRelabelings) {
  // All 3-element sets of distinct pairs over 4 colors; compare against
  // brute-force orbit equality under color permutations.
  std::vector<Code> pairs;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) pairs.push_back({a, b});
  std::vector<std::vector<Code>> sets;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      for (std::size_t k = j + 1; k < pairs.size(); ++k) sets.push_back({pairs[i], pairs[j], pairs[k]});

  auto orbit_min = [](const std::vector<Code>& set, bool positions) {
    std::vector<Code> best;
    std::vector<int> phi{0, 1, 2, 3};
    do {
      for (int swap = 0; swap <= (positions ? 1 : 0); ++swap) {
        std::vector<Code> img;
        for (const Code& c : set) {
          Code m{phi[c[0]], phi[c[1]]};
          if (swap) m = Code{m[1], m[0]};
          img.push_back(m);
        }
        std::sort(img.begin(), img.end());
        if (best.empty() || img < best) best = img;
      }
    } while (std::next_permutation(phi.begin(), phi.end()));
    return best;
  };

  for (bool positions : {false, true}) {
    std::vector<std::vector<std::uint64_t>> keys;
    std::vector<std::vector<Code>> mins;
    for (const auto& s : sets) {
      auto key = canonical_code_set(s, 4, 0, positions);
      ASSERT_TRUE(key.has_value());
      keys.push_back(*key);
      mins.push_back(orbit_min(s, positions));
    }
    for (std::size_t i = 0; i < sets.size(); i += 7)
      for (std::size_t j = 0; j < sets.size(); ++j) ASSERT_EQ(keys[i] == keys[j], mins[i] == mins[j]);
  }
}

TEST(CanonicalCodeSet, FixedColorsAreNotRelabeled) {
  std::vector<Code> a{{0, 2}}, b{{1, 2}};
  EXPECT_EQ(canonical_code_set(a, 3), canonical_code_set(b, 3));
  EXPECT_NE(canonical_code_set(a, 3, color_bit(0)), canonical_code_set(b, 3, color_bit(0)));
}
