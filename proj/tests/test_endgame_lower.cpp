#include <gtest/gtest.h>

#include <set>

#include "abgame/endgame_lower.hpp"

using namespace abgame;
using namespace abgame::endgame;

namespace {

EndgameState S(const std::vector<std::vector<int>>& rows) { return EndgameState::from_lists(rows); }

const std::vector<EndgameState>& catalog3() {
  static const std::vector<EndgameState> states{
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 4, 5}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 5, 6}, {0, 3, 4, 5, 6}}),
  };
  return states;
}

const std::vector<EndgameState>& catalog4() {
  static const std::vector<EndgameState> states{
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 4, 5}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 3, 6}, {0, 1, 4, 5, 6}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 4, 5}, {0, 1, 3, 4, 5}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}, {0, 1, 2, 5, 6}, {0, 3, 4, 5, 6}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 4, 6}, {0, 3, 4, 5, 6}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 6, 7}, {3, 4, 5, 6, 7}}),
      S({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 4, 5, 6}, {2, 3, 4, 5, 6}}),
  };
  return states;
}

// Smallest number of questions that wins the state's end-game.
int state_depth(const EndgameState& s) {
  for (int q = 1; q <= 12; ++q)
    if (!state_unsolvable_within(s, q).unsolvable) return q;
  return -1;
}

std::vector<int> identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

}  // namespace

TEST(EndgameState, TextRoundTrip) {
  const auto s = S({{0, 1, 2}, {1, 3}});
  EXPECT_EQ(to_string(s), "0 1 2\n1 3\n");
  EXPECT_EQ(parse_state(to_string(s)), s);
  EXPECT_EQ(s.row_set(1), 0b11u);
  EXPECT_EQ(s.row_set(3), 0b10u);
  EXPECT_EQ(s.max_color(), 3);
  EXPECT_THROW(parse_state("0 1\nx\n"), std::invalid_argument);
  EXPECT_THROW(S({{0}, {}}), std::invalid_argument);
}

TEST(EndgameState, Secrets) {
  EXPECT_EQ(state_secrets(S({{0, 1}, {0, 1}})), (CandidateSet{{0, 1}, {1, 0}}));
  EXPECT_EQ(state_secrets(catalog3()[0]).size(), 60u);
  EXPECT_TRUE(state_secrets(S({{0}, {0}})).empty());
}

TEST(Rules, RuleApplicationExample) {
  // Three rows, colors 0..12, row 2 has an extra color 8.
  auto s = S({{0, 1, 2, 3}, {4, 5, 6, 7, 8}, {9, 10, 11, 12}});
  s = rule1_remove(s, 1, 8);
  EXPECT_EQ(s, S({{0, 1, 2, 3}, {4, 5, 6, 7}, {9, 10, 11, 12}}));
  std::vector<int> rename = identity(13);
  for (int k = 9; k <= 12; ++k) rename[static_cast<std::size_t>(k)] = k - 1;
  s = rule2_permute_colors(s, rename);
  EXPECT_EQ(s, S({{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}}));
  s = rule4_merge(s, 0, 4);
  EXPECT_EQ(s, S({{0, 1, 2, 3}, {0, 5, 6, 7}, {8, 9, 10, 11}}));
  s = rule4_merge(s, 0, 8);
  EXPECT_EQ(s, S({{0, 1, 2, 3}, {0, 5, 6, 7}, {0, 9, 10, 11}}));
  for (auto [k1, k2] : {std::pair{1, 5}, std::pair{1, 9}, std::pair{2, 6}, std::pair{2, 10}, std::pair{3, 7}, std::pair{3, 11}})
    s = rule4_merge(s, k1, k2);
  EXPECT_EQ(s, S({{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}}));
}

TEST(Rules, Errors) {
  const auto s = S({{0, 1}, {4}});
  EXPECT_THROW(rule1_remove(s, 1, 4), std::invalid_argument);
  EXPECT_THROW(rule1_remove(s, 0, 4), std::invalid_argument);
  EXPECT_THROW(rule4_merge(S({{0, 1}, {0, 1}}), 0, 1), std::invalid_argument);
  EXPECT_THROW(rule4_merge(s, 0, 0), std::invalid_argument);
  std::vector<int> bad{0, 0, 2, 3, 4};
  EXPECT_THROW(rule2_permute_colors(s, bad), std::invalid_argument);
  std::vector<int> not_perm{0, 0};
  EXPECT_THROW(rule3_permute_rows(s, not_perm), std::invalid_argument);
  const auto id = identity(5);
  EXPECT_EQ(rule2_permute_colors(s, id), s);
}

TEST(Rules, PermutationsPreserveDepth) {
  const std::vector<EndgameState> states{
      S({{0, 1}, {0, 1}}), S({{0, 1, 2}, {0, 1, 2}}), S({{0, 1, 2}, {1, 2, 3}, {0, 3, 4}}),
      S({{0, 1, 2, 3}, {0, 1, 4}, {2, 3, 4}}), S({{0, 1}, {1, 2}, {0, 2}})};
  for (const auto& s : states) {
    const int d = state_depth(s);
    ASSERT_GT(d, 0);
    std::vector<int> rename(static_cast<std::size_t>(s.max_color() + 1));
    for (std::size_t k = 0; k < rename.size(); ++k) rename[k] = static_cast<int>(rename.size() - 1 - k) + 1;
    EXPECT_EQ(state_depth(rule2_permute_colors(s, rename)), d) << to_string(s);
    std::vector<int> order = identity(s.pegs());
    std::reverse(order.begin(), order.end());
    const auto moved = rule3_permute_rows(s, order);
    EXPECT_EQ(state_depth(moved), d) << to_string(s);
    EXPECT_TRUE(isomorphic(moved, s));
  }
}

TEST(Rules, MergeNeverIncreasesDepthAndIsOnto) {
  const std::vector<EndgameState> states{S({{0, 1, 2}, {3, 4, 5}}), S({{0, 1}, {2, 3}, {1, 2, 4}}),
                                         S({{0, 1, 2, 3}, {4, 5, 1}, {0, 6, 7}}), S({{0, 2, 3}, {1, 2, 4}, {1, 3}})};
  for (const auto& s : states) {
    const int before = state_depth(s);
    for (int k1 = 0; k1 <= s.max_color(); ++k1) {
      for (int k2 = 0; k2 <= s.max_color(); ++k2) {
        if (k1 == k2 || !s.row_set(k1) || !s.row_set(k2) || (s.row_set(k1) & s.row_set(k2))) continue;
        const auto merged = rule4_merge(s, k1, k2);
        EXPECT_LE(state_depth(merged), before) << to_string(s) << k1 << "<-" << k2;
        // Every secret of the merged state is the image of an original secret.
        std::set<Code> images;
        for (Code sec : state_secrets(s)) {
          for (int i = 0; i < sec.size(); ++i)
            if (sec[i] == k2) sec[i] = static_cast<Color>(k1);
          images.insert(sec);
        }
        for (const Code& sec : state_secrets(merged)) EXPECT_TRUE(images.count(sec)) << to_string(sec);
      }
    }
  }
}

TEST(Canonical, RowAndColorInvariance) {
  const auto s = catalog4()[6];
  std::vector<int> rename{7, 3, 1, 0, 6, 2, 5, 4};
  std::vector<int> order{2, 0, 3, 1};
  const auto t = rule3_permute_rows(rule2_permute_colors(s, rename), order);
  EXPECT_EQ(canonical_state(s), canonical_state(t));
  EXPECT_FALSE(isomorphic(catalog4()[6], catalog4()[7]));
  EXPECT_EQ(canonical_state(canonical_state(s)), canonical_state(s));
}

TEST(Enumeration, TwoPegs) {
  const auto states = enumerate_nonreducible(2, 2);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_TRUE(isomorphic(states[0], S({{0, 1}, {0, 1}})));
}

TEST(Enumeration, CatalogsMatch) {
  for (auto [p, catalog] : {std::pair{3, &catalog3()}, std::pair{4, &catalog4()}}) {
    const auto states = enumerate_nonreducible(p, 5);
    ASSERT_EQ(states.size(), catalog->size());
    std::set<EndgameState> canon;
    for (const auto& s : *catalog) {
      EXPECT_TRUE(is_nonreducible(s, 5)) << to_string(s);
      canon.insert(canonical_state(s));
    }
    EXPECT_EQ(canon.size(), catalog->size());
    for (const auto& s : states) {
      EXPECT_TRUE(canon.count(s)) << to_string(s);
      EXPECT_TRUE(is_nonreducible(s, 5));
      EXPECT_LT(s.max_color(), p * 5);
    }
  }
  EXPECT_THROW(enumerate_nonreducible(3, 2), std::invalid_argument);
}

TEST(Enumeration, Nonreducibility) {
  EXPECT_FALSE(is_nonreducible(S({{0, 1}, {0, 2}}), 2));
  EXPECT_FALSE(is_nonreducible(S({{0, 1}, {2, 3}}), 2));
  EXPECT_FALSE(is_nonreducible(S({{0, 1, 2}, {0, 1}}), 2));
  EXPECT_TRUE(is_nonreducible(S({{0, 1}, {0, 1}}), 2));
}

TEST(Verification, SmallStates) {
  const auto v = state_unsolvable_within(S({{0, 1}, {0, 1}}), 1);
  EXPECT_TRUE(v.unsolvable);
  EXPECT_EQ(v.secrets, 2u);
  EXPECT_FALSE(state_unsolvable_within(S({{0, 1}, {0, 1}}), 2).unsolvable);
  const auto game = state_game(catalog3()[2]);
  EXPECT_EQ(game.question_universe(), 8);
  EXPECT_EQ(game.policy, QuestionPolicy::extended);
  EXPECT_EQ(game.mode, FeedbackMode::black_only);
}

TEST(Verification, ThreePegCatalogNeedsSix) {
  std::vector<Verdict> verdicts;
  for (const auto& s : enumerate_nonreducible(3, 5)) {
    verdicts.push_back(state_unsolvable_within(s, 5));
    EXPECT_TRUE(verdicts.back().unsolvable) << to_string(s);
    EXPECT_FALSE(state_unsolvable_within(s, 6).unsolvable) << to_string(s);
  }
  const auto st = lower_bound_abb(3, 5, 5, verdicts);
  EXPECT_EQ(st.bound(7), 8);
  EXPECT_EQ(st.from_colors, 5);
  EXPECT_EQ(st.describe(), "abb(3,c) >= c+1 for c >= 5");
  verdicts.pop_back();
  EXPECT_THROW(lower_bound_abb(3, 5, 5, verdicts), std::invalid_argument);
}

TEST(Verification, TwoPegStatement) {
  std::vector<Verdict> verdicts{state_unsolvable_within(enumerate_nonreducible(2, 2)[0], 1)};
  const auto st = lower_bound_abb(2, 2, 1, verdicts);
  EXPECT_EQ(st.describe(), "abb(2,c) >= c for c >= 2");
}

TEST(Observation, Patterns) {
  auto rows = [](const EndgameState& s) { return s.rows(); };
  std::vector<ColorMask> p1{0, 0, 1, 1};
  std::vector<ColorMask> p2{0, 1, 2, 3};
  std::vector<ColorMask> p3{0, 0b101, 0b110, 0b011};
  std::vector<ColorMask> p4{0b001, 0b010, 0b100, 0b111};
  for (const auto& r : {p1, p2, p3, p4}) EXPECT_TRUE(observation_check(r));
  EXPECT_THROW(observation_check(rows(S({{0}, {1}}))), std::invalid_argument);
  std::vector<ColorMask> disjoint{0b01, 0b01, 0b10, 0b10};
  EXPECT_THROW(observation_check(disjoint), std::invalid_argument);
}

// Every multiset of n <= 4 pairwise intersecting pair row sets over 4 rows.
TEST(Observation, ExhaustiveFourRows) {
  std::vector<RowSet> pairs;
  for (RowSet s = 0; s < 16; ++s)
    if (std::popcount(s) == 2) pairs.push_back(s);
  int checked = 0;
  std::vector<RowSet> chosen;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (!chosen.empty()) {
      std::vector<ColorMask> rows(4, 0);
      for (std::size_t k = 0; k < chosen.size(); ++k)
        for (int i = 0; i < 4; ++i)
          if (chosen[k] & (1u << i)) rows[static_cast<std::size_t>(i)] |= color_bit(static_cast<int>(k));
      EXPECT_TRUE(observation_check(rows));
      ++checked;
    }
    if (chosen.size() == 4) return;
    for (std::size_t i = from; i < pairs.size(); ++i) {
      if (std::any_of(chosen.begin(), chosen.end(), [&](RowSet t) { return !(t & pairs[i]); })) continue;
      chosen.push_back(pairs[i]);
      self(self, i);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  EXPECT_GT(checked, 50);
}
