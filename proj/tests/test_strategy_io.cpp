#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "abgame/strategy_io.hpp"

using namespace abgame;

namespace {

StrategyFile solved(const GameSpec& spec) {
  Solver s(spec);
  auto r = s.solve_exact(12);
  return {spec, r.value, *r.tree};
}

}  // namespace

TEST(Variant, NamesAndSpecs) {
  for (auto v : {Variant::ab, Variant::abb, Variant::ab_star, Variant::ab_fixed})
    EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("mastermind"), std::invalid_argument);
  EXPECT_EQ(make_spec(Variant::ab_fixed, 2, 5, 2), ab_fixed_spec(2, 5, 2));
  EXPECT_EQ(variant_of(ab_star_spec(3, 4)), Variant::ab_star);
  EXPECT_THROW(make_spec(Variant::ab_fixed, 2, 5, 0), std::invalid_argument);
  EXPECT_THROW(make_spec(Variant::ab, 2, 5, 1), std::invalid_argument);
  EXPECT_THROW(make_spec(Variant::ab, 3, 2), std::invalid_argument);
}

TEST(StrategyFile, JsonRoundTrip) {
  for (const GameSpec& spec : {ab_spec(3, 5), abb_spec(3, 4), ab_star_spec(2, 3), ab_fixed_spec(2, 5, 2)}) {
    const StrategyFile f = solved(spec);
    const std::string text = strategy_text(f);
    const StrategyFile back = strategy_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back.spec, spec);
    EXPECT_EQ(back.depth, f.depth);
    EXPECT_EQ(back.root, f.root);
    EXPECT_EQ(strategy_text(back), text);
    EXPECT_TRUE(replay(back.root, enumerate_secrets(spec), spec, back.depth).ok);
  }
}

TEST(StrategyFile, JokerPrintsAsJ) {
  const auto spec = ab_star_spec(2, 3);
  StrategyNode root{Code{3, 0}, {}, false, {}};
  const StrategyFile f{spec, 1, root};
  const std::string text = strategy_text(f);
  EXPECT_NE(text.find("\"(J,0)\""), std::string::npos) << text;
  EXPECT_EQ(strategy_from_json(nlohmann::json::parse(text)).root, root);
  std::ostringstream os;
  print_strategy(os, root, spec);
  EXPECT_EQ(os.str(), "(J,0)\n");
}

TEST(StrategyFile, FileRoundTripAndErrors) {
  const auto path = std::filesystem::temp_directory_path() / "abgame_strategy_test.json";
  const StrategyFile f = solved(ab_spec(2, 4));
  write_strategy(path.string(), f);
  EXPECT_EQ(read_strategy(path.string()).root, f.root);
  std::filesystem::remove(path);
  EXPECT_THROW(read_strategy(path.string()), std::runtime_error);
  auto bad = strategy_to_json(f);
  bad["root"]["question"] = "(0,0)";
  EXPECT_THROW(strategy_from_json(bad), std::invalid_argument);
}

TEST(StrategyFile, PlainTextRendering) {
  const StrategyFile f = solved(ab_spec(2, 2));
  std::ostringstream os;
  print_strategy(os, f.root, f.spec);
  EXPECT_EQ(os.str(), "(0,1) *\n  0B2W -> (1,0) *\n");
}

TEST(Values, CsvRows) {
  std::ostringstream os;
  write_values_csv(os, {{2, 5, Variant::ab, 0, 4, "exact"}, {4, 13, Variant::ab_star, 0, std::nullopt, "budget-exhausted"}});
  EXPECT_EQ(os.str(), "p,c,variant,x,value,status\n2,5,ab,0,4,exact\n4,13,ab_star,0,,budget-exhausted\n");
}

TEST(Values, TableLayouts) {
  std::vector<ValueRow> rows{{2, 2, Variant::ab, 0, 2, "exact"}, {2, 3, Variant::ab, 0, 3, "exact"},
                             {3, 3, Variant::ab, 0, std::nullopt, "budget-exhausted"}};
  const Table t = values_table(rows, 2, 3);
  std::ostringstream csv, text;
  t.write_csv(csv);
  t.write_text(text);
  EXPECT_EQ(csv.str(), "p\\c,2,3\n2,2,3\n3,,\xE2\x80\x94\n");
  EXPECT_EQ(text.str(), "p\\c  2  3\n  2  2  3\n  3     \xE2\x80\x94\n");
  std::ostringstream empty;
  values_table({}, 2, 1).write_csv(empty);
  EXPECT_EQ(empty.str(), "p\\c\n");
}
