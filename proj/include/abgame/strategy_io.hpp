// strategy_io.hpp -- strategy-tree files, value CSV rows and table layouts.
//
// Strategy tree file (JSON):
//   {
//     "game": {"pegs": 3, "colors": 5, "variant": "ab", "opening": 0},
//     "depth": 5,
//     "root": {"question": "(0,1,2)", "wins": true, "children": [
//       {"answer": "0B2W", "question": "...", "wins": ..., "children": [...]}, ...]}
//   }
// Children are listed in answer order (black, then white). The joker color
// prints as "J". Objects are written with sorted keys and two-space indent,
// so equal trees give identical bytes.

#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "abgame/code.hpp"
#include "abgame/solver.hpp"
#include "json.hpp"

namespace abgame {

enum class Variant { ab, abb, ab_star, ab_fixed };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::ab:
      return "ab";
    case Variant::abb:
      return "abb";
    case Variant::ab_star:
      return "ab_star";
    case Variant::ab_fixed:
      return "ab_fixed";
  }
  return "?";
}

inline Variant parse_variant(const std::string& name) {
  if (name == "ab") return Variant::ab;
  if (name == "abb") return Variant::abb;
  if (name == "ab_star") return Variant::ab_star;
  if (name == "ab_fixed") return Variant::ab_fixed;
  throw std::invalid_argument("unknown variant '" + name + "'");
}

/// Validated game for a variant; `opening` is used by ab_fixed only.
inline GameSpec make_spec(Variant v, int p, int c, int opening = 0) {
  GameSpec spec;
  switch (v) {
    case Variant::ab:
      spec = ab_spec(p, c);
      break;
    case Variant::abb:
      spec = abb_spec(p, c);
      break;
    case Variant::ab_star:
      spec = ab_star_spec(p, c);
      break;
    case Variant::ab_fixed:
      if (opening < 1) throw std::invalid_argument("ab_fixed needs an opening length >= 1");
      spec = ab_fixed_spec(p, c, opening);
      break;
  }
  if (v != Variant::ab_fixed && opening != 0) throw std::invalid_argument("opening applies to ab_fixed only");
  spec.validate();
  return spec;
}

inline Variant variant_of(const GameSpec& spec) {
  if (spec.universe != 0) throw std::invalid_argument("game has no named variant");
  if (spec.policy == QuestionPolicy::joker && spec.mode == FeedbackMode::black_white && spec.opening == 0)
    return Variant::ab_star;
  if (spec.policy != QuestionPolicy::distinct) throw std::invalid_argument("game has no named variant");
  if (spec.mode == FeedbackMode::black_only) {
    if (spec.opening) throw std::invalid_argument("game has no named variant");
    return Variant::abb;
  }
  return spec.opening ? Variant::ab_fixed : Variant::ab;
}

// ---------------------------------------------------------------------------
// Strategy trees

namespace detail {

inline std::optional<Color> joker_of(const GameSpec& spec) {
  if (spec.policy == QuestionPolicy::joker) return spec.joker();
  return std::nullopt;
}

inline nlohmann::json node_to_json(const StrategyNode& node, const GameSpec& spec, bool with_answer) {
  nlohmann::json j;
  if (with_answer) j["answer"] = to_string(node.answer);
  j["question"] = to_string(node.question, joker_of(spec));
  j["wins"] = node.wins;
  nlohmann::json kids = nlohmann::json::array();
  for (const StrategyNode& child : node.children) kids.push_back(node_to_json(child, spec, true));
  j["children"] = std::move(kids);
  return j;
}

inline StrategyNode node_from_json(const nlohmann::json& j, const GameSpec& spec, bool with_answer) {
  StrategyNode node;
  if (with_answer) node.answer = parse_feedback(j.at("answer").get<std::string>());
  node.question = parse_code(j.at("question").get<std::string>(), joker_of(spec));
  check_question(node.question, spec);
  node.wins = j.at("wins").get<bool>();
  for (const auto& child : j.at("children")) node.children.push_back(node_from_json(child, spec, true));
  return node;
}

}  // namespace detail

struct StrategyFile {
  GameSpec spec;
  int depth = 0;
  StrategyNode root;
};

inline nlohmann::json strategy_to_json(const StrategyFile& file) {
  nlohmann::json j;
  j["game"] = {{"pegs", file.spec.pegs},
               {"colors", file.spec.colors},
               {"variant", to_string(variant_of(file.spec))},
               {"opening", file.spec.opening}};
  j["depth"] = file.depth;
  j["root"] = detail::node_to_json(file.root, file.spec, false);
  return j;
}

inline StrategyFile strategy_from_json(const nlohmann::json& j) {
  const auto& g = j.at("game");
  StrategyFile file;
  file.spec = make_spec(parse_variant(g.at("variant").get<std::string>()), g.at("pegs").get<int>(),
                        g.at("colors").get<int>(), g.value("opening", 0));
  file.depth = j.at("depth").get<int>();
  file.root = detail::node_from_json(j.at("root"), file.spec, false);
  return file;
}

inline std::string strategy_text(const StrategyFile& file) { return strategy_to_json(file).dump(2) + "\n"; }

inline void write_strategy(const std::string& path, const StrategyFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << strategy_text(file);
}

inline StrategyFile read_strategy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return strategy_from_json(nlohmann::json::parse(in));
}

/// Indented plain-text rendering, one node per line.
inline void print_strategy(std::ostream& os, const StrategyNode& node, const GameSpec& spec, int indent = 0) {
  os << std::string(static_cast<std::size_t>(indent), ' ');
  if (indent) os << to_string(node.answer) << " -> ";
  os << to_string(node.question, detail::joker_of(spec)) << (node.wins ? " *" : "") << '\n';
  for (const StrategyNode& child : node.children) print_strategy(os, child, spec, indent + 2);
}

// ---------------------------------------------------------------------------
// Values and tables

/// One computed value: the CSV row layout (p, c, variant, x, value, status).
struct ValueRow {
  int pegs = 0;
  int colors = 0;
  Variant variant = Variant::ab;
  int opening = 0;
  std::optional<int> value;
  std::string status;
};

inline const char* kValuesHeader = "p,c,variant,x,value,status";

inline std::string csv_line(const ValueRow& r) {
  std::ostringstream os;
  os << r.pegs << ',' << r.colors << ',' << to_string(r.variant) << ',' << r.opening << ',';
  if (r.value) os << *r.value;
  os << ',' << r.status;
  return os.str();
}

inline void write_values_csv(std::ostream& os, const std::vector<ValueRow>& rows) {
  os << kValuesHeader << '\n';
  for (const ValueRow& r : rows) os << csv_line(r) << '\n';
}

/// Labelled grid of text cells; empty cells mean "not applicable".
struct Table {
  std::string corner;
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<std::string>> cells;

  void write_csv(std::ostream& os) const {
    os << corner;
    for (const auto& c : columns) os << ',' << c;
    os << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      os << rows[i];
      for (const auto& cell : cells[i]) os << ',' << cell;
      os << '\n';
    }
  }

  void write_text(std::ostream& os) const {
    auto width = [](const std::string& s) {
      // Count code points so "—" takes one column.
      return static_cast<int>(std::count_if(s.begin(), s.end(), [](char ch) { return (ch & 0xC0) != 0x80; }));
    };
    int w = width(corner);
    for (const auto& r : rows) w = std::max(w, width(r));
    std::vector<int> cw;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      int m = width(columns[j]);
      for (const auto& row : cells) m = std::max(m, width(row[j]));
      cw.push_back(m);
    }
    auto pad = [&](const std::string& s, int to) { return std::string(static_cast<std::size_t>(to - width(s)), ' ') + s; };
    os << pad(corner, w);
    for (std::size_t j = 0; j < columns.size(); ++j) os << "  " << pad(columns[j], cw[j]);
    os << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      os << pad(rows[i], w);
      for (std::size_t j = 0; j < columns.size(); ++j) os << "  " << pad(cells[i][j], cw[j]);
      os << '\n';
    }
  }
};

inline const char* kMissingCell = "\xE2\x80\x94";  // em dash

/// Grid with one row per p and one column per c (p <= c); cells come from
/// rows with a value, "—" for rows without one.
inline Table values_table(const std::vector<ValueRow>& values, int c_lo, int c_hi) {
  Table t;
  t.corner = "p\\c";
  for (int c = c_lo; c <= c_hi; ++c) t.columns.push_back(std::to_string(c));
  std::map<int, std::map<int, std::string>> grid;
  for (const ValueRow& r : values) grid[r.pegs][r.colors] = r.value ? std::to_string(*r.value) : kMissingCell;
  for (const auto& [p, row] : grid) {
    t.rows.push_back(std::to_string(p));
    std::vector<std::string> line;
    for (int c = c_lo; c <= c_hi; ++c) {
      auto it = row.find(c);
      line.push_back(it == row.end() ? "" : it->second);
    }
    t.cells.push_back(std::move(line));
  }
  return t;
}

}  // namespace abgame
