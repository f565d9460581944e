// endgame_lower.hpp -- end-game state tables for black-peg lower bounds.
//
// After the codemaker answers the first c-r questions with zero black pegs,
// each peg position still admits at least r colors. The state table keeps,
// per position (row), the set of colors still possible there. Four
// transformations never make the end-game harder for the codebreaker:
//   1. remove a color from a row,
//   2. permute colors,
//   3. permute rows,
//   4. replace color k2 by k1 when their row sets are disjoint.
// States closed under these (exactly r colors per row, every two colors
// share a row) are enumerated up to isomorphism and each is checked to be
// unsolvable within q questions, giving abb(p,c) >= c-r+q+1.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "abgame/code.hpp"
#include "abgame/solver.hpp"
#include "abgame/symmetry.hpp"

namespace abgame::endgame {

/// Bit i set when the color is possible at row i.
using RowSet = std::uint32_t;

class EndgameState {
 public:
  EndgameState() = default;

  explicit EndgameState(std::vector<ColorMask> rows) : rows_(std::move(rows)) {
    if (rows_.empty() || static_cast<int>(rows_.size()) > kMaxPegs) throw std::invalid_argument("bad row count");
    for (ColorMask r : rows_)
      if (r == 0) throw std::invalid_argument("state rows must be nonempty");
  }

  /// Builds a state from explicit color lists, one list per row.
  static EndgameState from_lists(const std::vector<std::vector<int>>& lists) {
    std::vector<ColorMask> rows;
    for (const auto& list : lists) {
      ColorMask m = 0;
      for (int k : list) {
        if (k < 0 || k >= kMaxColors - 2) throw std::invalid_argument("color out of range");
        m |= color_bit(k);
      }
      rows.push_back(m);
    }
    return EndgameState(std::move(rows));
  }

  int pegs() const { return static_cast<int>(rows_.size()); }
  const std::vector<ColorMask>& rows() const { return rows_; }
  ColorMask row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }

  ColorMask colors() const {
    ColorMask m = 0;
    for (ColorMask r : rows_) m |= r;
    return m;
  }

  /// Largest color present (c0).
  int max_color() const { return 63 - std::countl_zero(colors()); }

  RowSet row_set(int color) const {
    RowSet s = 0;
    for (int i = 0; i < pegs(); ++i)
      if (rows_[static_cast<std::size_t>(i)] & color_bit(color)) s |= RowSet{1} << i;
    return s;
  }

  /// Row sets of all present colors, indexed by color (0 for absent colors).
  std::vector<RowSet> row_sets() const {
    std::vector<RowSet> out(static_cast<std::size_t>(max_color() + 1), 0);
    for (int k = 0; k <= max_color(); ++k) out[static_cast<std::size_t>(k)] = row_set(k);
    return out;
  }

  friend bool operator==(const EndgameState&, const EndgameState&) = default;
  friend auto operator<=>(const EndgameState&, const EndgameState&) = default;

 private:
  std::vector<ColorMask> rows_;
};

/// One line per row, colors separated by spaces.
inline std::string to_string(const EndgameState& state) {
  std::ostringstream out;
  for (int i = 0; i < state.pegs(); ++i) {
    bool first = true;
    for (int k = 0; k < kMaxColors; ++k) {
      if (!(state.row(i) & color_bit(k))) continue;
      if (!first) out << ' ';
      out << k;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

inline EndgameState parse_state(const std::string& text) {
  std::vector<std::vector<int>> lists;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<int> row;
    int k;
    while (ls >> k) row.push_back(k);
    if (!ls.eof()) throw std::invalid_argument("bad state line: " + line);
    lists.push_back(std::move(row));
  }
  return EndgameState::from_lists(lists);
}

// ---------------------------------------------------------------------------
// Transformation rules

inline EndgameState rule1_remove(const EndgameState& state, int row, int color) {
  if (row < 0 || row >= state.pegs()) throw std::invalid_argument("row out of range");
  if (color < 0 || color >= kMaxColors) throw std::invalid_argument("color out of range");
  ColorMask r = state.row(row);
  if (!(r & color_bit(color))) throw std::invalid_argument("color not present in row");
  r &= ~color_bit(color);
  if (r == 0) throw std::invalid_argument("row would become empty");
  auto rows = state.rows();
  rows[static_cast<std::size_t>(row)] = r;
  return EndgameState(std::move(rows));
}

/// Renames color k to mapping[k]; `mapping` must be injective on the
/// colors present in the state.
inline EndgameState rule2_permute_colors(const EndgameState& state, std::span<const int> mapping) {
  const ColorMask present = state.colors();
  ColorMask image = 0;
  for (int k = 0; k < kMaxColors; ++k) {
    if (!(present & color_bit(k))) continue;
    if (k >= static_cast<int>(mapping.size())) throw std::invalid_argument("mapping does not cover all colors");
    const int t = mapping[static_cast<std::size_t>(k)];
    if (t < 0 || t >= kMaxColors - 2) throw std::invalid_argument("mapped color out of range");
    if (image & color_bit(t)) throw std::invalid_argument("color mapping is not injective");
    image |= color_bit(t);
  }
  std::vector<ColorMask> rows;
  for (ColorMask r : state.rows()) {
    ColorMask m = 0;
    for (int k = 0; k < kMaxColors; ++k)
      if (r & color_bit(k)) m |= color_bit(mapping[static_cast<std::size_t>(k)]);
    rows.push_back(m);
  }
  return EndgameState(std::move(rows));
}

/// Row i of the result is row order[i] of the input.
inline EndgameState rule3_permute_rows(const EndgameState& state, std::span<const int> order) {
  if (static_cast<int>(order.size()) != state.pegs()) throw std::invalid_argument("permutation has wrong size");
  std::vector<int> check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  for (int i = 0; i < state.pegs(); ++i)
    if (check[static_cast<std::size_t>(i)] != i) throw std::invalid_argument("not a permutation");
  std::vector<ColorMask> rows;
  for (int i : order) rows.push_back(state.row(i));
  return EndgameState(std::move(rows));
}

/// Replaces every occurrence of k2 by k1; their row sets must be disjoint.
inline EndgameState rule4_merge(const EndgameState& state, int k1, int k2) {
  if (k1 == k2) throw std::invalid_argument("merge needs two different colors");
  const RowSet r1 = state.row_set(k1), r2 = state.row_set(k2);
  if (!r1 || !r2) throw std::invalid_argument("both colors must be present");
  if (r1 & r2) throw std::invalid_argument("row sets are not disjoint");
  std::vector<ColorMask> rows;
  for (ColorMask r : state.rows()) {
    if (r & color_bit(k2)) r = (r & ~color_bit(k2)) | color_bit(k1);
    rows.push_back(r);
  }
  return EndgameState(std::move(rows));
}

// ---------------------------------------------------------------------------

/// All secrets of the state: one color per row, pairwise distinct.
inline CandidateSet state_secrets(const EndgameState& state) {
  CandidateSet out;
  Code prefix;
  const int p = state.pegs();
  auto rec = [&](auto&& self, ColorMask used) -> void {
    if (prefix.size() == p) {
      out.push_back(prefix);
      return;
    }
    const ColorMask row = state.row(prefix.size()) & ~used;
    for (int k = 0; k < kMaxColors; ++k) {
      if (!(row & color_bit(k))) continue;
      prefix.push_back(k);
      self(self, used | color_bit(k));
      prefix.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Representative of the state's class under row and color permutations.
/// Colors are numbered by decreasing row-set size, then by row-set value.
inline EndgameState canonical_state(const EndgameState& state) {
  const int p = state.pegs();
  std::vector<RowSet> sets;
  for (int k = 0; k <= state.max_color(); ++k)
    if (RowSet s = state.row_set(k)) sets.push_back(s);
  auto order = [](RowSet a, RowSet b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa > pb;
    return a < b;
  };
  std::vector<RowSet> best;
  std::array<int, kMaxPegs> sigma{};
  std::iota(sigma.begin(), sigma.begin() + p, 0);
  do {
    std::vector<RowSet> moved;
    for (RowSet s : sets) {
      RowSet m = 0;
      for (int i = 0; i < p; ++i)
        if (s & (RowSet{1} << i)) m |= RowSet{1} << sigma[static_cast<std::size_t>(i)];
      moved.push_back(m);
    }
    std::sort(moved.begin(), moved.end(), order);
    if (best.empty() || moved < best) best = moved;
  } while (std::next_permutation(sigma.begin(), sigma.begin() + p));
  std::vector<ColorMask> rows(static_cast<std::size_t>(p), 0);
  for (std::size_t k = 0; k < best.size(); ++k)
    for (int i = 0; i < p; ++i)
      if (best[k] & (RowSet{1} << i)) rows[static_cast<std::size_t>(i)] |= color_bit(static_cast<int>(k));
  return EndgameState(std::move(rows));
}

inline bool isomorphic(const EndgameState& a, const EndgameState& b) {
  return a.pegs() == b.pegs() && canonical_state(a) == canonical_state(b);
}

/// Every row holds exactly r colors, no color has a single row set and no
/// two colors have disjoint row sets.
inline bool is_nonreducible(const EndgameState& state, int r) {
  for (ColorMask row : state.rows())
    if (std::popcount(row) != r) return false;
  std::vector<RowSet> sets;
  for (int k = 0; k <= state.max_color(); ++k)
    if (RowSet s = state.row_set(k)) sets.push_back(s);
  for (std::size_t a = 0; a < sets.size(); ++a) {
    if (std::popcount(sets[a]) < 2) return false;
    for (std::size_t b = a + 1; b < sets.size(); ++b)
      if (!(sets[a] & sets[b])) return false;
  }
  return true;
}

/// All non-reducible states for p rows and r colors per row, one canonical
/// representative per isomorphism class, sorted.
///
/// A state is determined up to color renaming by the multiset of its row
/// sets, so the enumeration chooses a multiplicity for every nonempty subset
/// of rows such that each row is covered exactly r times and all chosen
/// subsets pairwise intersect. Subsets of size one are not excluded up front.
inline std::vector<EndgameState> enumerate_nonreducible(int p, int r) {
  if (p < 1 || p > 6) throw std::invalid_argument("enumerate_nonreducible supports 1 <= p <= 6");
  if (r < p) throw std::invalid_argument("need r >= p");
  std::vector<RowSet> subsets;
  for (RowSet s = 1; s < (RowSet{1} << p); ++s) subsets.push_back(s);
  std::set<EndgameState> found;
  std::vector<int> degree(static_cast<std::size_t>(p), 0);
  std::vector<RowSet> chosen;
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == subsets.size()) {
      for (int d : degree)
        if (d != r) return;
      std::vector<ColorMask> rows(static_cast<std::size_t>(p), 0);
      for (std::size_t k = 0; k < chosen.size(); ++k)
        for (int i = 0; i < p; ++i)
          if (chosen[k] & (RowSet{1} << i)) rows[static_cast<std::size_t>(i)] |= color_bit(static_cast<int>(k));
      found.insert(canonical_state(EndgameState(std::move(rows))));
      return;
    }
    const RowSet s = subsets[idx];
    for (RowSet t : chosen)
      if (!(s & t)) {
        self(self, idx + 1);
        return;
      }
    // Multiplicity m of subset s.
    int room = r;
    for (int i = 0; i < p; ++i)
      if (s & (RowSet{1} << i)) room = std::min(room, r - degree[static_cast<std::size_t>(i)]);
    for (int m = 0; m <= room; ++m) {
      if (m > 0) {
        for (int i = 0; i < p; ++i)
          if (s & (RowSet{1} << i)) ++degree[static_cast<std::size_t>(i)];
        chosen.push_back(s);
      }
      self(self, idx + 1);
    }
    for (int m = 0; m < room; ++m) chosen.pop_back();
    for (int i = 0; i < p; ++i)
      if (s & (RowSet{1} << i)) degree[static_cast<std::size_t>(i)] -= room;
  };
  rec(rec, 0);
  return {found.begin(), found.end()};
}

/// True iff some row is empty or one row holds all of the state's colors.
/// Precondition: every color has a pair row set and no two are disjoint.
inline bool observation_check(std::span<const ColorMask> rows) {
  if (rows.empty() || static_cast<int>(rows.size()) > kMaxPegs) throw std::invalid_argument("bad row count");
  ColorMask all = 0;
  for (ColorMask r : rows) all |= r;
  std::vector<RowSet> sets;
  for (int k = 0; k < kMaxColors; ++k) {
    if (!(all & color_bit(k))) continue;
    RowSet s = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i] & color_bit(k)) s |= RowSet{1} << i;
    if (std::popcount(s) != 2) throw std::invalid_argument("every color needs a pair row set");
    sets.push_back(s);
  }
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = a + 1; b < sets.size(); ++b)
      if (!(sets[a] & sets[b])) throw std::invalid_argument("pair row sets must pairwise intersect");
  for (ColorMask r : rows)
    if (r == 0 || r == all) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Unsolvability checks

struct Verdict {
  EndgameState state;
  std::size_t secrets = 0;
  int budget = 0;
  bool unsolvable = false;
  std::uint64_t nodes = 0;
};

/// End-game of a state: extended questions over colors 0..c0+1 (the extra
/// color stands for every color excluded everywhere), black-only answers.
inline GameSpec state_game(const EndgameState& state) {
  const int universe = state.max_color() + 2;
  GameSpec spec{state.pegs(), std::max(universe, state.pegs()), FeedbackMode::black_only, QuestionPolicy::extended, 0,
                universe};
  return spec;
}

/// The state table as a symmetry feature (row i -> colors possible there).
inline Feature state_feature(const EndgameState& state) {
  Feature f{};
  for (int i = 0; i < state.pegs(); ++i) f[static_cast<std::size_t>(i)] = state.row(i);
  return f;
}

/// Checks that no codebreaker strategy wins the state's end-game within
/// `budget` questions against an adversarial codemaker.
inline Verdict state_unsolvable_within(const EndgameState& state, int budget, SolverOptions options = {}) {
  const GameSpec spec = state_game(state);
  CandidateSet secrets = state_secrets(state);
  Verdict v{state, secrets.size(), budget, false, 0};
  if (secrets.empty()) throw std::invalid_argument("state has no secrets");
  Solver solver(spec, secrets, enumerate_questions(spec), {state_feature(state)}, options);
  v.unsolvable = !solver.solvable(secrets, budget);
  v.nodes = solver.nodes();
  return v;
}

/// Statement abb(p,c) >= c + offset for c >= from_colors; colors p..from_colors-1
/// are left to direct computation.
struct LowerBoundStatement {
  int pegs = 0;
  int r = 0;
  int q = 0;
  int offset = 0;
  int from_colors = 0;

  int bound(int c) const { return c + offset; }

  std::string describe() const {
    std::string sign = offset >= 0 ? "+" + std::to_string(offset) : std::to_string(offset);
    if (offset == 0) sign.clear();
    return "abb(" + std::to_string(pegs) + ",c) >= c" + sign + " for c >= " + std::to_string(from_colors);
  }
};

/// From verified states: abb(p,c) > c - r + q for all c >= r.
inline LowerBoundStatement lower_bound_abb(int p, int r, int q, std::span<const Verdict> verdicts) {
  const auto states = enumerate_nonreducible(p, r);
  if (verdicts.size() != states.size()) throw std::invalid_argument("verification incomplete: wrong state count");
  for (const EndgameState& s : states) {
    auto it = std::find_if(verdicts.begin(), verdicts.end(), [&](const Verdict& v) { return isomorphic(v.state, s); });
    if (it == verdicts.end()) throw std::invalid_argument("verification incomplete: state missing");
    if (!it->unsolvable || it->budget != q) throw std::invalid_argument("verification incomplete: state not refuted");
  }
  return {p, r, q, q - r + 1, r};
}

}  // namespace abgame::endgame
