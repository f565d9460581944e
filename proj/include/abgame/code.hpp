// code.hpp -- codes, feedback, game specifications and grading for the
// Generalized AB game and its black-peg variant.

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abgame {

/// Maximum number of pegs supported by the fixed-size code representation.
inline constexpr int kMaxPegs = 8;

/// Maximum number of colors (including the joker) usable in any game.
inline constexpr int kMaxColors = 64;

using Color = std::uint8_t;
using ColorMask = std::uint64_t;

inline constexpr ColorMask color_bit(int k) { return ColorMask{1} << k; }

/// An ordered tuple of colors: a secret or a question.
class Code {
 public:
  Code() = default;

  Code(std::initializer_list<int> colors) {
    if (colors.size() > kMaxPegs) throw std::invalid_argument("too many pegs");
    for (int k : colors) push_back(k);
  }

  explicit Code(std::span<const Color> colors) {
    if (colors.size() > kMaxPegs) throw std::invalid_argument("too many pegs");
    for (Color k : colors) push_back(k);
  }

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }

  Color operator[](int i) const { return pegs_[static_cast<std::size_t>(i)]; }
  Color& operator[](int i) { return pegs_[static_cast<std::size_t>(i)]; }

  void push_back(int k) {
    if (size_ >= kMaxPegs) throw std::invalid_argument("too many pegs");
    if (k < 0 || k >= kMaxColors) throw std::invalid_argument("color out of range");
    pegs_[size_++] = static_cast<Color>(k);
  }

  void pop_back() {
    if (size_ == 0) throw std::out_of_range("pop_back on empty code");
    --size_;
  }

  std::span<const Color> pegs() const { return {pegs_.data(), size_}; }

  /// Set of colors present in the code.
  ColorMask mask() const {
    ColorMask m = 0;
    for (int i = 0; i < size_; ++i) m |= color_bit(pegs_[i]);
    return m;
  }

  bool has_distinct_colors() const {
    ColorMask m = 0;
    for (int i = 0; i < size_; ++i) {
      if (m & color_bit(pegs_[i])) return false;
      m |= color_bit(pegs_[i]);
    }
    return true;
  }

  friend bool operator==(const Code& a, const Code& b) {
    return a.size_ == b.size_ && std::equal(a.pegs_.begin(), a.pegs_.begin() + a.size_, b.pegs_.begin());
  }

  /// Lexicographic order on the pegs; shorter codes sort first on a common prefix.
  friend std::strong_ordering operator<=>(const Code& a, const Code& b) {
    return std::lexicographical_compare_three_way(a.pegs_.begin(), a.pegs_.begin() + a.size_, b.pegs_.begin(),
                                                  b.pegs_.begin() + b.size_);
  }

 private:
  std::array<Color, kMaxPegs> pegs_{};
  std::uint8_t size_ = 0;
};

/// Whether answers carry white pegs.
enum class FeedbackMode { black_white, black_only };

/// Which questions the codebreaker may ask.
///  - distinct: p pairwise-distinct colors from 0..c-1
///  - joker: colors 0..c where 0..c-1 are used at most once and c (the joker)
///    any number of times; the all-joker question is excluded
///  - extended: arbitrary p-tuples over the question universe, repeats allowed
enum class QuestionPolicy { distinct, joker, extended };

struct GameSpec {
  int pegs = 0;
  int colors = 0;
  FeedbackMode mode = FeedbackMode::black_white;
  QuestionPolicy policy = QuestionPolicy::distinct;
  /// Number of fixed opening questions (0 when unused).
  int opening = 0;
  /// Number of colors usable in questions under the extended policy.
  /// Zero means "derive from policy" (c for distinct, c+1 for joker).
  int universe = 0;

  Color joker() const { return static_cast<Color>(colors); }

  int question_universe() const {
    if (universe > 0) return universe;
    return policy == QuestionPolicy::joker ? colors + 1 : colors;
  }

  /// Throws std::invalid_argument when the parameters do not describe a game.
  void validate() const {
    if (pegs < 1 || pegs > kMaxPegs) throw std::invalid_argument("pegs out of range");
    if (colors < pegs) throw std::invalid_argument("colors must be at least pegs");
    if (colors + 1 >= kMaxColors) throw std::invalid_argument("too many colors");
    if (opening < 0) throw std::invalid_argument("negative opening length");
    if (opening > 0 && pegs * opening > colors) throw std::invalid_argument("opening needs p*x <= c");
    if (universe < 0 || universe > kMaxColors) throw std::invalid_argument("universe out of range");
    if (policy == QuestionPolicy::distinct && question_universe() < pegs)
      throw std::invalid_argument("universe smaller than pegs");
  }

  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

inline GameSpec ab_spec(int p, int c) { return {p, c, FeedbackMode::black_white, QuestionPolicy::distinct, 0, 0}; }
inline GameSpec abb_spec(int p, int c) { return {p, c, FeedbackMode::black_only, QuestionPolicy::distinct, 0, 0}; }
inline GameSpec ab_star_spec(int p, int c) { return {p, c, FeedbackMode::black_white, QuestionPolicy::joker, 0, 0}; }
inline GameSpec ab_fixed_spec(int p, int c, int x) {
  return {p, c, FeedbackMode::black_white, QuestionPolicy::distinct, x, 0};
}

/// Answer to a question. White is absent in black-only mode.
struct Feedback {
  int black = 0;
  std::optional<int> white;

  friend bool operator==(const Feedback&, const Feedback&) = default;
};

/// Dense answer index used by the search: black*(p+1)+white, or black alone
/// in black-only mode.
using AnswerIndex = std::uint8_t;

inline int answer_count(int p, FeedbackMode mode) {
  return mode == FeedbackMode::black_only ? p + 1 : (p + 1) * (p + 1);
}

inline AnswerIndex win_answer(int p, FeedbackMode mode) {
  return static_cast<AnswerIndex>(mode == FeedbackMode::black_only ? p : p * (p + 1));
}

inline Feedback answer_feedback(AnswerIndex a, int p, FeedbackMode mode) {
  if (mode == FeedbackMode::black_only) return {a, std::nullopt};
  return {a / (p + 1), a % (p + 1)};
}

inline AnswerIndex feedback_answer(const Feedback& f, int p, FeedbackMode mode) {
  if (mode == FeedbackMode::black_only) return static_cast<AnswerIndex>(f.black);
  return static_cast<AnswerIndex>(f.black * (p + 1) + f.white.value_or(0));
}

/// Black and white counts without validation. White counts each color as
/// min(occurrences in question, occurrences in secret) minus blacks, which
/// reduces to the color intersection for distinct codes.
inline std::pair<int, int> raw_grade(const Code& question, const Code& secret) {
  int black = 0;
  const int p = question.size();
  for (int i = 0; i < p; ++i) black += question[i] == secret[i];
  int common = 0;
  ColorMask seen = 0;
  for (int i = 0; i < p; ++i) {
    const Color k = question[i];
    if (seen & color_bit(k)) continue;
    seen |= color_bit(k);
    int in_q = 0, in_s = 0;
    for (int j = 0; j < p; ++j) {
      in_q += question[j] == k;
      in_s += secret[j] == k;
    }
    common += std::min(in_q, in_s);
  }
  return {black, common - black};
}

inline AnswerIndex grade_index(const Code& question, const Code& secret, FeedbackMode mode) {
  auto [b, w] = raw_grade(question, secret);
  if (mode == FeedbackMode::black_only) return static_cast<AnswerIndex>(b);
  return static_cast<AnswerIndex>(b * (question.size() + 1) + w);
}

inline void check_secret(const Code& s, const GameSpec& spec) {
  if (s.size() != spec.pegs) throw std::invalid_argument("secret has wrong length");
  for (Color k : s.pegs())
    if (k >= spec.colors) throw std::invalid_argument("secret color out of range");
  if (!s.has_distinct_colors()) throw std::invalid_argument("secret colors must be distinct");
}

inline void check_question(const Code& q, const GameSpec& spec) {
  if (q.size() != spec.pegs) throw std::invalid_argument("question has wrong length");
  const int universe = spec.question_universe();
  for (Color k : q.pegs())
    if (k >= universe) throw std::invalid_argument("question color out of range");
  switch (spec.policy) {
    case QuestionPolicy::distinct:
      if (!q.has_distinct_colors()) throw std::invalid_argument("question colors must be distinct");
      break;
    case QuestionPolicy::joker: {
      ColorMask m = 0;
      int jokers = 0;
      for (Color k : q.pegs()) {
        if (k == spec.joker()) {
          ++jokers;
          continue;
        }
        if (m & color_bit(k)) throw std::invalid_argument("non-joker colors must be distinct");
        m |= color_bit(k);
      }
      if (jokers == spec.pegs) throw std::invalid_argument("all-joker question is not allowed");
      break;
    }
    case QuestionPolicy::extended:
      break;
  }
}

/// Grades a question against a secret; throws std::invalid_argument on codes
/// that are not legal for the spec.
inline Feedback grade(const Code& question, const Code& secret, const GameSpec& spec) {
  check_question(question, spec);
  check_secret(secret, spec);
  auto [b, w] = raw_grade(question, secret);
  if (spec.mode == FeedbackMode::black_only) return {b, std::nullopt};
  return {b, w};
}

namespace detail {

inline void distinct_tuples(int p, int universe, Code& prefix, ColorMask used, std::vector<Code>& out) {
  if (prefix.size() == p) {
    out.push_back(prefix);
    return;
  }
  for (int k = 0; k < universe; ++k) {
    if (used & color_bit(k)) continue;
    prefix.push_back(k);
    distinct_tuples(p, universe, prefix, used | color_bit(k), out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// All secrets: distinct-color p-tuples over 0..c-1 in lexicographic order.
inline std::vector<Code> enumerate_secrets(const GameSpec& spec) {
  spec.validate();
  std::vector<Code> out;
  Code prefix;
  detail::distinct_tuples(spec.pegs, spec.colors, prefix, 0, out);
  return out;
}

/// All legal questions for the spec's policy, in lexicographic order.
inline std::vector<Code> enumerate_questions(const GameSpec& spec) {
  spec.validate();
  const int p = spec.pegs;
  const int universe = spec.question_universe();
  std::vector<Code> out;
  if (spec.policy == QuestionPolicy::distinct) {
    Code prefix;
    detail::distinct_tuples(p, universe, prefix, 0, out);
    return out;
  }
  // Odometer over universe^p, filtered by policy.
  std::vector<int> digits(static_cast<std::size_t>(p), 0);
  for (;;) {
    Code q;
    for (int d : digits) q.push_back(d);
    bool legal = true;
    if (spec.policy == QuestionPolicy::joker) {
      ColorMask m = 0;
      int jokers = 0;
      for (Color k : q.pegs()) {
        if (k == spec.joker()) {
          ++jokers;
        } else if (m & color_bit(k)) {
          legal = false;
        } else {
          m |= color_bit(k);
        }
      }
      legal = legal && jokers < p;
    }
    if (legal) out.push_back(q);
    int i = p - 1;
    while (i >= 0 && ++digits[static_cast<std::size_t>(i)] == universe) digits[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

/// The x prescribed opening questions <pk, pk+1, ..., pk+p-1> for k < x.
inline std::vector<Code> fixed_opening_questions(const GameSpec& spec) {
  if (spec.opening > 0 && spec.pegs * spec.opening > spec.colors)
    throw std::invalid_argument("opening needs p*x <= c");
  std::vector<Code> out;
  for (int k = 0; k < spec.opening; ++k) {
    Code q;
    for (int i = 0; i < spec.pegs; ++i) q.push_back(spec.pegs * k + i);
    out.push_back(q);
  }
  return out;
}

/// Formats a code as "(0,1,2)"; the joker (when given) prints as "J".
inline std::string to_string(const Code& code, std::optional<Color> joker = std::nullopt) {
  std::string s = "(";
  for (int i = 0; i < code.size(); ++i) {
    if (i) s += ',';
    if (joker && code[i] == *joker)
      s += 'J';
    else
      s += std::to_string(code[i]);
  }
  s += ')';
  return s;
}

/// Parses "(0,1,2)" or "0,1,2"; "J" maps to the given joker color.
inline Code parse_code(std::string_view text, std::optional<Color> joker = std::nullopt) {
  std::string body(text);
  body.erase(std::remove_if(body.begin(), body.end(), [](char ch) { return ch == ' '; }), body.end());
  if (!body.empty() && body.front() == '(') {
    if (body.back() != ')') throw std::invalid_argument("unbalanced parentheses in code");
    body = body.substr(1, body.size() - 2);
  }
  Code code;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "J") {
      if (!joker) throw std::invalid_argument("joker not allowed here");
      code.push_back(*joker);
      continue;
    }
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad color '" + item + "'");
    code.push_back(std::stoi(item));
  }
  return code;
}

/// Label such as "1B2W" (or "1B" in black-only mode).
inline std::string to_string(const Feedback& f) {
  std::string s = std::to_string(f.black) + "B";
  if (f.white) s += std::to_string(*f.white) + "W";
  return s;
}

/// Inverse of to_string(Feedback).
inline Feedback parse_feedback(std::string_view text) {
  Feedback f;
  const auto b = text.find('B');
  if (b == std::string_view::npos || b == 0) throw std::invalid_argument("bad answer label '" + std::string(text) + "'");
  auto number = [&](std::string_view digits) {
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
      throw std::invalid_argument("bad answer label '" + std::string(text) + "'");
    return std::stoi(std::string(digits));
  };
  f.black = number(text.substr(0, b));
  std::string_view rest = text.substr(b + 1);
  if (!rest.empty()) {
    if (rest.back() != 'W') throw std::invalid_argument("bad answer label '" + std::string(text) + "'");
    f.white = number(rest.substr(0, rest.size() - 1));
  }
  return f;
}

}  // namespace abgame
