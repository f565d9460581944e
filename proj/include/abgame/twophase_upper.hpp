// twophase_upper.hpp -- two-phase codebreaker strategy for black-peg upper
// bounds.
//
// Reduction phase: ask cyclic questions <k> = (k, k+1, ..., k+p-1) mod c,
// starting with <0>. While every answer is zero the codebreaker walks down
// (<c-1>, <c-2>, ...); after the first answer with 1..p-1 blacks it restarts
// upwards at <1>, <2>, .... A p-black answer ends the game. After x
// questions the end-game is played with all questions.
//
// Up to a color rotation the reduction phase is the list <0>..<x-1> with an
// answer sequence that is either all zero or starts with a nonzero answer,
// so verifying every such sequence's end-game within q-x questions shows
// abb(p,c) <= q; with c >= p^2 and x >= p^2-p+1 the same end-games appear for
// every larger c, giving abb(p,c') <= q + c' - c.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "abgame/code.hpp"
#include "abgame/solver.hpp"
#include "abgame/symmetry.hpp"

namespace abgame::twophase {

inline int mod(int a, int c) { return ((a % c) + c) % c; }

/// <k>: colors k, k+1, ..., k+p-1 modulo c.
inline Code cyclic_question(int k, int p, int c) {
  if (c < p) throw std::invalid_argument("need c >= p");
  Code q;
  for (int i = 0; i < p; ++i) q.push_back(mod(k + i, c));
  return q;
}

/// Black-peg counts received during the reduction phase, in canonical order.
struct AnswerSequence {
  std::vector<int> blacks;

  int length() const { return static_cast<int>(blacks.size()); }
  int total() const { return std::accumulate(blacks.begin(), blacks.end(), 0); }

  friend bool operator==(const AnswerSequence&, const AnswerSequence&) = default;
  friend auto operator<=>(const AnswerSequence&, const AnswerSequence&) = default;
};

inline std::string to_string(const AnswerSequence& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.blacks.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s.blacks[i]);
  }
  return out + ")";
}

/// Whether the sequence is a canonical reduction-phase outcome for p pegs.
inline bool is_canonical_sequence(const AnswerSequence& s, int p) {
  if (s.blacks.empty()) return false;
  for (int b : s.blacks)
    if (b < 0 || b > p - 1) return false;
  if (s.total() > p) return false;
  return s.total() == 0 || s.blacks.front() != 0;
}

struct ReductionStep {
  int k = 0;
  int black = 0;
};

/// Next cyclic question index, or nullopt once x questions were asked or an
/// answer had p blacks.
inline std::optional<int> reduction_question_order(std::span<const ReductionStep> history, int p, int c, int x) {
  if (x < 1 || x > c) throw std::invalid_argument("need 1 <= x <= c");
  const int n = static_cast<int>(history.size());
  if (n >= x) return std::nullopt;
  for (const ReductionStep& h : history)
    if (h.black == p) return std::nullopt;
  if (n == 0) return 0;
  for (int i = 0; i < n; ++i)
    if (history[static_cast<std::size_t>(i)].black != 0) return 1 + (n - i - 1);
  return mod(c - n, c);
}

/// Rotation k -> k - rotation (mod c) and the resulting canonical sequence.
struct CanonicalHistory {
  int rotation = 0;
  AnswerSequence sequence;
};

inline CanonicalHistory canonicalize_history(std::span<const ReductionStep> history, int c) {
  if (history.empty()) throw std::invalid_argument("empty history");
  const int n = static_cast<int>(history.size());
  int start = mod(c - (n - 1), c);
  for (const ReductionStep& h : history) {
    if (h.black != 0) {
      start = mod(h.k, c);
      break;
    }
  }
  std::map<int, int> asked;
  for (const ReductionStep& h : history) asked[mod(h.k, c)] = h.black;
  if (static_cast<int>(asked.size()) != n) throw std::invalid_argument("history repeats a question");
  CanonicalHistory out{start, {}};
  for (int j = 0; j < n; ++j) {
    auto it = asked.find(mod(start + j, c));
    if (it == asked.end()) throw std::invalid_argument("history is not a rotated interval of cyclic questions");
    out.sequence.blacks.push_back(it->second);
  }
  return out;
}

/// Every canonical sequence of length x: entries in 0..p-1, sum at most p,
/// and either all zero or nonzero first entry. Lexicographic order.
inline std::vector<AnswerSequence> enumerate_answer_sequences(int p, int x) {
  if (x < 1) throw std::invalid_argument("need x >= 1");
  if (p < 1) throw std::invalid_argument("need p >= 1");
  std::vector<AnswerSequence> out;
  AnswerSequence cur;
  auto rec = [&](auto&& self, int left) -> void {
    if (cur.length() == x) {
      if (is_canonical_sequence(cur, p)) out.push_back(cur);
      return;
    }
    for (int b = 0; b <= std::min(p - 1, left); ++b) {
      if (cur.blacks.empty() && b == 0 && x > 1) {
        // Leading zero forces the all-zero sequence.
        cur.blacks.assign(static_cast<std::size_t>(x), 0);
        out.push_back(cur);
        cur.blacks.clear();
        continue;
      }
      cur.blacks.push_back(b);
      self(self, left - b);
      cur.blacks.pop_back();
    }
  };
  rec(rec, p);
  return out;
}

/// Thrown when no secret is consistent with a sequence for the given c.
class InfeasibleSequence : public std::runtime_error {
 public:
  explicit InfeasibleSequence(const AnswerSequence& s)
      : std::runtime_error("no secret is consistent with " + to_string(s)) {}
};

inline std::vector<Code> reduction_questions(int p, int c, int x) {
  std::vector<Code> out;
  for (int k = 0; k < x; ++k) out.push_back(cyclic_question(k, p, c));
  return out;
}

/// Secrets of ABB(p,c) answering <j> with sequence[j] blacks for every j.
inline CandidateSet endgame_candidates(int p, int c, const AnswerSequence& sequence, const CandidateSet& all) {
  const auto questions = reduction_questions(p, c, sequence.length());
  CandidateSet out;
  for (const Code& s : all) {
    bool ok = true;
    for (std::size_t j = 0; j < questions.size() && ok; ++j) {
      int b = 0;
      for (int i = 0; i < p; ++i) b += questions[j][i] == s[i];
      ok = b == sequence.blacks[j];
    }
    if (ok) out.push_back(s);
  }
  if (out.empty()) throw InfeasibleSequence(sequence);
  return out;
}

inline CandidateSet endgame_candidates(int p, int c, const AnswerSequence& sequence) {
  return endgame_candidates(p, c, sequence, enumerate_secrets(abb_spec(p, c)));
}

/// Position-preserving color bijection mapping set `from` onto set `to`
/// (restricted to colors that occur), if one exists. Result[k] = image of k
/// or -1 for colors that do not occur.
inline std::optional<std::vector<int>> find_color_bijection(const CandidateSet& from, const CandidateSet& to) {
  if (from.size() != to.size()) return std::nullopt;
  if (from.empty()) return std::vector<int>{};
  const int p = from.front().size();
  auto occurrences = [&](const CandidateSet& set) {
    std::vector<std::vector<int>> occ(kMaxColors, std::vector<int>(static_cast<std::size_t>(p), 0));
    for (const Code& s : set)
      for (int i = 0; i < p; ++i) ++occ[s[i]][static_cast<std::size_t>(i)];
    return occ;
  };
  const auto occ_from = occurrences(from), occ_to = occurrences(to);
  std::vector<int> src, dst;
  for (int k = 0; k < kMaxColors; ++k) {
    if (std::any_of(occ_from[static_cast<std::size_t>(k)].begin(), occ_from[static_cast<std::size_t>(k)].end(), [](int v) { return v > 0; })) src.push_back(k);
    if (std::any_of(occ_to[static_cast<std::size_t>(k)].begin(), occ_to[static_cast<std::size_t>(k)].end(), [](int v) { return v > 0; })) dst.push_back(k);
  }
  if (src.size() != dst.size()) return std::nullopt;
  const std::set<Code> target(to.begin(), to.end());
  std::vector<int> image(kMaxColors, -1);
  std::vector<bool> used(kMaxColors, false);
  auto rec = [&](auto&& self, std::size_t idx) -> bool {
    if (idx == src.size()) {
      for (const Code& s : from) {
        Code m;
        for (int i = 0; i < p; ++i) m.push_back(image[s[i]]);
        if (!target.count(m)) return false;
      }
      return true;
    }
    const int k = src[idx];
    for (int t : dst) {
      if (used[static_cast<std::size_t>(t)] || occ_from[static_cast<std::size_t>(k)] != occ_to[static_cast<std::size_t>(t)]) continue;
      used[static_cast<std::size_t>(t)] = true;
      image[static_cast<std::size_t>(k)] = t;
      if (self(self, idx + 1)) return true;
      used[static_cast<std::size_t>(t)] = false;
      image[static_cast<std::size_t>(k)] = -1;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  image.resize(static_cast<std::size_t>(src.back() + 1));
  return image;
}

struct MappingResult {
  bool equivalent = false;
  /// Sequence in the smaller game that the larger game's sequence maps to.
  AnswerSequence reduced;
  /// Color image per color of the larger game (-1 when not surviving).
  std::vector<int> mapping;
};

/// Checks that the end-game of `sequence` in ABB(p,c1) after x1 = c1-y
/// questions is a color relabeling of an end-game of ABB(p,c0) after
/// x0 = c0-y questions, whose sequence drops x1-x0 zero answers.
inline MappingResult verify_mapping_equivalence(int p, int c1, int c0, int y, const AnswerSequence& sequence) {
  if (c1 < c0) throw std::invalid_argument("need c1 >= c0");
  if (c0 < p * p) throw std::invalid_argument("need c0 >= p^2");
  const int x1 = c1 - y, x0 = c0 - y;
  if (x0 < p * p - p + 1) throw std::invalid_argument("need x0 >= p^2-p+1");
  if (sequence.length() != x1) throw std::invalid_argument("sequence length must be c1-y");
  if (!is_canonical_sequence(sequence, p)) throw std::invalid_argument("sequence is not canonical");

  auto candidates_or_empty = [&](int c, const AnswerSequence& s) {
    try {
      return endgame_candidates(p, c, s);
    } catch (const InfeasibleSequence&) {
      return CandidateSet{};
    }
  };
  const CandidateSet big = candidates_or_empty(c1, sequence);

  // Drop `drop` zero entries (never the first one) in every possible way.
  const int drop = x1 - x0;
  std::vector<int> zeros;
  for (int j = 1; j < x1; ++j)
    if (sequence.blacks[static_cast<std::size_t>(j)] == 0) zeros.push_back(j);
  if (static_cast<int>(zeros.size()) < drop) return {};
  std::set<AnswerSequence> tried;
  std::vector<bool> pick(zeros.size(), false);
  std::fill(pick.end() - drop, pick.end(), true);
  do {
    AnswerSequence reduced;
    std::size_t z = 0;
    for (int j = 0; j < x1; ++j) {
      if (z < zeros.size() && zeros[z] == j) {
        if (pick[z++]) continue;
      }
      reduced.blacks.push_back(sequence.blacks[static_cast<std::size_t>(j)]);
    }
    if (!tried.insert(reduced).second) continue;
    const CandidateSet small = candidates_or_empty(c0, reduced);
    if (big.empty() && small.empty()) return {true, reduced, {}};
    if (auto m = find_color_bijection(big, small)) return {true, reduced, *m};
  } while (std::next_permutation(pick.begin(), pick.end()));
  return {};
}

// ---------------------------------------------------------------------------
// End-game verification

enum class CaseVerdict { solved, failed, infeasible };

inline const char* to_string(CaseVerdict v) {
  switch (v) {
    case CaseVerdict::solved:
      return "solved";
    case CaseVerdict::failed:
      return "FAILED";
    case CaseVerdict::infeasible:
      return "infeasible";
  }
  return "?";
}

struct CaseReport {
  AnswerSequence sequence;
  std::size_t candidates = 0;
  int budget = 0;
  CaseVerdict verdict = CaseVerdict::failed;
  std::uint64_t nodes = 0;
};

enum class UpperMode { generalizing, fixed };

struct UpperReport {
  int pegs = 0, colors = 0, q = 0, x = 0;
  UpperMode mode = UpperMode::fixed;
  std::vector<CaseReport> cases;
  bool all_solved = false;

  std::string statement() const {
    if (!all_solved) return "no bound: some end-game exceeds " + std::to_string(q - x) + " questions";
    const std::string p = std::to_string(pegs);
    if (mode == UpperMode::fixed) return "abb(" + p + "," + std::to_string(colors) + ") <= " + std::to_string(q);
    const int off = q - colors;
    const std::string sign = off == 0 ? "" : (off > 0 ? "+" + std::to_string(off) : std::to_string(off));
    return "abb(" + p + ",c) <= c" + sign + " for c >= " + std::to_string(colors);
  }
};

/// Whether c >= p^2 and x >= p^2-p+1, so end-games carry over to larger c.
inline bool generalizes(int p, int c, int x) { return c >= p * p && x >= p * p - p + 1; }

/// Solves the end-game of every canonical sequence within q-x questions.
/// End-game questions are all distinct-color questions over the c colors.
inline UpperReport verify_upper_bound(int p, int c, int q, int x, UpperMode mode, SolverOptions options = {}) {
  if (x < 1 || x > c) throw std::invalid_argument("need 1 <= x <= c");
  if (q <= x) throw std::invalid_argument("need q > x");
  if (mode == UpperMode::generalizing && !generalizes(p, c, x))
    throw std::invalid_argument("generalizing mode needs c >= p^2 and x >= p^2-p+1");
  const GameSpec spec = abb_spec(p, c);
  std::vector<Feature> base;
  for (const Code& rq : reduction_questions(p, c, x)) base.push_back(code_feature(rq));
  const unsigned workers = std::max(1u, options.workers);
  options.workers = 1;
  Solver solver(spec, enumerate_secrets(spec), enumerate_questions(spec), base, options);

  UpperReport report{p, c, q, x, mode, {}, false};
  for (const AnswerSequence& s : enumerate_answer_sequences(p, x)) report.cases.push_back({s, 0, q - x, CaseVerdict::failed, 0});

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next++;
      if (i >= report.cases.size()) return;
      CaseReport& cr = report.cases[i];
      try {
        CandidateSet cands = endgame_candidates(p, c, cr.sequence, solver.secrets());
        cr.candidates = cands.size();
        const std::uint64_t before = solver.nodes();
        cr.verdict = solver.solvable(cands, cr.budget, true) ? CaseVerdict::solved : CaseVerdict::failed;
        cr.nodes = solver.nodes() - before;
      } catch (const InfeasibleSequence&) {
        cr.verdict = CaseVerdict::infeasible;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = report.cases.size();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < workers; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  report.all_solved = std::none_of(report.cases.begin(), report.cases.end(),
                                   [](const CaseReport& r) { return r.verdict == CaseVerdict::failed; });
  return report;
}

/// Groups sequences whose end-game candidate sets are related by a color
/// and position relabeling; infeasible sequences form one class. Classes and
/// members keep enumeration order, so the first member is the representative.
inline std::vector<std::vector<std::size_t>> dedupe_sequences(std::span<const AnswerSequence> sequences, int p, int c) {
  const CandidateSet all = enumerate_secrets(abb_spec(p, c));
  std::map<std::vector<std::uint64_t>, std::size_t> class_of;
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    std::vector<std::uint64_t> key;
    try {
      const CandidateSet cands = endgame_candidates(p, c, sequences[i], all);
      auto form = canonical_code_set(cands, c, 0, true);
      if (form) {
        key = std::move(*form);
      } else {
        key = {~std::uint64_t{0}, i};  // canonization gave up: own class
      }
    } catch (const InfeasibleSequence&) {
      key = {};
    }
    auto [it, inserted] = class_of.try_emplace(key, classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(i);
  }
  return classes;
}

}  // namespace abgame::twophase
