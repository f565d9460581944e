// solver.hpp -- exact worst-case solver for AB-style games.
//
// The search answers "can the codebreaker always win within d questions from
// this candidate set?" by depth-bounded minimax: some question must split the
// candidates so that every non-winning answer class is solvable in d-1. The
// codemaker is a devil's advocate that may pick any answer consistent with a
// nonempty class. Exact values come from iterative deepening.
//
// Pruning, all exactness-preserving:
//  - counting bound: at most 1 + A*N(d-1) secrets are resolvable in d
//    questions when a question has at most A non-winning answers;
//  - symmetry: only one question per orbit of the group stabilizing the
//    position (see symmetry.hpp);
//  - questions inducing an identical partition are tried once;
//  - move ordering by smallest worst class;
//  - a transposition cache of proven bounds per candidate set.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "abgame/code.hpp"
#include "abgame/symmetry.hpp"

namespace abgame {

/// Secrets consistent with the history so far, in lexicographic order.
using CandidateSet = std::vector<Code>;

/// Decision-tree node: a question and one child per non-winning answer.
/// `answer` is the answer that leads from the parent to this node.
struct StrategyNode {
  Code question;
  Feedback answer;
  /// The question itself is still a possible secret (the p-black leaf).
  bool wins = false;
  std::vector<StrategyNode> children;

  friend bool operator==(const StrategyNode&, const StrategyNode&) = default;
};

enum class SolveStatus { exact, upper_bound_only, lower_bound_only };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::exact:
      return "exact";
    case SolveStatus::upper_bound_only:
      return "upper-bound-only";
    case SolveStatus::lower_bound_only:
      return "lower-bound-only";
  }
  return "?";
}

struct SolveResult {
  int value = 0;
  std::optional<StrategyNode> tree;
  SolveStatus status = SolveStatus::exact;
  std::uint64_t nodes = 0;
};

/// Thrown when a node or time budget runs out before a verdict is reached.
class SearchLimitExceeded : public std::runtime_error {
 public:
  SearchLimitExceeded() : std::runtime_error("search budget exhausted") {}
};

struct SolverOptions {
  unsigned workers = 1;
  /// Zero disables the limit.
  std::uint64_t max_nodes = 0;
  std::chrono::milliseconds time_limit{0};
  bool use_symmetry = true;
  /// Key the transposition cache by the color-canonical form of the
  /// candidate set instead of the exact set.
  bool canonical_cache = false;
  /// Precompute the grading table (one byte per entry) when
  /// |questions|*|secrets| fits.
  std::size_t table_limit = std::size_t{1} << 29;
  /// Approximate transposition cache size in 64-bit words; a full shard is
  /// cleared. Zero disables the limit.
  std::size_t cache_limit = std::size_t{1} << 27;
};

// ---------------------------------------------------------------------------
// Stateless helpers

/// Number of answers other than the winning one that a single question can
/// produce in this game (an upper bound used for counting arguments).
inline int nonwinning_answers(const GameSpec& spec) {
  const int p = spec.pegs;
  if (spec.mode == FeedbackMode::black_only) {
    if (spec.policy == QuestionPolicy::distinct && spec.colors == p) return p - 1;
    return p;
  }
  const int low = spec.policy == QuestionPolicy::distinct ? std::max(0, 2 * p - spec.colors) : 0;
  int count = 0;
  for (int b = 0; b <= p; ++b)
    for (int w = 0; b + w <= p; ++w) {
      if (b + w < low) continue;
      if (b == p || (b == p - 1 && w == 1)) continue;
      ++count;
    }
  return count;
}

/// Maximum number of secrets resolvable within `depth` questions when each
/// question has at most `fanout` non-winning answers: N(d) = 1 + fanout*N(d-1).
inline std::uint64_t max_resolvable(int depth, int fanout) {
  std::uint64_t n = 0;
  for (int d = 0; d < depth; ++d) {
    if (n > (std::uint64_t{1} << 50)) return std::uint64_t{1} << 60;
    n = 1 + static_cast<std::uint64_t>(fanout) * n;
  }
  return n;
}

/// Smallest number of questions that can possibly resolve n candidates.
inline int depth_lower_bound(std::uint64_t n, const GameSpec& spec) {
  if (n == 0) throw std::invalid_argument("depth_lower_bound needs n >= 1");
  const int fanout = nonwinning_answers(spec);
  int q = 1;
  while (max_resolvable(q, fanout) < n) ++q;
  return q;
}

inline CandidateSet filter(const CandidateSet& candidates, const Code& question, const Feedback& answer,
                           const GameSpec& spec) {
  CandidateSet out;
  for (const Code& s : candidates)
    if (grade(question, s, spec) == answer) out.push_back(s);
  return out;
}

/// Class sizes per answer, ordered by answer (black, then white).
inline std::vector<std::pair<Feedback, std::size_t>> partition_signature(const Code& question,
                                                                         const CandidateSet& candidates,
                                                                         const GameSpec& spec) {
  if (candidates.empty()) throw std::invalid_argument("partition_signature needs candidates");
  std::vector<std::size_t> counts(static_cast<std::size_t>(answer_count(spec.pegs, spec.mode)), 0);
  for (const Code& s : candidates) ++counts[feedback_answer(grade(question, s, spec), spec.pegs, spec.mode)];
  std::vector<std::pair<Feedback, std::size_t>> out;
  for (std::size_t a = 0; a < counts.size(); ++a)
    if (counts[a]) out.emplace_back(answer_feedback(static_cast<AnswerIndex>(a), spec.pegs, spec.mode), counts[a]);
  return out;
}

/// Key identifying a candidate set up to color permutations fixing the joker.
/// Sets related by such a permutation share a key; falls back to the exact
/// set (tagged) when canonization would branch too much.
inline std::vector<std::uint64_t> canonical_key(const CandidateSet& candidates, const GameSpec& spec) {
  const ColorMask fixed = spec.policy == QuestionPolicy::joker ? color_bit(spec.joker()) : 0;
  auto form = canonical_code_set(candidates, spec.question_universe(), fixed);
  if (form) return *form;
  std::vector<std::uint64_t> exact{~std::uint64_t{0}};
  for (const Code& s : candidates) exact.push_back(detail::pack(s));
  std::sort(exact.begin() + 1, exact.end());
  return exact;
}

struct ReplayReport {
  bool ok = true;
  int max_depth = 0;
  std::string error;
};

/// Plays the strategy against every secret and checks that each game ends
/// with the p-black answer within `claimed` questions (0 = no claim).
inline ReplayReport replay(const StrategyNode& root, const CandidateSet& secrets, const GameSpec& spec,
                           int claimed = 0) {
  ReplayReport report;
  const AnswerIndex win = win_answer(spec.pegs, spec.mode);
  for (const Code& s : secrets) {
    const StrategyNode* node = &root;
    int asked = 0;
    for (;;) {
      try {
        check_question(node->question, spec);
      } catch (const std::invalid_argument& e) {
        return {false, report.max_depth, "illegal question " + to_string(node->question) + ": " + e.what()};
      }
      ++asked;
      const Feedback f = grade(node->question, s, spec);
      if (feedback_answer(f, spec.pegs, spec.mode) == win) break;
      auto it = std::find_if(node->children.begin(), node->children.end(),
                             [&](const StrategyNode& c) { return c.answer == f; });
      if (it == node->children.end())
        return {false, report.max_depth, "no branch for answer " + to_string(f) + " on secret " + to_string(s)};
      node = &*it;
    }
    report.max_depth = std::max(report.max_depth, asked);
    if (claimed > 0 && asked > claimed) {
      report.ok = false;
      report.error = "secret " + to_string(s) + " needs " + std::to_string(asked) + " questions";
      return report;
    }
  }
  return report;
}

inline int tree_depth(const StrategyNode& node) {
  int d = 0;
  for (const StrategyNode& c : node.children) d = std::max(d, tree_depth(c));
  return d + 1;
}

// ---------------------------------------------------------------------------

class Solver {
 public:
  /// Full game: secrets and questions generated from the spec.
  explicit Solver(const GameSpec& spec, SolverOptions options = {})
      : Solver(spec, enumerate_secrets(spec), enumerate_questions(spec), {}, options) {}

  /// Game from an arbitrary position: the given secrets, question list and
  /// symmetry-relevant structure of the position (`base`). Question order
  /// should be lexicographic for canonical output.
  Solver(const GameSpec& spec, std::vector<Code> secrets, std::vector<Code> questions, std::vector<Feature> base,
         SolverOptions options = {})
      : spec_(spec),
        options_(options),
        secrets_(std::move(secrets)),
        questions_(std::move(questions)),
        base_(std::move(base)) {
    spec_.validate();
    if (options_.workers == 0) options_.workers = 1;
    p_ = spec_.pegs;
    universe_ = spec_.question_universe();
    if (spec_.policy == QuestionPolicy::joker) {
      base_.push_back(fixed_color_feature(p_, spec_.joker()));
      fixed_colors_ = color_bit(spec_.joker());
    }
    win_ = win_answer(p_, spec_.mode);
    answers_ = answer_count(p_, spec_.mode);
    fanout_ = nonwinning_answers(spec_);
    for (int d = 0; d < static_cast<int>(max_res_.size()); ++d) max_res_[static_cast<std::size_t>(d)] = max_resolvable(d, fanout_);

    for (const Code& s : secrets_) secret_masks_.push_back(s.mask());
    for (const Code& q : questions_) {
      question_masks_.push_back(q.mask());
      question_simple_.push_back(spec_.mode == FeedbackMode::black_only || spec_.policy != QuestionPolicy::extended);
    }
    secret_of_question_.assign(questions_.size(), -1);
    for (std::size_t qi = 0; qi < questions_.size(); ++qi) {
      auto it = std::lower_bound(secrets_.begin(), secrets_.end(), questions_[qi]);
      if (it != secrets_.end() && *it == questions_[qi])
        secret_of_question_[qi] = static_cast<int>(it - secrets_.begin());
    }
    if (questions_.size() * secrets_.size() <= options_.table_limit) {
      table_.resize(questions_.size() * secrets_.size());  // secret-major
      for (std::size_t si = 0; si < secrets_.size(); ++si)
        for (std::size_t qi = 0; qi < questions_.size(); ++qi)
          table_[si * questions_.size() + qi] = compute_grade(static_cast<std::uint32_t>(qi), static_cast<std::uint32_t>(si));
    }
    for (int k = 0; k < spec_.opening; ++k) {
      const Code o = fixed_opening_questions(spec_)[static_cast<std::size_t>(k)];
      auto it = std::lower_bound(questions_.begin(), questions_.end(), o);
      if (it == questions_.end() || *it != o) throw std::invalid_argument("opening question not in question set");
      opening_.push_back(static_cast<std::uint32_t>(it - questions_.begin()));
    }
  }

  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  const GameSpec& spec() const { return spec_; }
  const std::vector<Code>& secrets() const { return secrets_; }
  const std::vector<Code>& questions() const { return questions_; }
  std::uint64_t nodes() const { return nodes_.load(); }

  /// Can every secret be identified within `depth` questions (including any
  /// fixed opening)?
  bool solvable(int depth) {
    start_clock();
    return solve_opening(all_indices(), 0, depth, {});
  }

  /// Same question for a sub-position given as codes (all must be secrets of
  /// this solver). The opening is not replayed. Symmetry pruning is used only
  /// if `invariant` says the set is mapped onto itself by every symmetry of
  /// the base features, or if it is the whole secret set.
  bool solvable(const CandidateSet& candidates, int depth, bool invariant = false) {
    start_clock();
    return solve_node(to_indices(candidates), depth, {}, use_symmetry_for(candidates, invariant), true);
  }

  /// Strategy tree of depth <= `depth` from the root, if one exists.
  std::optional<StrategyNode> strategy(int depth) {
    if (!solvable(depth)) return std::nullopt;
    return build_opening(all_indices(), 0, depth, {});
  }

  std::optional<StrategyNode> strategy(const CandidateSet& candidates, int depth, bool invariant = false) {
    if (!solvable(candidates, depth, invariant)) return std::nullopt;
    return build_node(to_indices(candidates), depth, {}, use_symmetry_for(candidates, invariant));
  }

  /// Exact worst-case value if it is at most `budget` (with witness tree),
  /// otherwise lower-bound-only with value budget+1.
  SolveResult solve_exact(int budget, bool with_tree = true) {
    if (budget < 1) throw std::invalid_argument("budget must be at least 1");
    SolveResult result;
    const int start = std::min(budget, root_lower_bound());
    for (int d = start; d <= budget; ++d) {
      if (solvable(d)) {
        result.value = d;
        result.status = SolveStatus::exact;
        if (with_tree) result.tree = build_opening(all_indices(), 0, d, {});
        result.nodes = nodes();
        return result;
      }
    }
    result.value = budget + 1;
    result.status = SolveStatus::lower_bound_only;
    result.nodes = nodes();
    return result;
  }

  /// Strategy within q questions (status upper-bound-only) or, when none
  /// exists, lower-bound-only with value q+1.
  SolveResult prove_upper(int q, bool with_tree = true) {
    if (q < 1) throw std::invalid_argument("q must be at least 1");
    SolveResult result;
    if (solvable(q)) {
      result.value = q;
      result.status = SolveStatus::upper_bound_only;
      if (with_tree) result.tree = build_opening(all_indices(), 0, q, {});
    } else {
      result.value = q + 1;
      result.status = SolveStatus::lower_bound_only;
    }
    result.nodes = nodes();
    return result;
  }

  /// True when no strategy with at most q-1 questions exists.
  bool prove_lower(int q) {
    if (q < 1) throw std::invalid_argument("q must be at least 1");
    if (q == 1) return true;
    return !solvable(q - 1);
  }

  int root_lower_bound() const {
    if (secrets_.empty()) return 1;
    if (spec_.opening > 0) return 1;
    return depth_lower_bound(secrets_.size(), spec_);
  }

 private:
  using Indices = std::vector<std::uint32_t>;

  struct Bounds {
    std::uint8_t lo = 0;    // not solvable below lo
    std::uint8_t hi = 255;  // solvable at hi
  };

  struct KeyHash {
    template <class T>
    std::size_t operator()(const std::vector<T>& v) const {
      std::uint64_t h = 1469598103934665603ull;
      for (std::uint64_t x : v) h = (h ^ x) * 1099511628211ull;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  using QuestionList = std::shared_ptr<const std::vector<std::uint32_t>>;

  struct Shard {
    std::mutex mutex;
    std::unordered_map<std::vector<std::uint64_t>, Bounds, KeyHash> map;
    std::size_t words = 0;
  };

  struct Cancelled {};

  struct Option {
    std::uint32_t worst;
    std::uint32_t classes;
    std::uint32_t question;
  };

  AnswerIndex compute_grade(std::uint32_t qi, std::uint32_t si) const {
    const Code& q = questions_[qi];
    const Code& s = secrets_[si];
    if (!question_simple_[qi]) return grade_index(q, s, spec_.mode);
    int b = 0;
    for (int i = 0; i < p_; ++i) b += q[i] == s[i];
    if (spec_.mode == FeedbackMode::black_only) return static_cast<AnswerIndex>(b);
    const int common = std::popcount(question_masks_[qi] & secret_masks_[si]);
    return static_cast<AnswerIndex>(b * (p_ + 1) + common - b);
  }

  AnswerIndex answer(std::uint32_t qi, std::uint32_t si) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(si) * questions_.size() + qi];
    return compute_grade(qi, si);
  }

  // Table rows of the candidates; empty without a table.
  std::vector<const AnswerIndex*> rows_of(const Indices& cand) const {
    std::vector<const AnswerIndex*> rows;
    if (table_.empty()) return rows;
    rows.reserve(cand.size());
    for (std::uint32_t s : cand) rows.push_back(table_.data() + static_cast<std::size_t>(s) * questions_.size());
    return rows;
  }

  Indices all_indices() const {
    Indices v(secrets_.size());
    for (std::uint32_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }

  Indices to_indices(const CandidateSet& candidates) const {
    Indices v;
    for (const Code& c : candidates) {
      auto it = std::lower_bound(secrets_.begin(), secrets_.end(), c);
      if (it == secrets_.end() || *it != c) throw std::invalid_argument("candidate is not a secret of this game");
      v.push_back(static_cast<std::uint32_t>(it - secrets_.begin()));
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  // The time limit counts from the first search call on this solver.
  bool use_symmetry_for(const CandidateSet& candidates, bool invariant) const {
    return options_.use_symmetry && (invariant || candidates.size() == secrets_.size());
  }

  void start_clock() {
    std::call_once(clock_once_, [this] { started_ = std::chrono::steady_clock::now(); });
  }

  void tick() {
    const std::uint64_t n = ++nodes_;
    if (cancel_flag() && cancel_flag()->load(std::memory_order_relaxed)) throw Cancelled{};
    if (options_.max_nodes && n > options_.max_nodes) throw SearchLimitExceeded();
    if (options_.time_limit.count() > 0 && (n & 1023) == 0 &&
        std::chrono::steady_clock::now() - started_ > options_.time_limit)
      throw SearchLimitExceeded();
  }

  static const std::atomic<bool>*& cancel_flag() {
    thread_local const std::atomic<bool>* flag = nullptr;
    return flag;
  }

  // Partition of `cand` by question qi; classes[a] holds the members with answer a.
  std::vector<Indices> classes_of(const Indices& cand, std::uint32_t qi) const {
    std::vector<Indices> classes(static_cast<std::size_t>(answers_));
    for (std::uint32_t s : cand) classes[answer(qi, s)].push_back(s);
    return classes;
  }

  std::vector<std::uint64_t> cache_key(const Indices& cand) const {
    if (options_.canonical_cache) {
      std::vector<Code> codes;
      codes.reserve(cand.size());
      for (std::uint32_t s : cand) codes.push_back(secrets_[s]);
      auto form = canonical_code_set(codes, universe_, fixed_colors_, false, 256);
      if (form) return *form;
    }
    std::vector<std::uint64_t> key{~std::uint64_t{0}};
    key.insert(key.end(), cand.begin(), cand.end());
    return key;
  }

  Shard& shard_for(const std::vector<std::uint64_t>& key) { return shards_[KeyHash{}(key) % shards_.size()]; }

  std::optional<Bounds> lookup(const std::vector<std::uint64_t>& key) {
    Shard& sh = shard_for(key);
    std::lock_guard lock(sh.mutex);
    auto it = sh.map.find(key);
    if (it == sh.map.end()) return std::nullopt;
    return it->second;
  }

  void store(const std::vector<std::uint64_t>& key, int depth, bool ok) {
    Shard& sh = shard_for(key);
    std::lock_guard lock(sh.mutex);
    auto [it, inserted] = sh.map.try_emplace(key);
    if (inserted) {
      sh.words += key.size() + 8;
      if (options_.cache_limit && sh.words > options_.cache_limit / shards_.size()) {
        sh.map.clear();
        sh.words = key.size() + 8;
        it = sh.map.try_emplace(key).first;
      }
    }
    Bounds& b = it->second;
    if (ok)
      b.hi = static_cast<std::uint8_t>(std::min<int>(b.hi, depth));
    else
      b.lo = static_cast<std::uint8_t>(std::max<int>(b.lo, depth + 1));
  }

  // First question (in index order) that sends every candidate to its own class.
  std::optional<std::uint32_t> find_splitter(const Indices& cand) {
    const auto rows = rows_of(cand);
    for (std::uint32_t qi = 0; qi < questions_.size(); ++qi) {
      std::uint64_t seen[2] = {0, 0};
      bool ok = true;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        const AnswerIndex a = rows.empty() ? compute_grade(qi, cand[i]) : rows[i][qi];
        std::uint64_t& word = seen[a >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (a & 63);
        if (word & bit) {
          ok = false;
          break;
        }
        word |= bit;
      }
      if (ok) return qi;
    }
    return std::nullopt;
  }

  // Questions that are canonical under the group fixing the history, or null
  // when that group is trivial. Siblings share a history, so lists are cached.
  QuestionList canonical_questions(const Indices& history) {
    {
      std::lock_guard lock(orbit_mutex_);
      if (auto it = orbit_cache_.find(history); it != orbit_cache_.end()) return it->second;
    }
    std::vector<Feature> features = base_;
    for (std::uint32_t h : history) features.push_back(code_feature(questions_[h]));
    const SymmetryGroup group(p_, universe_, features);
    QuestionList list;
    if (!group.trivial()) {
      auto qs = std::make_shared<std::vector<std::uint32_t>>();
      for (std::uint32_t qi = 0; qi < questions_.size(); ++qi)
        if (group.canonical(questions_[qi]) == questions_[qi]) qs->push_back(qi);
      list = std::move(qs);
    }
    std::lock_guard lock(orbit_mutex_);
    if (orbit_entries_ > (std::size_t{1} << 26)) {
      orbit_cache_.clear();
      orbit_entries_ = 0;
    }
    orbit_entries_ += history.size() + (list ? list->size() : 0) + 8;
    orbit_cache_.emplace(history, list);
    return list;
  }

  std::vector<Option> options_for(const Indices& cand, int depth, const Indices& history, bool& symmetric) {
    QuestionList list;
    if (symmetric) {
      list = canonical_questions(history);
      if (!list) symmetric = false;
    }
    const std::uint64_t limit = max_res_[static_cast<std::size_t>(depth - 1)];
    std::vector<Option> out;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> seen;  // partition hash -> questions
    std::vector<AnswerIndex> answers(cand.size());
    std::array<std::uint32_t, 81> counts{};
    const auto rows = rows_of(cand);
    const std::size_t m = list ? list->size() : questions_.size();
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint32_t qi = list ? (*list)[j] : static_cast<std::uint32_t>(j);
      std::fill_n(counts.begin(), answers_, 0u);
      std::uint64_t h = 1469598103934665603ull;
      bool too_large = false;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        const AnswerIndex a = rows.empty() ? compute_grade(qi, cand[i]) : rows[i][qi];
        answers[i] = a;
        if (++counts[a] > limit && a != win_) {
          too_large = true;
          break;
        }
        h = (h ^ a) * 1099511628211ull;
      }
      if (too_large) continue;
      std::uint32_t worst = 0, classes = 0;
      for (int a = 0; a < answers_; ++a) {
        if (!counts[static_cast<std::size_t>(a)]) continue;
        ++classes;
        if (a != win_) worst = std::max(worst, counts[static_cast<std::size_t>(a)]);
      }
      if (worst > limit) continue;
      if (classes == 1 && worst > 0) continue;  // no information, no win
      auto& bucket = seen[h];
      bool duplicate = false;
      for (std::uint32_t other : bucket) {
        bool same = true;
        for (std::size_t i = 0; i < cand.size() && same; ++i) same = answer(other, cand[i]) == answers[i];
        if (same) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      bucket.push_back(qi);
      out.push_back({worst, classes, qi});
    }
    std::sort(out.begin(), out.end(), [](const Option& a, const Option& b) {
      if (a.worst != b.worst) return a.worst < b.worst;
      if (a.classes != b.classes) return a.classes > b.classes;
      return a.question < b.question;
    });
    return out;
  }

  // Non-winning classes of a question, largest first (ties by answer).
  std::vector<Indices> branches(const Indices& cand, std::uint32_t qi) const {
    auto classes = classes_of(cand, qi);
    std::vector<Indices> out;
    for (int a = 0; a < answers_; ++a)
      if (a != win_ && !classes[static_cast<std::size_t>(a)].empty()) out.push_back(std::move(classes[static_cast<std::size_t>(a)]));
    std::stable_sort(out.begin(), out.end(), [](const Indices& x, const Indices& y) { return x.size() > y.size(); });
    return out;
  }

  // Refuted without search: counting bound or a cached lower bound.
  bool known_failure(const Indices& part, int depth) {
    if (part.size() <= 1) return false;
    if (depth <= 1) return true;
    const int d = std::min(depth, static_cast<int>(max_res_.size()) - 2);
    if (part.size() > max_res_[static_cast<std::size_t>(d)]) return true;
    const auto b = lookup(cache_key(part));
    return b && d < b->lo;
  }

  bool try_question(const Indices& cand, std::uint32_t qi, int depth, const Indices& history, bool symmetric,
                    bool top) {
    auto parts = branches(cand, qi);
    for (const Indices& part : parts)
      if (known_failure(part, depth - 1)) return false;
    Indices next_history = history;
    if (symmetric) next_history.push_back(qi);
    if (top && options_.workers > 1 && parts.size() > 1) return all_parallel(parts, depth - 1, next_history, symmetric);
    for (const Indices& part : parts)
      if (!solve_node(part, depth - 1, next_history, symmetric, false)) return false;
    return true;
  }

  bool all_parallel(const std::vector<Indices>& parts, int depth, const Indices& history, bool symmetric) {
    std::atomic<bool> failed{false};
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
      cancel_flag() = &failed;
      while (!failed.load()) {
        const std::size_t i = next++;
        if (i >= parts.size()) break;
        try {
          if (!solve_node(parts[i], depth, history, symmetric, false)) failed = true;
        } catch (const Cancelled&) {
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
      cancel_flag() = nullptr;
    };
    std::vector<std::thread> threads;
    const unsigned n = std::min<unsigned>(options_.workers, static_cast<unsigned>(parts.size()));
    for (unsigned t = 0; t < n; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    return !failed.load();
  }

  bool solve_node(const Indices& cand, int depth, const Indices& history, bool symmetric, bool top) {
    tick();
    const std::size_t n = cand.size();
    if (n == 0) return true;
    if (depth <= 0) return false;
    if (n == 1) return true;
    if (depth == 1) return false;
    if (depth >= static_cast<int>(max_res_.size()) - 1) depth = static_cast<int>(max_res_.size()) - 2;
    if (n > max_res_[static_cast<std::size_t>(depth)]) return false;
    const auto key = cache_key(cand);
    if (auto b = lookup(key)) {
      if (depth >= b->hi) return true;
      if (depth < b->lo) return false;
    }
    if (depth == 2) {
      const bool ok = find_splitter(cand).has_value();
      store(key, depth, ok);
      return ok;
    }
    bool ok = false;
    for (const Option& opt : options_for(cand, depth, history, symmetric)) {
      if (try_question(cand, opt.question, depth, history, symmetric, top)) {
        ok = true;
        break;
      }
    }
    store(key, depth, ok);
    return ok;
  }

  bool solve_opening(const Indices& cand, int k, int depth, const Indices& history) {
    if (k == spec_.opening) return solve_node(cand, depth, history, options_.use_symmetry, true);
    if (cand.empty()) return true;
    if (depth <= 0) return false;
    const std::uint32_t qi = opening_[static_cast<std::size_t>(k)];
    Indices next_history = history;
    next_history.push_back(qi);
    for (const Indices& part : branches(cand, qi))
      if (!solve_opening(part, k + 1, depth - 1, next_history)) return false;
    return true;
  }

  StrategyNode leaf(std::uint32_t s) const { return {secrets_[s], {}, true, {}}; }

  StrategyNode node_for(const Indices& cand, std::uint32_t qi, const std::vector<StrategyNode>& kids) const {
    StrategyNode node{questions_[qi], {}, false, kids};
    for (std::uint32_t s : cand)
      if (answer(qi, s) == win_) node.wins = true;
    return node;
  }

  Feedback feedback_of(const Indices& part, std::uint32_t qi) const {
    return answer_feedback(answer(qi, part.front()), p_, spec_.mode);
  }

  std::vector<StrategyNode> children_by_answer(std::uint32_t qi, std::vector<std::pair<Indices, StrategyNode>> kids) {
    std::sort(kids.begin(), kids.end(), [&](const auto& a, const auto& b) {
      return answer(qi, a.first.front()) < answer(qi, b.first.front());
    });
    std::vector<StrategyNode> out;
    for (auto& [part, node] : kids) {
      node.answer = feedback_of(part, qi);
      out.push_back(std::move(node));
    }
    return out;
  }

  StrategyNode build_node(const Indices& cand, int depth, const Indices& history, bool symmetric) {
    if (cand.size() == 1) return leaf(cand.front());
    if (depth >= static_cast<int>(max_res_.size()) - 1) depth = static_cast<int>(max_res_.size()) - 2;
    std::optional<std::uint32_t> chosen;
    bool child_symmetric = symmetric;
    if (depth == 2) {
      chosen = find_splitter(cand);
    } else {
      for (const Option& opt : options_for(cand, depth, history, child_symmetric)) {
        if (try_question(cand, opt.question, depth, history, child_symmetric, false)) {
          chosen = opt.question;
          break;
        }
      }
    }
    if (!chosen) throw std::logic_error("strategy extraction failed on a solvable position");
    Indices next_history = history;
    if (child_symmetric) next_history.push_back(*chosen);
    std::vector<std::pair<Indices, StrategyNode>> kids;
    for (Indices& part : branches(cand, *chosen)) {
      StrategyNode child = build_node(part, depth - 1, next_history, child_symmetric);
      kids.emplace_back(std::move(part), std::move(child));
    }
    return node_for(cand, *chosen, children_by_answer(*chosen, std::move(kids)));
  }

  StrategyNode build_opening(const Indices& cand, int k, int depth, const Indices& history) {
    if (k == spec_.opening) return build_node(cand, depth, history, options_.use_symmetry);
    const std::uint32_t qi = opening_[static_cast<std::size_t>(k)];
    Indices next_history = history;
    next_history.push_back(qi);
    std::vector<std::pair<Indices, StrategyNode>> kids;
    for (Indices& part : branches(cand, qi)) {
      StrategyNode child = build_opening(part, k + 1, depth - 1, next_history);
      kids.emplace_back(std::move(part), std::move(child));
    }
    return node_for(cand, qi, children_by_answer(qi, std::move(kids)));
  }

  GameSpec spec_;
  SolverOptions options_;
  std::vector<Code> secrets_;
  std::vector<Code> questions_;
  std::vector<Feature> base_;
  int p_ = 0;
  int universe_ = 0;
  ColorMask fixed_colors_ = 0;
  AnswerIndex win_ = 0;
  int answers_ = 0;
  int fanout_ = 0;
  std::array<std::uint64_t, 40> max_res_{};
  std::vector<ColorMask> secret_masks_;
  std::vector<ColorMask> question_masks_;
  std::vector<bool> question_simple_;
  std::vector<int> secret_of_question_;
  std::vector<AnswerIndex> table_;
  std::vector<std::uint32_t> opening_;
  std::array<Shard, 64> shards_;
  std::mutex orbit_mutex_;
  std::unordered_map<Indices, QuestionList, KeyHash> orbit_cache_;
  std::size_t orbit_entries_ = 0;
  std::atomic<std::uint64_t> nodes_{0};
  std::chrono::steady_clock::time_point started_{};
  std::once_flag clock_once_;
};

}  // namespace abgame
