// symmetry.hpp -- color/position symmetries of a game position.
//
// A position is described by a set of "features": per-position color sets
// that must be preserved (a previously asked question, the rows of an
// end-game state table, the joker). A symmetry is a pair (sigma, phi) of a
// position permutation and a color bijection that maps every feature onto
// itself. Colors with identical feature signatures are freely interchangeable;
// the group is stored as the list of valid sigma together with the induced
// map between signature classes.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "abgame/code.hpp"

namespace abgame {

/// Per-position color sets preserved by every symmetry.
using Feature = std::array<ColorMask, kMaxPegs>;

/// Feature describing a single code (each position holds one color).
inline Feature code_feature(const Code& code) {
  Feature f{};
  for (int i = 0; i < code.size(); ++i) f[static_cast<std::size_t>(i)] = color_bit(code[i]);
  return f;
}

/// Feature pinning one color at every position (used to keep the joker fixed).
inline Feature fixed_color_feature(int pegs, Color k) {
  Feature f{};
  for (int i = 0; i < pegs; ++i) f[static_cast<std::size_t>(i)] = color_bit(k);
  return f;
}

class SymmetryGroup {
 public:
  SymmetryGroup(int pegs, int universe, std::span<const Feature> features) : pegs_(pegs), universe_(universe) {
    build(features);
  }

  bool trivial() const { return trivial_; }
  std::size_t position_permutations() const { return perms_.size(); }

  /// Lexicographically smallest image of the question under the group.
  Code canonical(const Code& q) const {
    Code best = q;
    for (const Perm& perm : perms_) {
      // Colors seen so far with their targets, and per-class use counts.
      std::array<Color, kMaxPegs> from{}, to{};
      std::array<int, kMaxPegs> cls_id{}, cls_used{};
      int seen = 0, classes = 0;
      Code image;
      bool smaller = false;
      bool abort = false;
      for (int j = 0; j < pegs_; ++j) {
        const Color k = q[perm.inverse[static_cast<std::size_t>(j)]];
        int target = -1;
        for (int t = 0; t < seen; ++t)
          if (from[static_cast<std::size_t>(t)] == k) target = to[static_cast<std::size_t>(t)];
        if (target < 0) {
          const int cls = perm.class_target[static_cast<std::size_t>(class_of_[k])];
          int u = 0;
          while (u < classes && cls_id[static_cast<std::size_t>(u)] != cls) ++u;
          if (u == classes) {
            cls_id[static_cast<std::size_t>(classes++)] = cls;
            cls_used[static_cast<std::size_t>(u)] = 0;
          }
          target = class_colors_[static_cast<std::size_t>(cls)][static_cast<std::size_t>(cls_used[static_cast<std::size_t>(u)]++)];
          from[static_cast<std::size_t>(seen)] = k;
          to[static_cast<std::size_t>(seen++)] = static_cast<Color>(target);
        }
        image.push_back(target);
        // Early exit once the prefix is already larger than the best image.
        if (!smaller) {
          if (target > best[j]) {
            abort = true;
            break;
          }
          if (target < best[j]) smaller = true;
        }
      }
      if (!abort && smaller) best = image;
    }
    return best;
  }

 private:
  struct Perm {
    std::array<int, kMaxPegs> forward{};
    std::array<int, kMaxPegs> inverse{};
    std::vector<int> class_target;
  };

  using Signature = std::vector<std::uint8_t>;

  Signature act(const Signature& sig, const std::array<int, kMaxPegs>& forward) const {
    Signature out(sig.size(), 0);
    for (std::size_t f = 0; f < sig.size(); ++f)
      for (int i = 0; i < pegs_; ++i)
        if (sig[f] & (1u << i)) out[f] |= static_cast<std::uint8_t>(1u << forward[static_cast<std::size_t>(i)]);
    return out;
  }

  void build(std::span<const Feature> features) {
    std::vector<Signature> sigs(static_cast<std::size_t>(universe_), Signature(features.size(), 0));
    for (std::size_t f = 0; f < features.size(); ++f)
      for (int i = 0; i < pegs_; ++i)
        for (int k = 0; k < universe_; ++k)
          if (features[f][static_cast<std::size_t>(i)] & color_bit(k))
            sigs[static_cast<std::size_t>(k)][f] |= static_cast<std::uint8_t>(1u << i);

    std::map<Signature, int> class_ids;
    class_of_.fill(-1);
    for (int k = 0; k < universe_; ++k) {
      auto [it, inserted] = class_ids.try_emplace(sigs[static_cast<std::size_t>(k)], static_cast<int>(class_ids.size()));
      if (inserted) class_colors_.emplace_back();
      class_of_[static_cast<std::size_t>(k)] = it->second;
      class_colors_[static_cast<std::size_t>(it->second)].push_back(k);
    }
    std::vector<Signature> class_sig(class_colors_.size());
    for (const auto& [sig, id] : class_ids) class_sig[static_cast<std::size_t>(id)] = sig;

    bool free_colors = false;
    for (const auto& cls : class_colors_) free_colors |= cls.size() > 1;

    std::array<int, kMaxPegs> forward{};
    std::iota(forward.begin(), forward.begin() + pegs_, 0);
    do {
      Perm perm;
      perm.forward = forward;
      for (int i = 0; i < pegs_; ++i) perm.inverse[static_cast<std::size_t>(forward[static_cast<std::size_t>(i)])] = i;
      perm.class_target.resize(class_colors_.size());
      bool ok = true;
      for (std::size_t c = 0; c < class_colors_.size() && ok; ++c) {
        auto it = class_ids.find(act(class_sig[c], forward));
        ok = it != class_ids.end() &&
             class_colors_[static_cast<std::size_t>(it->second)].size() == class_colors_[c].size();
        if (ok) perm.class_target[c] = it->second;
      }
      if (ok) perms_.push_back(std::move(perm));
    } while (std::next_permutation(forward.begin(), forward.begin() + pegs_));
    trivial_ = perms_.size() == 1 && !free_colors;
  }

  int pegs_;
  int universe_;
  bool trivial_ = true;
  std::array<int, kMaxColors> class_of_{};
  std::vector<std::vector<int>> class_colors_;
  std::vector<Perm> perms_;
};

namespace detail {

/// Packs a code into 64 bits (6 bits per peg) so that integer order equals
/// lexicographic order for codes of equal length.
inline std::uint64_t pack(const Code& code) {
  std::uint64_t v = 0;
  for (int i = 0; i < code.size(); ++i) v = (v << 6) | code[i];
  return v;
}

class ColorCanonizer {
 public:
  ColorCanonizer(std::span<const Code> codes, int universe, ColorMask fixed, std::size_t leaf_cap)
      : codes_(codes.begin(), codes.end()), universe_(universe), fixed_(fixed), leaf_cap_(leaf_cap) {
    for (const Code& c : codes_) present_ |= c.mask();
    for (const Code& c : codes_) own_.insert(pack(c));
    for (int k = 0; k < universe_; ++k)
      if (!(fixed_ & color_bit(k))) free_labels_.push_back(k);
  }

  /// Canonical packed form, or nullopt when the branching cap is exceeded.
  std::optional<std::vector<std::uint64_t>> run() {
    std::vector<std::int64_t> cells(static_cast<std::size_t>(universe_), 0);
    for (int k = 0; k < universe_; ++k) {
      // Fixed colors keep their identity; absent colors never matter.
      if (fixed_ & color_bit(k))
        cells[static_cast<std::size_t>(k)] = -1 - k;
      else if (!(present_ & color_bit(k)))
        cells[static_cast<std::size_t>(k)] = std::numeric_limits<std::int64_t>::max();
    }
    refine(cells);
    search(cells);
    if (overflow_) return std::nullopt;
    return best_;
  }

 private:
  void refine(std::vector<std::int64_t>& cells) const {
    std::size_t distinct = count_distinct(cells);
    for (;;) {
      std::vector<std::vector<std::int64_t>> profile(static_cast<std::size_t>(universe_));
      for (int k = 0; k < universe_; ++k) profile[static_cast<std::size_t>(k)].push_back(cells[static_cast<std::size_t>(k)]);
      std::vector<std::vector<std::int64_t>> entries(static_cast<std::size_t>(universe_));
      for (const Code& c : codes_) {
        for (int i = 0; i < c.size(); ++i) {
          std::uint64_t h = static_cast<std::uint64_t>(i + 1);
          for (int j = 0; j < c.size(); ++j) {
            if (j == i) continue;
            h = h * 1000003u + static_cast<std::uint64_t>(j + 1) * 7919u + static_cast<std::uint64_t>(cells[c[j]]);
          }
          entries[c[i]].push_back(static_cast<std::int64_t>(h >> 1));
        }
      }
      for (int k = 0; k < universe_; ++k) {
        auto& e = entries[static_cast<std::size_t>(k)];
        std::sort(e.begin(), e.end());
        auto& p = profile[static_cast<std::size_t>(k)];
        p.insert(p.end(), e.begin(), e.end());
      }
      std::vector<std::vector<std::int64_t>> sorted = profile;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      std::vector<std::int64_t> next(cells.size());
      for (int k = 0; k < universe_; ++k) {
        if (cells[static_cast<std::size_t>(k)] < 0 ||
            cells[static_cast<std::size_t>(k)] == std::numeric_limits<std::int64_t>::max()) {
          next[static_cast<std::size_t>(k)] = cells[static_cast<std::size_t>(k)];
          continue;
        }
        next[static_cast<std::size_t>(k)] =
            std::lower_bound(sorted.begin(), sorted.end(), profile[static_cast<std::size_t>(k)]) - sorted.begin();
      }
      const std::size_t d = count_distinct(next);
      cells = std::move(next);
      if (d == distinct) return;
      distinct = d;
    }
  }

  static std::size_t count_distinct(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  }

  bool twins(int a, int b) const {
    for (const Code& c : codes_) {
      Code s = c;
      for (int i = 0; i < s.size(); ++i) {
        if (s[i] == a)
          s[i] = static_cast<Color>(b);
        else if (s[i] == b)
          s[i] = static_cast<Color>(a);
      }
      if (!own_.count(pack(s))) return false;
    }
    return true;
  }

  void search(std::vector<std::int64_t> cells) {
    if (overflow_) return;
    // Find the smallest non-singleton cell among relabelable present colors.
    std::map<std::int64_t, std::vector<int>> groups;
    for (int k = 0; k < universe_; ++k) {
      const std::int64_t v = cells[static_cast<std::size_t>(k)];
      if (v >= 0 && v != std::numeric_limits<std::int64_t>::max()) groups[v].push_back(k);
    }
    const std::vector<int>* target = nullptr;
    for (const auto& [v, members] : groups) {
      if (members.size() > 1) {
        target = &members;
        break;
      }
    }
    if (!target) {
      leaf(cells, groups);
      return;
    }
    std::vector<int> tried;
    for (int k : *target) {
      bool dup = false;
      for (int t : tried) dup = dup || twins(t, k);
      if (dup) continue;
      tried.push_back(k);
      std::vector<std::int64_t> next = cells;
      // Individualize k: it precedes the rest of its cell.
      for (auto& v : next)
        if (v >= 0 && v != std::numeric_limits<std::int64_t>::max()) v *= 2;
      for (int m : *target)
        if (m != k) next[static_cast<std::size_t>(m)] += 1;
      refine(next);
      search(std::move(next));
      if (overflow_) return;
    }
  }

  void leaf(const std::vector<std::int64_t>&, const std::map<std::int64_t, std::vector<int>>& groups) {
    if (++leaves_ > leaf_cap_) {
      overflow_ = true;
      return;
    }
    std::array<Color, kMaxColors> relabel{};
    for (int k = 0; k < universe_; ++k) relabel[static_cast<std::size_t>(k)] = static_cast<Color>(k);
    std::size_t next = 0;
    for (const auto& [v, members] : groups) relabel[static_cast<std::size_t>(members.front())] =
        static_cast<Color>(free_labels_[next++]);
    std::vector<std::uint64_t> form;
    form.reserve(codes_.size());
    for (const Code& c : codes_) {
      Code r = c;
      for (int i = 0; i < r.size(); ++i) r[i] = relabel[r[i]];
      form.push_back(pack(r));
    }
    std::sort(form.begin(), form.end());
    if (!best_ || form < *best_) best_ = std::move(form);
  }

  std::vector<Code> codes_;
  int universe_;
  ColorMask fixed_;
  ColorMask present_ = 0;
  std::size_t leaf_cap_;
  std::size_t leaves_ = 0;
  bool overflow_ = false;
  std::unordered_set<std::uint64_t> own_;
  std::vector<int> free_labels_;
  std::optional<std::vector<std::uint64_t>> best_;
};

}  // namespace detail

/// Canonical form of a set of codes under color permutations that fix the
/// colors in `fixed` (and, optionally, simultaneous position permutations).
/// Two sets related by such a permutation get identical forms. Returns
/// nullopt if the search for the minimum would exceed `leaf_cap` leaves.
inline std::optional<std::vector<std::uint64_t>> canonical_code_set(std::span<const Code> codes, int universe,
                                                                    ColorMask fixed = 0,
                                                                    bool permute_positions = false,
                                                                    std::size_t leaf_cap = 4096) {
  if (codes.empty()) return std::vector<std::uint64_t>{};
  const int p = codes.front().size();
  std::array<int, kMaxPegs> sigma{};
  std::iota(sigma.begin(), sigma.begin() + p, 0);
  std::optional<std::vector<std::uint64_t>> best;
  do {
    std::vector<Code> moved;
    moved.reserve(codes.size());
    for (const Code& c : codes) {
      Code m = c;
      for (int i = 0; i < p; ++i) m[sigma[static_cast<std::size_t>(i)]] = c[i];
      moved.push_back(m);
    }
    auto form = detail::ColorCanonizer(moved, universe, fixed, leaf_cap).run();
    if (!form) return std::nullopt;
    if (!best || *form < *best) best = std::move(form);
  } while (permute_positions && std::next_permutation(sigma.begin(), sigma.begin() + p));
  return best;
}

}  // namespace abgame
