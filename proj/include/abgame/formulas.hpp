// formulas.hpp -- closed-form values and bounds for ab(p,c) and abb(p,c).
//
// Integer arithmetic throughout; stirling_lower() is the only real-valued
// output and is informational.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace abgame::formulas {

enum class BoundKind { exact, lower, upper, bracket };

/// A value or a [lower, upper] bracket on a worst-case question count.
struct BoundValue {
  BoundKind kind = BoundKind::exact;
  int lower = 0;
  int upper = 0;
  std::string source;

  static BoundValue exact_value(int v, std::string src) { return {BoundKind::exact, v, v, std::move(src)}; }
  static BoundValue lower_bound(int v, std::string src) { return {BoundKind::lower, v, -1, std::move(src)}; }
  static BoundValue upper_bound(int v, std::string src) { return {BoundKind::upper, -1, v, std::move(src)}; }
  static BoundValue between(int lo, int hi, std::string src) { return {BoundKind::bracket, lo, hi, std::move(src)}; }

  bool has_lower() const { return kind != BoundKind::upper; }
  bool has_upper() const { return kind != BoundKind::lower; }

  /// Whether a computed value is consistent with the bound.
  bool admits(int v) const { return (!has_lower() || v >= lower) && (!has_upper() || v <= upper); }
};

inline int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// ab(2,c) = ceil(c/2)+1 and the two-branch formula for ab(3,c).
inline BoundValue ab_formula(int p, int c) {
  if (c < p) throw std::invalid_argument("need c >= p");
  if (p == 2) return BoundValue::exact_value(floor_div(c + 1, 2) + 1, "ab(2,c) = ceil(c/2)+1");
  if (p == 3) {
    if (c <= 7) return BoundValue::exact_value(c / 3 + 3, "ab(3,c) = floor(c/3)+3, c <= 7");
    return BoundValue::exact_value((c + 1) / 3 + 3, "ab(3,c) = floor((c+1)/3)+3, c >= 8");
  }
  throw std::invalid_argument("ab_formula supports p = 2, 3");
}

/// ab(4,c): exact for 4 <= c <= 13, a one-question bracket beyond.
inline BoundValue ab4_bounds(int c) {
  if (c < 4) throw std::invalid_argument("need c >= 4");
  if (c <= 11) return BoundValue::exact_value((c + 2) / 3 + 3, "ab(4,c) = floor((c+2)/3)+3, 4 <= c <= 11");
  if (c <= 13) return BoundValue::exact_value(8, "ab(4,c) = 8, c = 12, 13");
  return BoundValue::between((c + 3) / 4 + 4, (c + 3) / 4 + 5, "floor((c+3)/4)+4 <= ab(4,c) <= floor((c+3)/4)+5");
}

inline BoundValue abb_bounds(int p, int c) {
  if (c < p) throw std::invalid_argument("need c >= p");
  switch (p) {
    case 2:
      return BoundValue::exact_value(c, "abb(2,c) = c");
    case 3:
      return BoundValue::exact_value(c + 1, "abb(3,c) = c+1");
    case 4:
      if (c <= 10) return BoundValue::exact_value(c + 1, "abb(4,c) = c+1, 4 <= c <= 10");
      return BoundValue::between(c + 1, c + 2, "c+1 <= abb(4,c) <= c+2, c >= 11");
    default:
      throw std::invalid_argument("abb_bounds supports p = 2, 3, 4");
  }
}

/// ab(p,c) >= floor((c-c0)/p) + ab_*(p,c0) for c >= c0.
inline BoundValue chain_lower(int p, int c, int c0, int base) {
  if (c < c0) throw std::invalid_argument("need c >= c0");
  return BoundValue::lower_bound((c - c0) / p + base, "joker-game chain from c0=" + std::to_string(c0));
}

/// ab(p, p*x+m) <= x - p + ab^*(p, p^2+m, p) for x >= p.
inline BoundValue chain_upper(int p, int x, int m, int base) {
  if (x < p) throw std::invalid_argument("need x >= p");
  if (m < 0) throw std::invalid_argument("need m >= 0");
  return BoundValue::upper_bound(x - p + base, "fixed-opening chain, c = " + std::to_string(p * x + m));
}

/// T(p,q) = sum_{i<q} (p-1)^i: secrets resolvable in q questions when p = c.
inline std::uint64_t counting_bound(int p, int q) {
  if (p < 2 || q < 1) throw std::invalid_argument("need p >= 2, q >= 1");
  if (p == 2) return static_cast<std::uint64_t>(q);
  std::uint64_t power = 1;
  for (int i = 0; i < q; ++i) power *= static_cast<std::uint64_t>(p - 1);
  return (power - 1) / static_cast<std::uint64_t>(p - 2);
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// Smallest q with p! <= T(p,q).
inline int qmin(int p) {
  if (p < 2 || p > 20) throw std::invalid_argument("qmin supports 2 <= p <= 20");
  const std::uint64_t target = factorial(p);
  int q = 1;
  while (counting_bound(p, q) < target) ++q;
  return q;
}

/// p(1 - 1/ln p), a real lower bound on ab(p,p). Informational only.
inline double stirling_lower(int p) {
  if (p < 3) throw std::invalid_argument("stirling_lower needs p >= 3");
  return p * (1.0 - 1.0 / std::log(static_cast<double>(p)));
}

/// Published value (or bracket) of ab(p,c) for 2 <= p <= 4.
inline BoundValue ab_bounds(int p, int c) {
  if (p == 4) return ab4_bounds(c);
  return ab_formula(p, c);
}

}  // namespace abgame::formulas
