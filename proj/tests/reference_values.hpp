// Published reference values used by the tests and the acceptance run.

#pragma once

#include <array>

namespace reference {

// ab(p,c) for p = 2..4 and c = 2..13; 0 where c < p.
inline constexpr std::array<std::array<int, 12>, 3> kAbTable{{
    {2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8},
    {0, 4, 4, 4, 5, 5, 6, 6, 6, 7, 7, 7},
    {0, 0, 5, 5, 5, 6, 6, 6, 7, 7, 8, 8},
}};

inline int ab(int p, int c) { return kAbTable[static_cast<std::size_t>(p - 2)][static_cast<std::size_t>(c - 2)]; }

// ab(p,p) and qmin(p) for p = 2..6.
inline constexpr std::array<int, 5> kAbEqual{2, 4, 5, 6, 7};
inline constexpr std::array<int, 5> kQmin{2, 3, 4, 5, 5};

}  // namespace reference
