// abgame.hpp -- umbrella header.

#pragma once

#include "abgame/code.hpp"
#include "abgame/endgame_lower.hpp"
#include "abgame/formulas.hpp"
#include "abgame/solver.hpp"
#include "abgame/strategy_io.hpp"
#include "abgame/symmetry.hpp"
#include "abgame/twophase_upper.hpp"
