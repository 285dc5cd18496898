#pragma once

// Umbrella header: automata over finite alphabets, padded convolutions and
// regular relations, first-order evaluation over automatic presentations,
// growth classification, the cell calculus over the ordered naturals,
// semilinear sets and vector partition functions, equivalence-structure
// classification and synthesis, and the JSON wire formats.

#include "astra/alphabet.hpp"
#include "astra/automaton.hpp"
#include "astra/cells.hpp"
#include "astra/core.hpp"
#include "astra/eqstruct.hpp"
#include "astra/formula.hpp"
#include "astra/growth.hpp"
#include "astra/json_io.hpp"
#include "astra/omega_formula.hpp"
#include "astra/padded.hpp"
#include "astra/polynomial.hpp"
#include "astra/presentation.hpp"
#include "astra/regex.hpp"
#include "astra/relation.hpp"
#include "astra/semilinear.hpp"
