#pragma once

#include "qsopt/circuit.hpp"

namespace qsopt {

// Gate-for-gate translation between the built-in sets (clifford_t -> nam,
// nam -> ibm). Concrete rotation angles carry over exactly.
Circuit transpile(const Circuit& c, const std::string& target_set);

// Expands ccx/ccz using the 15-gate T-depth decomposition, choosing each
// Toffoli's polarity greedily to maximise rotation merging afterwards.
Circuit decompose_toffoli(const Circuit& c);

// Combines same-axis rotations that act on the same wire with only
// diagonal-commuting gates between them; drops rotations by 0 (mod 2pi).
Circuit merge_rotations(const Circuit& c);

// nam -> rigetti: cx via h/cz/h with adjacent-h cancellation, x -> rx180,
// h -> rz/rx/rz/rx, rz angles kept.
Circuit rigetti_pipeline(const Circuit& c);

}  // namespace qsopt
