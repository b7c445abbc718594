#pragma once

#include "qsopt/eccset.hpp"

namespace qsopt {

// ECC simplification: per-class unused qubit/parameter compaction, member
// dedup under canonical DAG order, class dedup under parameter permutation,
// and removal of classes left with a single member.
EccSet simplify_eccs(const EccSet& es);

// Common-subcircuit pruning: drops a shared topologically-first or -last
// instruction from every member of a class when the representative has it
// too. Runs to a fixed point, then re-simplifies.
EccSet prune_common_subcircuit(const EccSet& es);

}  // namespace qsopt
