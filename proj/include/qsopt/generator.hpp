#pragma once

#include <vector>

#include "qsopt/eccset.hpp"
#include "qsopt/fingerprint.hpp"
#include "qsopt/verifier.hpp"

namespace qsopt {

struct GenStats {
  std::vector<size_t> reps_per_round;    // |R_j| after each round, j = 1..n
  std::vector<size_t> eccs_per_round;    // live (non-singleton counted later)
  std::vector<double> round_seconds;
  size_t sequences_constructed = 0;      // candidate extensions built
  size_t verifier_queries = 0;
  size_t inconclusive = 0;
  size_t bucket_merges = 0;              // classes unified across adjacent keys
};

// Alg. 1. Builds the (n, q)-complete ECC set over the given gate set with
// the Sigma parameter family of spec'd arity. Singleton classes are dropped
// from the result.
EccSet repgen(std::shared_ptr<const GateSet> gs, const ParamSpec& sigma,
              int n, int q, const FingerprintContext& ctx,
              SolverClient& solver, GenStats* stats = nullptr);

// Partitions one fingerprint bucket into equivalence classes; circuits are
// processed in precedes-order, each matched against class representatives.
std::vector<Ecc> eccify(std::vector<Circuit> bucket,
                        const FingerprintContext& ctx, SolverClient& solver);

// |T| = sum over classes of 2 * (size - 1).
size_t transformation_count(const EccSet& es);

enum class OracleResult { Complete, Incomplete, Inconclusive };

// Semi-decision check of (n, q)-completeness: partitions all circuits of at
// most n gates into true equivalence classes (verifier as ground truth), then
// searches for rewrite paths between classmates using the set's
// transformations. `budget` bounds the rewrite states explored per class.
// Intended for small configurations (ch^n up to ~1e5).
OracleResult completeness_oracle(std::shared_ptr<const GateSet> gs,
                                 const ParamSpec& sigma, int n, int q,
                                 const EccSet& es,
                                 const FingerprintContext& ctx,
                                 SolverClient& solver,
                                 size_t budget = 200000);

}  // namespace qsopt
