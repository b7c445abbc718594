#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "qsopt/eccset.hpp"

namespace qsopt {

// A directed rewrite: occurrences of `target` may be replaced by `rewrite`.
struct Transformation {
  Circuit target;
  Circuit rewrite;
};

// Both directions of every (representative, other) pair, 2(x-1) per class.
std::vector<Transformation> extract_transformations(const EccSet& es);

// All circuits obtained by rewriting one convex occurrence of t.target in c.
// Matching maps target qubits injectively into c's qubits and binds target
// parameters to argument expressions of c.
std::vector<Circuit> apply(const Circuit& c, const Transformation& t);

struct SearchConfig {
  double gamma = 1.0001;           // admit candidates below gamma * best
  double timeout_seconds = 600;
  size_t queue_cap = 2000;         // prune the frontier back to queue_keep
  size_t queue_keep = 1000;
  uint64_t seed = 0;               // tie-shuffling seed (0: insertion order)
  std::function<size_t(const Circuit&)> cost;  // default: gate count
  std::ostream* log = nullptr;
  double log_every_seconds = 10;
};

// Cost-based backtracking search (Alg. 2).
Circuit optimize(const Circuit& c, const std::vector<Transformation>& ts,
                 const SearchConfig& cfg = {});

}  // namespace qsopt
