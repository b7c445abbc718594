#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qsopt/circuit.hpp"

namespace qsopt {

// An equivalence class of circuits; circuits[0] is the representative.
struct Ecc {
  int q = 0;
  int m = 0;
  std::vector<Circuit> circuits;
};

struct EccSet {
  std::shared_ptr<const GateSet> gs;
  int n = 0;
  int q = 0;
  int m = 0;
  bool sigma_single_use = true;
  uint64_t seed = 0;
  double e_max = 1e-15;
  std::vector<Ecc> eccs;

  size_t circuit_count() const {
    size_t total = 0;
    for (const auto& e : eccs) total += e.circuits.size();
    return total;
  }
};

void save_eccs(const EccSet& es, const std::string& path);

// gs: the active gate set; when null, the header's built-in name is loaded.
// The header's gate-set hash must match, otherwise loading fails.
EccSet load_eccs(const std::string& path,
                 std::shared_ptr<const GateSet> gs = nullptr);

std::string eccs_to_string(const EccSet& es);

}  // namespace qsopt
