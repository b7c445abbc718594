#pragma once

#include <string>

#include "qsopt/circuit.hpp"

namespace qsopt {

// Returns a copy of gs extended with ccx and ccz (used for preprocessing
// inputs); no-op for sets that already contain them.
std::shared_ptr<const GateSet> with_toffoli(std::shared_ptr<const GateSet> gs);

// OpenQASM 2.0 subset: one qreg, gates of the given set plus ccx/ccz,
// concrete angles as rational multiples of pi or decimals.
Circuit parse_qasm(const std::string& text, std::shared_ptr<const GateSet> gs);
Circuit parse_qasm_file(const std::string& path,
                        std::shared_ptr<const GateSet> gs);

std::string emit_qasm(const Circuit& c);

}  // namespace qsopt
