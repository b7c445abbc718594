#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qsopt/gatedef.hpp"

namespace qsopt {

struct Instruction {
  int gate = -1;
  std::vector<ParamExpr> args;
  std::vector<int> qubits;

  friend bool operator==(const Instruction& a, const Instruction& b) {
    return a.gate == b.gate && a.args == b.args && a.qubits == b.qubits;
  }
};

// (gate, args, qubits) tuple order; matches the rank order of
// enumerate_single_gate_circuits for instructions over the same gate set.
int instr_cmp(const Instruction& a, const Instruction& b);

struct Circuit {
  std::shared_ptr<const GateSet> gs;
  int q = 0;
  int m = 0;
  std::vector<Instruction> instrs;

  size_t size() const { return instrs.size(); }
};

// Def. 3.2: fewer gates first, then lexicographic.
bool precedes(const Circuit& a, const Circuit& b);
int circuit_cmp(const Circuit& a, const Circuit& b);

Circuit drop_first(const Circuit& c);
Circuit drop_last(const Circuit& c);

uint32_t param_mask(const Circuit& c);

// Canonical topological order: repeatedly emit the ready instruction touching
// the smallest qubit index.
Circuit canonical_form(const Circuit& c);

uint64_t canonical_hash(const Circuit& c);
// Wider key for seen-sets (collision odds negligible at search scale).
std::pair<uint64_t, uint64_t> canonical_hash128(const Circuit& c);

// Sequence text form, e.g. "h 0; rz(p0+p1) 2; cx 0 1" ("" for empty).
std::string circuit_text(const Circuit& c);
Circuit parse_circuit_text(const std::string& text,
                           std::shared_ptr<const GateSet> gs, int q, int m);

// --- DAG form ------------------------------------------------------------

struct DagNode {
  enum Kind { GateNode, Source, Sink };
  Kind kind = GateNode;
  Instruction inst;  // GateNode only
  int qubit = -1;    // Source/Sink only
};

struct DagEdge {
  int from = -1, from_port = -1;
  int to = -1, to_port = -1;
};

struct CircuitDag {
  std::shared_ptr<const GateSet> gs;
  int q = 0;
  int m = 0;
  std::vector<DagNode> nodes;
  std::vector<DagEdge> edges;
};

CircuitDag to_dag(const Circuit& c);
Circuit from_dag(const CircuitDag& d);
bool dag_equal_canonical(const CircuitDag& a, const CircuitDag& b);
uint64_t canonical_hash(const CircuitDag& d);

// --- Semantics -----------------------------------------------------------

SymMatrix circuit_matrix(const Circuit& c);

// State-vector application. Basis index bit of qubit k is (b >> (q-1-k)) & 1.
// params supplies values for symbolic arguments (may be empty for concrete
// circuits).
void apply_instruction(const Instruction& inst, const GateSet& gs, int q,
                       const std::vector<double>& params,
                       std::vector<std::complex<double>>& state);
std::vector<std::complex<double>> apply_circuit(
    const Circuit& c, const std::vector<double>& params,
    std::vector<std::complex<double>> state);

// Dense unitary at concrete params, built by state-vector columns.
std::vector<std::complex<double>> circuit_unitary(
    const Circuit& c, const std::vector<double>& params);

// true iff the two unitaries (dim x dim, row-major) agree up to one global
// phase within tol.
bool unitary_equal_up_to_phase(const std::vector<std::complex<double>>& a,
                               const std::vector<std::complex<double>>& b,
                               double tol);

Instruction instruction_of(const SingleGate& sg);

}  // namespace qsopt
