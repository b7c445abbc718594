#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qsopt/symexpr.hpp"

namespace qsopt {

struct Gate {
  std::string name;
  int qubit_arity = 1;
  int param_arity = 0;
  // Template matrix over Param(0..param_arity-1); builders substitute.
  SymMatrix tmpl;
};

struct GateSet {
  std::string name;
  std::vector<Gate> gates;

  int gate_index(const std::string& gname) const;  // -1 if absent
  const Gate& gate(int idx) const { return gates[(size_t)idx]; }
};

// One argument slot of an instruction: a symbolic expression from the Sigma
// family, or a concrete angle.
struct ParamExpr {
  enum Form : uint8_t { P, TwoP, SumPP, Const };
  Form form = Const;
  int i = -1, j = -1;
  Angle value;

  static ParamExpr p(int i) { ParamExpr e; e.form = P; e.i = i; return e; }
  static ParamExpr twop(int i) { ParamExpr e; e.form = TwoP; e.i = i; return e; }
  static ParamExpr sum(int i, int j) {
    ParamExpr e; e.form = SumPP; e.i = i; e.j = j; return e;
  }
  static ParamExpr constant(Angle a) { ParamExpr e; e.value = a; return e; }

  bool symbolic() const { return form != Const; }
  uint32_t mask() const {
    switch (form) {
      case P: case TwoP: return 1u << i;
      case SumPP: return (1u << i) | (1u << j);
      default: return 0;
    }
  }
  SymExpr to_sym() const;
  // Concrete value given a parameter valuation (symbolic forms) or the stored
  // constant.
  double value_at(const std::vector<double>& params) const;
  std::string to_string() const;
  static ParamExpr parse(const std::string& text);

  friend bool operator==(const ParamExpr& a, const ParamExpr& b) {
    if (a.form != b.form) return false;
    if (a.form == Const) return a.value == b.value;
    return a.i == b.i && a.j == b.j;
  }
  friend bool operator<(const ParamExpr& a, const ParamExpr& b) {
    if (a.form != b.form) return a.form < b.form;
    if (a.form == Const) return a.value < b.value;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  }
  size_t hash() const;
};

struct ParamSpec {
  int m = 2;
  bool single_use = true;
};

// The Sigma expression family {p_i, 2p_i, p_i+p_j (i<j)} in its fixed order.
std::vector<ParamExpr> sigma_exprs(int m);

GateSet builtin_gate_set(const std::string& name);
GateSet load_gate_set(const std::string& path);

SymMatrix gate_matrix(const Gate& g, const std::vector<SymExpr>& args);
// Numeric gate matrix at concrete argument values.
std::vector<std::complex<double>> gate_matrix_at(const Gate& g,
                                                 const std::vector<double>& args);

uint64_t gate_set_hash(const GateSet& gs);

// A single-instruction circuit from the fixed enumeration of Def. 3.2's
// total order: gates in set order, then argument tuples, then qubit tuples.
struct SingleGate {
  int gate = -1;
  std::vector<ParamExpr> args;
  std::vector<int> qubits;
  uint32_t param_mask = 0;
};

std::vector<SingleGate> enumerate_single_gate_circuits(const GateSet& gs,
                                                       const ParamSpec& sigma,
                                                       int q);

}  // namespace qsopt
