#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "doctest.h"
#include "qsopt/circuit.hpp"
#include "qsopt/qasm.hpp"

using namespace qsopt;
using cplx = std::complex<double>;

namespace {

std::shared_ptr<const GateSet> nam_set() {
  return std::make_shared<GateSet>(builtin_gate_set("nam"));
}

Circuit circ(const std::string& text, int q, int m = 2) {
  return parse_circuit_text(text, nam_set(), q, m);
}

uint64_t rng_next(uint64_t& s) {
  s ^= s << 13; s ^= s >> 7; s ^= s << 17;
  return s;
}

// random concrete nam circuit over q qubits
Circuit random_circuit(uint64_t& s, int q, int len) {
  Circuit c;
  c.gs = nam_set();
  c.q = q;
  for (int k = 0; k < len; k++) {
    Instruction inst;
    switch (rng_next(s) % 4) {
      case 0: inst.gate = c.gs->gate_index("h"); break;
      case 1: inst.gate = c.gs->gate_index("x"); break;
      case 2:
        inst.gate = c.gs->gate_index("rz");
        inst.args.push_back(ParamExpr::constant(
            Angle::of_pi(Rat((int64_t)(rng_next(s) % 8), 4))));
        break;
      default: inst.gate = c.gs->gate_index("cx"); break;
    }
    int a = (int)(rng_next(s) % q);
    if (c.gs->gate((int)inst.gate).qubit_arity == 2) {
      int b = (int)(rng_next(s) % (q - 1));
      if (b >= a) b++;
      inst.qubits = {a, b};
    } else {
      inst.qubits = {a};
    }
    c.instrs.push_back(inst);
  }
  return c;
}

}  // namespace

TEST_CASE("precedes orders by size then lexicographically") {
  Circuit empty = circ("", 1);
  Circuit h0 = circ("h 0", 1);
  CHECK(precedes(empty, h0));
  CHECK(!precedes(h0, empty));
  CHECK(!precedes(h0, h0));
}

TEST_CASE("precedes is a strict total order on the single-gate enumeration") {
  auto gs = nam_set();
  ParamSpec sigma;
  auto singles = enumerate_single_gate_circuits(*gs, sigma, 3);
  REQUIRE(singles.size() == 27);
  std::vector<Circuit> cs;
  for (const auto& sg : singles) {
    Circuit c;
    c.gs = gs; c.q = 3; c.m = 2;
    c.instrs.push_back(instruction_of(sg));
    cs.push_back(c);
  }
  for (size_t i = 0; i < cs.size(); i++)
    for (size_t j = 0; j < cs.size(); j++) {
      bool ij = precedes(cs[i], cs[j]), ji = precedes(cs[j], cs[i]);
      if (i == j) CHECK(!ij);
      else CHECK(ij != ji);  // totality + antisymmetry
      for (size_t k = 0; k < cs.size(); k++)
        if (precedes(cs[i], cs[j]) && precedes(cs[j], cs[k]))
          CHECK(precedes(cs[i], cs[k]));
    }
  // enumeration order is exactly the <-order
  for (size_t i = 0; i + 1 < cs.size(); i++) CHECK(precedes(cs[i], cs[i + 1]));
}

TEST_CASE("drop_first and drop_last") {
  Circuit c = circ("h 0; x 1; cx 0 1", 2);
  CHECK(drop_first(c).size() == 2);
  CHECK(drop_first(c).instrs[0] == c.instrs[1]);
  CHECK(drop_last(c).size() == 2);
  CHECK(drop_last(c).instrs[1] == c.instrs[1]);
  CHECK(drop_first(circ("h 0", 1)).size() == 0);
  CHECK_THROWS(drop_first(circ("", 1)));
  uint64_t s = 3;
  for (int t = 0; t < 20; t++) {
    Circuit r = random_circuit(s, 3, 2 + (int)(rng_next(s) % 5));
    Circuit a = drop_last(drop_first(r)), b = drop_first(drop_last(r));
    CHECK(circuit_cmp(a, b) == 0);
  }
}

TEST_CASE("dag round-trip preserves semantics and canonicalizes") {
  uint64_t s = 11;
  for (int t = 0; t < 30; t++) {
    Circuit c = random_circuit(s, 3, 6);
    Circuit back = from_dag(to_dag(c));
    CHECK(back.size() == c.size());
    auto u1 = circuit_unitary(c, {});
    auto u2 = circuit_unitary(back, {});
    double worst = 0;
    for (size_t k = 0; k < u1.size(); k++)
      worst = std::max(worst, std::abs(u1[k] - u2[k]));
    CHECK(worst < 1e-10);
    // idempotence: a second round-trip is the identity
    Circuit again = from_dag(to_dag(back));
    CHECK(circuit_cmp(back, again) == 0);
  }
}

TEST_CASE("empty circuit dag has only wire edges") {
  CircuitDag d = to_dag(circ("", 3));
  int gates = 0;
  for (const auto& n : d.nodes) gates += n.kind == DagNode::GateNode;
  CHECK(gates == 0);
  CHECK(d.edges.size() == 3);
}

TEST_CASE("canonical form is order-insensitive") {
  // same circuit in two dependency-respecting instruction orders
  Circuit a = circ("h 0; x 1; cx 0 1", 2);
  Circuit b = circ("x 1; h 0; cx 0 1", 2);
  CHECK(circuit_cmp(canonical_form(a), canonical_form(b)) == 0);
  CHECK(canonical_hash(a) == canonical_hash(b));
  CHECK(canonical_hash(circ("h 0", 2)) != canonical_hash(circ("h 1", 2)));
}

TEST_CASE("hash equality tracks canonical equality on random pairs") {
  uint64_t s = 17;
  std::map<uint64_t, Circuit> by_hash;
  int agreements = 0;
  for (int t = 0; t < 400; t++) {
    Circuit c = random_circuit(s, 2, 3);
    uint64_t h = canonical_hash(c);
    auto it = by_hash.find(h);
    if (it != by_hash.end()) {
      CHECK(circuit_cmp(canonical_form(c), canonical_form(it->second)) == 0);
      agreements++;
    } else {
      by_hash.emplace(h, c);
    }
  }
  CHECK(agreements > 0);  // collisions-by-equality actually exercised
}

TEST_CASE("circuit text round-trip") {
  for (const char* text : {"", "h 0", "h 0; cx 0 1; rz(p0) 1", "rz(p0+p1) 2",
                           "rz(2p0) 0; x 1", "rz(pi/4) 0; rz(-3*pi/4) 1"}) {
    Circuit c = circ(text, 3);
    CHECK(circuit_text(c) == text);
  }
}

TEST_CASE("qasm parse and emit") {
  auto gs = nam_set();
  Circuit c = parse_qasm(
      "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nh q[0];\nh q[0];\n", gs);
  CHECK(c.size() == 2);
  CHECK(c.q == 1);
  Circuit c2 = parse_qasm(emit_qasm(c), gs);
  CHECK(circuit_cmp(c, c2) == 0);
  CHECK_THROWS(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nbadgate q[0];\n", gs));
}

TEST_CASE("benchmark files have the documented sizes") {
  auto ct = std::make_shared<GateSet>(builtin_gate_set("clifford_t"));
  CHECK(parse_qasm_file("benchmarks/tof_3.qasm", ct).size() == 45);
  CHECK(parse_qasm_file("benchmarks/barenco_tof_3.qasm", ct).size() == 58);
}

TEST_CASE("unitary_equal_up_to_phase") {
  Circuit xx = circ("x 0; x 0", 1);
  Circuit empty = circ("", 1);
  CHECK(unitary_equal_up_to_phase(circuit_unitary(xx, {}),
                                  circuit_unitary(empty, {}), 1e-10));
  Circuit h = circ("h 0", 1);
  CHECK(!unitary_equal_up_to_phase(circuit_unitary(h, {}),
                                   circuit_unitary(empty, {}), 1e-10));
  // global phase only: rz(pi) vs rz(-pi)-free z-like pair
  Circuit a = circ("rz(pi/2) 0", 1);
  Circuit b = circ("rz(pi/2) 0; rz(0) 0", 1);
  CHECK(unitary_equal_up_to_phase(circuit_unitary(a, {}),
                                  circuit_unitary(b, {}), 1e-10));
}
