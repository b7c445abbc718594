#include <cmath>
#include <memory>

#include "doctest.h"
#include "qsopt/verifier.hpp"

using namespace qsopt;

namespace {

std::shared_ptr<const GateSet> gset(const char* name) {
  return std::make_shared<GateSet>(builtin_gate_set(name));
}

Circuit circ(const std::string& text, std::shared_ptr<const GateSet> gs, int q,
             int m = 2) {
  return parse_circuit_text(text, gs, q, m);
}

bool has_constant_zero(const std::vector<PhaseFactor>& cands) {
  for (const auto& pf : cands)
    if (pf.is_constant() && pf.b.is_zero()) return true;
  return false;
}

}  // namespace

TEST_CASE("phase candidates for identical circuits include (0, 0)") {
  auto gs = gset("nam");
  auto ctx = FingerprintContext::create(5, 2, 2);
  Circuit c = circ("h 0; cx 0 1", gs, 2);
  auto cands = find_phase_candidates(c, c, ctx);
  REQUIRE(!cands.empty());
  CHECK(has_constant_zero(cands));
  // constant candidates are ordered before parameter-dependent ones
  CHECK(cands.front().is_constant());
}

TEST_CASE("phase candidates for t.t vs s") {
  auto gs = gset("clifford_t");
  auto ctx = FingerprintContext::create(5, 1, 2);
  auto cands = find_phase_candidates(circ("t 0; t 0", gs, 1),
                                     circ("s 0", gs, 1), ctx);
  CHECK(has_constant_zero(cands));
}

TEST_CASE("verifier accepts exact identities") {
  auto ctx = FingerprintContext::create(5, 1, 2);
  SolverClient solver;
  auto gs = gset("clifford_t");
  auto r1 = verify_pair(circ("h 0; h 0", gs, 1), circ("", gs, 1), ctx, solver);
  CHECK(r1.verdict == Verdict::Verified);
  CHECK(r1.phase.is_constant());
  auto r2 = verify_pair(circ("t 0; t 0", gs, 1), circ("s 0", gs, 1), ctx, solver);
  CHECK(r2.verdict == Verdict::Verified);
}

TEST_CASE("verifier accepts the symbolic rotation merge") {
  auto gs = gset("nam");
  auto ctx = FingerprintContext::create(5, 1, 2);
  SolverClient solver;
  auto r = verify_pair(circ("rz(p0) 0; rz(p1) 0", gs, 1),
                       circ("rz(p0+p1) 0", gs, 1), ctx, solver);
  CHECK(r.verdict == Verdict::Verified);
  CHECK(r.phase.is_constant());
  CHECK(r.phase.b.is_zero());
}

TEST_CASE("verifier accepts the reversed-cnot conjugation") {
  auto gs = gset("nam");
  auto ctx = FingerprintContext::create(5, 2, 2);
  SolverClient solver;
  auto r = verify_pair(circ("h 0; h 1; cx 0 1; h 0; h 1", gs, 2),
                       circ("cx 1 0", gs, 2), ctx, solver);
  CHECK(r.verdict == Verdict::Verified);
}

TEST_CASE("verifier refutes inequivalent circuits") {
  auto gs = gset("nam");
  auto ctx = FingerprintContext::create(5, 1, 2);
  SolverClient solver;
  auto r = verify_pair(circ("x 0", gs, 1), circ("", gs, 1), ctx, solver);
  CHECK(r.verdict == Verdict::Refuted);
  auto r2 = verify_equivalence(circ("h 0", gs, 1), circ("x 0", gs, 1),
                               PhaseFactor{{0, 0}, Angle::zero()}, solver);
  CHECK(r2.verdict == Verdict::Refuted);
}

TEST_CASE("refutation counterexamples violate equality numerically") {
  auto gs = gset("nam");
  SolverClient solver;
  Circuit c1 = circ("rz(p0) 0", gs, 1);
  Circuit c2 = circ("rz(2p0) 0", gs, 1);
  auto r = verify_equivalence(c1, c2, PhaseFactor{{0, 0}, Angle::zero()}, solver);
  REQUIRE(r.verdict == Verdict::Refuted);
  REQUIRE(r.counterexample.size() >= 1);
  auto u1 = circuit_unitary(c1, r.counterexample);
  auto u2 = circuit_unitary(c2, r.counterexample);
  double gap = 0;
  for (size_t k = 0; k < u1.size(); k++)
    gap = std::max(gap, std::abs(u1[k] - u2[k]));
  CHECK(gap > 1e-6);
}

TEST_CASE("accepted pairs pass a numeric spot check") {
  auto gs = gset("nam");
  auto ctx = FingerprintContext::create(5, 2, 2);
  SolverClient solver;
  struct Pair { const char* a; const char* b; } pairs[] = {
      {"h 0; h 0", ""},
      {"rz(p0) 0; rz(p1) 0", "rz(p0+p1) 0"},
      {"cx 0 1; cx 0 1", ""},
      {"x 0; rz(p0) 0; x 0; rz(p0) 0", ""},  // up to phase e^{i p0}... verified or not
  };
  for (const auto& pr : pairs) {
    Circuit a = circ(pr.a, gs, 2), b = circ(pr.b, gs, 2);
    auto r = verify_pair(a, b, ctx, solver);
    if (r.verdict == Verdict::Verified)
      CHECK(numeric_phase_gap(a, b, r.phase, 20) < 1e-9);
  }
}

TEST_CASE("smt query text is well-formed") {
  auto gs = gset("nam");
  std::string q = build_smt_query(circ("h 0; h 0", gs, 1), circ("", gs, 1),
                                  PhaseFactor{{0, 0}, Angle::zero()});
  CHECK(q.find("(set-logic QF_NRA)") != std::string::npos);
  CHECK(q.find("(check-sat)") != std::string::npos);
}
