#include <memory>
#include <set>

#include "doctest.h"
#include "qsopt/generator.hpp"
#include "qsopt/pruning.hpp"

using namespace qsopt;

namespace {

std::shared_ptr<const GateSet> gset(const char* name) {
  return std::make_shared<GateSet>(builtin_gate_set(name));
}

Circuit circ(const std::string& text, std::shared_ptr<const GateSet> gs, int q,
             int m = 2) {
  return parse_circuit_text(text, gs, q, m);
}

}  // namespace

TEST_CASE("eccify groups verified-equivalent circuits") {
  auto gs = gset("clifford_t");
  auto ctx = FingerprintContext::create(3, 1, 2);
  SolverClient solver;

  auto classes = eccify({circ("", gs, 1), circ("h 0; h 0", gs, 1)}, ctx, solver);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].circuits.size() == 2);
  CHECK(classes[0].circuits[0].size() == 0);  // representative is the <-min

  auto single = eccify({circ("h 0", gs, 1)}, ctx, solver);
  REQUIRE(single.size() == 1);
  CHECK(single[0].circuits.size() == 1);

  auto ts = eccify({circ("t 0; t 0", gs, 1), circ("s 0", gs, 1)}, ctx, solver);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].circuits.size() == 2);
}

TEST_CASE("transformation_count sums 2(x-1)") {
  EccSet es;
  CHECK(transformation_count(es) == 0);
  auto gs = gset("clifford_t");
  Ecc e;
  e.q = 1;
  e.circuits = {circ("", gs, 1), circ("h 0; h 0", gs, 1)};
  es.eccs.push_back(e);
  CHECK(transformation_count(es) == 2);
  e.circuits.push_back(circ("s 0; sdg 0", gs, 1));
  es.eccs.push_back(e);
  CHECK(transformation_count(es) == 2 + 4);
}

TEST_CASE("repgen on a tiny configuration") {
  auto gs = gset("nam");
  ParamSpec sigma;
  auto ctx = FingerprintContext::create(20226, 2, 2);
  SolverClient solver;
  GenStats stats;
  EccSet es = repgen(gs, sigma, 2, 2, ctx, solver, &stats);

  // monotone representative growth round over round
  REQUIRE(stats.reps_per_round.size() == 2);
  CHECK(stats.reps_per_round[0] <= stats.reps_per_round[1]);

  // Thm. 3.4 work bound: constructed sequences <= |R_n| * ch * n
  size_t ch = enumerate_single_gate_circuits(*gs, sigma, 2).size();
  CHECK(stats.sequences_constructed <= stats.reps_per_round.back() * ch * 2);

  // no singletons survive, representatives are <-minima, no circuit repeats
  std::set<std::string> seen;
  for (const auto& e : es.eccs) {
    CHECK(e.circuits.size() >= 2);
    for (size_t k = 1; k < e.circuits.size(); k++)
      CHECK(precedes(e.circuits[0], e.circuits[k]));
    for (const auto& c : e.circuits) CHECK(seen.insert(circuit_text(c)).second);
  }

  // the h.h = identity and cx.cx = identity classes must be present
  auto find_class_of = [&](const std::string& text) -> const Ecc* {
    for (const auto& e : es.eccs)
      for (const auto& c : e.circuits)
        if (circuit_text(c) == text) return &e;
    return nullptr;
  };
  const Ecc* hh = find_class_of("h 0; h 0");
  REQUIRE(hh != nullptr);
  CHECK(hh->circuits[0].size() == 0);
  const Ecc* cxcx = find_class_of("cx 0 1; cx 0 1");
  REQUIRE(cxcx != nullptr);
  CHECK(cxcx->circuits[0].size() == 0);
  CHECK(stats.inconclusive == 0);
}

TEST_CASE("repgen determinism") {
  auto gs = gset("nam");
  ParamSpec sigma;
  auto ctx = FingerprintContext::create(99, 2, 2);
  SolverClient solver;
  EccSet a = repgen(gs, sigma, 2, 2, ctx, solver);
  EccSet b = repgen(gs, sigma, 2, 2, ctx, solver);
  CHECK(eccs_to_string(a) == eccs_to_string(b));
}

TEST_CASE("completeness oracle validates a generated set") {
  // single-gate set {h} at q = 1: h.h.h and h land in one class, reachable
  GateSet hs;
  hs.name = "h_only";
  GateSet nam = builtin_gate_set("nam");
  hs.gates.push_back(nam.gate(nam.gate_index("h")));
  auto gs = std::make_shared<const GateSet>(hs);
  ParamSpec sigma;
  sigma.m = 0;
  auto ctx = FingerprintContext::create(8, 1, 0);
  SolverClient solver;
  EccSet es = repgen(gs, sigma, 3, 1, ctx, solver);
  CHECK(completeness_oracle(gs, sigma, 3, 1, es, ctx, solver) ==
        OracleResult::Complete);

  // deleting a class breaks completeness
  EccSet crippled = es;
  REQUIRE(!crippled.eccs.empty());
  crippled.eccs.clear();
  CHECK(completeness_oracle(gs, sigma, 3, 1, crippled, ctx, solver) ==
        OracleResult::Incomplete);
}
