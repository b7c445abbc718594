#include <memory>
#include <set>
#include <sstream>

#include "doctest.h"
#include "qsopt/optimizer.hpp"

using namespace qsopt;

namespace {

std::shared_ptr<const GateSet> gset(const char* name) {
  return std::make_shared<GateSet>(builtin_gate_set(name));
}

Circuit circ(const std::string& text, std::shared_ptr<const GateSet> gs, int q,
             int m = 2) {
  return parse_circuit_text(text, gs, q, m);
}

// hand-built rule set: h.h cancellation and cnot reversal by h conjugation
EccSet toy_rules(std::shared_ptr<const GateSet> gs) {
  EccSet es;
  es.gs = gs;
  es.q = 2;
  es.m = 2;
  Ecc hh;
  hh.q = 1;
  hh.m = 0;
  hh.circuits = {circ("", gs, 1), circ("h 0; h 0", gs, 1)};
  es.eccs.push_back(hh);
  Ecc rev;
  rev.q = 2;
  rev.m = 0;
  rev.circuits = {circ("cx 1 0", gs, 2),
                  circ("h 0; h 1; cx 0 1; h 0; h 1", gs, 2)};
  es.eccs.push_back(rev);
  return es;
}

Transformation find_rule(const std::vector<Transformation>& ts, size_t tgt,
                         size_t rew) {
  for (const auto& t : ts)
    if (t.target.size() == tgt && t.rewrite.size() == rew) return t;
  throw std::logic_error("rule not found");
}

}  // namespace

TEST_CASE("extract_transformations yields both directions per member") {
  auto gs = gset("nam");
  EccSet es = toy_rules(gs);
  auto ts = extract_transformations(es);
  CHECK(ts.size() == 4);
  Ecc triple;
  triple.q = 1;
  triple.m = 0;
  triple.circuits = {circ("", gs, 1), circ("h 0; h 0", gs, 1),
                     circ("x 0; x 0", gs, 1)};
  es.eccs.push_back(triple);
  CHECK(extract_transformations(es).size() == 8);
}

TEST_CASE("apply rewrites a matched occurrence") {
  auto gs = gset("nam");
  auto all = extract_transformations(toy_rules(gs));
  const Transformation* cancel = nullptr;
  for (const auto& t : all)
    if (t.target.size() == 2 && t.rewrite.size() == 0) cancel = &t;
  REQUIRE(cancel != nullptr);
  Circuit hh = circ("h 0; h 0", gs, 1, 0);
  bool found_empty = false;
  for (const auto& r : apply(hh, *cancel)) found_empty |= r.size() == 0;
  CHECK(found_empty);
  // no matching gate type: x-only circuit against the h.h pattern
  CHECK(apply(circ("x 0; x 0", gs, 1, 0), *cancel).empty());
}

TEST_CASE("apply results differ only inside the matched region") {
  auto gs = gset("nam");
  Transformation cancel =
      find_rule(extract_transformations(toy_rules(gs)), 2, 0);
  Circuit c = circ("x 1; h 0; h 0; rz(pi/4) 1", gs, 2, 0);
  auto outs = apply(c, cancel);
  REQUIRE(!outs.empty());
  for (const auto& r : outs) {
    CHECK(r.size() == c.size() - 2);
    CHECK(unitary_equal_up_to_phase(circuit_unitary(r, {}),
                                    circuit_unitary(c, {}), 1e-9));
  }
}

TEST_CASE("apply is exhaustive over placements") {
  auto gs = gset("nam");
  Transformation cancel =
      find_rule(extract_transformations(toy_rules(gs)), 2, 0);
  // two disjoint h.h pairs: the cancellation applies at either one
  Circuit c = circ("h 0; h 0; h 1; h 1", gs, 2, 0);
  auto outs = apply(c, cancel);
  std::set<std::string> texts;
  for (const auto& r : outs) texts.insert(circuit_text(canonical_form(r)));
  CHECK(texts.count("h 0; h 0"));
  CHECK(texts.count("h 1; h 1"));
}

TEST_CASE("optimizer removes the four-hadamard conjugation") {
  auto gs = gset("nam");
  auto ts = extract_transformations(toy_rules(gs));
  Circuit c = circ("h 0; h 1; cx 0 1; h 0; h 1", gs, 2, 0);
  SearchConfig cfg;
  cfg.timeout_seconds = 30;
  Circuit best = optimize(c, ts, cfg);
  CHECK(best.size() == 1);
  CHECK(circuit_text(best) == "cx 1 0");
  CHECK(unitary_equal_up_to_phase(circuit_unitary(best, {}),
                                  circuit_unitary(c, {}), 1e-8));
}

TEST_CASE("optimizer is a no-op without applicable rules") {
  auto gs = gset("nam");
  Circuit c = circ("cx 0 1; x 0", gs, 2, 0);
  SearchConfig cfg;
  cfg.timeout_seconds = 5;
  Circuit best = optimize(c, {}, cfg);
  CHECK(circuit_cmp(canonical_form(best), canonical_form(c)) == 0);
}

TEST_CASE("gamma controls uphill admission") {
  auto gs = gset("nam");
  auto ts = extract_transformations(toy_rules(gs));
  // pure greedy (gamma = 1) still reaches the optimum here, by shrinking only
  Circuit c = circ("h 0; h 0; h 1; h 1", gs, 2, 0);
  SearchConfig cfg;
  cfg.gamma = 1.0;
  cfg.timeout_seconds = 10;
  CHECK(optimize(c, ts, cfg).size() == 0);
}

TEST_CASE("parameter binding matches concrete angles") {
  auto gs = gset("nam");
  EccSet es;
  es.gs = gs;
  es.q = 1;
  es.m = 2;
  Ecc merge;
  merge.q = 1;
  merge.m = 2;
  merge.circuits = {circ("rz(p0+p1) 0", gs, 1), circ("rz(p0) 0; rz(p1) 0", gs, 1)};
  es.eccs.push_back(merge);
  auto ts = extract_transformations(es);
  Circuit c = circ("rz(pi/4) 0; rz(pi/2) 0", gs, 1, 0);
  bool merged = false;
  for (const auto& t : ts)
    for (const auto& r : apply(c, t))
      if (r.size() == 1 && circuit_text(r) == "rz(3*pi/4) 0") merged = true;
  CHECK(merged);
}
