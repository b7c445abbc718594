#include <cmath>

#include "doctest.h"
#include "qsopt/nra.hpp"
#include "qsopt/poly.hpp"

using namespace qsopt;

TEST_CASE("polynomial arithmetic and reduction") {
  Poly s = Poly::var(0), c = Poly::var(1);
  Poly circle = s * s + c * c - Poly::constant(Rat(1));
  // s^2 -> 1 - c^2 makes the circle polynomial vanish identically
  CHECK(circle.reduced().is_zero());

  Poly r2 = Poly::var(kSqrt2Slot);
  CHECK((r2 * r2 - Poly::constant(Rat(2))).reduced().is_zero());
  CHECK(!(r2 - Poly::constant(Rat(2))).reduced().is_zero());

  // (s + c)^2 reduces to 1 + 2sc
  Poly sq = ((s + c) * (s + c)).reduced();
  Poly expect = (Poly::constant(Rat(1)) + Poly::constant(Rat(2)) * s * c).reduced();
  CHECK((sq - expect).reduced().is_zero());
}

TEST_CASE("poly evaluation") {
  double vals[16] = {};
  vals[0] = std::sin(0.3);
  vals[1] = std::cos(0.3);
  vals[kSqrt2Slot] = std::sqrt(2.0);
  Poly p = Poly::var(0) * Poly::var(0) + Poly::var(1) * Poly::var(1);
  CHECK(std::abs(p.eval(vals) - 1.0) < 1e-12);
  Poly q = Poly::var(kSqrt2Slot) * Poly::constant(Rat(1, 2));
  CHECK(std::abs(q.eval(vals) - std::sqrt(0.5)) < 1e-12);
}

TEST_CASE("to_poly on normalized expressions") {
  // exp(i p0) -> c_0^2 - s_0^2 + 2 i s_0 c_0 over half-angle variables
  CPoly z = to_poly(normalize_trig(sym::exp_i(sym::param(0))));
  double vals[16] = {};
  for (double t : {0.4, 1.9, 5.5}) {
    vals[0] = std::sin(t / 2);
    vals[1] = std::cos(t / 2);
    vals[kSqrt2Slot] = std::sqrt(2.0);
    CHECK(std::abs(z.re.eval(vals) - std::cos(t)) < 1e-12);
    CHECK(std::abs(z.im.eval(vals) - std::sin(t)) < 1e-12);
  }
}

TEST_CASE("engine decides circle-constrained identities") {
  // sin^2 + cos^2 = 1 has no counterexample
  std::string script =
      "(set-logic QF_NRA)\n"
      "(declare-const s0 Real)(declare-const c0 Real)\n"
      "(assert (= (+ (* s0 s0) (* c0 c0)) 1))\n"
      "(assert (not (= (+ (* s0 s0) (* c0 c0)) 1)))\n"
      "(check-sat)\n";
  CHECK(NraEngine::run_script(script) == "unsat\n");
}

TEST_CASE("engine finds models for satisfiable queries") {
  std::string script =
      "(set-logic QF_NRA)\n"
      "(declare-const s0 Real)(declare-const c0 Real)\n"
      "(assert (= (+ (* s0 s0) (* c0 c0)) 1))\n"
      "(assert (not (= s0 0)))\n"
      "(check-sat)\n";
  CHECK(NraEngine::run_script(script) == "sat\n");
}

TEST_CASE("engine handles the sqrt2 side constraint") {
  std::string script =
      "(set-logic QF_NRA)\n"
      "(declare-const r Real)\n"
      "(assert (= (* r r) 2))(assert (> r 0))\n"
      "(assert (not (= (* r r) 2)))\n"
      "(check-sat)\n";
  CHECK(NraEngine::run_script(script) == "unsat\n");
}

TEST_CASE("engine reports unknown outside its fragment") {
  std::string script =
      "(set-logic QF_NRA)\n"
      "(declare-const x Real)\n"
      "(assert (= (* x x x) x))\n"
      "(check-sat)\n";
  CHECK(NraEngine::run_script(script) == "unknown\n");
}
