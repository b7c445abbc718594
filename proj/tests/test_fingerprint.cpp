#include <cmath>
#include <memory>

#include "doctest.h"
#include "qsopt/fingerprint.hpp"

using namespace qsopt;

namespace {

std::shared_ptr<const GateSet> ct_set() {
  return std::make_shared<GateSet>(builtin_gate_set("clifford_t"));
}

Circuit circ(const std::string& text, std::shared_ptr<const GateSet> gs, int q,
             int m = 2) {
  return parse_circuit_text(text, gs, q, m);
}

}  // namespace

TEST_CASE("context is deterministic and normalized") {
  auto a = FingerprintContext::create(42, 3, 2);
  auto b = FingerprintContext::create(42, 3, 2);
  CHECK(a.p0 == b.p0);
  CHECK(a.psi0 == b.psi0);
  CHECK(a.psi1 == b.psi1);
  double n0 = 0, n1 = 0;
  for (auto z : a.psi0) n0 += std::norm(z);
  for (auto z : a.psi1) n1 += std::norm(z);
  CHECK(std::abs(n0 - 1.0) < 1e-12);
  CHECK(std::abs(n1 - 1.0) < 1e-12);
  auto c = FingerprintContext::create(43, 3, 2);
  CHECK(a.psi0 != c.psi0);
}

TEST_CASE("empty circuit fingerprints to the state overlap") {
  auto gs = ct_set();
  auto ctx = FingerprintContext::create(7, 2, 2);
  auto [fp, key] = fingerprint(circ("", gs, 2), ctx);
  CHECK(std::abs(fp - std::abs(inner_product(ctx.psi0, ctx.psi1))) < 1e-15);
  CHECK(fp >= 0);
  CHECK(fp <= 1);
  CHECK(key == fingerprint_key(fp, ctx.e_max));
}

TEST_CASE("fingerprint is invariant under global phase") {
  auto gs = ct_set();
  auto ctx = FingerprintContext::create(7, 1, 2);
  auto fp_empty = fingerprint(circ("", gs, 1), ctx).first;
  auto nam = std::make_shared<GateSet>(builtin_gate_set("nam"));
  CHECK(std::abs(fingerprint(circ("x 0; x 0", nam, 1), ctx).first - fp_empty) < 1e-15);
  CHECK(std::abs(fingerprint(circ("s 0; s 0; s 0; s 0", gs, 1), ctx).first - fp_empty) < 1e-15);
  CHECK(std::abs(fingerprint(circ("t 0; t 0", gs, 1), ctx).first -
                 fingerprint(circ("s 0", gs, 1), ctx).first) < 1e-15);
}

TEST_CASE("sequence order does not affect the fingerprint") {
  auto gs = ct_set();
  auto ctx = FingerprintContext::create(9, 2, 2);
  auto a = fingerprint(circ("h 0; t 1; cx 0 1", gs, 2), ctx);
  auto b = fingerprint(circ("t 1; h 0; cx 0 1", gs, 2), ctx);
  CHECK(std::abs(a.first - b.first) < 1e-15);
  CHECK(a.second == b.second);
}

TEST_CASE("equal or adjacent keys for equivalent circuits") {
  auto gs = ct_set();
  auto ctx = FingerprintContext::create(13, 1, 2);
  auto ka = fingerprint(circ("h 0; h 0", gs, 1), ctx).second;
  auto kb = fingerprint(circ("", gs, 1), ctx).second;
  CHECK(std::abs(ka - kb) <= 1);
}

TEST_CASE("state-vector fingerprint agrees with the matrix computation") {
  auto gs = ct_set();
  auto ctx = FingerprintContext::create(21, 2, 2);
  Circuit c = circ("h 0; cx 0 1; t 1; h 1", gs, 2);
  auto u = circuit_unitary(c, {});
  int dim = 1 << c.q;
  std::complex<double> amp = 0;
  for (int r = 0; r < dim; r++) {
    std::complex<double> row = 0;
    for (int k = 0; k < dim; k++) row += u[r * dim + k] * ctx.psi1[k];
    amp += std::conj(ctx.psi0[r]) * row;
  }
  CHECK(std::abs(fingerprint(c, ctx).first - std::abs(amp)) < 1e-12);
  CHECK(std::abs(fingerprint_amplitude(c, ctx) - amp) < 1e-12);
}

TEST_CASE("key quantization uses floor at 2 e_max") {
  CHECK(fingerprint_key(0.0, 1e-15) == 0);
  CHECK(fingerprint_key(10e-15, 1e-15) == 5);
  CHECK(fingerprint_key(0.5, 0.125) == 2);
}
