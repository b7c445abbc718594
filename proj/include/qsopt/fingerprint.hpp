#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qsopt/circuit.hpp"

namespace qsopt {

using FingerprintKey = int64_t;

struct FingerprintContext {
  uint64_t rng_seed = 0;
  int q = 0;
  int m = 0;
  double e_max = 1e-15;
  std::vector<double> p0;                   // length m, uniform [0, 2pi)
  std::vector<std::complex<double>> psi0;   // unit norm, length 2^q
  std::vector<std::complex<double>> psi1;

  static FingerprintContext create(uint64_t seed, int q, int m,
                                   double e_max = 1e-15);
};

FingerprintKey fingerprint_key(double fp, double e_max);

// fp = |<psi0| [[C]](p0) |psi1>|, computed by state-vector application.
std::pair<double, FingerprintKey> fingerprint(const Circuit& c,
                                              const FingerprintContext& ctx);

// The complex amplitude <psi0| [[C]](p0) |psi1>| before taking the modulus
// (used for phase-candidate matching).
std::complex<double> fingerprint_amplitude(const Circuit& c,
                                           const FingerprintContext& ctx);

std::complex<double> inner_product(const std::vector<std::complex<double>>& bra,
                                   const std::vector<std::complex<double>>& ket);

}  // namespace qsopt
