#include "qsopt/fingerprint.hpp"

#include <cmath>
#include <random>

namespace qsopt {

FingerprintContext FingerprintContext::create(uint64_t seed, int q, int m,
                                              double e_max) {
  FingerprintContext ctx;
  ctx.rng_seed = seed;
  ctx.q = q;
  ctx.m = m;
  ctx.e_max = e_max;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0, 2 * M_PI);
  for (int k = 0; k < m; k++) ctx.p0.push_back(uni(rng));
  std::normal_distribution<double> gauss(0, 1);
  auto draw_state = [&]() {
    std::vector<std::complex<double>> v((size_t)1 << q);
    double norm2 = 0;
    for (auto& a : v) {
      double re = gauss(rng), im = gauss(rng);
      a = {re, im};
      norm2 += re * re + im * im;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : v) a *= inv;
    return v;
  };
  ctx.psi0 = draw_state();
  ctx.psi1 = draw_state();
  return ctx;
}

FingerprintKey fingerprint_key(double fp, double e_max) {
  return (FingerprintKey)std::floor(fp / (2 * e_max));
}

std::complex<double> inner_product(const std::vector<std::complex<double>>& bra,
                                   const std::vector<std::complex<double>>& ket) {
  std::complex<double> acc = 0;
  for (size_t k = 0; k < bra.size(); k++) acc += std::conj(bra[k]) * ket[k];
  return acc;
}

std::complex<double> fingerprint_amplitude(const Circuit& c,
                                           const FingerprintContext& ctx) {
  auto state = apply_circuit(c, ctx.p0, ctx.psi1);
  return inner_product(ctx.psi0, state);
}

std::pair<double, FingerprintKey> fingerprint(const Circuit& c,
                                              const FingerprintContext& ctx) {
  double fp = std::abs(fingerprint_amplitude(c, ctx));
  return {fp, fingerprint_key(fp, ctx.e_max)};
}

}  // namespace qsopt
