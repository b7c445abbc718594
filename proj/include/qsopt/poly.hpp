#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qsopt/symexpr.hpp"

namespace qsopt {

// Sparse multivariate polynomial with rational coefficients over at most 16
// variables; exponents packed 4 bits per variable slot. Slot convention used
// throughout the verifier and solver:
//   slot 2i   = s_i (sin of half-parameter i)
//   slot 2i+1 = c_i (cos of half-parameter i)
//   slot 15   = sqrt2
constexpr int kSqrt2Slot = 15;

struct Poly {
  std::map<uint64_t, Rat> terms;  // packed exponents -> coefficient

  static Poly constant(Rat v);
  static Poly var(int slot);

  bool is_zero() const { return terms.empty(); }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;

  // Normal form modulo sqrt2^2 = 2 and s_i^2 = 1 - c_i^2. Zero normal form
  // is equivalent to the polynomial vanishing for all angle assignments.
  Poly reduced() const;

  double eval(const double vals[16]) const;

  // SMT-LIB term; name(slot) supplies variable names.
  std::string to_smt() const;

  int max_degree() const;
  void add_term(uint64_t mono, const Rat& c);
};

std::string slot_name(int slot);

inline int mono_exp(uint64_t mono, int slot) { return (int)((mono >> (4 * slot)) & 0xf); }
inline uint64_t mono_with_exp(uint64_t mono, int slot, int e) {
  return (mono & ~(0xfULL << (4 * slot))) | ((uint64_t)e << (4 * slot));
}

struct CPoly {
  Poly re, im;

  friend CPoly operator+(const CPoly& a, const CPoly& b) { return {a.re + b.re, a.im + b.im}; }
  friend CPoly operator-(const CPoly& a, const CPoly& b) { return {a.re - b.re, a.im - b.im}; }
  friend CPoly operator*(const CPoly& a, const CPoly& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

// Converts a trig-free expression (output of normalize_trig) into a complex
// polynomial over the slot convention above.
CPoly to_poly(const SymExpr& e);

struct CPolyMatrix {
  int dim = 0;
  std::vector<CPoly> e;
  explicit CPolyMatrix(int d = 0) : dim(d), e((size_t)d * d) {}
  const CPoly& at(int r, int c) const { return e[(size_t)(r * dim + c)]; }
  CPoly& at(int r, int c) { return e[(size_t)(r * dim + c)]; }
  static CPolyMatrix identity(int d);
};

CPolyMatrix pmatmul(const CPolyMatrix& a, const CPolyMatrix& b);

}  // namespace qsopt
