#pragma once

#include <cmath>
#include <cstdio>
#include <cstring>
#include <optional>
#include <string>

#include "qsopt/rat.hpp"

namespace qsopt {

// A concrete gate angle. Stored exactly as a rational multiple of pi when
// possible (all benchmark angles are k*pi/4), otherwise as a double.
// Exact angles are kept normalized to (-1, 1] times pi.
struct Angle {
  bool exact = true;
  Rat pi_mult;     // value = pi_mult * pi, when exact
  double raw = 0;  // value in radians, when !exact

  Angle() = default;
  static Angle of_pi(Rat r) {
    Angle a;
    a.exact = true;
    a.pi_mult = normalize_pi(r);
    return a;
  }
  static Angle of_double(double v) {
    Angle a;
    a.exact = false;
    a.raw = std::remainder(v, 2 * M_PI);
    return a;
  }
  static Angle zero() { return of_pi(Rat(0)); }

  // mod 2pi, into (-1, 1] * pi
  static Rat normalize_pi(Rat r) {
    // r mod 2
    int64_t two_den = 2 * r.den;
    int64_t n = ((r.num % two_den) + two_den) % two_den;  // in [0, 2den)
    Rat m(n, r.den);
    if (Rat(1) < m) m = m - Rat(2);
    return m;
  }

  double value() const { return exact ? pi_mult.to_double() * M_PI : raw; }
  bool is_zero() const { return exact ? pi_mult.is_zero() : std::abs(raw) < 1e-12; }

  friend Angle operator+(const Angle& a, const Angle& b) {
    if (a.exact && b.exact) return of_pi(a.pi_mult + b.pi_mult);
    return of_double(a.value() + b.value());
  }
  Angle operator-() const {
    return exact ? of_pi(-pi_mult) : of_double(-raw);
  }
  Angle half() const {
    // halves the representative in (-1,1], e.g. pi -> pi/2
    return exact ? of_pi(pi_mult * Rat(1, 2)) : of_double(raw / 2);
  }
  Angle twice() const {
    return exact ? of_pi(pi_mult * Rat(2)) : of_double(raw * 2);
  }

  friend bool operator==(const Angle& a, const Angle& b) {
    if (a.exact != b.exact) return false;
    return a.exact ? a.pi_mult == b.pi_mult : a.raw == b.raw;
  }
  friend bool operator!=(const Angle& a, const Angle& b) { return !(a == b); }
  friend bool operator<(const Angle& a, const Angle& b) {
    if (a.exact != b.exact) return a.exact;  // exact sorts first
    if (a.exact) return a.pi_mult < b.pi_mult;
    return a.raw < b.raw;
  }

  std::string to_string() const {
    if (!exact) return format_double(raw);
    if (pi_mult.is_zero()) return "0";
    std::string s;
    if (pi_mult.num == -1) s = "-pi";
    else if (pi_mult.num == 1) s = "pi";
    else s = std::to_string(pi_mult.num) + "*pi";
    if (pi_mult.den != 1) s += "/" + std::to_string(pi_mult.den);
    return s;
  }

  static std::string format_double(double v) {
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  size_t hash() const {
    if (exact) return hash_combine(hash_combine(2, (size_t)pi_mult.num), (size_t)pi_mult.den);
    size_t b;
    static_assert(sizeof(double) == sizeof(size_t));
    memcpy(&b, &raw, sizeof b);
    return hash_combine(3, b);
  }
};

}  // namespace qsopt
