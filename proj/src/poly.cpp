#include "qsopt/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace qsopt {

Poly Poly::constant(Rat v) {
  Poly p;
  if (!v.is_zero()) p.terms[0] = v;
  return p;
}

Poly Poly::var(int slot) {
  Poly p;
  p.terms[mono_with_exp(0, slot, 1)] = Rat(1);
  return p;
}

void Poly::add_term(uint64_t mono, const Rat& c) {
  auto it = terms.find(mono);
  if (it == terms.end()) {
    if (!c.is_zero()) terms[mono] = c;
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) out.add_term(m, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) out.add_term(m, -c);
  return out;
}

Poly Poly::operator-() const {
  Poly out;
  for (const auto& [m, c] : terms) out.terms[m] = -c;
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      // exponents add slotwise; 4 bits per slot never overflow at our degrees,
      // but guard anyway
      uint64_t m = 0;
      for (int s = 0; s < 16; s++) {
        int e = mono_exp(ma, s) + mono_exp(mb, s);
        if (e > 15) throw std::runtime_error("Poly: exponent overflow");
        m = mono_with_exp(m, s, e);
      }
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Poly Poly::reduced() const {
  Poly out;
  std::vector<std::pair<uint64_t, Rat>> work(terms.begin(), terms.end());
  while (!work.empty()) {
    auto [m, c] = work.back();
    work.pop_back();
    if (c.is_zero()) continue;
    int ws = mono_exp(m, kSqrt2Slot);
    if (ws >= 2) {
      // sqrt2^2 = 2
      Rat mult(1);
      int k = ws / 2;
      for (int t = 0; t < k; t++) mult *= Rat(2);
      work.push_back({mono_with_exp(m, kSqrt2Slot, ws % 2), c * mult});
      continue;
    }
    bool split = false;
    for (int i = 0; i < 7; i++) {
      int se = mono_exp(m, 2 * i);
      if (se >= 2) {
        // s^2 = 1 - c^2
        uint64_t base = mono_with_exp(m, 2 * i, se - 2);
        work.push_back({base, c});
        int ce = mono_exp(base, 2 * i + 1);
        if (ce + 2 > 15) throw std::runtime_error("Poly: exponent overflow");
        work.push_back({mono_with_exp(base, 2 * i + 1, ce + 2), -c});
        split = true;
        break;
      }
    }
    if (!split) out.add_term(m, c);
  }
  return out;
}

double Poly::eval(const double vals[16]) const {
  double acc = 0;
  for (const auto& [m, c] : terms) {
    double t = c.to_double();
    for (int s = 0; s < 16; s++) {
      int e = mono_exp(m, s);
      for (int k = 0; k < e; k++) t *= vals[s];
    }
    acc += t;
  }
  return acc;
}

int Poly::max_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms) {
    (void)c;
    int t = 0;
    for (int s = 0; s < 16; s++) t += mono_exp(m, s);
    d = std::max(d, t);
  }
  return d;
}

std::string slot_name(int slot) {
  if (slot == kSqrt2Slot) return "sqrt2";
  int i = slot / 2;
  return (slot % 2 == 0 ? "s" : "c") + std::to_string(i);
}

namespace {

std::string smt_rat(const Rat& r) {
  bool neg = r.num < 0;
  int64_t n = neg ? -r.num : r.num;
  std::string core = r.den == 1 ? std::to_string(n)
                                : "(/ " + std::to_string(n) + " " +
                                      std::to_string(r.den) + ")";
  return neg ? "(- " + core + ")" : core;
}

}  // namespace

std::string Poly::to_smt() const {
  if (terms.empty()) return "0";
  std::vector<std::string> parts;
  for (const auto& [m, c] : terms) {
    std::vector<std::string> factors;
    factors.push_back(smt_rat(c));
    for (int s = 0; s < 16; s++) {
      int e = mono_exp(m, s);
      for (int k = 0; k < e; k++) factors.push_back(slot_name(s));
    }
    if (factors.size() == 1) {
      parts.push_back(factors[0]);
    } else {
      std::string t = "(*";
      for (const auto& f : factors) t += " " + f;
      parts.push_back(t + ")");
    }
  }
  if (parts.size() == 1) return parts[0];
  std::string out = "(+";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

CPoly to_poly(const SymExpr& e) {
  switch (e->kind) {
    case Kind::Rational: return {Poly::constant(e->value), Poly()};
    case Kind::I: return {Poly(), Poly::constant(Rat(1))};
    case Kind::Sqrt2: return {Poly::var(kSqrt2Slot), Poly()};
    case Kind::SinVar:
      if (e->index >= 7) throw std::runtime_error("to_poly: too many parameters");
      return {Poly::var(2 * e->index), Poly()};
    case Kind::CosVar:
      if (e->index >= 7) throw std::runtime_error("to_poly: too many parameters");
      return {Poly::var(2 * e->index + 1), Poly()};
    case Kind::Add: {
      CPoly acc{Poly(), Poly()};
      for (const auto& k : e->kids) acc = acc + to_poly(k);
      return acc;
    }
    case Kind::Mul: {
      CPoly acc{Poly::constant(Rat(1)), Poly()};
      for (const auto& k : e->kids) acc = acc * to_poly(k);
      return acc;
    }
    default:
      throw std::runtime_error("to_poly: expression is not trig-free: " +
                               to_string(e));
  }
}

CPolyMatrix CPolyMatrix::identity(int d) {
  CPolyMatrix m(d);
  for (int k = 0; k < d; k++) m.at(k, k) = {Poly::constant(Rat(1)), Poly()};
  return m;
}

CPolyMatrix pmatmul(const CPolyMatrix& a, const CPolyMatrix& b) {
  if (a.dim != b.dim) throw std::runtime_error("pmatmul: dimension mismatch");
  CPolyMatrix out(a.dim);
  for (int r = 0; r < a.dim; r++) {
    for (int c = 0; c < a.dim; c++) {
      CPoly acc{Poly(), Poly()};
      for (int k = 0; k < a.dim; k++) {
        const CPoly& x = a.at(r, k);
        const CPoly& y = b.at(k, c);
        if (x.re.is_zero() && x.im.is_zero()) continue;
        if (y.re.is_zero() && y.im.is_zero()) continue;
        acc = acc + x * y;
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

}  // namespace qsopt
