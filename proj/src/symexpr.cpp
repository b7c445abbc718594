#include "qsopt/symexpr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qsopt {

namespace {

size_t node_hash(const ExprNode& n) {
  size_t h = hash_combine(0x51f0, (size_t)n.kind);
  h = hash_combine(h, (size_t)n.value.num);
  h = hash_combine(h, (size_t)n.value.den);
  h = hash_combine(h, (size_t)n.index);
  for (const auto& k : n.kids) h = hash_combine(h, k->hash);
  return h;
}

SymExpr make(ExprNode n) {
  n.hash = node_hash(n);
  return std::make_shared<const ExprNode>(std::move(n));
}

}  // namespace

namespace sym {

SymExpr rat(Rat v) {
  ExprNode n;
  n.kind = Kind::Rational;
  n.value = v;
  return make(std::move(n));
}
SymExpr integer(int64_t v) { return rat(Rat(v)); }

static SymExpr leaf(Kind k, int idx = -1) {
  ExprNode n;
  n.kind = k;
  n.index = idx;
  return make(std::move(n));
}
SymExpr pi() { return leaf(Kind::Pi); }
SymExpr i() { return leaf(Kind::I); }
SymExpr sqrt2() { return leaf(Kind::Sqrt2); }
SymExpr param(int idx) { return leaf(Kind::Param, idx); }
SymExpr half_param(int idx) { return leaf(Kind::HalfParam, idx); }
SymExpr sinvar(int idx) { return leaf(Kind::SinVar, idx); }
SymExpr cosvar(int idx) { return leaf(Kind::CosVar, idx); }

SymExpr add(std::vector<SymExpr> kids) {
  std::vector<SymExpr> flat;
  Rat c(0);
  for (auto& k : kids) {
    if (k->kind == Kind::Add) {
      for (auto& kk : k->kids) {
        if (kk->kind == Kind::Rational) c += kk->value;
        else flat.push_back(kk);
      }
    } else if (k->kind == Kind::Rational) {
      c += k->value;
    } else {
      flat.push_back(std::move(k));
    }
  }
  std::sort(flat.begin(), flat.end(),
            [](const SymExpr& a, const SymExpr& b) { return expr_cmp(a, b) < 0; });
  if (!c.is_zero()) flat.push_back(rat(c));
  if (flat.empty()) return integer(0);
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = Kind::Add;
  n.kids = std::move(flat);
  return make(std::move(n));
}

SymExpr mul(std::vector<SymExpr> kids) {
  std::vector<SymExpr> flat;
  Rat c(1);
  for (auto& k : kids) {
    if (k->kind == Kind::Mul) {
      for (auto& kk : k->kids) {
        if (kk->kind == Kind::Rational) c *= kk->value;
        else flat.push_back(kk);
      }
    } else if (k->kind == Kind::Rational) {
      c *= k->value;
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (c.is_zero()) return integer(0);
  std::sort(flat.begin(), flat.end(),
            [](const SymExpr& a, const SymExpr& b) { return expr_cmp(a, b) < 0; });
  if (!(c == Rat(1))) flat.insert(flat.begin(), rat(c));
  if (flat.empty()) return integer(1);
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = Kind::Mul;
  n.kids = std::move(flat);
  return make(std::move(n));
}

SymExpr neg(SymExpr e) { return mul({integer(-1), std::move(e)}); }

static SymExpr unary(Kind k, SymExpr arg) {
  ExprNode n;
  n.kind = k;
  n.kids.push_back(std::move(arg));
  return make(std::move(n));
}
SymExpr sin_(SymExpr e) { return unary(Kind::Sin, std::move(e)); }
SymExpr cos_(SymExpr e) { return unary(Kind::Cos, std::move(e)); }
SymExpr exp_i(SymExpr e) { return unary(Kind::ExpI, std::move(e)); }

}  // namespace sym

int expr_cmp(const SymExpr& a, const SymExpr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (a->index != b->index) return a->index < b->index ? -1 : 1;
  if (a->value != b->value) return a->value < b->value ? -1 : 1;
  if (a->kids.size() != b->kids.size())
    return a->kids.size() < b->kids.size() ? -1 : 1;
  for (size_t k = 0; k < a->kids.size(); k++) {
    int c = expr_cmp(a->kids[k], b->kids[k]);
    if (c != 0) return c;
  }
  return 0;
}

bool expr_eq(const SymExpr& a, const SymExpr& b) {
  if (a->hash != b->hash) return false;
  return expr_cmp(a, b) == 0;
}

std::complex<double> eval(const SymExpr& e, const std::vector<double>& params) {
  auto p = [&](int idx) -> double {
    if (idx < 0 || (size_t)idx >= params.size())
      throw std::runtime_error("eval: unbound parameter p" + std::to_string(idx));
    return params[idx];
  };
  switch (e->kind) {
    case Kind::Rational: return e->value.to_double();
    case Kind::Pi: return M_PI;
    case Kind::I: return {0, 1};
    case Kind::Sqrt2: return std::sqrt(2.0);
    case Kind::Param: return p(e->index);
    case Kind::HalfParam: return p(e->index) / 2;
    case Kind::SinVar: return std::sin(p(e->index) / 2);
    case Kind::CosVar: return std::cos(p(e->index) / 2);
    case Kind::Add: {
      std::complex<double> s = 0;
      for (const auto& k : e->kids) s += eval(k, params);
      return s;
    }
    case Kind::Mul: {
      std::complex<double> s = 1;
      for (const auto& k : e->kids) s *= eval(k, params);
      return s;
    }
    case Kind::Sin: return std::sin(eval(e->kids[0], params).real());
    case Kind::Cos: return std::cos(eval(e->kids[0], params).real());
    case Kind::ExpI: {
      double t = eval(e->kids[0], params).real();
      return {std::cos(t), std::sin(t)};
    }
  }
  throw std::runtime_error("eval: bad node");
}

std::string to_string(const SymExpr& e) {
  switch (e->kind) {
    case Kind::Rational: return e->value.to_string();
    case Kind::Pi: return "pi";
    case Kind::I: return "i";
    case Kind::Sqrt2: return "sqrt2";
    case Kind::Param: return "p" + std::to_string(e->index);
    case Kind::HalfParam: return "hp" + std::to_string(e->index);
    case Kind::SinVar: return "s" + std::to_string(e->index);
    case Kind::CosVar: return "c" + std::to_string(e->index);
    case Kind::Add: {
      std::string s = "(";
      for (size_t k = 0; k < e->kids.size(); k++) {
        if (k) s += " + ";
        s += to_string(e->kids[k]);
      }
      return s + ")";
    }
    case Kind::Mul: {
      std::string s;
      for (size_t k = 0; k < e->kids.size(); k++) {
        if (k) s += "*";
        const auto& kid = e->kids[k];
        bool paren = kid->kind == Kind::Add ||
                     (kid->kind == Kind::Rational && kid->value.num < 0);
        s += paren ? "(" + to_string(kid) + ")" : to_string(kid);
      }
      return s;
    }
    case Kind::Sin: return "sin(" + to_string(e->kids[0]) + ")";
    case Kind::Cos: return "cos(" + to_string(e->kids[0]) + ")";
    case Kind::ExpI: return "exp(i*(" + to_string(e->kids[0]) + "))";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expression grammar parser (gate-set files).

namespace {

struct ExprParser {
  const std::string& s;
  size_t pos = 0;

  explicit ExprParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && isspace((unsigned char)s[pos])) pos++;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) { pos++; return true; }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("expr parse error at offset " + std::to_string(pos) +
                             ": " + msg + " in '" + s + "'");
  }

  SymExpr parse() {
    SymExpr e = expr();
    skip_ws();
    if (pos != s.size()) fail("trailing input");
    return e;
  }

  SymExpr expr() {
    SymExpr e = term();
    for (;;) {
      skip_ws();
      if (eat('+')) e = sym::add({e, term()});
      else if (eat('-')) e = sym::add({e, sym::neg(term())});
      else return e;
    }
  }

  SymExpr term() {
    SymExpr e = factor();
    for (;;) {
      skip_ws();
      if (eat('*')) {
        e = sym::mul({e, factor()});
      } else if (eat('/')) {
        SymExpr d = factor();
        if (d->kind == Kind::Rational) {
          e = sym::mul({e, sym::rat(Rat(1) / d->value)});
        } else if (d->kind == Kind::Sqrt2) {
          // 1/sqrt2 = sqrt2/2
          e = sym::mul({e, sym::rat(Rat(1, 2)), sym::sqrt2()});
        } else {
          fail("can only divide by rational constants or sqrt2");
        }
      } else {
        return e;
      }
    }
  }

  SymExpr factor() {
    skip_ws();
    if (eat('-')) return sym::neg(factor());
    return atom();
  }

  SymExpr atom() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end");
    char c = s[pos];
    if (isdigit((unsigned char)c)) {
      size_t start = pos;
      while (pos < s.size() && isdigit((unsigned char)s[pos])) pos++;
      return sym::integer(std::stoll(s.substr(start, pos - start)));
    }
    if (c == '(') {
      pos++;
      SymExpr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (isalpha((unsigned char)c)) {
      size_t start = pos;
      while (pos < s.size() && isalnum((unsigned char)s[pos])) pos++;
      std::string word = s.substr(start, pos - start);
      if (word == "pi") return sym::pi();
      if (word == "i") return sym::i();
      if (word == "sqrt2") return sym::sqrt2();
      if (word == "sin" || word == "cos") {
        if (!eat('(')) fail("expected '(' after " + word);
        SymExpr a = expr();
        if (!eat(')')) fail("expected ')'");
        return word == "sin" ? sym::sin_(a) : sym::cos_(a);
      }
      if (word == "exp") {
        if (!eat('(')) fail("expected '(' after exp");
        if (!eat('i')) fail("exp argument must be i*(...)");
        if (!eat('*')) fail("exp argument must be i*(...)");
        SymExpr a = expr();
        if (!eat(')')) fail("expected ')'");
        return sym::exp_i(a);
      }
      if (word[0] == 'p' && word.size() > 1 &&
          std::all_of(word.begin() + 1, word.end(),
                      [](char ch) { return isdigit((unsigned char)ch); })) {
        return sym::param(std::stoi(word.substr(1)));
      }
      fail("unknown identifier '" + word + "'");
    }
    fail("unexpected character");
  }
};

}  // namespace

SymExpr parse_expr(const std::string& text) { return ExprParser(text).parse(); }

// ---------------------------------------------------------------------------
// Trig elimination.

namespace {

// Linear form over half-parameter variables plus a rational multiple of pi.
struct LinForm {
  std::map<int, Rat> coeffs;  // half-param id -> coefficient
  Rat pi_c;                   // multiple of pi
  Rat const_c;                // plain rational constant

  void add_scaled(const LinForm& o, const Rat& s) {
    for (const auto& [v, c] : o.coeffs) {
      Rat& r = coeffs[v];
      r += c * s;
      if (r.is_zero()) coeffs.erase(v);
    }
    pi_c += o.pi_c * s;
    const_c += o.const_c * s;
  }
};

[[noreturn]] void reject(const SymExpr& e, const std::string& why) {
  throw std::runtime_error("normalize_trig: " + why + " in " + to_string(e));
}

// Interprets e as a linear combination of half-params and pi. Fails on
// anything nonlinear (the verifier only meets linear trig arguments).
LinForm linearize(const SymExpr& e) {
  switch (e->kind) {
    case Kind::Rational: {
      LinForm l;
      l.const_c = e->value;
      return l;
    }
    case Kind::Pi: {
      LinForm l;
      l.pi_c = Rat(1);
      return l;
    }
    case Kind::HalfParam: {
      LinForm l;
      l.coeffs[e->index] = Rat(1);
      return l;
    }
    case Kind::Add: {
      LinForm l;
      for (const auto& k : e->kids) l.add_scaled(linearize(k), Rat(1));
      return l;
    }
    case Kind::Mul: {
      Rat scale(1);
      SymExpr lin = nullptr;
      for (const auto& k : e->kids) {
        if (k->kind == Kind::Rational) scale *= k->value;
        else if (lin == nullptr) lin = k;
        else reject(e, "nonlinear trig argument");
      }
      LinForm l;
      if (lin != nullptr) l.add_scaled(linearize(lin), scale);
      else l.const_c = scale;
      return l;
    }
    default:
      reject(e, "unsupported term in trig argument");
  }
}

// Exact sin/cos of r*pi for r a multiple of 1/4 (values 0, ±1, ±sqrt2/2).
SymExpr table_trig(bool is_sin, Rat r) {
  // reduce mod 2
  Rat m = Angle::normalize_pi(r);  // (-1, 1]
  Rat k8 = m * Rat(4);             // eighths of a full turn, in (-4, 4]
  if (!k8.is_integer())
    throw std::runtime_error("normalize_trig: sin/cos of " + r.to_string() +
                             "*pi is outside the exact-value table (multiples "
                             "of pi/4 only)");
  int k = (int)(((k8.num % 8) + 8) % 8);  // 0..7
  static const int sin_tab[8] = {0, 1, 2, 1, 0, -1, -2, -1};  // 2 means 1, 1 means sqrt2/2
  static const int cos_tab[8] = {2, 1, 0, -1, -2, -1, 0, 1};
  int v = is_sin ? sin_tab[k] : cos_tab[k];
  switch (v) {
    case 0: return sym::integer(0);
    case 2: return sym::integer(1);
    case -2: return sym::integer(-1);
    case 1: return sym::mul({sym::rat(Rat(1, 2)), sym::sqrt2()});
    case -1: return sym::mul({sym::rat(Rat(-1, 2)), sym::sqrt2()});
  }
  throw std::logic_error("table_trig");
}

SymExpr expand_trig(bool is_sin, LinForm l);

SymExpr expand_sin(LinForm l) { return expand_trig(true, std::move(l)); }
SymExpr expand_cos(LinForm l) { return expand_trig(false, std::move(l)); }

SymExpr expand_trig(bool is_sin, LinForm l) {
  if (!l.const_c.is_zero())
    throw std::runtime_error(
        "normalize_trig: non-pi constant inside trig argument");
  if (l.coeffs.empty()) return table_trig(is_sin, l.pi_c);
  auto it = l.coeffs.begin();
  int v = it->first;
  Rat c = it->second;
  if (!c.is_integer())
    throw std::runtime_error(
        "normalize_trig: fractional half-angle coefficient (gate parameters "
        "must enter as integer multiples of p or p/2)");
  int sign = c.num > 0 ? 1 : -1;
  LinForm rest = l;
  Rat& rc = rest.coeffs[v];
  rc -= Rat(sign);
  if (rc.is_zero()) rest.coeffs.erase(v);
  // sin(±v + R) = ±s_v cos(R) + c_v sin(R)
  // cos(±v + R) = c_v cos(R) ∓ s_v sin(R)
  SymExpr sv = sym::sinvar(v), cv = sym::cosvar(v);
  SymExpr cR = expand_cos(rest), sR = expand_sin(rest);
  if (is_sin)
    return sym::add({sym::mul({sym::integer(sign), sv, cR}), sym::mul({cv, sR})});
  return sym::add({sym::mul({cv, cR}), sym::mul({sym::integer(-sign), sv, sR})});
}

// Replace p_i by h_i + h_i so every trig argument becomes an integer
// combination of half-angle variables.
SymExpr substitute_half(const SymExpr& e) {
  switch (e->kind) {
    case Kind::Param:
      return sym::mul({sym::integer(2), sym::half_param(e->index)});
    case Kind::Add: {
      std::vector<SymExpr> kids;
      for (const auto& k : e->kids) kids.push_back(substitute_half(k));
      return sym::add(std::move(kids));
    }
    case Kind::Mul: {
      std::vector<SymExpr> kids;
      for (const auto& k : e->kids) kids.push_back(substitute_half(k));
      return sym::mul(std::move(kids));
    }
    case Kind::Sin: return sym::sin_(substitute_half(e->kids[0]));
    case Kind::Cos: return sym::cos_(substitute_half(e->kids[0]));
    case Kind::ExpI: return sym::exp_i(substitute_half(e->kids[0]));
    default: return e;
  }
}

SymExpr eliminate(const SymExpr& e) {
  switch (e->kind) {
    case Kind::Rational:
    case Kind::I:
    case Kind::Sqrt2:
    case Kind::SinVar:
    case Kind::CosVar:
      return e;
    case Kind::Pi:
      reject(e, "bare pi outside a trig argument");
    case Kind::Param:
    case Kind::HalfParam:
      reject(e, "parameter outside a trig argument");
    case Kind::Add: {
      std::vector<SymExpr> kids;
      for (const auto& k : e->kids) kids.push_back(eliminate(k));
      return sym::add(std::move(kids));
    }
    case Kind::Mul: {
      std::vector<SymExpr> kids;
      for (const auto& k : e->kids) kids.push_back(eliminate(k));
      return sym::mul(std::move(kids));
    }
    case Kind::Sin: return expand_sin(linearize(e->kids[0]));
    case Kind::Cos: return expand_cos(linearize(e->kids[0]));
    case Kind::ExpI: {
      LinForm l = linearize(e->kids[0]);
      return sym::add({expand_cos(l), sym::mul({sym::i(), expand_sin(l)})});
    }
  }
  throw std::logic_error("eliminate");
}

}  // namespace

SymExpr normalize_trig(const SymExpr& e) { return eliminate(substitute_half(e)); }

void collect_trig_vars(const SymExpr& e, std::set<int>& out) {
  if (e->kind == Kind::SinVar || e->kind == Kind::CosVar) out.insert(e->index);
  for (const auto& k : e->kids) collect_trig_vars(k, out);
}

// ---------------------------------------------------------------------------
// Matrices.

SymMatrix SymMatrix::identity(int d) {
  SymMatrix m(d);
  for (int k = 0; k < d; k++) m.at(k, k) = sym::integer(1);
  return m;
}

SymMatrix matmul(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim != b.dim) throw std::runtime_error("matmul: dimension mismatch");
  SymMatrix out(a.dim);
  for (int r = 0; r < a.dim; r++) {
    for (int c = 0; c < a.dim; c++) {
      std::vector<SymExpr> terms;
      for (int k = 0; k < a.dim; k++) {
        if (a.at(r, k)->kind == Kind::Rational && a.at(r, k)->value.is_zero()) continue;
        if (b.at(k, c)->kind == Kind::Rational && b.at(k, c)->value.is_zero()) continue;
        terms.push_back(sym::mul({a.at(r, k), b.at(k, c)}));
      }
      out.at(r, c) = sym::add(std::move(terms));
    }
  }
  return out;
}

SymMatrix tensor(const SymMatrix& a, const SymMatrix& b) {
  SymMatrix out(a.dim * b.dim);
  for (int r1 = 0; r1 < a.dim; r1++)
    for (int c1 = 0; c1 < a.dim; c1++)
      for (int r2 = 0; r2 < b.dim; r2++)
        for (int c2 = 0; c2 < b.dim; c2++)
          out.at(r1 * b.dim + r2, c1 * b.dim + c2) =
              sym::mul({a.at(r1, c1), b.at(r2, c2)});
  return out;
}

std::vector<std::complex<double>> eval_matrix(const SymMatrix& m,
                                              const std::vector<double>& params) {
  std::vector<std::complex<double>> out(m.e.size());
  for (size_t k = 0; k < m.e.size(); k++) out[k] = eval(m.e[k], params);
  return out;
}

}  // namespace qsopt
