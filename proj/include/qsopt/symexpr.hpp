#pragma once

#include <complex>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "qsopt/angle.hpp"
#include "qsopt/rat.hpp"

namespace qsopt {

// Symbolic complex scalar expressions. Nodes are immutable and shared.
// Variables:
//   Param i      p_i, a free real parameter
//   HalfParam i  h_i = p_i / 2 (introduced by the half-angle substitution)
//   SinVar i     s_i = sin(h_i), trig-free form
//   CosVar i     c_i = cos(h_i)
enum class Kind {
  Rational, Pi, I, Sqrt2,
  Param, HalfParam, SinVar, CosVar,
  Add, Mul,
  Sin, Cos, ExpI,
};

struct ExprNode;
using SymExpr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  Kind kind;
  Rat value;       // Kind::Rational
  int index = -1;  // variable kinds
  std::vector<SymExpr> kids;
  size_t hash = 0;
};

namespace sym {
SymExpr rat(Rat v);
SymExpr integer(int64_t v);
SymExpr pi();
SymExpr i();
SymExpr sqrt2();
SymExpr param(int idx);
SymExpr half_param(int idx);
SymExpr sinvar(int idx);
SymExpr cosvar(int idx);
SymExpr add(std::vector<SymExpr> kids);
SymExpr mul(std::vector<SymExpr> kids);
SymExpr neg(SymExpr e);
SymExpr sin_(SymExpr e);
SymExpr cos_(SymExpr e);
SymExpr exp_i(SymExpr e);  // e^{i * arg}
}  // namespace sym

int expr_cmp(const SymExpr& a, const SymExpr& b);
bool expr_eq(const SymExpr& a, const SymExpr& b);

// Evaluation with concrete parameter values; HalfParam/SinVar/CosVar evaluate
// through params[i]/2. Unbound indices are an error.
std::complex<double> eval(const SymExpr& e, const std::vector<double>& params);

std::string to_string(const SymExpr& e);

// Expression grammar used by gate-set files (integers, rationals, pi, i,
// sqrt2, p<k>, + - * /, sin, cos, exp(i*...)).
SymExpr parse_expr(const std::string& text);

// The verifier's trig elimination (half-angle substitution, Euler expansion,
// angle-sum identities, exact table for multiples of pi/4, fresh s/c vars).
// The result contains no Sin/Cos/ExpI/Param/HalfParam/Pi nodes.
SymExpr normalize_trig(const SymExpr& e);

// Half-param indices whose s/c variables occur in a normalized expression.
void collect_trig_vars(const SymExpr& e, std::set<int>& out);

struct SymMatrix {
  int dim = 0;
  std::vector<SymExpr> e;  // row-major

  SymMatrix() = default;
  explicit SymMatrix(int d) : dim(d), e(d * d, sym::integer(0)) {}
  const SymExpr& at(int r, int c) const { return e[r * dim + c]; }
  SymExpr& at(int r, int c) { return e[r * dim + c]; }
  static SymMatrix identity(int d);
};

SymMatrix matmul(const SymMatrix& a, const SymMatrix& b);
SymMatrix tensor(const SymMatrix& a, const SymMatrix& b);

std::vector<std::complex<double>> eval_matrix(const SymMatrix& m,
                                              const std::vector<double>& params);

}  // namespace qsopt
