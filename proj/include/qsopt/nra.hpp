#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsopt/poly.hpp"

namespace qsopt {

// Decision engine for the SMT-LIB fragment the verifier emits: QF_NRA
// queries whose equality asserts are either circle constraints s^2+c^2=1,
// the sqrt2 definition x^2=2 (with x>0), or a goal disjunction of polynomial
// disequalities. On this fragment the engine is exact: the goal polynomials
// are reduced modulo the constraint ideal; a zero normal form means the
// disequality cannot hold anywhere on the constraint variety (unsat), and a
// nonzero normal form is satisfiable on a dense subset (sat, with a model
// found by random angle sampling).
//
// Scripts outside the fragment get verdict "unknown" rather than a wrong
// answer, so any SMT-LIB solver (e.g. z3) can be swapped in via --solver.
class NraEngine {
 public:
  // Consumes as many complete top-level commands from buf as available,
  // writing responses (check-sat verdicts, models) to out. Leftover partial
  // input stays in buf.
  void feed(std::string& buf, std::ostream& out);

  // Runs a whole script, returning concatenated responses.
  static std::string run_script(const std::string& script);

  bool exited() const { return exited_; }

 private:
  struct SExpr {
    bool atom = false;
    std::string text;
    std::vector<SExpr> kids;
  };

  void exec(const SExpr& e, std::ostream& out);
  void do_assert(const SExpr& t);
  std::string check_sat();
  std::string get_model() const;
  Poly term_poly(const SExpr& t) const;
  Poly reduce(const Poly& p) const;
  void reset();

  static bool next_sexpr(const std::string& buf, size_t& pos, SExpr& out);

  std::vector<std::string> var_names_;
  std::map<std::string, int> var_slot_;
  // structural rules discovered from equality asserts
  std::map<int, Rat> square_const_;        // slot -> k, meaning v^2 = k
  std::map<int, int> circle_partner_;      // s-slot -> c-slot
  std::vector<int> positive_slots_;        // (> v 0) asserts
  std::vector<std::vector<Poly>> goals_;   // each: disjunction of "poly != 0"
  bool malformed_ = false;
  bool have_false_ = false;
  bool exited_ = false;
  std::map<std::string, double> model_;
  bool model_valid_ = false;
};

}  // namespace qsopt
