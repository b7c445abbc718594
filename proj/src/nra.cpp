#include "qsopt/nra.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qsopt {

namespace {

void skip_ws(const std::string& s, size_t& p) {
  while (p < s.size()) {
    if (isspace((unsigned char)s[p])) {
      p++;
    } else if (s[p] == ';') {
      while (p < s.size() && s[p] != '\n') p++;
    } else {
      return;
    }
  }
}

}  // namespace

bool NraEngine::next_sexpr(const std::string& buf, size_t& pos, SExpr& out) {
  size_t p = pos;
  skip_ws(buf, p);
  if (p >= buf.size()) return false;
  if (buf[p] != '(') {
    // bare atom
    size_t start = p;
    while (p < buf.size() && !isspace((unsigned char)buf[p]) && buf[p] != '(' &&
           buf[p] != ')')
      p++;
    if (p == buf.size()) return false;  // may be a partial atom; wait for more
    out = SExpr{true, buf.substr(start, p - start), {}};
    pos = p;
    return true;
  }
  // list: find matching paren, then parse recursively
  int depth = 0;
  size_t end = p;
  bool in_str = false;
  for (; end < buf.size(); end++) {
    char c = buf[end];
    if (in_str) {
      if (c == '"') in_str = false;
      continue;
    }
    if (c == '"') in_str = true;
    else if (c == '(') depth++;
    else if (c == ')') {
      depth--;
      if (depth == 0) break;
    }
  }
  if (end >= buf.size()) return false;  // incomplete

  // recursive parse of buf[p..end]
  std::vector<SExpr*> stack;
  SExpr root;
  size_t k = p;
  while (k <= end) {
    char c = buf[k];
    if (isspace((unsigned char)c)) { k++; continue; }
    if (c == '(') {
      if (stack.empty()) {
        root = SExpr{};
        stack.push_back(&root);
      } else {
        stack.back()->kids.push_back(SExpr{});
        stack.push_back(&stack.back()->kids.back());
      }
      k++;
    } else if (c == ')') {
      stack.pop_back();
      k++;
    } else if (c == '"') {
      size_t start = ++k;
      while (k <= end && buf[k] != '"') k++;
      stack.back()->kids.push_back(SExpr{true, buf.substr(start, k - start), {}});
      k++;
    } else {
      size_t start = k;
      while (k <= end && !isspace((unsigned char)buf[k]) && buf[k] != '(' &&
             buf[k] != ')')
        k++;
      stack.back()->kids.push_back(SExpr{true, buf.substr(start, k - start), {}});
    }
  }
  out = root;
  pos = end + 1;
  return true;
}

void NraEngine::feed(std::string& buf, std::ostream& out) {
  size_t pos = 0;
  SExpr e;
  while (!exited_ && next_sexpr(buf, pos, e)) exec(e, out);
  buf.erase(0, pos);
}

std::string NraEngine::run_script(const std::string& script) {
  NraEngine eng;
  std::string buf = script;
  std::ostringstream out;
  eng.feed(buf, out);
  return out.str();
}

void NraEngine::exec(const SExpr& e, std::ostream& out) {
  if (e.atom || e.kids.empty() || !e.kids[0].atom) return;
  const std::string& cmd = e.kids[0].text;
  if (cmd == "set-logic" || cmd == "set-option" || cmd == "set-info") return;
  if (cmd == "declare-const" || cmd == "declare-fun") {
    if (e.kids.size() < 2 || !e.kids[1].atom) { malformed_ = true; return; }
    const std::string& name = e.kids[1].text;
    if (var_slot_.count(name)) return;
    if (var_names_.size() >= 16) { malformed_ = true; return; }
    var_slot_[name] = (int)var_names_.size();
    var_names_.push_back(name);
    return;
  }
  if (cmd == "assert") {
    if (e.kids.size() != 2) { malformed_ = true; return; }
    try {
      do_assert(e.kids[1]);
    } catch (const std::exception&) {
      malformed_ = true;
    }
    return;
  }
  if (cmd == "check-sat") {
    out << check_sat() << "\n";
    out.flush();
    return;
  }
  if (cmd == "get-model") {
    out << get_model() << "\n";
    out.flush();
    return;
  }
  if (cmd == "reset") { reset(); return; }
  if (cmd == "exit") { exited_ = true; return; }
  if (cmd == "echo") {
    if (e.kids.size() == 2 && e.kids[1].atom) out << e.kids[1].text << "\n";
    out.flush();
    return;
  }
  // unknown command: tolerate
}

Poly NraEngine::term_poly(const SExpr& t) const {
  if (t.atom) {
    const std::string& s = t.text;
    if (!s.empty() && (isdigit((unsigned char)s[0]))) {
      if (s.find('.') != std::string::npos)
        throw std::runtime_error("decimal literal");
      return Poly::constant(Rat(std::stoll(s)));
    }
    auto it = var_slot_.find(s);
    if (it == var_slot_.end()) throw std::runtime_error("unknown symbol " + s);
    return Poly::var(it->second);
  }
  if (t.kids.empty() || !t.kids[0].atom) throw std::runtime_error("bad term");
  const std::string& op = t.kids[0].text;
  if (op == "+") {
    Poly acc;
    for (size_t k = 1; k < t.kids.size(); k++) acc = acc + term_poly(t.kids[k]);
    return acc;
  }
  if (op == "*") {
    Poly acc = Poly::constant(Rat(1));
    for (size_t k = 1; k < t.kids.size(); k++) acc = acc * term_poly(t.kids[k]);
    return acc;
  }
  if (op == "-") {
    if (t.kids.size() == 2) return -term_poly(t.kids[1]);
    Poly acc = term_poly(t.kids[1]);
    for (size_t k = 2; k < t.kids.size(); k++) acc = acc - term_poly(t.kids[k]);
    return acc;
  }
  if (op == "/") {
    if (t.kids.size() != 3) throw std::runtime_error("bad /");
    Poly num = term_poly(t.kids[1]);
    Poly den = term_poly(t.kids[2]);
    if (den.terms.size() != 1 || den.terms.begin()->first != 0)
      throw std::runtime_error("non-constant divisor");
    Rat d = den.terms.begin()->second;
    Poly out;
    for (const auto& [m, c] : num.terms) out.terms[m] = c / d;
    return out;
  }
  throw std::runtime_error("unsupported operator " + op);
}

void NraEngine::do_assert(const SExpr& t) {
  if (t.atom) {
    if (t.text == "true") return;
    if (t.text == "false") { have_false_ = true; return; }
    throw std::runtime_error("bad assert atom");
  }
  if (t.kids.empty() || !t.kids[0].atom) throw std::runtime_error("bad assert");
  const std::string& op = t.kids[0].text;
  if (op == "and") {
    for (size_t k = 1; k < t.kids.size(); k++) do_assert(t.kids[k]);
    return;
  }
  if (op == ">") {
    if (t.kids.size() == 3 && t.kids[1].atom && var_slot_.count(t.kids[1].text)) {
      Poly rhs = term_poly(t.kids[2]);
      if (rhs.is_zero()) {
        positive_slots_.push_back(var_slot_.at(t.kids[1].text));
        return;
      }
    }
    throw std::runtime_error("unsupported inequality");
  }
  if (op == "=") {
    if (t.kids.size() != 3) throw std::runtime_error("bad =");
    Poly p = term_poly(t.kids[1]) - term_poly(t.kids[2]);
    // recognize v^2 = k
    if (p.terms.size() == 2) {
      auto it = p.terms.begin();
      auto c_it = it, v_it = it;
      ++v_it;
      if (c_it->first != 0) std::swap(c_it, v_it);
      if (c_it->first == 0 && v_it->second == Rat(1)) {
        uint64_t m = v_it->first;
        int slot = -1, cnt = 0;
        for (int s = 0; s < 16; s++)
          if (mono_exp(m, s) > 0) { slot = s; cnt += mono_exp(m, s); }
        if (cnt == 2 && mono_exp(m, slot) == 2) {
          square_const_[slot] = -c_it->second;
          return;
        }
      }
    }
    // recognize s^2 + c^2 = 1
    if (p.terms.size() == 3) {
      int sq_slots[2] = {-1, -1};
      int nsq = 0;
      bool ok = true;
      Rat const_term(0);
      for (const auto& [m, c] : p.terms) {
        if (m == 0) { const_term = c; continue; }
        int slot = -1, tot = 0;
        for (int s = 0; s < 16; s++)
          if (mono_exp(m, s) > 0) { slot = s; tot += mono_exp(m, s); }
        if (tot != 2 || mono_exp(m, slot) != 2 || c != Rat(1) || nsq >= 2) {
          ok = false;
          break;
        }
        sq_slots[nsq++] = slot;
      }
      if (ok && nsq == 2 && const_term == Rat(-1)) {
        circle_partner_[sq_slots[0]] = sq_slots[1];
        return;
      }
    }
    throw std::runtime_error("unsupported equality assert");
  }
  if (op == "not") {
    if (t.kids.size() == 2 && !t.kids[1].atom && t.kids[1].kids.size() == 3 &&
        t.kids[1].kids[0].atom && t.kids[1].kids[0].text == "=") {
      Poly p = term_poly(t.kids[1].kids[1]) - term_poly(t.kids[1].kids[2]);
      goals_.push_back({p});
      return;
    }
    throw std::runtime_error("unsupported negation");
  }
  if (op == "or") {
    std::vector<Poly> dis;
    for (size_t k = 1; k < t.kids.size(); k++) {
      const SExpr& d = t.kids[k];
      if (d.atom && d.text == "false") continue;
      if (!d.atom && d.kids.size() == 2 && d.kids[0].atom &&
          d.kids[0].text == "not" && !d.kids[1].atom &&
          d.kids[1].kids.size() == 3 && d.kids[1].kids[0].atom &&
          d.kids[1].kids[0].text == "=") {
        dis.push_back(term_poly(d.kids[1].kids[1]) -
                      term_poly(d.kids[1].kids[2]));
      } else {
        throw std::runtime_error("unsupported disjunct");
      }
    }
    if (dis.empty()) have_false_ = true;
    else goals_.push_back(std::move(dis));
    return;
  }
  throw std::runtime_error("unsupported assert " + op);
}

Poly NraEngine::reduce(const Poly& p) const {
  Poly out;
  std::vector<std::pair<uint64_t, Rat>> work(p.terms.begin(), p.terms.end());
  while (!work.empty()) {
    auto [m, c] = work.back();
    work.pop_back();
    if (c.is_zero()) continue;
    bool rewritten = false;
    for (int s = 0; s < 16 && !rewritten; s++) {
      int e = mono_exp(m, s);
      if (e < 2) continue;
      auto sq = square_const_.find(s);
      if (sq != square_const_.end()) {
        Rat mult(1);
        for (int t = 0; t < e / 2; t++) mult *= sq->second;
        work.push_back({mono_with_exp(m, s, e % 2), c * mult});
        rewritten = true;
        break;
      }
      auto cp = circle_partner_.find(s);
      if (cp != circle_partner_.end()) {
        uint64_t base = mono_with_exp(m, s, e - 2);
        work.push_back({base, c});
        int ce = mono_exp(base, cp->second);
        if (ce + 2 > 15) throw std::runtime_error("reduce: exponent overflow");
        work.push_back({mono_with_exp(base, cp->second, ce + 2), -c});
        rewritten = true;
        break;
      }
    }
    if (!rewritten) out.add_term(m, c);
  }
  return out;
}

std::string NraEngine::check_sat() {
  model_valid_ = false;
  if (malformed_) return "unknown";
  if (have_false_) return "unsat";
  std::vector<std::vector<Poly>> reduced(goals_.size());
  for (size_t g = 0; g < goals_.size(); g++) {
    bool any_nonzero = false;
    for (const auto& p : goals_[g]) {
      Poly r = reduce(p);
      if (!r.is_zero()) {
        any_nonzero = true;
        reduced[g].push_back(std::move(r));
      }
    }
    if (!any_nonzero) return "unsat";
  }
  // satisfiable; search for a concrete witness
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  std::uniform_real_distribution<double> freev(-3, 3);
  for (int attempt = 0; attempt < 3000; attempt++) {
    double vals[16] = {0};
    std::vector<bool> assigned(16, false);
    for (const auto& [slot, k] : square_const_) {
      vals[slot] = std::sqrt(std::abs(k.to_double()));
      assigned[(size_t)slot] = true;
    }
    for (const auto& [s, c] : circle_partner_) {
      double th = attempt == 0 ? 0.7 + 0.9 * s : angle(rng);
      vals[s] = std::sin(th);
      vals[c] = std::cos(th);
      assigned[(size_t)s] = assigned[(size_t)c] = true;
    }
    for (size_t s = 0; s < var_names_.size(); s++)
      if (!assigned[s]) vals[s] = attempt == 0 ? 0.37 + 0.41 * (double)s : freev(rng);
    bool all_ok = true;
    for (const auto& dis : reduced) {
      bool ok = false;
      for (const auto& p : dis)
        if (std::abs(p.eval(vals)) > 1e-8) { ok = true; break; }
      if (!ok && !dis.empty()) { all_ok = false; break; }
    }
    if (all_ok) {
      model_.clear();
      for (const auto& [name, slot] : var_slot_) model_[name] = vals[slot];
      model_valid_ = true;
      return "sat";
    }
  }
  return "unknown";
}

std::string NraEngine::get_model() const {
  if (!model_valid_) return "(error \"model is not available\")";
  std::string out = "(model";
  for (const auto& [name, v] : model_) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", v);
    out += "\n  (define-fun " + name + " () Real " + buf + ")";
  }
  return out + "\n)";
}

void NraEngine::reset() {
  var_names_.clear();
  var_slot_.clear();
  square_const_.clear();
  circle_partner_.clear();
  positive_slots_.clear();
  goals_.clear();
  malformed_ = false;
  have_false_ = false;
  model_.clear();
  model_valid_ = false;
}

}  // namespace qsopt
