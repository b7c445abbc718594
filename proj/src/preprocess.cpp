#include "qsopt/preprocess.hpp"

#include <algorithm>

#include "qsopt/qasm.hpp"
#include <map>
#include <set>
#include <stdexcept>

namespace qsopt {

namespace {

Instruction make_instr(const GateSet& gs, const std::string& name,
                       std::vector<ParamExpr> args, std::vector<int> qubits) {
  int gi = gs.gate_index(name);
  if (gi < 0) throw std::runtime_error("transpile: target set lacks " + name);
  Instruction in;
  in.gate = gi;
  in.args = std::move(args);
  in.qubits = std::move(qubits);
  return in;
}

ParamExpr pi_frac(int64_t num, int64_t den) {
  return ParamExpr::constant(Angle::of_pi(Rat(num, den)));
}

}  // namespace

Circuit transpile(const Circuit& c, const std::string& target_set) {
  auto tgs = std::make_shared<GateSet>(builtin_gate_set(target_set));
  Circuit out;
  out.gs = tgs;
  out.q = c.q;
  out.m = c.m;
  for (const auto& inst : c.instrs) {
    const std::string& g = c.gs->gate(inst.gate).name;
    const auto& qb = inst.qubits;
    if (target_set == "nam") {
      if (g == "h" || g == "x" || g == "cx") {
        out.instrs.push_back(make_instr(*tgs, g, inst.args, qb));
      } else if (g == "rz" || g == "u1") {
        out.instrs.push_back(make_instr(*tgs, "rz", inst.args, qb));
      } else if (g == "t") {
        out.instrs.push_back(make_instr(*tgs, "rz", {pi_frac(1, 4)}, qb));
      } else if (g == "tdg") {
        out.instrs.push_back(make_instr(*tgs, "rz", {pi_frac(-1, 4)}, qb));
      } else if (g == "s") {
        out.instrs.push_back(make_instr(*tgs, "rz", {pi_frac(1, 2)}, qb));
      } else if (g == "sdg") {
        out.instrs.push_back(make_instr(*tgs, "rz", {pi_frac(-1, 2)}, qb));
      } else if (g == "z") {
        out.instrs.push_back(make_instr(*tgs, "rz", {pi_frac(1, 1)}, qb));
      } else {
        throw std::runtime_error("transpile: no nam rule for gate " + g);
      }
    } else if (target_set == "ibm") {
      if (g == "cx") {
        out.instrs.push_back(make_instr(*tgs, "cx", {}, qb));
      } else if (g == "h") {
        out.instrs.push_back(
            make_instr(*tgs, "u2", {pi_frac(0, 1), pi_frac(1, 1)}, qb));
      } else if (g == "x") {
        out.instrs.push_back(make_instr(
            *tgs, "u3", {pi_frac(1, 1), pi_frac(0, 1), pi_frac(1, 1)}, qb));
      } else if (g == "rz" || g == "u1") {
        out.instrs.push_back(make_instr(*tgs, "u1", inst.args, qb));
      } else if (g == "t") {
        out.instrs.push_back(make_instr(*tgs, "u1", {pi_frac(1, 4)}, qb));
      } else if (g == "tdg") {
        out.instrs.push_back(make_instr(*tgs, "u1", {pi_frac(-1, 4)}, qb));
      } else if (g == "s") {
        out.instrs.push_back(make_instr(*tgs, "u1", {pi_frac(1, 2)}, qb));
      } else if (g == "sdg") {
        out.instrs.push_back(make_instr(*tgs, "u1", {pi_frac(-1, 2)}, qb));
      } else if (g == "z") {
        out.instrs.push_back(make_instr(*tgs, "u1", {pi_frac(1, 1)}, qb));
      } else {
        throw std::runtime_error("transpile: no ibm rule for gate " + g);
      }
    } else {
      throw std::runtime_error("transpile: unsupported target " + target_set);
    }
  }
  return out;
}

namespace {

// T-depth-optimal CCX expansion; `mirror` swaps t and tdg, which equals the
// Toffoli up to global phase. `hadamards` off gives the CCZ form.
void emit_toffoli(std::vector<Instruction>& out, const GateSet& gs, int a,
                  int b, int c, bool mirror, bool hadamards) {
  const char* t = mirror ? "tdg" : "t";
  const char* td = mirror ? "t" : "tdg";
  auto one = [&](const std::string& g, std::vector<int> qs) {
    out.push_back(make_instr(gs, g, {}, std::move(qs)));
  };
  if (hadamards) one("h", {c});
  one("cx", {b, c});
  one(td, {c});
  one("cx", {a, c});
  one(t, {c});
  one("cx", {b, c});
  one(td, {c});
  one("cx", {a, c});
  one(t, {b});
  one(t, {c});
  if (hadamards) one("h", {c});
  one("cx", {a, b});
  one(t, {a});
  one(td, {b});
  one("cx", {a, b});
}

Circuit expand_toffolis(const Circuit& c, const std::vector<bool>& mirror) {
  Circuit out;
  out.gs = c.gs;
  out.q = c.q;
  out.m = c.m;
  size_t ti = 0;
  for (const auto& inst : c.instrs) {
    const std::string& g = c.gs->gate(inst.gate).name;
    if (g == "ccx" || g == "ccz") {
      bool m = ti < mirror.size() && mirror[ti];
      ti++;
      emit_toffoli(out.instrs, *c.gs, inst.qubits[0], inst.qubits[1],
                   inst.qubits[2], m, g == "ccx");
    } else {
      out.instrs.push_back(inst);
    }
  }
  return out;
}

// Matches the 15-gate realization above (either polarity) starting at
// position i, so pre-expanded inputs regain their polarity freedom.
bool match_ccx_window(const Circuit& c, size_t i, int& a, int& b, int& t) {
  if (i + 15 > c.instrs.size()) return false;
  auto name = [&](size_t k) { return c.gs->gate(c.instrs[i + k].gate).name; };
  auto qs = [&](size_t k) -> const std::vector<int>& {
    return c.instrs[i + k].qubits;
  };
  if (name(0) != "h" || (name(2) != "t" && name(2) != "tdg")) return false;
  std::string td = name(2), tt = td == "t" ? "tdg" : "t";
  t = qs(0)[0];
  if (name(1) != "cx" || qs(1)[1] != t) return false;
  b = qs(1)[0];
  if (name(3) != "cx" || qs(3)[1] != t) return false;
  a = qs(3)[0];
  if (a == b || a == t || b == t) return false;
  const struct { size_t k; const char* role; int q0, q1; } want[] = {
      {2, "td", t, -1},  {4, "t", t, -1},  {5, "cx", b, t},
      {6, "td", t, -1},  {7, "cx", a, t},  {8, "t", b, -1},
      {9, "t", t, -1},   {10, "h", t, -1}, {11, "cx", a, b},
      {12, "t", a, -1},  {13, "td", b, -1}, {14, "cx", a, b}};
  for (const auto& w : want) {
    std::string g = w.role == std::string("td") ? td
                    : w.role == std::string("t") ? tt
                                                 : w.role;
    if (name(w.k) != g) return false;
    if (qs(w.k)[0] != w.q0) return false;
    if (w.q1 >= 0 && (qs(w.k).size() < 2 || qs(w.k)[1] != w.q1)) return false;
  }
  return true;
}

Circuit fold_toffolis(const Circuit& in) {
  Circuit c = in;
  c.gs = with_toffoli(in.gs);
  c.instrs.clear();
  for (size_t i = 0; i < in.instrs.size();) {
    int a = -1, b = -1, t = -1;
    if (match_ccx_window(in, i, a, b, t)) {
      c.instrs.push_back(make_instr(*c.gs, "ccx", {}, {a, b, t}));
      i += 15;
    } else {
      Instruction ni = in.instrs[i++];
      ni.gate = c.gs->gate_index(in.gs->gate(ni.gate).name);
      c.instrs.push_back(ni);
    }
  }
  return c;
}

}  // namespace

Circuit decompose_toffoli(const Circuit& in) {
  Circuit c = fold_toffolis(in);
  size_t n_toff = 0;
  for (const auto& inst : c.instrs) {
    const std::string& g = c.gs->gate(inst.gate).name;
    if (g == "ccx" || g == "ccz") n_toff++;
  }
  std::vector<bool> mirror(n_toff, false);
  auto score = [&]() {
    return merge_rotations(transpile(expand_toffolis(c, mirror), "nam"))
        .instrs.size();
  };
  if (n_toff > 0) {
    // greedy left-to-right polarity choice scored by post-merge size
    for (size_t i = 0; i < n_toff; i++) {
      size_t plain = score();
      mirror[i] = true;
      size_t flipped = score();
      if (plain <= flipped) mirror[i] = false;
    }
  }
  return expand_toffolis(c, mirror);
}

namespace {

// a wire's value as an affine Boolean function: xor of variables, plus a
// complement bit
struct WireVal {
  std::set<int> vars;
  bool comp = false;
};

}  // namespace

Circuit merge_rotations(const Circuit& c) {
  int fresh = 0;
  std::vector<WireVal> val((size_t)c.q);
  for (auto& v : val) v.vars = {fresh++};

  // rotations merge only on identical affine values; complementary values
  // (sign-flipped merging) are deliberately left alone
  std::map<std::pair<std::set<int>, bool>, size_t> pending;
  std::vector<Instruction> out;
  std::vector<bool> dropped;

  for (const auto& inst : c.instrs) {
    const std::string& g = c.gs->gate(inst.gate).name;
    if ((g == "rz" || g == "u1") && inst.args[0].form == ParamExpr::Const) {
      WireVal& w = val[(size_t)inst.qubits[0]];
      if (inst.args[0].value == Angle::zero()) continue;
      auto it = pending.find({w.vars, w.comp});
      if (it != pending.end()) {
        Instruction& prev = out[it->second];
        prev.args[0] =
            ParamExpr::constant(prev.args[0].value + inst.args[0].value);
        dropped[it->second] = prev.args[0].value == Angle::zero();
        continue;
      }
      pending[{w.vars, w.comp}] = out.size();
      out.push_back(inst);
      dropped.push_back(false);
      continue;
    }
    if (g == "x" || g == "rx180") {
      val[(size_t)inst.qubits[0]].comp = !val[(size_t)inst.qubits[0]].comp;
      out.push_back(inst);
      dropped.push_back(false);
      continue;
    }
    if (g == "cx") {
      WireVal& a = val[(size_t)inst.qubits[0]];
      WireVal& b = val[(size_t)inst.qubits[1]];
      for (int v : a.vars) {
        if (b.vars.count(v))
          b.vars.erase(v);
        else
          b.vars.insert(v);
      }
      b.comp = b.comp != a.comp;
      out.push_back(inst);
      dropped.push_back(false);
      continue;
    }
    if (g == "cz" || g == "z") {
      out.push_back(inst);
      dropped.push_back(false);
      continue;
    }
    // anything else scrambles its wires
    for (int qb : inst.qubits) {
      val[(size_t)qb].vars = {fresh++};
      val[(size_t)qb].comp = false;
    }
    out.push_back(inst);
    dropped.push_back(false);
  }

  Circuit res;
  res.gs = c.gs;
  res.q = c.q;
  res.m = c.m;
  for (size_t i = 0; i < out.size(); i++)
    if (!dropped[i]) res.instrs.push_back(out[i]);
  return res;
}

Circuit rigetti_pipeline(const Circuit& c) {
  // cx -> h cz h, then adjacent hh cancellation, then native 1q gates
  struct Tmp {
    std::string g;
    ParamExpr arg;
    bool has_arg = false;
    std::vector<int> qubits;
  };
  std::vector<Tmp> mid;
  for (const auto& inst : c.instrs) {
    const std::string& g = c.gs->gate(inst.gate).name;
    if (g == "cx") {
      mid.push_back({"h", {}, false, {inst.qubits[1]}});
      mid.push_back({"cz", {}, false, inst.qubits});
      mid.push_back({"h", {}, false, {inst.qubits[1]}});
    } else if (g == "h" || g == "x") {
      mid.push_back({g, {}, false, inst.qubits});
    } else if (g == "rz" || g == "u1") {
      mid.push_back({"rz", inst.args[0], true, inst.qubits});
    } else {
      throw std::runtime_error("rigetti pipeline: unsupported gate " + g);
    }
  }
  // cancel h pairs adjacent on their wire and cz pairs adjacent on both wires
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < mid.size() && !changed; i++) {
      if (mid[i].g != "h" && mid[i].g != "cz") continue;
      for (size_t j = i + 1; j < mid.size(); j++) {
        bool touches = false;
        for (int qb : mid[i].qubits)
          touches |= std::find(mid[j].qubits.begin(), mid[j].qubits.end(),
                               qb) != mid[j].qubits.end();
        if (!touches) continue;
        bool same = mid[j].g == mid[i].g;
        if (same && mid[i].g == "cz") {
          // cz is symmetric in its qubits
          same = (mid[i].qubits == mid[j].qubits) ||
                 (mid[i].qubits[0] == mid[j].qubits[1] &&
                  mid[i].qubits[1] == mid[j].qubits[0]);
        } else if (same) {
          same = mid[i].qubits == mid[j].qubits;
        }
        if (same) {
          mid.erase(mid.begin() + (long)j);
          mid.erase(mid.begin() + (long)i);
          changed = true;
        }
        break;
      }
    }
  }

  auto tgs = std::make_shared<GateSet>(builtin_gate_set("rigetti"));
  Circuit out;
  out.gs = tgs;
  out.q = c.q;
  out.m = c.m;
  for (const auto& t : mid) {
    if (t.g == "cz") {
      out.instrs.push_back(make_instr(*tgs, "cz", {}, t.qubits));
    } else if (t.g == "rz") {
      out.instrs.push_back(make_instr(*tgs, "rz", {t.arg}, t.qubits));
    } else if (t.g == "x") {
      out.instrs.push_back(make_instr(*tgs, "rx180", {}, t.qubits));
    } else if (t.g == "h") {
      out.instrs.push_back(make_instr(*tgs, "rz", {pi_frac(-1, 2)}, t.qubits));
      out.instrs.push_back(make_instr(*tgs, "rx90", {}, t.qubits));
      out.instrs.push_back(make_instr(*tgs, "rz", {pi_frac(1, 2)}, t.qubits));
      out.instrs.push_back(make_instr(*tgs, "rx180", {}, t.qubits));
    }
  }
  return out;
}

}  // namespace qsopt
