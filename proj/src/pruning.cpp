#include "qsopt/pruning.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace qsopt {

namespace {

ParamExpr remap_params(const ParamExpr& e, const std::vector<int>& pmap) {
  ParamExpr out = e;
  switch (e.form) {
    case ParamExpr::P:
    case ParamExpr::TwoP:
      out.i = pmap[(size_t)e.i];
      break;
    case ParamExpr::SumPP:
      out.i = pmap[(size_t)e.i];
      out.j = pmap[(size_t)e.j];
      if (out.i > out.j) std::swap(out.i, out.j);
      break;
    case ParamExpr::Const:
      break;
  }
  return out;
}

Circuit remap(const Circuit& c, const std::vector<int>& qmap, int new_q,
              const std::vector<int>& pmap, int new_m) {
  Circuit out;
  out.gs = c.gs;
  out.q = new_q;
  out.m = new_m;
  for (const auto& inst : c.instrs) {
    Instruction ni = inst;
    for (auto& qb : ni.qubits) qb = qmap[(size_t)qb];
    for (auto& a : ni.args) a = remap_params(a, pmap);
    out.instrs.push_back(std::move(ni));
  }
  return out;
}

std::string class_text(const Ecc& e) {
  std::string s = std::to_string(e.q) + "|" + std::to_string(e.m);
  for (const auto& c : e.circuits) s += "\n" + circuit_text(c);
  return s;
}

Ecc compact(const Ecc& in) {
  std::set<int> used_q, used_p;
  for (const auto& c : in.circuits)
    for (const auto& inst : c.instrs) {
      for (int qb : inst.qubits) used_q.insert(qb);
      for (const auto& a : inst.args) {
        uint32_t mk = a.mask();
        for (int i = 0; i < 32; i++)
          if (mk & (1u << i)) used_p.insert(i);
      }
    }
  std::vector<int> qmap((size_t)in.q, -1), pmap((size_t)in.m, -1);
  int nq = 0, np = 0;
  for (int qb : used_q) qmap[(size_t)qb] = nq++;
  for (int pi : used_p) pmap[(size_t)pi] = np++;
  Ecc out;
  out.q = nq;
  out.m = np;
  for (const auto& c : in.circuits)
    out.circuits.push_back(canonical_form(remap(c, qmap, nq, pmap, np)));
  return out;
}

Ecc dedup_and_sort(Ecc e) {
  std::sort(e.circuits.begin(), e.circuits.end(), precedes);
  e.circuits.erase(std::unique(e.circuits.begin(), e.circuits.end(),
                               [](const Circuit& a, const Circuit& b) {
                                 return circuit_cmp(a, b) == 0;
                               }),
                   e.circuits.end());
  return e;
}

}  // namespace

EccSet simplify_eccs(const EccSet& es) {
  EccSet out = es;
  out.eccs.clear();
  std::set<std::string> seen_keys;
  std::vector<Ecc> kept;
  for (const auto& e : es.eccs) {
    Ecc s = dedup_and_sort(compact(e));
    if (s.circuits.size() < 2) continue;
    if (!seen_keys.insert(class_text(s)).second) continue;
    kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(), [](const Ecc& a, const Ecc& b) {
    int c = circuit_cmp(a.circuits[0], b.circuits[0]);
    if (c != 0) return c < 0;
    return class_text(a) < class_text(b);
  });
  out.eccs = std::move(kept);
  return out;
}

namespace {

// instructions with no same-wire successor (the final layer of the DAG)
std::vector<Instruction> last_layer(const Circuit& c) {
  std::vector<Instruction> out;
  for (size_t i = 0; i < c.instrs.size(); i++) {
    bool free = true;
    for (size_t k = i + 1; k < c.instrs.size() && free; k++)
      for (int qb : c.instrs[k].qubits)
        if (std::find(c.instrs[i].qubits.begin(), c.instrs[i].qubits.end(),
                      qb) != c.instrs[i].qubits.end()) {
          free = false;
          break;
        }
    if (free) out.push_back(c.instrs[i]);
  }
  return out;
}

// a common first gate (in canonical instruction order) or a common gate in
// the final layer implies a common subcircuit, so the transformation between
// the two circuits is subsumed by smaller ones
bool share_boundary_gate(const Circuit& a, const Circuit& b) {
  if (a.instrs.empty() || b.instrs.empty()) return false;
  if (a.instrs.front() == b.instrs.front()) return true;
  for (const auto& ia : last_layer(a))
    for (const auto& ib : last_layer(b))
      if (ia == ib) return true;
  return false;
}

}  // namespace

EccSet prune_common_subcircuit(const EccSet& es) {
  EccSet out = es;
  for (auto& e : out.eccs) {
    Circuit rep = canonical_form(e.circuits[0]);
    std::vector<Circuit> kept{e.circuits[0]};
    for (size_t k = 1; k < e.circuits.size(); k++)
      if (!share_boundary_gate(rep, canonical_form(e.circuits[k])))
        kept.push_back(e.circuits[k]);
    e.circuits = std::move(kept);
  }
  return simplify_eccs(out);
}

}  // namespace qsopt
