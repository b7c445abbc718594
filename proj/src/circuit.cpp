#include "qsopt/circuit.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qsopt {

int instr_cmp(const Instruction& a, const Instruction& b) {
  if (a.gate != b.gate) return a.gate < b.gate ? -1 : 1;
  if (a.args != b.args) return a.args < b.args ? -1 : 1;
  if (a.qubits != b.qubits) return a.qubits < b.qubits ? -1 : 1;
  return 0;
}

int circuit_cmp(const Circuit& a, const Circuit& b) {
  if (a.instrs.size() != b.instrs.size())
    return a.instrs.size() < b.instrs.size() ? -1 : 1;
  for (size_t k = 0; k < a.instrs.size(); k++) {
    int c = instr_cmp(a.instrs[k], b.instrs[k]);
    if (c != 0) return c;
  }
  return 0;
}

bool precedes(const Circuit& a, const Circuit& b) { return circuit_cmp(a, b) < 0; }

Circuit drop_first(const Circuit& c) {
  if (c.instrs.empty()) throw std::runtime_error("drop_first: empty circuit");
  Circuit out = c;
  out.instrs.erase(out.instrs.begin());
  return out;
}

Circuit drop_last(const Circuit& c) {
  if (c.instrs.empty()) throw std::runtime_error("drop_last: empty circuit");
  Circuit out = c;
  out.instrs.pop_back();
  return out;
}

uint32_t param_mask(const Circuit& c) {
  uint32_t m = 0;
  for (const auto& inst : c.instrs)
    for (const auto& a : inst.args) m |= a.mask();
  return m;
}

Circuit canonical_form(const Circuit& c) {
  size_t n = c.instrs.size();
  std::vector<std::vector<int>> wire(c.q);
  for (size_t k = 0; k < n; k++)
    for (int qb : c.instrs[k].qubits) wire[(size_t)qb].push_back((int)k);
  std::vector<size_t> ptr(c.q, 0);
  auto ready = [&](int idx) {
    for (int qb : c.instrs[(size_t)idx].qubits) {
      const auto& w = wire[(size_t)qb];
      if (ptr[(size_t)qb] >= w.size() || w[ptr[(size_t)qb]] != idx) return false;
    }
    return true;
  };
  Circuit out = c;
  out.instrs.clear();
  out.instrs.reserve(n);
  size_t emitted = 0;
  while (emitted < n) {
    bool progressed = false;
    for (int w = 0; w < c.q; w++) {
      if (ptr[(size_t)w] >= wire[(size_t)w].size()) continue;
      int idx = wire[(size_t)w][ptr[(size_t)w]];
      if (!ready(idx)) continue;
      out.instrs.push_back(c.instrs[(size_t)idx]);
      for (int qb : c.instrs[(size_t)idx].qubits) ptr[(size_t)qb]++;
      emitted++;
      progressed = true;
      break;
    }
    if (!progressed) throw std::runtime_error("canonical_form: cyclic wiring");
  }
  return out;
}

namespace {

uint64_t fnv_feed(uint64_t h, uint64_t v) {
  for (int k = 0; k < 8; k++) {
    h ^= (v >> (8 * k)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t hash_seq(const Circuit& c, uint64_t seed) {
  uint64_t h = seed;
  h = fnv_feed(h, (uint64_t)c.q);
  for (const auto& inst : c.instrs) {
    h = fnv_feed(h, (uint64_t)inst.gate + 0x51);
    for (const auto& a : inst.args) h = fnv_feed(h, (uint64_t)a.hash());
    for (int qb : inst.qubits) h = fnv_feed(h, (uint64_t)qb + 0x9d);
  }
  return h;
}

}  // namespace

uint64_t canonical_hash(const Circuit& c) {
  return hash_seq(canonical_form(c), 0xcbf29ce484222325ULL);
}

std::pair<uint64_t, uint64_t> canonical_hash128(const Circuit& c) {
  Circuit cf = canonical_form(c);
  return {hash_seq(cf, 0xcbf29ce484222325ULL), hash_seq(cf, 0x9ae16a3b2f90404fULL)};
}

std::string circuit_text(const Circuit& c) {
  std::string out;
  for (size_t k = 0; k < c.instrs.size(); k++) {
    const auto& inst = c.instrs[k];
    if (k) out += "; ";
    out += c.gs->gate(inst.gate).name;
    if (!inst.args.empty()) {
      out += "(";
      for (size_t a = 0; a < inst.args.size(); a++) {
        if (a) out += ",";
        out += inst.args[a].to_string();
      }
      out += ")";
    }
    for (int qb : inst.qubits) out += " " + std::to_string(qb);
  }
  return out;
}

Circuit parse_circuit_text(const std::string& text,
                           std::shared_ptr<const GateSet> gs, int q, int m) {
  Circuit c;
  c.gs = gs;
  c.q = q;
  c.m = m;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    // trim
    size_t b = part.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    size_t e = part.find_last_not_of(" \t");
    part = part.substr(b, e - b + 1);
    std::string head = part;
    std::string argstr;
    auto lp = part.find('(');
    std::string rest;
    if (lp != std::string::npos) {
      auto rp = part.find(')');
      if (rp == std::string::npos) throw std::runtime_error("bad circuit text: " + part);
      head = part.substr(0, lp);
      argstr = part.substr(lp + 1, rp - lp - 1);
      rest = part.substr(rp + 1);
    } else {
      auto sp = part.find(' ');
      head = sp == std::string::npos ? part : part.substr(0, sp);
      rest = sp == std::string::npos ? "" : part.substr(sp);
    }
    Instruction inst;
    inst.gate = gs->gate_index(head);
    if (inst.gate < 0) throw std::runtime_error("unknown gate in circuit text: " + head);
    if (!argstr.empty()) {
      std::stringstream as(argstr);
      std::string a;
      while (std::getline(as, a, ',')) inst.args.push_back(ParamExpr::parse(a));
    }
    std::stringstream qs(rest);
    int qb;
    while (qs >> qb) inst.qubits.push_back(qb);
    const Gate& g = gs->gate(inst.gate);
    if ((int)inst.qubits.size() != g.qubit_arity ||
        (int)inst.args.size() != g.param_arity)
      throw std::runtime_error("arity mismatch in circuit text: " + part);
    c.instrs.push_back(std::move(inst));
  }
  return c;
}

// --- DAG form ------------------------------------------------------------

CircuitDag to_dag(const Circuit& c) {
  CircuitDag d;
  d.gs = c.gs;
  d.q = c.q;
  d.m = c.m;
  for (int w = 0; w < c.q; w++) {
    DagNode n;
    n.kind = DagNode::Source;
    n.qubit = w;
    d.nodes.push_back(n);
  }
  // (node, port) currently at the end of each wire
  std::vector<std::pair<int, int>> tail(c.q);
  for (int w = 0; w < c.q; w++) tail[(size_t)w] = {w, 0};
  for (const auto& inst : c.instrs) {
    DagNode n;
    n.kind = DagNode::GateNode;
    n.inst = inst;
    int id = (int)d.nodes.size();
    d.nodes.push_back(n);
    for (size_t p = 0; p < inst.qubits.size(); p++) {
      int w = inst.qubits[p];
      d.edges.push_back({tail[(size_t)w].first, tail[(size_t)w].second, id, (int)p});
      tail[(size_t)w] = {id, (int)p};
    }
  }
  for (int w = 0; w < c.q; w++) {
    DagNode n;
    n.kind = DagNode::Sink;
    n.qubit = w;
    int id = (int)d.nodes.size();
    d.nodes.push_back(n);
    d.edges.push_back({tail[(size_t)w].first, tail[(size_t)w].second, id, 0});
  }
  return d;
}

Circuit from_dag(const CircuitDag& d) {
  Circuit c;
  c.gs = d.gs;
  c.q = d.q;
  c.m = d.m;
  // follow each wire from its source through out-edges
  std::map<std::pair<int, int>, std::pair<int, int>> next;  // (node,port)->(node,port)
  for (const auto& e : d.edges) next[{e.from, e.from_port}] = {e.to, e.to_port};
  for (int nid = 0; nid < (int)d.nodes.size(); nid++) {
    if (d.nodes[(size_t)nid].kind != DagNode::Source) continue;
    std::pair<int, int> cur = {nid, 0};
    while (true) {
      auto it = next.find(cur);
      if (it == next.end())
        throw std::runtime_error("from_dag: broken wire");
      cur = it->second;
      if (d.nodes[(size_t)cur.first].kind == DagNode::Sink) break;
      if (d.nodes[(size_t)cur.first].kind != DagNode::GateNode)
        throw std::runtime_error("from_dag: malformed dag");
    }
  }
  // collect gate nodes in any dependency order, then canonicalize
  std::vector<int> indeg(d.nodes.size(), 0);
  std::vector<std::vector<int>> out_adj(d.nodes.size());
  for (const auto& e : d.edges) {
    out_adj[(size_t)e.from].push_back(e.to);
    indeg[(size_t)e.to]++;
  }
  std::vector<int> stack;
  for (int nid = 0; nid < (int)d.nodes.size(); nid++)
    if (indeg[(size_t)nid] == 0) stack.push_back(nid);
  std::vector<int> order;
  while (!stack.empty()) {
    int nid = stack.back();
    stack.pop_back();
    order.push_back(nid);
    for (int t : out_adj[(size_t)nid])
      if (--indeg[(size_t)t] == 0) stack.push_back(t);
  }
  if (order.size() != d.nodes.size())
    throw std::runtime_error("from_dag: cycle detected");
  for (int nid : order)
    if (d.nodes[(size_t)nid].kind == DagNode::GateNode)
      c.instrs.push_back(d.nodes[(size_t)nid].inst);
  return canonical_form(c);
}

bool dag_equal_canonical(const CircuitDag& a, const CircuitDag& b) {
  if (a.q != b.q) return false;
  return circuit_cmp(from_dag(a), from_dag(b)) == 0;
}

uint64_t canonical_hash(const CircuitDag& d) { return canonical_hash(from_dag(d)); }

// --- Semantics -----------------------------------------------------------

namespace {

SymMatrix embed(const SymMatrix& g, const std::vector<int>& qubits, int q) {
  int dim = 1 << q;
  int a = (int)qubits.size();
  SymMatrix out(dim);
  auto sub_index = [&](int b) {
    int s = 0;
    for (int k = 0; k < a; k++)
      s = (s << 1) | ((b >> (q - 1 - qubits[(size_t)k])) & 1);
    return s;
  };
  int rest_mask = dim - 1;
  for (int k = 0; k < a; k++) rest_mask &= ~(1 << (q - 1 - qubits[(size_t)k]));
  for (int r = 0; r < dim; r++) {
    for (int c = 0; c < dim; c++) {
      if ((r & rest_mask) != (c & rest_mask)) continue;  // entry stays zero
      out.at(r, c) = g.at(sub_index(r), sub_index(c));
    }
  }
  return out;
}

}  // namespace

SymMatrix circuit_matrix(const Circuit& c) {
  SymMatrix m = SymMatrix::identity(1 << c.q);
  for (const auto& inst : c.instrs) {
    std::vector<SymExpr> args;
    for (const auto& a : inst.args) args.push_back(a.to_sym());
    SymMatrix g = gate_matrix(c.gs->gate(inst.gate), args);
    m = matmul(embed(g, inst.qubits, c.q), m);
  }
  return m;
}

void apply_instruction(const Instruction& inst, const GateSet& gs, int q,
                       const std::vector<double>& params,
                       std::vector<std::complex<double>>& state) {
  const Gate& g = gs.gate(inst.gate);
  std::vector<double> argv;
  for (const auto& a : inst.args) argv.push_back(a.value_at(params));
  std::vector<std::complex<double>> gm = gate_matrix_at(g, argv);
  int a = g.qubit_arity;
  int sub = 1 << a;
  int dim = 1 << q;
  std::vector<int> bit(a);
  for (int k = 0; k < a; k++) bit[(size_t)k] = 1 << (q - 1 - inst.qubits[(size_t)k]);
  int gate_mask = 0;
  for (int k = 0; k < a; k++) gate_mask |= bit[(size_t)k];
  std::vector<std::complex<double>> buf(sub);
  for (int base = 0; base < dim; base++) {
    if (base & gate_mask) continue;
    for (int s = 0; s < sub; s++) {
      int idx = base;
      for (int k = 0; k < a; k++)
        if (s & (1 << (a - 1 - k))) idx |= bit[(size_t)k];
      buf[(size_t)s] = state[(size_t)idx];
    }
    for (int r = 0; r < sub; r++) {
      std::complex<double> acc = 0;
      for (int s = 0; s < sub; s++) acc += gm[(size_t)(r * sub + s)] * buf[(size_t)s];
      int idx = base;
      for (int k = 0; k < a; k++)
        if (r & (1 << (a - 1 - k))) idx |= bit[(size_t)k];
      state[(size_t)idx] = acc;
    }
  }
}

std::vector<std::complex<double>> apply_circuit(
    const Circuit& c, const std::vector<double>& params,
    std::vector<std::complex<double>> state) {
  for (const auto& inst : c.instrs)
    apply_instruction(inst, *c.gs, c.q, params, state);
  return state;
}

std::vector<std::complex<double>> circuit_unitary(
    const Circuit& c, const std::vector<double>& params) {
  int dim = 1 << c.q;
  std::vector<std::complex<double>> u((size_t)dim * dim);
  for (int col = 0; col < dim; col++) {
    std::vector<std::complex<double>> e(dim, 0.0);
    e[(size_t)col] = 1;
    e = apply_circuit(c, params, std::move(e));
    for (int r = 0; r < dim; r++) u[(size_t)(r * dim + col)] = e[(size_t)r];
  }
  return u;
}

bool unitary_equal_up_to_phase(const std::vector<std::complex<double>>& a,
                               const std::vector<std::complex<double>>& b,
                               double tol) {
  if (a.size() != b.size()) return false;
  // pick the largest entry of b as phase anchor
  size_t best = 0;
  for (size_t k = 0; k < b.size(); k++)
    if (std::abs(b[k]) > std::abs(b[best])) best = k;
  if (std::abs(b[best]) < tol) return false;
  std::complex<double> phase = a[best] / b[best];
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  for (size_t k = 0; k < a.size(); k++)
    if (std::abs(a[k] - phase * b[k]) > tol) return false;
  return true;
}

Instruction instruction_of(const SingleGate& sg) {
  Instruction inst;
  inst.gate = sg.gate;
  inst.args = sg.args;
  inst.qubits = sg.qubits;
  return inst;
}

}  // namespace qsopt
