#include "qsopt/qasm.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsopt {

namespace {

Gate g_ccx() {
  Gate g;
  g.name = "ccx";
  g.qubit_arity = 3;
  g.param_arity = 0;
  g.tmpl = SymMatrix::identity(8);
  g.tmpl.at(6, 6) = sym::integer(0);
  g.tmpl.at(7, 7) = sym::integer(0);
  g.tmpl.at(6, 7) = sym::integer(1);
  g.tmpl.at(7, 6) = sym::integer(1);
  return g;
}

Gate g_ccz() {
  Gate g;
  g.name = "ccz";
  g.qubit_arity = 3;
  g.param_arity = 0;
  g.tmpl = SymMatrix::identity(8);
  g.tmpl.at(7, 7) = sym::integer(-1);
  return g;
}

}  // namespace

std::shared_ptr<const GateSet> with_toffoli(std::shared_ptr<const GateSet> gs) {
  if (gs->gate_index("ccx") >= 0 && gs->gate_index("ccz") >= 0) return gs;
  auto ext = std::make_shared<GateSet>(*gs);
  if (ext->gate_index("ccx") < 0) ext->gates.push_back(g_ccx());
  if (ext->gate_index("ccz") < 0) ext->gates.push_back(g_ccz());
  return ext;
}

Circuit parse_qasm(const std::string& text, std::shared_ptr<const GateSet> gs) {
  Circuit c;
  c.gs = gs;
  c.m = 0;
  std::string qreg_name;
  int lineno = 0;
  std::stringstream ss(text);
  std::string raw;
  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error("qasm parse error, line " + std::to_string(lineno) +
                             ": " + msg);
  };
  while (std::getline(ss, raw)) {
    lineno++;
    // strip comments and whitespace
    auto cpos = raw.find("//");
    if (cpos != std::string::npos) raw = raw.substr(0, cpos);
    std::string line;
    // statements may share a line; split on ';'
    std::stringstream ls(raw);
    while (std::getline(ls, line, ';')) {
      size_t b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      size_t e = line.find_last_not_of(" \t\r");
      line = line.substr(b, e - b + 1);
      if (line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0 ||
          line.rfind("creg", 0) == 0 || line.rfind("barrier", 0) == 0)
        continue;
      if (line.rfind("qreg", 0) == 0) {
        auto lb = line.find('['), rb = line.find(']');
        if (lb == std::string::npos || rb == std::string::npos) fail("bad qreg");
        if (c.q != 0) fail("multiple qregs unsupported");
        qreg_name = line.substr(4, lb - 4);
        qreg_name.erase(0, qreg_name.find_first_not_of(" \t"));
        qreg_name.erase(qreg_name.find_last_not_of(" \t") + 1);
        c.q = std::stoi(line.substr(lb + 1, rb - lb - 1));
        continue;
      }
      // gate statement: name[(args)] q[i], q[j], ...
      size_t p = 0;
      while (p < line.size() && (isalnum((unsigned char)line[p]) || line[p] == '_'))
        p++;
      std::string gname = line.substr(0, p);
      if (gname.empty()) fail("expected gate name: '" + line + "'");
      Instruction inst;
      if (p < line.size() && line[p] == '(') {
        auto rp = line.find(')', p);
        if (rp == std::string::npos) fail("missing ')'");
        std::string argstr = line.substr(p + 1, rp - p - 1);
        std::stringstream as(argstr);
        std::string a;
        while (std::getline(as, a, ',')) {
          a.erase(0, a.find_first_not_of(" \t"));
          a.erase(a.find_last_not_of(" \t") + 1);
          inst.args.push_back(ParamExpr::parse(a));
        }
        p = rp + 1;
      }
      if ((gname == "ccx" || gname == "ccz") && gs->gate_index(gname) < 0) {
        c.gs = gs = with_toffoli(gs);
      }
      inst.gate = gs->gate_index(gname);
      if (inst.gate < 0) fail("unsupported gate '" + gname + "'");
      std::string operands = line.substr(p);
      std::stringstream os(operands);
      std::string op;
      while (std::getline(os, op, ',')) {
        auto lb = op.find('['), rb = op.find(']');
        if (lb == std::string::npos || rb == std::string::npos)
          fail("bad operand '" + op + "'");
        inst.qubits.push_back(std::stoi(op.substr(lb + 1, rb - lb - 1)));
      }
      const Gate& g = gs->gate(inst.gate);
      if ((int)inst.qubits.size() != g.qubit_arity) fail("operand count");
      if ((int)inst.args.size() != g.param_arity) fail("argument count");
      for (int qb : inst.qubits)
        if (qb < 0 || qb >= c.q) fail("qubit index out of range");
      c.instrs.push_back(std::move(inst));
    }
  }
  if (c.q == 0) fail("no qreg declared");
  return c;
}

Circuit parse_qasm_file(const std::string& path,
                        std::shared_ptr<const GateSet> gs) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open qasm file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_qasm(buf.str(), gs);
}

std::string emit_qasm(const Circuit& c) {
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" +
                    std::to_string(c.q) + "];\n";
  for (const auto& inst : c.instrs) {
    out += c.gs->gate(inst.gate).name;
    if (!inst.args.empty()) {
      out += "(";
      for (size_t a = 0; a < inst.args.size(); a++) {
        if (a) out += ",";
        out += inst.args[a].to_string();
      }
      out += ")";
    }
    out += " ";
    for (size_t k = 0; k < inst.qubits.size(); k++) {
      if (k) out += ", ";
      out += "q[" + std::to_string(inst.qubits[k]) + "]";
    }
    out += ";\n";
  }
  return out;
}

}  // namespace qsopt
