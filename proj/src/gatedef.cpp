#include "qsopt/gatedef.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace qsopt {

int GateSet::gate_index(const std::string& gname) const {
  for (size_t k = 0; k < gates.size(); k++)
    if (gates[k].name == gname) return (int)k;
  return -1;
}

SymExpr ParamExpr::to_sym() const {
  switch (form) {
    case P: return sym::param(i);
    case TwoP: return sym::mul({sym::integer(2), sym::param(i)});
    case SumPP: return sym::add({sym::param(i), sym::param(j)});
    case Const:
      if (!value.exact)
        throw std::runtime_error(
            "non-exact concrete angle has no symbolic form");
      return sym::mul({sym::rat(value.pi_mult), sym::pi()});
  }
  throw std::logic_error("ParamExpr::to_sym");
}

double ParamExpr::value_at(const std::vector<double>& params) const {
  switch (form) {
    case P: return params.at((size_t)i);
    case TwoP: return 2 * params.at((size_t)i);
    case SumPP: return params.at((size_t)i) + params.at((size_t)j);
    case Const: return value.value();
  }
  throw std::logic_error("ParamExpr::value_at");
}

std::string ParamExpr::to_string() const {
  switch (form) {
    case P: return "p" + std::to_string(i);
    case TwoP: return "2p" + std::to_string(i);
    case SumPP: return "p" + std::to_string(i) + "+p" + std::to_string(j);
    case Const: return value.to_string();
  }
  throw std::logic_error("ParamExpr::to_string");
}

ParamExpr ParamExpr::parse(const std::string& text) {
  auto is_p_term = [](const std::string& s) {
    return s.size() >= 2 && s[0] == 'p' &&
           std::all_of(s.begin() + 1, s.end(),
                       [](char c) { return isdigit((unsigned char)c); });
  };
  if (is_p_term(text)) return p(std::stoi(text.substr(1)));
  if (text.size() >= 3 && text[0] == '2' && is_p_term(text.substr(1)))
    return twop(std::stoi(text.substr(2)));
  auto plus = text.find('+');
  if (plus != std::string::npos) {
    std::string a = text.substr(0, plus), b = text.substr(plus + 1);
    if (is_p_term(a) && is_p_term(b))
      return sum(std::stoi(a.substr(1)), std::stoi(b.substr(1)));
  }
  // concrete angle: rational multiple of pi ("pi/4", "-3*pi/4", "0") or decimal
  std::string s = text;
  bool negate = false;
  if (!s.empty() && s[0] == '-') { negate = true; s = s.substr(1); }
  auto pi_pos = s.find("pi");
  if (pi_pos != std::string::npos) {
    int64_t num = 1, den = 1;
    std::string pre = s.substr(0, pi_pos);   // "3*" or ""
    std::string post = s.substr(pi_pos + 2); // "/4" or ""
    if (!pre.empty()) {
      if (pre.back() != '*') throw std::runtime_error("bad angle: " + text);
      num = std::stoll(pre.substr(0, pre.size() - 1));
    }
    if (!post.empty()) {
      if (post[0] != '/') throw std::runtime_error("bad angle: " + text);
      den = std::stoll(post.substr(1));
    }
    Rat r(negate ? -num : num, den);
    return constant(Angle::of_pi(r));
  }
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("");
    if (v == 0) return constant(Angle::zero());
    return constant(Angle::of_double(negate ? -v : v));
  } catch (...) {
    throw std::runtime_error("cannot parse angle or expression: " + text);
  }
}

size_t ParamExpr::hash() const {
  size_t h = hash_combine(11, (size_t)form);
  if (form == Const) return hash_combine(h, value.hash());
  return hash_combine(hash_combine(h, (size_t)i), (size_t)j);
}

std::vector<ParamExpr> sigma_exprs(int m) {
  std::vector<ParamExpr> out;
  for (int i = 0; i < m; i++) out.push_back(ParamExpr::p(i));
  for (int i = 0; i < m; i++) out.push_back(ParamExpr::twop(i));
  for (int i = 0; i < m; i++)
    for (int j = i + 1; j < m; j++) out.push_back(ParamExpr::sum(i, j));
  return out;
}

// ---------------------------------------------------------------------------
// Built-in gate sets. Matrices are given in the same expression grammar used
// by gate-set files; parameters appear as p0, p1, ... (gate-local).

namespace {

Gate make_gate(const std::string& name, int qubits, int params,
               const std::vector<std::vector<std::string>>& rows) {
  Gate g;
  g.name = name;
  g.qubit_arity = qubits;
  g.param_arity = params;
  int dim = 1 << qubits;
  if ((int)rows.size() != dim)
    throw std::runtime_error("gate " + name + ": wrong matrix dimension");
  g.tmpl = SymMatrix(dim);
  for (int r = 0; r < dim; r++) {
    if ((int)rows[(size_t)r].size() != dim)
      throw std::runtime_error("gate " + name + ": ragged matrix");
    for (int c = 0; c < dim; c++)
      g.tmpl.at(r, c) = parse_expr(rows[(size_t)r][(size_t)c]);
  }
  return g;
}

Gate g_h() {
  return make_gate("h", 1, 0, {{"sqrt2/2", "sqrt2/2"}, {"sqrt2/2", "-sqrt2/2"}});
}
Gate g_x() { return make_gate("x", 1, 0, {{"0", "1"}, {"1", "0"}}); }
Gate g_rz() {
  return make_gate("rz", 1, 1,
                   {{"exp(i*(-p0/2))", "0"}, {"0", "exp(i*(p0/2))"}});
}
Gate g_cx() {
  return make_gate("cx", 2, 0,
                   {{"1", "0", "0", "0"},
                    {"0", "1", "0", "0"},
                    {"0", "0", "0", "1"},
                    {"0", "0", "1", "0"}});
}
Gate g_cz() {
  return make_gate("cz", 2, 0,
                   {{"1", "0", "0", "0"},
                    {"0", "1", "0", "0"},
                    {"0", "0", "1", "0"},
                    {"0", "0", "0", "-1"}});
}

}  // namespace

GateSet builtin_gate_set(const std::string& name) {
  GateSet gs;
  gs.name = name;
  if (name == "nam") {
    gs.gates = {g_rz(), g_cx(), g_x(), g_h()};
  } else if (name == "ibm") {
    gs.gates = {
        make_gate("u1", 1, 1, {{"1", "0"}, {"0", "exp(i*p0)"}}),
        make_gate("u2", 1, 2,
                  {{"sqrt2/2", "-sqrt2/2*exp(i*p1)"},
                   {"sqrt2/2*exp(i*p0)", "sqrt2/2*exp(i*(p0+p1))"}}),
        make_gate("u3", 1, 3,
                  {{"cos(p0/2)", "-exp(i*p2)*sin(p0/2)"},
                   {"exp(i*p1)*sin(p0/2)", "exp(i*(p1+p2))*cos(p0/2)"}}),
        g_cx()};
  } else if (name == "rigetti") {
    gs.gates = {
        make_gate("rx90", 1, 0, {{"sqrt2/2", "-i*sqrt2/2"}, {"-i*sqrt2/2", "sqrt2/2"}}),
        make_gate("rxm90", 1, 0, {{"sqrt2/2", "i*sqrt2/2"}, {"i*sqrt2/2", "sqrt2/2"}}),
        make_gate("rx180", 1, 0, {{"0", "-i"}, {"-i", "0"}}),
        g_rz(), g_cz()};
  } else if (name == "clifford_t") {
    gs.gates = {g_h(),
                make_gate("t", 1, 0, {{"1", "0"}, {"0", "exp(i*(pi/4))"}}),
                make_gate("tdg", 1, 0, {{"1", "0"}, {"0", "exp(i*(-pi/4))"}}),
                make_gate("s", 1, 0, {{"1", "0"}, {"0", "i"}}),
                make_gate("sdg", 1, 0, {{"1", "0"}, {"0", "-i"}}),
                g_cx()};
  } else {
    throw std::runtime_error("unknown gate set: " + name);
  }
  return gs;
}

GateSet load_gate_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gate-set file: " + path);
  nlohmann::json j;
  in >> j;
  GateSet gs;
  gs.name = j.at("name").get<std::string>();
  for (const auto& jg : j.at("gates")) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& jr : jg.at("matrix"))
      rows.push_back(jr.get<std::vector<std::string>>());
    gs.gates.push_back(make_gate(jg.at("name").get<std::string>(),
                                 jg.at("qubits").get<int>(),
                                 jg.value("params", 0), rows));
  }
  if (gs.gates.empty()) throw std::runtime_error("gate-set file has no gates");
  return gs;
}

namespace {

SymExpr subst_params(const SymExpr& e, const std::vector<SymExpr>& args) {
  switch (e->kind) {
    case Kind::Param: return args.at((size_t)e->index);
    case Kind::Add: {
      std::vector<SymExpr> kids;
      for (const auto& k : e->kids) kids.push_back(subst_params(k, args));
      return sym::add(std::move(kids));
    }
    case Kind::Mul: {
      std::vector<SymExpr> kids;
      for (const auto& k : e->kids) kids.push_back(subst_params(k, args));
      return sym::mul(std::move(kids));
    }
    case Kind::Sin: return sym::sin_(subst_params(e->kids[0], args));
    case Kind::Cos: return sym::cos_(subst_params(e->kids[0], args));
    case Kind::ExpI: return sym::exp_i(subst_params(e->kids[0], args));
    default: return e;
  }
}

}  // namespace

SymMatrix gate_matrix(const Gate& g, const std::vector<SymExpr>& args) {
  if ((int)args.size() != g.param_arity)
    throw std::runtime_error("gate " + g.name + ": expected " +
                             std::to_string(g.param_arity) + " args, got " +
                             std::to_string(args.size()));
  if (g.param_arity == 0) return g.tmpl;
  SymMatrix out(g.tmpl.dim);
  for (size_t k = 0; k < out.e.size(); k++) out.e[k] = subst_params(g.tmpl.e[k], args);
  return out;
}

std::vector<std::complex<double>> gate_matrix_at(const Gate& g,
                                                 const std::vector<double>& args) {
  if ((int)args.size() != g.param_arity)
    throw std::runtime_error("gate " + g.name + ": arity mismatch");
  return eval_matrix(g.tmpl, args);
}

uint64_t gate_set_hash(const GateSet& gs) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (char c : s) { h ^= (uint8_t)c; h *= 0x100000001b3ULL; }
    h ^= 0xff; h *= 0x100000001b3ULL;
  };
  mix(gs.name);
  for (const auto& g : gs.gates) {
    mix(g.name);
    mix(std::to_string(g.qubit_arity));
    mix(std::to_string(g.param_arity));
    for (const auto& e : g.tmpl.e) mix(to_string(e));
  }
  return h;
}

std::vector<SingleGate> enumerate_single_gate_circuits(const GateSet& gs,
                                                       const ParamSpec& sigma,
                                                       int q) {
  if (q < 1) throw std::runtime_error("q must be >= 1");
  std::vector<ParamExpr> exprs = sigma_exprs(sigma.m);
  std::vector<SingleGate> out;
  for (size_t gi = 0; gi < gs.gates.size(); gi++) {
    const Gate& g = gs.gates[gi];
    if (g.qubit_arity > q) continue;
    // all argument tuples with pairwise-disjoint parameter support
    std::vector<std::vector<ParamExpr>> tuples;
    std::vector<ParamExpr> cur;
    std::function<void(int, uint32_t)> rec_args = [&](int slot, uint32_t used) {
      if (slot == g.param_arity) { tuples.push_back(cur); return; }
      for (const auto& e : exprs) {
        if (sigma.single_use && (e.mask() & used)) continue;
        cur.push_back(e);
        rec_args(slot + 1, used | e.mask());
        cur.pop_back();
      }
    };
    rec_args(0, 0);
    // all ordered distinct qubit tuples, lexicographically
    std::vector<std::vector<int>> qtuples;
    std::vector<int> qcur;
    std::function<void(int)> rec_q = [&](int slot) {
      if (slot == g.qubit_arity) { qtuples.push_back(qcur); return; }
      for (int v = 0; v < q; v++) {
        if (std::find(qcur.begin(), qcur.end(), v) != qcur.end()) continue;
        qcur.push_back(v);
        rec_q(slot + 1);
        qcur.pop_back();
      }
    };
    rec_q(0);
    for (const auto& args : tuples) {
      uint32_t mask = 0;
      for (const auto& e : args) mask |= e.mask();
      for (const auto& qs : qtuples) {
        SingleGate sg;
        sg.gate = (int)gi;
        sg.args = args;
        sg.qubits = qs;
        sg.param_mask = mask;
        out.push_back(std::move(sg));
      }
    }
  }
  return out;
}

}  // namespace qsopt
