#include "qsopt/verifier.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsopt {

std::string PhaseFactor::to_string() const {
  std::string s = "(";
  for (size_t k = 0; k < a.size(); k++) {
    if (k) s += ",";
    s += std::to_string(a[k]);
  }
  return s + ";" + b.to_string() + ")";
}

// ---------------------------------------------------------------------------
// Solver subprocess.

namespace {

std::string self_dir() {
  char buf[4096];
  ssize_t n = readlink("/proc/self/exe", buf, sizeof buf - 1);
  if (n <= 0) return ".";
  buf[n] = 0;
  std::string s(buf);
  auto slash = s.rfind('/');
  return slash == std::string::npos ? "." : s.substr(0, slash);
}

}  // namespace

SolverClient::SolverClient(SolverConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.solver_path.empty()) {
    resolved_path_ = cfg_.solver_path;
  } else if (const char* env = getenv("QSOPT_SOLVER"); env && *env) {
    resolved_path_ = env;
  } else {
    resolved_path_ = self_dir() + "/qsopt-smt";
    if (access(resolved_path_.c_str(), X_OK) != 0) resolved_path_ = "qsopt-smt";
  }
}

SolverClient::~SolverClient() { stop(); }

void SolverClient::start() {
  int to_pipe[2], from_pipe[2];
  if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0)
    throw std::runtime_error("solver: pipe failed");
  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("solver: fork failed");
  if (pid == 0) {
    dup2(to_pipe[0], 0);
    dup2(from_pipe[1], 1);
    close(to_pipe[0]); close(to_pipe[1]);
    close(from_pipe[0]); close(from_pipe[1]);
    std::string base = resolved_path_;
    auto slash = base.rfind('/');
    if (slash != std::string::npos) base = base.substr(slash + 1);
    if (base.find("z3") != std::string::npos) {
      execlp(resolved_path_.c_str(), resolved_path_.c_str(), "-in", (char*)nullptr);
    } else {
      execlp(resolved_path_.c_str(), resolved_path_.c_str(), (char*)nullptr);
    }
    _exit(127);
  }
  close(to_pipe[0]);
  close(from_pipe[1]);
  to_child_ = to_pipe[1];
  from_child_ = from_pipe[0];
  pid_ = pid;
  signal(SIGPIPE, SIG_IGN);
}

void SolverClient::stop() {
  if (pid_ > 0) {
    close(to_child_);
    close(from_child_);
    kill((pid_t)pid_, SIGKILL);
    int status;
    waitpid((pid_t)pid_, &status, 0);
    pid_ = -1;
    to_child_ = from_child_ = -1;
  }
}

bool SolverClient::read_until(std::string& buf, const char* needle,
                              int timeout_ms) {
  auto deadline_ok = [&](int spent) { return spent < timeout_ms; };
  int spent = 0;
  while (buf.find(needle) == std::string::npos) {
    struct pollfd pfd = {from_child_, POLLIN, 0};
    int rc = poll(&pfd, 1, 50);
    if (rc < 0) return false;
    if (rc == 0) {
      spent += 50;
      if (!deadline_ok(spent)) return false;
      continue;
    }
    char chunk[4096];
    ssize_t got = read(from_child_, chunk, sizeof chunk);
    if (got <= 0) return false;
    buf.append(chunk, (size_t)got);
  }
  return true;
}

namespace {

// Parses numeric values out of a solver model block:
// (define-fun NAME () Real VALUE) with VALUE a decimal, rational, or
// negation thereof.
void parse_model(const std::string& text, std::map<std::string, double>* model) {
  if (!model) return;
  size_t pos = 0;
  while ((pos = text.find("define-fun", pos)) != std::string::npos) {
    pos += 10;
    // name
    while (pos < text.size() && isspace((unsigned char)text[pos])) pos++;
    size_t ns = pos;
    while (pos < text.size() && !isspace((unsigned char)text[pos]) &&
           text[pos] != '(')
      pos++;
    std::string name = text.substr(ns, pos - ns);
    // skip "() Real"
    size_t real_pos = text.find("Real", pos);
    if (real_pos == std::string::npos) break;
    size_t vp = real_pos + 4;
    // value expression: read until the define-fun's closing paren balances
    int depth = 0;
    std::string val;
    for (; vp < text.size(); vp++) {
      char c = text[vp];
      if (c == '(') depth++;
      else if (c == ')') {
        if (depth == 0) break;
        depth--;
      }
      val += c;
    }
    // evaluate simple value expressions
    double sign = 1;
    double num = 0, den = 1;
    std::string tok;
    std::vector<double> stackv;
    // crude: strip parens, handle "-" and "/" tokens
    std::string cleaned;
    for (char c : val) cleaned += (c == '(' || c == ')') ? ' ' : c;
    std::istringstream is(cleaned);
    std::vector<std::string> toks;
    while (is >> tok) toks.push_back(tok);
    bool div = false, have = false;
    for (const auto& t : toks) {
      if (t == "-") { sign = -sign; continue; }
      if (t == "/") { div = true; continue; }
      char* endp = nullptr;
      double v = strtod(t.c_str(), &endp);
      if (endp == t.c_str()) continue;
      if (!have) { num = v; have = true; }
      else if (div) { den = v; div = false; }
    }
    if (have && den != 0) (*model)[name] = sign * num / den;
    pos = vp;
  }
}

}  // namespace

std::string SolverClient::query(const std::string& script,
                                std::map<std::string, double>* model) {
  n_queries_++;
  if (!cfg_.dump_dir.empty()) {
    std::ofstream out(cfg_.dump_dir + "/query_" +
                      std::to_string(dump_counter_++) + ".smt2");
    out << script;
  }
  for (int attempt = 0; attempt < 2; attempt++) {
    if (pid_ < 0) start();
    std::string payload = script;
    if (payload.empty() || payload.back() != '\n') payload += "\n";
    ssize_t w = write(to_child_, payload.data(), payload.size());
    if (w != (ssize_t)payload.size()) {
      stop();
      continue;
    }
    std::string buf;
    if (!read_until(buf, "\n", cfg_.timeout_ms)) {
      stop();
      if (attempt == 0 && buf.empty()) continue;  // solver may have died; retry once
      return "timeout";
    }
    std::string verdict = buf.substr(0, buf.find('\n'));
    while (!verdict.empty() && (verdict.back() == '\r')) verdict.pop_back();
    if (verdict == "sat" && model) {
      const char* get_model_cmd = "(get-model)\n";
      if (write(to_child_, get_model_cmd, strlen(get_model_cmd)) < 0) {
        stop();
        return "sat";
      }
      std::string mbuf = buf.substr(buf.find('\n') + 1);
      // read until parens balance to zero after at least one '('
      int guard = 0;
      while (guard++ < 1000) {
        int depth = 0;
        bool seen = false, done = false;
        for (char ch : mbuf) {
          if (ch == '(') { depth++; seen = true; }
          else if (ch == ')') depth--;
          if (seen && depth == 0) { done = true; break; }
        }
        if (done) break;
        std::string tmp;
        if (!read_until(tmp, "\n", cfg_.timeout_ms)) break;
        mbuf += tmp;
      }
      parse_model(mbuf, model);
    }
    const char* reset_cmd = "(reset)\n";
    if (write(to_child_, reset_cmd, strlen(reset_cmd)) < 0) stop();
    if (verdict == "sat" || verdict == "unsat" || verdict == "unknown")
      return verdict;
    stop();  // garbled response; restart for next query
    return "unknown";
  }
  throw SolverConfigError("solver '" + resolved_path_ +
                          "' could not be started (configuration error)");
}

// ---------------------------------------------------------------------------
// Query construction.

SymMatrix embed_gate(const SymMatrix& g, const std::vector<int>& qubits, int q) {
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
  for (int r = 0; r < dim; r++)
    for (int c = 0; c < dim; c++)
      if ((r & rest_mask) == (c & rest_mask))
        out.at(r, c) = g.at(sub_index(r), sub_index(c));
  return out;
}

namespace {

struct InstrKey {
  int q;
  uint64_t gs_hash;
  std::string text;
  bool operator<(const InstrKey& o) const {
    if (q != o.q) return q < o.q;
    if (gs_hash != o.gs_hash) return gs_hash < o.gs_hash;
    return text < o.text;
  }
};

CPolyMatrix instr_poly_matrix(const Circuit& c, const Instruction& inst) {
  static std::map<InstrKey, CPolyMatrix> cache;
  std::string key_text = std::to_string(inst.gate);
  for (const auto& a : inst.args) key_text += "|" + a.to_string();
  for (int qb : inst.qubits) key_text += "@" + std::to_string(qb);
  InstrKey key{c.q, gate_set_hash(*c.gs), key_text};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<SymExpr> args;
  for (const auto& a : inst.args) args.push_back(a.to_sym());
  SymMatrix g = gate_matrix(c.gs->gate(inst.gate), args);
  SymMatrix emb = embed_gate(g, inst.qubits, c.q);
  CPolyMatrix out(emb.dim);
  for (int k = 0; k < emb.dim * emb.dim; k++)
    out.e[(size_t)k] = to_poly(normalize_trig(emb.e[(size_t)k]));
  cache[key] = out;
  return out;
}

}  // namespace

CPolyMatrix circuit_poly_matrix(const Circuit& c) {
  CPolyMatrix m = CPolyMatrix::identity(1 << c.q);
  for (const auto& inst : c.instrs)
    m = pmatmul(instr_poly_matrix(c, inst), m);
  return m;
}

std::vector<PhaseFactor> phase_candidates_from_amps(std::complex<double> z1,
                                                    std::complex<double> z2,
                                                    const std::vector<double>& p0,
                                                    int m, double tol) {
  // enumerate a in {-2..2}^m (zero vector first in our sort), b in k*pi/4
  std::vector<PhaseFactor> out;
  std::vector<int> a(m, -2);
  bool done = false;
  std::vector<std::vector<int>> avecs;
  if (m == 0) {
    avecs.push_back({});
  } else {
    while (!done) {
      avecs.push_back(a);
      int k = m - 1;
      while (k >= 0 && a[(size_t)k] == 2) { a[(size_t)k] = -2; k--; }
      if (k < 0) done = true;
      else a[(size_t)k]++;
    }
  }
  for (const auto& av : avecs) {
    double dot = 0;
    for (int k = 0; k < m; k++) dot += av[(size_t)k] * p0[(size_t)k];
    for (int kb = 0; kb < 8; kb++) {
      Angle b = Angle::of_pi(Rat(kb, 4));
      double beta = dot + b.value();
      std::complex<double> ph(std::cos(beta), std::sin(beta));
      if (std::abs(z1 - ph * z2) < tol) {
        PhaseFactor pf;
        pf.a = av;
        pf.b = b;
        out.push_back(std::move(pf));
      }
    }
  }
  // order: a = 0 first, then by |b| distance from zero phase, then larger a
  auto rank = [](const PhaseFactor& p) {
    int asum = 0;
    for (int v : p.a) asum += std::abs(v);
    Rat bm = p.b.pi_mult;  // in (-1, 1]
    double bdist = std::abs(bm.to_double());
    return std::make_tuple(asum != 0, bdist, p.a, bm.to_double());
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const PhaseFactor& x, const PhaseFactor& y) {
                     return rank(x) < rank(y);
                   });
  return out;
}

std::vector<PhaseFactor> find_phase_candidates(const Circuit& c1,
                                               const Circuit& c2,
                                               const FingerprintContext& ctx,
                                               double tol) {
  return phase_candidates_from_amps(fingerprint_amplitude(c1, ctx),
                                    fingerprint_amplitude(c2, ctx), ctx.p0,
                                    ctx.m, tol);
}

std::string build_smt_query(const Circuit& c1, const Circuit& c2,
                            const PhaseFactor& phase) {
  if (c1.q != c2.q) throw std::runtime_error("verify: qubit count mismatch");
  CPolyMatrix m1 = circuit_poly_matrix(c1);
  CPolyMatrix m2 = circuit_poly_matrix(c2);
  // e^{i beta} with p_i = 2 h_i
  std::vector<SymExpr> beta_terms;
  for (size_t k = 0; k < phase.a.size(); k++) {
    if (phase.a[k] == 0) continue;
    beta_terms.push_back(
        sym::mul({sym::integer(2 * phase.a[k]), sym::half_param((int)k)}));
  }
  if (!phase.b.exact)
    throw std::runtime_error("verify: phase constant must be exact");
  if (!phase.b.pi_mult.is_zero())
    beta_terms.push_back(sym::mul({sym::rat(phase.b.pi_mult), sym::pi()}));
  CPoly ph = to_poly(normalize_trig(sym::exp_i(sym::add(std::move(beta_terms)))));

  std::vector<Poly> diffs;
  std::set<int> slots;
  bool uses_sqrt2 = false;
  for (int k = 0; k < m1.dim * m1.dim; k++) {
    CPoly d = m1.e[(size_t)k] - ph * m2.e[(size_t)k];
    for (Poly* p : {&d.re, &d.im}) {
      if (p->is_zero()) continue;
      for (const auto& [mono, coef] : p->terms) {
        (void)coef;
        for (int s = 0; s < 15; s++)
          if (mono_exp(mono, s) > 0) slots.insert(s);
        if (mono_exp(mono, kSqrt2Slot) > 0) uses_sqrt2 = true;
      }
      diffs.push_back(*p);
    }
  }

  std::string q = "(set-logic QF_NRA)\n";
  std::set<int> pairs;  // half-param ids with s/c vars in play
  for (int s : slots) pairs.insert(s / 2);
  for (int i : pairs) {
    q += "(declare-const s" + std::to_string(i) + " Real)\n";
    q += "(declare-const c" + std::to_string(i) + " Real)\n";
  }
  if (uses_sqrt2) q += "(declare-const sqrt2 Real)\n";
  for (int i : pairs) {
    std::string s = "s" + std::to_string(i), c = "c" + std::to_string(i);
    q += "(assert (= (+ (* " + s + " " + s + ") (* " + c + " " + c + ")) 1))\n";
  }
  if (uses_sqrt2) {
    q += "(assert (= (* sqrt2 sqrt2) 2))\n";
    q += "(assert (> sqrt2 0))\n";
  }
  if (diffs.empty()) {
    q += "(assert false)\n";
  } else {
    std::string dis = "(assert (or";
    for (const auto& p : diffs) dis += "\n  (not (= " + p.to_smt() + " 0))";
    q += dis + "))\n";
  }
  q += "(check-sat)\n";
  return q;
}

VerifyResult verify_equivalence(const Circuit& c1, const Circuit& c2,
                                const PhaseFactor& phase, SolverClient& solver) {
  std::string script = build_smt_query(c1, c2, phase);
  std::map<std::string, double> model;
  std::string verdict = solver.query(script, &model);
  VerifyResult res;
  res.phase = phase;
  if (verdict == "unsat") {
    res.verdict = Verdict::Verified;
  } else if (verdict == "sat") {
    res.verdict = Verdict::Refuted;
    int m = std::max(c1.m, c2.m);
    res.counterexample.assign((size_t)m, 0.0);
    for (int i = 0; i < m; i++) {
      auto s = model.find("s" + std::to_string(i));
      auto c = model.find("c" + std::to_string(i));
      if (s != model.end() && c != model.end())
        res.counterexample[(size_t)i] = 2 * std::atan2(s->second, c->second);
    }
  } else {
    res.verdict = Verdict::Inconclusive;
    res.note = verdict;
  }
  return res;
}

VerifyResult verify_pair(const Circuit& c1, const Circuit& c2,
                         const FingerprintContext& ctx, SolverClient& solver) {
  auto candidates =
      find_phase_candidates(c1, c2, ctx, solver.config().candidate_tol);
  VerifyResult last;
  last.verdict = Verdict::Refuted;
  last.note = "no phase candidate";
  bool saw_inconclusive = false;
  for (const auto& pf : candidates) {
    VerifyResult r = verify_equivalence(c1, c2, pf, solver);
    if (r.verdict == Verdict::Verified) return r;
    if (r.verdict == Verdict::Inconclusive) saw_inconclusive = true;
    last = r;
  }
  if (saw_inconclusive) {
    last.verdict = Verdict::Inconclusive;
    last.note = "all candidates inconclusive or refuted";
  }
  return last;
}

double numeric_phase_gap(const Circuit& c1, const Circuit& c2,
                         const PhaseFactor& phase, int n_samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0, 2 * M_PI);
  int m = std::max(c1.m, c2.m);
  double worst = 0;
  for (int s = 0; s < n_samples; s++) {
    std::vector<double> p((size_t)m);
    for (auto& v : p) v = uni(rng);
    auto u1 = circuit_unitary(c1, p);
    auto u2 = circuit_unitary(c2, p);
    double beta = phase.b.value();
    for (size_t k = 0; k < phase.a.size() && k < p.size(); k++)
      beta += phase.a[k] * p[k];
    std::complex<double> ph(std::cos(beta), std::sin(beta));
    for (size_t k = 0; k < u1.size(); k++)
      worst = std::max(worst, std::abs(u1[k] - ph * u2[k]));
  }
  return worst;
}

}  // namespace qsopt
