// End-to-end acceptance checks, one per --criterion number. Each prints a
// single PASS/FAIL line (plus supporting detail) and exits nonzero on FAIL.
// Run from the repository root so the benchmark paths resolve.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qsopt/generator.hpp"
#include "qsopt/optimizer.hpp"
#include "qsopt/preprocess.hpp"
#include "qsopt/pruning.hpp"
#include "qsopt/qasm.hpp"

using namespace qsopt;
using cplx = std::complex<double>;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr uint64_t kSeed = 1;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool within_5pct(double got, double want) {
  return std::abs(got - want) <= 0.05 * want;
}

std::shared_ptr<const GateSet> gset(const char* name) {
  return std::make_shared<GateSet>(builtin_gate_set(name));
}

EccSet generate(const char* set_name, int n, int q, int m,
                GenStats* stats = nullptr) {
  auto gs = gset(set_name);
  ParamSpec sigma;
  sigma.m = m;
  auto ctx = FingerprintContext::create(kSeed, q, m);
  SolverClient solver;
  return repgen(gs, sigma, n, q, ctx, solver, stats);
}

EccSet full_prune(const EccSet& es) {
  return prune_common_subcircuit(simplify_eccs(es));
}

// preprocessing used for all Clifford+T benchmark inputs: toffoli polarity
// selection, transpilation to the nam set, rotation merging
Circuit preprocess_nam(const std::string& path) {
  Circuit in = parse_qasm_file(path, gset("clifford_t"));
  return merge_rotations(transpile(decompose_toffoli(in), "nam"));
}

// state-vector equivalence up to one global phase on random inputs
bool states_match(const Circuit& a, const Circuit& b, int n_inputs = 5,
                  double tol = 1e-8) {
  if (a.q != b.q) return false;
  size_t dim = 1ull << a.q;
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < n_inputs; t++) {
    std::vector<cplx> in(dim);
    double norm = 0;
    for (auto& z : in) {
      z = cplx(gauss(rng), gauss(rng));
      norm += std::norm(z);
    }
    norm = std::sqrt(norm);
    for (auto& z : in) z /= norm;
    auto va = apply_circuit(a, {}, in);
    auto vb = apply_circuit(b, {}, in);
    // align on the largest output amplitude
    size_t big = 0;
    for (size_t k = 0; k < dim; k++)
      if (std::abs(va[k]) > std::abs(va[big])) big = k;
    if (std::abs(vb[big]) < 1e-12) return false;
    cplx phase = va[big] / vb[big];
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    double worst = 0;
    for (size_t k = 0; k < dim; k++)
      worst = std::max(worst, std::abs(va[k] - phase * vb[k]));
    if (worst > tol) return false;
  }
  return true;
}

bool report(int crit, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s — %s\n", crit, ok ? "PASS" : "FAIL",
              detail.c_str());
  return ok;
}

// ---------------------------------------------------------------------------

bool criterion1() {
  auto t0 = clock_type::now();
  struct Want { int n; size_t t, r; } wants[] = {
      {2, 62, 397}, {3, 196, 4179}, {4, 1304, 36177}};
  std::ostringstream detail;
  bool ok = true;
  for (const auto& w : wants) {
    GenStats stats;
    EccSet es = generate("nam", w.n, 3, 2, &stats);
    size_t t = transformation_count(es);
    size_t r = stats.reps_per_round.back();
    bool cell = within_5pct((double)t, (double)w.t) &&
                within_5pct((double)r, (double)w.r);
    ok = ok && cell;
    detail << "n=" << w.n << ": |T|=" << t << " (want " << w.t << "), |R|=" << r
           << " (want " << w.r << "); ";
  }
  double dt = seconds_since(t0);
  ok = ok && dt < 600;
  detail << "total " << (int)dt << "s (limit 600s)";
  return report(1, ok, detail.str());
}

bool criterion2() {
  struct Want { int n; double gen, simp, common; } wants[] = {
      {2, 400, 50, 50}, {3, 1180, 231, 164}};
  std::ostringstream detail;
  bool ok = true;
  for (const auto& w : wants) {
    EccSet es = generate("nam", w.n, 3, 2);
    size_t c0 = es.circuit_count();
    EccSet s = simplify_eccs(es);
    size_t c1 = s.circuit_count();
    size_t c2 = prune_common_subcircuit(s).circuit_count();
    bool b0 = within_5pct((double)c0, w.gen);
    bool b1 = within_5pct((double)c1, w.simp);
    bool b2 = within_5pct((double)c2, w.common);
    ok = ok && b0 && b1 && b2;
    detail << "n=" << w.n << ": " << c0 << (b0 ? "" : "(!)") << " -> " << c1
           << (b1 ? "" : "(!)") << " -> " << c2 << (b2 ? "" : "(!)")
           << " (want " << w.gen << " -> " << w.simp << " -> " << w.common
           << " each +-5%); ";
  }
  return report(2, ok, detail.str());
}

bool criterion3() {
  EccSet a = full_prune(generate("rigetti", 2, 3, 2));
  EccSet b = full_prune(generate("rigetti", 3, 3, 2));
  auto key = [](const EccSet& es) {
    std::set<std::string> texts;
    for (const auto& t : extract_transformations(es))
      texts.insert(circuit_text(t.target) + " => " + circuit_text(t.rewrite));
    return texts;
  };
  auto ka = key(a), kb = key(b);
  size_t ta = transformation_count(a), tb = transformation_count(b);
  bool ok = ka == kb && ta == 66 && tb == 66;
  std::ostringstream detail;
  detail << "|T| (2,3)=" << ta << ", (3,3)=" << tb
         << (ka == kb ? ", transformation sets identical" : ", sets DIFFER")
         << " (want identical, 66 exact)";
  return report(3, ok, detail.str());
}

bool criterion4() {
  auto t0 = clock_type::now();
  EccSet es = generate("nam", 3, 3, 2);
  SolverConfig cfg;
  cfg.timeout_ms = 30000;
  SolverClient solver(cfg);
  size_t pairs = 0, verified = 0, refuted = 0, inconclusive = 0;
  for (const auto& e : es.eccs) {
    auto ctx = FingerprintContext::create(kSeed, e.q, e.m);
    for (size_t k = 1; k < e.circuits.size(); k++) {
      pairs++;
      auto cands =
          find_phase_candidates(e.circuits[0], e.circuits[k], ctx);
      bool got = false;
      for (const auto& pf : cands) {
        if (!pf.is_constant()) continue;
        auto r = verify_equivalence(e.circuits[0], e.circuits[k], pf, solver);
        if (r.verdict == Verdict::Verified) { got = true; break; }
        if (r.verdict == Verdict::Inconclusive) inconclusive++;
      }
      if (got) verified++;
      else refuted++;
    }
  }
  double dt = seconds_since(t0);
  bool ok = pairs > 0 && verified == pairs && refuted == 0 &&
            inconclusive == 0 && dt < 900;
  std::ostringstream detail;
  detail << pairs << " pairs, " << verified << " verified with a=0, " << refuted
         << " unverified, " << inconclusive << " inconclusive, " << (int)dt
         << "s (limit 900s)";
  return report(4, ok, detail.str());
}

bool criterion5() {
  auto t0 = clock_type::now();
  SolverClient solver;
  std::ostringstream detail;
  bool ok = true;

  // {h, cx} at n=2, q=2
  {
    GateSet sub;
    sub.name = "h_cx";
    GateSet nam = builtin_gate_set("nam");
    sub.gates = {nam.gate(nam.gate_index("h")), nam.gate(nam.gate_index("cx"))};
    auto gs = std::make_shared<const GateSet>(sub);
    ParamSpec sigma;
    sigma.m = 0;
    auto ctx = FingerprintContext::create(kSeed, 2, 0);
    EccSet es = full_prune(repgen(gs, sigma, 2, 2, ctx, solver));
    auto r = completeness_oracle(gs, sigma, 2, 2, es, ctx, solver);
    ok = ok && r == OracleResult::Complete;
    detail << "{h,cx} n=2 q=2: "
           << (r == OracleResult::Complete ? "complete" : "NOT complete");

    EccSet crippled = es;
    if (!crippled.eccs.empty()) crippled.eccs.erase(crippled.eccs.begin());
    auto r2 = completeness_oracle(gs, sigma, 2, 2, crippled, ctx, solver);
    ok = ok && r2 == OracleResult::Incomplete;
    detail << "; with one class deleted: "
           << (r2 == OracleResult::Incomplete ? "gap detected"
                                              : "gap NOT detected");
  }

  // {h} at n=3, q=1
  {
    GateSet sub;
    sub.name = "h_only";
    GateSet nam = builtin_gate_set("nam");
    sub.gates = {nam.gate(nam.gate_index("h"))};
    auto gs = std::make_shared<const GateSet>(sub);
    ParamSpec sigma;
    sigma.m = 0;
    auto ctx = FingerprintContext::create(kSeed, 1, 0);
    EccSet es = full_prune(repgen(gs, sigma, 3, 1, ctx, solver));
    auto r = completeness_oracle(gs, sigma, 3, 1, es, ctx, solver);
    ok = ok && r == OracleResult::Complete;
    detail << "; {h} n=3 q=1: "
           << (r == OracleResult::Complete ? "complete" : "NOT complete");
  }

  double dt = seconds_since(t0);
  ok = ok && dt < 240;
  detail << "; " << (int)dt << "s (limit 2min per config)";
  return report(5, ok, detail.str());
}

bool criterion6() {
  std::ostringstream detail;
  bool ok = true;

  Circuit tof3 = preprocess_nam("benchmarks/tof_3.qasm");
  ok = ok && tof3.size() <= 41;
  detail << "tof_3 preprocessed to " << tof3.size() << " gates (limit 41)";

  {
    EccSet rules = full_prune(generate("nam", 2, 2, 2));
    SearchConfig cfg;
    cfg.timeout_seconds = 600;
    Circuit best = optimize(tof3, extract_transformations(rules), cfg);
    ok = ok && best.size() <= 35;
    ok = ok && states_match(tof3, best);
    detail << "; optimized with the (2,2) set to " << best.size()
           << " gates (want <= 35, semantics "
           << (states_match(tof3, best) ? "ok" : "BROKEN") << ")";
  }

  {
    Circuit bt3 = preprocess_nam("benchmarks/barenco_tof_3.qasm");
    EccSet rules = full_prune(generate("nam", 3, 3, 2));
    SearchConfig cfg;
    cfg.timeout_seconds = 1500;
    cfg.gamma = 1.05;
    Circuit best = optimize(bt3, extract_transformations(rules), cfg);
    ok = ok && best.size() <= 42;
    ok = ok && states_match(bt3, best);
    detail << "; barenco_tof_3 preprocessed to " << bt3.size()
           << ", optimized with the (3,3) set to " << best.size()
           << " gates (want <= 42, semantics "
           << (states_match(bt3, best) ? "ok" : "BROKEN") << ")";
  }

  return report(6, ok, detail.str());
}

bool criterion7() {
  std::ostringstream detail;
  bool ok = true;

  // preprocessing on every benchmark with q <= 8
  for (const char* name : {"tof_3", "tof_4", "barenco_tof_3"}) {
    std::string path = std::string("benchmarks/") + name + ".qasm";
    Circuit in = parse_qasm_file(path, gset("clifford_t"));
    Circuit out = merge_rotations(transpile(decompose_toffoli(in), "nam"));
    bool same = states_match(in, out);
    ok = ok && same;
    detail << name << " preprocess " << (same ? "ok" : "MISMATCH") << "; ";
  }

  // the rigetti pipeline end-to-end
  {
    Circuit in = preprocess_nam("benchmarks/barenco_tof_3.qasm");
    Circuit out = rigetti_pipeline(in);
    bool same = states_match(in, out);
    ok = ok && same;
    detail << "barenco_tof_3 rigetti pipeline " << (same ? "ok" : "MISMATCH")
           << " (" << out.size() << " gates); ";
  }

  // optimizer outputs under both rule sets used in criterion 6
  {
    Circuit tof3 = preprocess_nam("benchmarks/tof_3.qasm");
    SearchConfig cfg;
    cfg.timeout_seconds = 120;
    Circuit a = optimize(tof3, extract_transformations(
                                   full_prune(generate("nam", 2, 2, 2))), cfg);
    bool same = states_match(tof3, a);
    ok = ok && same;
    detail << "tof_3 optimizer output " << (same ? "ok" : "MISMATCH") << "; ";

    Circuit bt3 = preprocess_nam("benchmarks/barenco_tof_3.qasm");
    cfg.timeout_seconds = 120;
    Circuit b = optimize(bt3, extract_transformations(
                                  full_prune(generate("nam", 3, 3, 2))), cfg);
    same = states_match(bt3, b);
    ok = ok && same;
    detail << "barenco_tof_3 optimizer output " << (same ? "ok" : "MISMATCH");
  }

  return report(7, ok, detail.str());
}

bool criterion8() {
  // Scale-bound results are out of reach on a single desk machine by design:
  // the 24-hour 128-core optimization columns, (6,3)/(7,3) generation at the
  // reported speed, and the seven-run mod5_4 distribution.
  return report(8, true,
                "declared not reproducible at desk scale: 24h/128-core "
                "optimization columns, (6,3) and (7,3) generation at reported "
                "speed, mod5_4 seven-run distribution");
}

bool criterion9() {
  EccSet a = generate("nam", 3, 3, 2);
  EccSet b = generate("nam", 3, 3, 2);
  std::string pa = "/tmp/qsopt_acceptance_a.eccs";
  std::string pb = "/tmp/qsopt_acceptance_b.eccs";
  save_eccs(a, pa);
  save_eccs(b, pb);
  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  std::string fa = slurp(pa), fb = slurp(pb);
  bool ok = !fa.empty() && fa == fb;
  std::ostringstream detail;
  detail << "two (3,3) runs with seed " << kSeed << ": " << fa.size()
         << " bytes each, " << (ok ? "byte-identical" : "DIFFER");
  return report(9, ok, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  int crit = 0;
  for (int k = 1; k + 1 < argc; k++)
    if (!std::strcmp(argv[k], "--criterion")) crit = std::atoi(argv[k + 1]);
  if (crit < 1 || crit > 9) {
    std::fprintf(stderr, "usage: acceptance --criterion N   (N in 1..9)\n");
    return 2;
  }
  bool ok = false;
  switch (crit) {
    case 1: ok = criterion1(); break;
    case 2: ok = criterion2(); break;
    case 3: ok = criterion3(); break;
    case 4: ok = criterion4(); break;
    case 5: ok = criterion5(); break;
    case 6: ok = criterion6(); break;
    case 7: ok = criterion7(); break;
    case 8: ok = criterion8(); break;
    case 9: ok = criterion9(); break;
  }
  return ok ? 0 : 1;
}
