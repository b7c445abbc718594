#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsopt/eccset.hpp"
#include "qsopt/generator.hpp"
#include "qsopt/optimizer.hpp"
#include "qsopt/preprocess.hpp"
#include "qsopt/pruning.hpp"
#include "qsopt/qasm.hpp"

using namespace qsopt;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 ok, 1 usage, 2 I/O, 3 audit failure, 4 solver configuration
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AuditError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_duration(const std::string& s) {
  if (s.empty()) throw CLI::ValidationError("empty duration");
  double mult = 1;
  std::string num = s;
  if (s.back() == 's') {
    num = s.substr(0, s.size() - 1);
  } else if (s.back() == 'm') {
    mult = 60;
    num = s.substr(0, s.size() - 1);
  }
  try {
    return std::stod(num) * mult;
  } catch (...) {
    throw CLI::ValidationError("bad duration: " + s);
  }
}

struct Manifest {
  std::string command;
  std::map<std::string, std::string> flags;
  ordered_json results = ordered_json::object();

  void write(const std::string& out_path, double wall) const {
    ordered_json j;
    j["tool"] = "qsopt";
    j["version"] = kVersion;
    j["command"] = command;
    j["flags"] = flags;
    j["wall_seconds"] = wall;
    j["results"] = results;
    std::ofstream f(out_path + ".manifest.json", std::ios::binary);
    if (!f) throw IoError("cannot write " + out_path + ".manifest.json");
    f << j.dump(2) << "\n";
  }
};

std::shared_ptr<const GateSet> resolve_gate_set(const std::string& name,
                                                const std::string& file) {
  try {
    if (!file.empty())
      return std::make_shared<GateSet>(load_gate_set(file));
    return std::make_shared<GateSet>(builtin_gate_set(name));
  } catch (const std::exception& ex) {
    throw IoError(ex.what());
  }
}

struct SolverFlags {
  std::string path;
  std::string timeout = "30s";
  double tol = 1e-9;
  std::string dump_dir;

  void attach(CLI::App* app) {
    app->add_option("--solver", path, "solver binary (default: $QSOPT_SOLVER)");
    app->add_option("--solver-timeout", timeout, "per-query limit (e.g. 30s)");
    app->add_option("--tol", tol, "phase candidate matching tolerance");
    app->add_option("--dump-smt", dump_dir, "dump emitted scripts to DIR");
  }
  SolverConfig config() const {
    SolverConfig cfg;
    cfg.solver_path = path;
    cfg.timeout_ms = (int)(parse_duration(timeout) * 1000);
    cfg.candidate_tol = tol;
    cfg.dump_dir = dump_dir;
    return cfg;
  }
  void record(Manifest& m) const {
    m.flags["solver"] = path;
    m.flags["solver-timeout"] = timeout;
    m.flags["tol"] = std::to_string(tol);
    if (!dump_dir.empty()) m.flags["dump-smt"] = dump_dir;
  }
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t c = s.find(',', pos);
    if (c == std::string::npos) c = s.size();
    if (c > pos) out.push_back(s.substr(pos, c - pos));
    pos = c + 1;
  }
  return out;
}

Circuit read_qasm(const std::string& path, std::shared_ptr<const GateSet> gs) {
  try {
    return parse_qasm_file(path, gs);
  } catch (const std::exception& ex) {
    throw IoError(ex.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum circuit superoptimizer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // generate
  auto* gen = app.add_subcommand("generate", "build an (n,q)-complete ECC set");
  std::string g_gateset = "nam", g_gsfile, g_out;
  int g_n = 0, g_q = 0, g_m = 2, g_jobs = 1;
  bool g_multi_use = false;
  uint64_t g_seed = 1;
  double g_emax = 1e-15;
  SolverFlags g_solver;
  gen->add_option("--gateset", g_gateset, "built-in gate set name");
  gen->add_option("--gateset-file", g_gsfile, "gate set definition (JSON)");
  gen->add_option("--n", g_n, "max gate count")->required();
  gen->add_option("--q", g_q, "qubit count")->required();
  gen->add_option("--m", g_m, "parameter count");
  gen->add_flag("--multi-use", g_multi_use, "allow reusing parameters");
  gen->add_option("--seed", g_seed, "fingerprint seed");
  gen->add_option("--e-max", g_emax, "fingerprint bucket half-width");
  gen->add_option("--out", g_out, "output .eccs path")->required();
  gen->add_option("--jobs", g_jobs, "worker count (this build is serial)");
  g_solver.attach(gen);

  // prune
  auto* prn = app.add_subcommand("prune", "shrink an ECC set");
  std::string p_in, p_out, p_passes = "simplify,common", p_gsfile;
  prn->add_option("--in", p_in)->required();
  prn->add_option("--out", p_out)->required();
  prn->add_option("--passes", p_passes, "comma list: simplify, common");
  prn->add_option("--gateset-file", p_gsfile,
                  "gate set definition for non-built-in sets");

  // verify
  auto* ver = app.add_subcommand("verify", "re-verify every ECC in a file");
  std::string v_eccs;
  SolverFlags v_solver;
  ver->add_option("--eccs", v_eccs)->required();
  v_solver.attach(ver);

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "qasm-to-qasm pipeline");
  std::string r_in, r_out, r_gateset = "nam", r_from = "clifford_t";
  std::string r_passes = "toffoli,transpile,merge";
  pre->add_option("--in", r_in)->required();
  pre->add_option("--out", r_out)->required();
  pre->add_option("--gateset", r_gateset, "target gate set");
  pre->add_option("--from", r_from, "gate set the input is written in");
  pre->add_option("--passes", r_passes,
                  "comma list: toffoli, transpile, merge, rigetti");

  // optimize
  auto* opt = app.add_subcommand("optimize", "cost-based backtracking search");
  std::string o_eccs, o_in, o_out, o_timeout = "600s";
  double o_gamma = 1.0001;
  uint64_t o_seed = 0;
  size_t o_cap = 2000, o_keep = 1000;
  opt->add_option("--eccs", o_eccs)->required();
  opt->add_option("--in", o_in)->required();
  opt->add_option("--out", o_out)->required();
  opt->add_option("--gamma", o_gamma, "cost admission factor");
  opt->add_option("--timeout", o_timeout, "search budget (e.g. 600s)");
  opt->add_option("--seed", o_seed, "tie-shuffling seed (0: insertion order)");
  opt->add_option("--queue-cap", o_cap);
  opt->add_option("--queue-keep", o_keep);

  // stats
  auto* sts = app.add_subcommand("stats", "report counts for an ECC set");
  std::string s_file;
  sts->add_option("file", s_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  auto t0 = std::chrono::steady_clock::now();
  auto wall = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  try {
    if (gen->parsed()) {
      auto gs = resolve_gate_set(g_gateset, g_gsfile);
      ParamSpec sigma{g_m, !g_multi_use};
      auto ctx = FingerprintContext::create(g_seed, g_q, g_m, g_emax);
      SolverClient solver(g_solver.config());
      GenStats stats;
      EccSet es = repgen(gs, sigma, g_n, g_q, ctx, solver, &stats);
      for (size_t r = 0; r < stats.reps_per_round.size(); r++)
        std::cout << "round " << r + 1 << ": |R|=" << stats.reps_per_round[r]
                  << " classes=" << stats.eccs_per_round[r] << " ("
                  << stats.round_seconds[r] << "s)\n";
      std::cout << "eccs=" << es.eccs.size()
                << " circuits=" << es.circuit_count()
                << " transformations=" << transformation_count(es) << "\n";
      save_eccs(es, g_out);
      std::cout << "wrote " << g_out << "\n";
      Manifest man;
      man.command = "generate";
      man.flags = {{"gateset", gs->name},
                   {"n", std::to_string(g_n)},
                   {"q", std::to_string(g_q)},
                   {"m", std::to_string(g_m)},
                   {"single-use", g_multi_use ? "false" : "true"},
                   {"seed", std::to_string(g_seed)},
                   {"e-max", std::to_string(g_emax)},
                   {"out", g_out}};
      g_solver.record(man);
      man.results["eccs"] = es.eccs.size();
      man.results["circuits"] = es.circuit_count();
      man.results["transformations"] = transformation_count(es);
      man.results["reps_per_round"] = stats.reps_per_round;
      man.results["sequences_constructed"] = stats.sequences_constructed;
      man.results["verifier_queries"] = stats.verifier_queries;
      man.results["inconclusive"] = stats.inconclusive;
      man.results["bucket_merges"] = stats.bucket_merges;
      man.write(g_out, wall());
    } else if (prn->parsed()) {
      EccSet es;
      try {
        std::shared_ptr<const GateSet> gs;
        if (!p_gsfile.empty())
          gs = std::make_shared<GateSet>(load_gate_set(p_gsfile));
        es = load_eccs(p_in, gs);
      } catch (const std::exception& ex) {
        throw IoError(ex.what());
      }
      for (const auto& pass : split_csv(p_passes)) {
        if (pass == "simplify")
          es = simplify_eccs(es);
        else if (pass == "common")
          es = prune_common_subcircuit(es);
        else
          throw CLI::ValidationError("unknown pass: " + pass);
      }
      save_eccs(es, p_out);
      std::cout << "eccs=" << es.eccs.size()
                << " circuits=" << es.circuit_count()
                << " transformations=" << transformation_count(es) << "\n";
      Manifest man;
      man.command = "prune";
      man.flags = {{"in", p_in}, {"out", p_out}, {"passes", p_passes}};
      man.results["eccs"] = es.eccs.size();
      man.results["circuits"] = es.circuit_count();
      man.results["transformations"] = transformation_count(es);
      man.write(p_out, wall());
    } else if (ver->parsed()) {
      EccSet es;
      try {
        es = load_eccs(v_eccs);
      } catch (const std::exception& ex) {
        throw IoError(ex.what());
      }
      auto ctx = FingerprintContext::create(es.seed, es.q, es.m, es.e_max);
      SolverClient solver(v_solver.config());
      size_t pairs = 0, failures = 0;
      for (const auto& e : es.eccs) {
        // classes may live on fewer qubits/params than the file's (q, m)
        auto cctx = (e.q == es.q && e.m == es.m)
                        ? ctx
                        : FingerprintContext::create(es.seed, e.q, e.m,
                                                     es.e_max);
        for (size_t k = 1; k < e.circuits.size(); k++) {
          pairs++;
          auto r = verify_pair(e.circuits[k], e.circuits[0], cctx, solver);
          if (r.verdict != Verdict::Verified) {
            failures++;
            std::cerr << "FAIL: [" << circuit_text(e.circuits[k]) << "] vs ["
                      << circuit_text(e.circuits[0]) << "]\n";
          }
        }
      }
      std::cout << "verified " << pairs - failures << "/" << pairs
                << " pairs in " << es.eccs.size() << " classes\n";
      if (failures) throw AuditError(std::to_string(failures) + " pairs failed");
    } else if (pre->parsed()) {
      auto from = with_toffoli(
          std::make_shared<GateSet>(builtin_gate_set(r_from)));
      Circuit c = read_qasm(r_in, from);
      for (const auto& pass : split_csv(r_passes)) {
        if (pass == "toffoli")
          c = decompose_toffoli(c);
        else if (pass == "transpile")
          c = transpile(c, r_gateset == "rigetti" ? "nam" : r_gateset);
        else if (pass == "merge")
          c = merge_rotations(c);
        else if (pass == "rigetti")
          c = rigetti_pipeline(c);
        else
          throw CLI::ValidationError("unknown pass: " + pass);
      }
      write_text(r_out, emit_qasm(c));
      std::cout << "gates=" << c.size() << "\n";
      Manifest man;
      man.command = "preprocess";
      man.flags = {{"in", r_in},
                   {"out", r_out},
                   {"gateset", r_gateset},
                   {"from", r_from},
                   {"passes", r_passes}};
      man.results["gates"] = c.size();
      man.write(r_out, wall());
    } else if (opt->parsed()) {
      EccSet es;
      try {
        es = load_eccs(o_eccs);
      } catch (const std::exception& ex) {
        throw IoError(ex.what());
      }
      Circuit c = read_qasm(o_in, es.gs);
      auto ts = extract_transformations(es);
      Circuit best = c;
      if (!ts.empty()) {
        SearchConfig cfg;
        cfg.gamma = o_gamma;
        cfg.timeout_seconds = parse_duration(o_timeout);
        cfg.seed = o_seed;
        cfg.queue_cap = o_cap;
        cfg.queue_keep = o_keep;
        cfg.log = &std::cerr;
        best = optimize(c, ts, cfg);
      }
      write_text(o_out, emit_qasm(best));
      std::cout << "gates: " << c.size() << " -> " << best.size() << "\n";
      Manifest man;
      man.command = "optimize";
      man.flags = {{"eccs", o_eccs},
                   {"in", o_in},
                   {"out", o_out},
                   {"gamma", std::to_string(o_gamma)},
                   {"timeout", o_timeout},
                   {"seed", std::to_string(o_seed)}};
      man.results["gates_in"] = c.size();
      man.results["gates_out"] = best.size();
      man.write(o_out, wall());
    } else if (sts->parsed()) {
      EccSet es;
      try {
        es = load_eccs(s_file);
      } catch (const std::exception& ex) {
        throw IoError(ex.what());
      }
      std::cout << "gateset: " << es.gs->name << "\n"
                << "n: " << es.n << "\nq: " << es.q << "\nm: " << es.m << "\n"
                << "seed: " << es.seed << "\n"
                << "eccs: " << es.eccs.size() << "\n"
                << "circuits: " << es.circuit_count() << "\n"
                << "transformations: " << transformation_count(es) << "\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const AuditError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
