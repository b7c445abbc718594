#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsopt/circuit.hpp"
#include "qsopt/fingerprint.hpp"
#include "qsopt/poly.hpp"

namespace qsopt {

// beta(p) = a . p + b with a in {-2..2}^m and b a multiple of pi/4.
struct PhaseFactor {
  std::vector<int> a;
  Angle b = Angle::zero();

  bool is_constant() const {
    for (int v : a)
      if (v != 0) return false;
    return true;
  }
  std::string to_string() const;
};

struct SolverConfig {
  std::string solver_path;  // empty: $QSOPT_SOLVER, else qsopt-smt next to the binary
  int timeout_ms = 30000;
  double candidate_tol = 1e-9;
  std::string dump_dir;  // when set, every emitted script is written here
};

// Missing/broken solver binary; distinct from refutation and I/O trouble.
struct SolverConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Verdict { Verified, Refuted, Inconclusive };

struct VerifyResult {
  Verdict verdict = Verdict::Inconclusive;
  PhaseFactor phase;                  // Verified: the accepted candidate
  std::vector<double> counterexample; // Refuted: parameter values
  std::string note;
};

// Persistent solver subprocess speaking SMT-LIB 2 on stdin/stdout.
class SolverClient {
 public:
  explicit SolverClient(SolverConfig cfg = {});
  ~SolverClient();
  SolverClient(const SolverClient&) = delete;
  SolverClient& operator=(const SolverClient&) = delete;

  // script must end with (check-sat). Returns sat/unsat/unknown/timeout.
  // On sat, fills *model when non-null. Throws on persistent configuration
  // failure (missing binary).
  std::string query(const std::string& script,
                    std::map<std::string, double>* model);

  const SolverConfig& config() const { return cfg_; }
  int queries_issued() const { return n_queries_; }

 private:
  void start();
  void stop();
  bool read_until(std::string& buf, const char* needle, int timeout_ms);

  SolverConfig cfg_;
  std::string resolved_path_;
  int to_child_ = -1, from_child_ = -1;
  long pid_ = -1;
  int n_queries_ = 0;
  int dump_counter_ = 0;
};

// Embeds a gate matrix acting on the given qubits into the 2^q space.
SymMatrix embed_gate(const SymMatrix& g, const std::vector<int>& qubits, int q);

// Trig-free polynomial form of the whole-circuit matrix (entries over the
// s/c/sqrt2 slot convention). Per-instruction results are memoized.
CPolyMatrix circuit_poly_matrix(const Circuit& c);

std::vector<PhaseFactor> find_phase_candidates(const Circuit& c1,
                                               const Circuit& c2,
                                               const FingerprintContext& ctx,
                                               double tol = 1e-9);
// Same, from precomputed amplitudes (generator fast path).
std::vector<PhaseFactor> phase_candidates_from_amps(std::complex<double> z1,
                                                    std::complex<double> z2,
                                                    const std::vector<double>& p0,
                                                    int m, double tol);

std::string build_smt_query(const Circuit& c1, const Circuit& c2,
                            const PhaseFactor& phase);

VerifyResult verify_equivalence(const Circuit& c1, const Circuit& c2,
                                const PhaseFactor& phase, SolverClient& solver);

VerifyResult verify_pair(const Circuit& c1, const Circuit& c2,
                         const FingerprintContext& ctx, SolverClient& solver);

// Numeric spot check: max entrywise |[[c1]](p) - e^{i beta(p)} [[c2]](p)|
// over n random parameter vectors.
double numeric_phase_gap(const Circuit& c1, const Circuit& c2,
                         const PhaseFactor& phase, int n_samples,
                         uint64_t seed = 12345);

}  // namespace qsopt
