#include "qsopt/generator.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "qsopt/optimizer.hpp"

namespace qsopt {

namespace {

using Seq = std::vector<uint16_t>;

// length-then-lexicographic; catalog ids are already in instruction rank order
int seq_cmp(const Seq& a, const Seq& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  if (a < b) return -1;
  return a == b ? 0 : 1;
}

struct CatalogApplier {
  int q;
  std::vector<std::vector<std::complex<double>>> gm;  // per catalog id, at p0
  std::vector<int> arity;
  std::vector<std::vector<int>> bits;  // per id, bit masks of its qubits

  CatalogApplier(const GateSet& gs, const std::vector<SingleGate>& catalog,
                 int q_, const std::vector<double>& p0)
      : q(q_) {
    for (const auto& sg : catalog) {
      const Gate& g = gs.gate(sg.gate);
      std::vector<double> argv;
      for (const auto& a : sg.args) argv.push_back(a.value_at(p0));
      gm.push_back(gate_matrix_at(g, argv));
      arity.push_back(g.qubit_arity);
      std::vector<int> b;
      for (int k = 0; k < g.qubit_arity; k++)
        b.push_back(1 << (q - 1 - sg.qubits[(size_t)k]));
      bits.push_back(std::move(b));
    }
  }

  std::vector<std::complex<double>> apply(
      int id, const std::vector<std::complex<double>>& in) const {
    std::vector<std::complex<double>> state = in;
    int a = arity[(size_t)id];
    int sub = 1 << a;
    int dim = 1 << q;
    const auto& bit = bits[(size_t)id];
    const auto& m = gm[(size_t)id];
    int gate_mask = 0;
    for (int k = 0; k < a; k++) gate_mask |= bit[(size_t)k];
    std::vector<std::complex<double>> buf((size_t)sub);
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
        for (int s = 0; s < sub; s++)
          acc += m[(size_t)(r * sub + s)] * buf[(size_t)s];
        int idx = base;
        for (int k = 0; k < a; k++)
          if (r & (1 << (a - 1 - k))) idx |= bit[(size_t)k];
        state[(size_t)idx] = acc;
      }
    }
    return state;
  }
};

struct GenEcc {
  std::vector<Seq> members;  // kept in precedes-order; members[0] is the rep
  FingerprintKey key = 0;
  std::complex<double> rep_amp;
  std::vector<std::complex<double>> rep_state;
  bool dead = false;
  int born_round = 0;
};

}  // namespace

EccSet repgen(std::shared_ptr<const GateSet> gs, const ParamSpec& sigma,
              int n, int q, const FingerprintContext& ctx,
              SolverClient& solver, GenStats* stats) {
  if (ctx.q != q || ctx.m != sigma.m)
    throw std::invalid_argument("repgen: fingerprint context shape mismatch");
  auto catalog = enumerate_single_gate_circuits(*gs, sigma, q);
  if (catalog.size() > 65535) throw std::runtime_error("catalog too large");
  CatalogApplier applier(*gs, catalog, q, ctx.p0);

  auto circuit_of = [&](const Seq& s) {
    Circuit c;
    c.gs = gs;
    c.q = q;
    c.m = sigma.m;
    for (uint16_t id : s) c.instrs.push_back(instruction_of(catalog[id]));
    return c;
  };

  GenStats local;
  GenStats& st = stats ? *stats : local;

  std::vector<GenEcc> eccs;
  std::map<FingerprintKey, std::vector<int>> buckets;
  std::set<Seq> reps;

  // pairwise check with precomputed amplitudes; tries each phase candidate
  auto equivalent = [&](const Seq& sa, std::complex<double> za,
                        const Seq& sb, std::complex<double> zb) {
    auto cands = phase_candidates_from_amps(za, zb, ctx.p0, ctx.m,
                                            solver.config().candidate_tol);
    if (cands.empty()) return false;
    Circuit ca = circuit_of(sa), cb = circuit_of(sb);
    bool saw_inconclusive = false;
    for (const auto& pf : cands) {
      st.verifier_queries++;
      VerifyResult r = verify_equivalence(ca, cb, pf, solver);
      if (r.verdict == Verdict::Verified) return true;
      if (r.verdict == Verdict::Inconclusive) saw_inconclusive = true;
    }
    if (saw_inconclusive) {
      st.inconclusive++;
      std::cerr << "repgen: inconclusive pair treated as distinct: ["
                << circuit_text(ca) << "] vs [" << circuit_text(cb) << "]\n";
    }
    return false;
  };

  // round 0: the empty circuit
  {
    GenEcc e;
    e.members.push_back({});
    e.rep_state = ctx.psi1;
    e.rep_amp = inner_product(ctx.psi0, ctx.psi1);
    e.key = fingerprint_key(std::abs(e.rep_amp), ctx.e_max);
    buckets[e.key].push_back(0);
    eccs.push_back(std::move(e));
    reps.insert({});
  }

  struct RepInfo {
    Seq seq;
    std::vector<std::complex<double>> state;
    uint32_t mask;
  };
  std::vector<RepInfo> frontier{{{}, ctx.psi1, 0}};

  struct Cand {
    Seq seq;
    FingerprintKey key;
    std::complex<double> amp;
    std::vector<std::complex<double>> state;
  };

  for (int round = 1; round <= n; round++) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Cand> cands;
    for (const auto& rep : frontier) {
      for (size_t id = 0; id < catalog.size(); id++) {
        if (sigma.single_use && (catalog[id].param_mask & rep.mask)) continue;
        Seq s = rep.seq;
        s.push_back((uint16_t)id);
        if (round >= 2) {
          Seq tail(s.begin() + 1, s.end());
          if (!reps.count(tail)) continue;
        }
        st.sequences_constructed++;
        Cand c;
        c.state = applier.apply((int)id, rep.state);
        c.amp = inner_product(ctx.psi0, c.state);
        c.key = fingerprint_key(std::abs(c.amp), ctx.e_max);
        c.seq = std::move(s);
        cands.push_back(std::move(c));
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return seq_cmp(a.seq, b.seq) < 0; });

    for (auto& c : cands) {
      bool joined = false;
      auto it = buckets.find(c.key);
      if (it != buckets.end()) {
        for (int eid : it->second) {
          if (eccs[(size_t)eid].dead) continue;
          if (equivalent(c.seq, c.amp, eccs[(size_t)eid].members[0],
                         eccs[(size_t)eid].rep_amp)) {
            eccs[(size_t)eid].members.push_back(c.seq);
            joined = true;
            break;
          }
        }
      }
      if (!joined) {
        GenEcc e;
        e.members.push_back(c.seq);
        e.key = c.key;
        e.rep_amp = c.amp;
        e.rep_state = std::move(c.state);
        e.born_round = round;
        buckets[c.key].push_back((int)eccs.size());
        eccs.push_back(std::move(e));
      }
    }

    // straddle repair: classes whose fingerprints landed one bucket apart
    for (auto it = buckets.begin(); it != buckets.end(); ++it) {
      auto nx = buckets.find(it->first + 1);
      if (nx == buckets.end()) continue;
      for (int e1 : it->second) {
        if (eccs[(size_t)e1].dead) continue;
        for (int e2 : nx->second) {
          if (eccs[(size_t)e2].dead || e1 == e2) continue;
          // older pairs were already compared in the round that created them
          if (eccs[(size_t)e1].born_round != round &&
              eccs[(size_t)e2].born_round != round)
            continue;
          GenEcc& a = eccs[(size_t)e1];
          GenEcc& b = eccs[(size_t)e2];
          if (!equivalent(a.members[0], a.rep_amp, b.members[0], b.rep_amp))
            continue;
          GenEcc& keep = seq_cmp(a.members[0], b.members[0]) < 0 ? a : b;
          GenEcc& drop = (&keep == &a) ? b : a;
          std::vector<Seq> merged;
          std::merge(keep.members.begin(), keep.members.end(),
                     drop.members.begin(), drop.members.end(),
                     std::back_inserter(merged),
                     [](const Seq& x, const Seq& y) { return seq_cmp(x, y) < 0; });
          keep.members = std::move(merged);
          drop.dead = true;
          st.bucket_merges++;
          drop.members.clear();
          drop.rep_state.clear();
          // keep the surviving class visible from both buckets
          int keep_id = (&keep == &a) ? e1 : e2;
          auto& other_bucket = (&keep == &a) ? nx->second : it->second;
          if (std::find(other_bucket.begin(), other_bucket.end(), keep_id) ==
              other_bucket.end())
            other_bucket.push_back(keep_id);
          if (eccs[(size_t)e1].dead) break;
        }
      }
    }

    std::set<Seq> prev_reps = std::move(reps);
    reps.clear();
    frontier.clear();
    size_t live = 0;
    for (const auto& e : eccs) {
      if (e.dead) continue;
      live++;
      reps.insert(e.members[0]);
      if ((int)e.members[0].size() == round) {
        uint32_t mask = 0;
        for (uint16_t id : e.members[0]) mask |= catalog[id].param_mask;
        frontier.push_back({e.members[0], e.rep_state, mask});
      }
    }
    std::sort(frontier.begin(), frontier.end(),
              [](const RepInfo& a, const RepInfo& b) {
                return seq_cmp(a.seq, b.seq) < 0;
              });
    // Lemma 3.3(1): representative sets only grow between rounds
    for (const auto& r : prev_reps)
      if (!reps.count(r))
        throw std::logic_error("repgen: representative set shrank");
    st.reps_per_round.push_back(reps.size());
    st.eccs_per_round.push_back(live);
    st.round_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count());
  }

  EccSet out;
  out.gs = gs;
  out.n = n;
  out.q = q;
  out.m = sigma.m;
  out.sigma_single_use = sigma.single_use;
  out.seed = ctx.rng_seed;
  out.e_max = ctx.e_max;
  std::vector<const GenEcc*> live;
  for (const auto& e : eccs)
    if (!e.dead && e.members.size() > 1) live.push_back(&e);
  std::sort(live.begin(), live.end(), [](const GenEcc* a, const GenEcc* b) {
    return seq_cmp(a->members[0], b->members[0]) < 0;
  });
  for (const GenEcc* e : live) {
    Ecc ec;
    ec.q = q;
    ec.m = sigma.m;
    for (const auto& s : e->members) ec.circuits.push_back(circuit_of(s));
    out.eccs.push_back(std::move(ec));
  }
  return out;
}

std::vector<Ecc> eccify(std::vector<Circuit> bucket,
                        const FingerprintContext& ctx, SolverClient& solver) {
  std::sort(bucket.begin(), bucket.end(), precedes);
  std::vector<Ecc> classes;
  for (auto& c : bucket) {
    bool joined = false;
    for (auto& cls : classes) {
      VerifyResult r = verify_pair(c, cls.circuits[0], ctx, solver);
      if (r.verdict == Verdict::Verified) {
        cls.circuits.push_back(c);
        joined = true;
        break;
      }
    }
    if (!joined) {
      Ecc cls;
      cls.q = c.q;
      cls.m = c.m;
      cls.circuits.push_back(c);
      classes.push_back(std::move(cls));
    }
  }
  return classes;
}

size_t transformation_count(const EccSet& es) {
  size_t t = 0;
  for (const auto& e : es.eccs) t += 2 * (e.circuits.size() - 1);
  return t;
}

OracleResult completeness_oracle(std::shared_ptr<const GateSet> gs,
                                 const ParamSpec& sigma, int n, int q,
                                 const EccSet& es,
                                 const FingerprintContext& ctx,
                                 SolverClient& solver, size_t budget) {
  auto catalog = enumerate_single_gate_circuits(*gs, sigma, q);

  // all sequences of at most n gates satisfying the single-use rule
  std::vector<Circuit> all;
  {
    Circuit empty;
    empty.gs = gs;
    empty.q = q;
    empty.m = sigma.m;
    std::vector<Circuit> layer{empty};
    all.push_back(empty);
    for (int len = 1; len <= n; len++) {
      std::vector<Circuit> next;
      for (const auto& c : layer)
        for (const auto& sg : catalog) {
          if (sigma.single_use && (param_mask(c) & sg.param_mask)) continue;
          Circuit c2 = c;
          c2.instrs.push_back(instruction_of(sg));
          next.push_back(c2);
        }
      all.insert(all.end(), next.begin(), next.end());
      layer = std::move(next);
    }
  }

  // ground-truth classes via the verifier
  std::vector<std::vector<size_t>> classes;
  for (size_t i = 0; i < all.size(); i++) {
    bool joined = false;
    for (auto& cls : classes) {
      VerifyResult r = verify_pair(all[i], all[cls[0]], ctx, solver);
      if (r.verdict == Verdict::Inconclusive) return OracleResult::Inconclusive;
      if (r.verdict == Verdict::Verified) {
        cls.push_back(i);
        joined = true;
        break;
      }
    }
    if (!joined) classes.push_back({i});
  }

  auto ts = extract_transformations(es);
  size_t size_cap = (size_t)n + 2;
  bool capped_somewhere = false;

  // breadth-first closure of a circuit under all rewrites
  auto closure = [&](const Circuit& start, bool* capped) {
    std::set<std::pair<uint64_t, uint64_t>> seen{canonical_hash128(start)};
    std::deque<Circuit> frontier{start};
    *capped = false;
    while (!frontier.empty()) {
      if (seen.size() > budget) {
        *capped = true;
        break;
      }
      Circuit cur = frontier.front();
      frontier.pop_front();
      for (const auto& t : ts) {
        for (auto& nxt : apply(cur, t)) {
          if (nxt.size() > size_cap) {
            *capped = true;
            continue;
          }
          auto h = canonical_hash128(nxt);
          if (seen.insert(h).second) frontier.push_back(std::move(nxt));
        }
      }
    }
    return seen;
  };

  for (const auto& cls : classes) {
    if (cls.size() < 2) continue;
    const Circuit& rep = all[cls[0]];
    bool rep_capped = false;
    auto rep_seen = closure(rep, &rep_capped);
    for (size_t k = 1; k < cls.size(); k++) {
      if (rep_seen.count(canonical_hash128(all[cls[k]]))) continue;
      // every transformation exists in both directions, so a path from the
      // member down to the class minimum certifies connectivity as well
      bool mem_capped = false;
      auto mem_seen = closure(all[cls[k]], &mem_capped);
      if (mem_seen.count(canonical_hash128(rep))) continue;
      if (rep_capped || mem_capped) {
        capped_somewhere = true;
        break;
      }
      return OracleResult::Incomplete;  // closures fully explored, unreachable
    }
  }
  return capped_somewhere ? OracleResult::Inconclusive : OracleResult::Complete;
}

}  // namespace qsopt
