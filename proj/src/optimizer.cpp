#include "qsopt/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <stdexcept>

namespace qsopt {

std::vector<Transformation> extract_transformations(const EccSet& es) {
  std::vector<Transformation> out;
  for (const auto& e : es.eccs) {
    const Circuit& rep = e.circuits[0];
    for (size_t k = 1; k < e.circuits.size(); k++) {
      out.push_back({e.circuits[k], rep});
      out.push_back({rep, e.circuits[k]});
    }
  }
  return out;
}

namespace {

// binding of target parameter index -> argument expression of the host
struct Binding {
  std::vector<ParamExpr> sigma;
  std::vector<bool> bound;
};

bool args_match(const std::vector<ParamExpr>& tgt,
                const std::vector<ParamExpr>& host, Binding& b,
                std::vector<int>& undo) {
  for (size_t k = 0; k < tgt.size(); k++) {
    const ParamExpr& t = tgt[k];
    const ParamExpr& h = host[k];
    switch (t.form) {
      case ParamExpr::Const:
        if (!(h == t)) return false;
        break;
      case ParamExpr::P:
        if (b.bound[(size_t)t.i]) {
          if (!(b.sigma[(size_t)t.i] == h)) return false;
        } else {
          b.sigma[(size_t)t.i] = h;
          b.bound[(size_t)t.i] = true;
          undo.push_back(t.i);
        }
        break;
      case ParamExpr::TwoP: {
        // only checked against an existing binding; never inverted
        if (!b.bound[(size_t)t.i]) return false;
        const ParamExpr& s = b.sigma[(size_t)t.i];
        if (s.form == ParamExpr::P) {
          if (!(h == ParamExpr::twop(s.i))) return false;
        } else if (s.form == ParamExpr::Const) {
          if (!(h == ParamExpr::constant(s.value.twice()))) return false;
        } else {
          return false;
        }
        break;
      }
      case ParamExpr::SumPP: {
        if (!b.bound[(size_t)t.i] || !b.bound[(size_t)t.j]) return false;
        const ParamExpr& si = b.sigma[(size_t)t.i];
        const ParamExpr& sj = b.sigma[(size_t)t.j];
        if (si.form == ParamExpr::P && sj.form == ParamExpr::P) {
          ParamExpr want = si.i == sj.i
                               ? ParamExpr::twop(si.i)
                               : ParamExpr::sum(std::min(si.i, sj.i),
                                                std::max(si.i, sj.i));
          if (!(h == want)) return false;
        } else if (si.form == ParamExpr::Const && sj.form == ParamExpr::Const) {
          if (!(h == ParamExpr::constant(si.value + sj.value))) return false;
        } else {
          return false;
        }
        break;
      }
    }
  }
  return true;
}

// instantiate a rewrite-side argument under the binding; false on failure
bool subst_arg(const ParamExpr& t, const Binding& b, ParamExpr& out) {
  switch (t.form) {
    case ParamExpr::Const:
      out = t;
      return true;
    case ParamExpr::P:
      if (!b.bound[(size_t)t.i]) return false;
      out = b.sigma[(size_t)t.i];
      return true;
    case ParamExpr::TwoP: {
      if (!b.bound[(size_t)t.i]) return false;
      const ParamExpr& s = b.sigma[(size_t)t.i];
      if (s.form == ParamExpr::P) {
        out = ParamExpr::twop(s.i);
        return true;
      }
      if (s.form == ParamExpr::Const) {
        out = ParamExpr::constant(s.value.twice());
        return true;
      }
      return false;
    }
    case ParamExpr::SumPP: {
      if (!b.bound[(size_t)t.i] || !b.bound[(size_t)t.j]) return false;
      const ParamExpr& si = b.sigma[(size_t)t.i];
      const ParamExpr& sj = b.sigma[(size_t)t.j];
      if (si.form == ParamExpr::P && sj.form == ParamExpr::P) {
        out = si.i == sj.i ? ParamExpr::twop(si.i)
                           : ParamExpr::sum(std::min(si.i, sj.i),
                                            std::max(si.i, sj.i));
        return true;
      }
      if (si.form == ParamExpr::Const && sj.form == ParamExpr::Const) {
        out = ParamExpr::constant(si.value + sj.value);
        return true;
      }
      return false;
    }
  }
  return false;
}

struct MatchState {
  std::vector<int> qmap;        // target qubit -> host qubit (-1 unbound)
  std::vector<bool> qused;      // host qubits taken
  std::vector<size_t> sel;      // host instruction index per target instr
  std::vector<bool> taken;      // host instructions taken
  Binding bind;
};

// newly bound target qubits are pushed to undo so callers can backtrack
// without copying the whole state
bool qubits_match(const std::vector<int>& tq, const std::vector<int>& hq,
                  MatchState& st, std::vector<int>& undo) {
  for (size_t k = 0; k < tq.size(); k++) {
    int t = tq[k], h = hq[k];
    if (st.qmap[(size_t)t] == -1) {
      if (st.qused[(size_t)h]) return false;
      st.qmap[(size_t)t] = h;
      st.qused[(size_t)h] = true;
      undo.push_back(t);
    } else if (st.qmap[(size_t)t] != h) {
      return false;
    }
  }
  return true;
}

// host-instruction dependency closure: desc[i] = instructions that must come
// after i (same-wire successors, transitively)
std::vector<std::vector<bool>> descendants(const Circuit& c) {
  size_t n = c.instrs.size();
  std::vector<std::vector<bool>> desc(n, std::vector<bool>(n, false));
  for (size_t i = n; i-- > 0;) {
    for (size_t j = i + 1; j < n; j++) {
      bool share = false;
      for (int qa : c.instrs[i].qubits)
        for (int qb : c.instrs[j].qubits)
          if (qa == qb) share = true;
      if (!share) continue;
      desc[i][j] = true;
      for (size_t k = 0; k < n; k++)
        if (desc[j][k]) desc[i][k] = true;
    }
  }
  return desc;
}

std::vector<Circuit> apply_with_desc(const Circuit& c, const Transformation& t,
                                     const std::vector<std::vector<bool>>& desc) {
  std::vector<Circuit> results;
  const Circuit& tgt = t.target;
  if (tgt.instrs.empty() || tgt.instrs.size() > c.instrs.size())
    return results;
  if (tgt.q > c.q) return results;
  std::set<std::pair<uint64_t, uint64_t>> seen;

  MatchState st;
  st.qmap.assign((size_t)tgt.q, -1);
  st.qused.assign((size_t)c.q, false);
  st.sel.assign(tgt.instrs.size(), 0);
  st.taken.assign(c.instrs.size(), false);
  st.bind.sigma.assign((size_t)std::max(tgt.m, 1), ParamExpr());
  st.bind.bound.assign((size_t)std::max(tgt.m, 1), false);

  // which target pairs share a wire (for incremental order checking)
  size_t tn = tgt.instrs.size();
  std::vector<std::vector<bool>> tshare(tn, std::vector<bool>(tn, false));
  for (size_t a = 0; a < tn; a++)
    for (size_t b = a + 1; b < tn; b++)
      for (int qa : tgt.instrs[a].qubits)
        for (int qb : tgt.instrs[b].qubits)
          if (qa == qb) tshare[a][b] = true;

  // host candidates per target instruction, filtered by gate identity
  bool same_gs = c.gs == tgt.gs;
  std::vector<std::vector<size_t>> cands(tn);
  for (size_t ti = 0; ti < tn; ti++) {
    const Instruction& want = tgt.instrs[ti];
    for (size_t hi = 0; hi < c.instrs.size(); hi++) {
      const Instruction& have = c.instrs[hi];
      // host and target may come from different GateSet objects
      if (same_gs ? have.gate == want.gate
                  : c.gs->gate(have.gate).name ==
                        tgt.gs->gate(want.gate).name)
        cands[ti].push_back(hi);
    }
    if (cands[ti].empty()) return results;
  }

  std::vector<int> undo_q, undo_p;

  // try to finish one full selection, then validate order + convexity
  std::function<void(size_t)> extend = [&](size_t ti) {
    if (ti == tn) {
      // convexity: no outside instruction both after and before selected ones
      for (size_t u = 0; u < c.instrs.size(); u++) {
        if (st.taken[u]) continue;
        bool after_sel = false, before_sel = false;
        for (size_t s : st.sel) {
          if (desc[s][u]) after_sel = true;
          if (desc[u][s]) before_sel = true;
        }
        if (after_sel && before_sel) return;
      }
      // Qubits the rewrite touches but the target does not. The class
      // equivalence forces the rewrite to act as the identity on those
      // wires, so any unmatched host qubits may stand in for them.
      std::vector<int> fresh;
      for (const auto& ri : t.rewrite.instrs)
        for (int qb : ri.qubits)
          if (st.qmap[(size_t)qb] == -1 &&
              std::find(fresh.begin(), fresh.end(), qb) == fresh.end())
            fresh.push_back(qb);
      std::vector<int> spare;
      for (int h = 0; h < c.q; h++)
        if (!st.qused[(size_t)h]) spare.push_back(h);
      if (fresh.size() > spare.size()) return;
      std::sort(fresh.begin(), fresh.end());
      std::vector<bool> spare_used(spare.size(), false);
      std::function<void(size_t)> emit = [&](size_t fi) {
        if (fi < fresh.size()) {
          for (size_t k = 0; k < spare.size(); k++) {
            if (spare_used[k]) continue;
            spare_used[k] = true;
            st.qmap[(size_t)fresh[fi]] = spare[k];
            emit(fi + 1);
            st.qmap[(size_t)fresh[fi]] = -1;
            spare_used[k] = false;
          }
          return;
        }
        // instantiate the replacement
        std::vector<Instruction> repl;
        for (const auto& ri : t.rewrite.instrs) {
          Instruction ni = ri;
          for (auto& qb : ni.qubits) qb = st.qmap[(size_t)qb];
          for (auto& a : ni.args) {
            ParamExpr na;
            if (!subst_arg(a, st.bind, na)) return;
            a = na;
          }
          repl.push_back(std::move(ni));
        }
        // splice: independents, then replacement, then dependents
        Circuit out;
        out.gs = c.gs;
        out.q = c.q;
        out.m = c.m;
        std::vector<size_t> dependents;
        for (size_t u = 0; u < c.instrs.size(); u++) {
          if (st.taken[u]) continue;
          bool dep = false;
          for (size_t s : st.sel)
            if (desc[s][u]) dep = true;
          if (dep)
            dependents.push_back(u);
          else
            out.instrs.push_back(c.instrs[u]);
        }
        out.instrs.insert(out.instrs.end(), repl.begin(), repl.end());
        for (size_t u : dependents) out.instrs.push_back(c.instrs[u]);
        out = canonical_form(out);
        if (seen.insert(canonical_hash128(out)).second)
          results.push_back(std::move(out));
      };
      emit(0);
      return;
    }
    const Instruction& want = tgt.instrs[ti];
    for (size_t hi : cands[ti]) {
      if (st.taken[hi]) continue;
      // target-order pairs sharing a wire must keep host order
      bool ooo = false;
      for (size_t a = 0; a < ti && !ooo; a++)
        if (tshare[a][ti] && st.sel[a] > hi) ooo = true;
      if (ooo) continue;
      const Instruction& have = c.instrs[hi];
      size_t q0 = undo_q.size(), p0 = undo_p.size();
      if (qubits_match(want.qubits, have.qubits, st, undo_q) &&
          args_match(want.args, have.args, st.bind, undo_p)) {
        st.taken[hi] = true;
        st.sel[ti] = hi;
        extend(ti + 1);
        st.taken[hi] = false;
      }
      while (undo_q.size() > q0) {
        int tq = undo_q.back();
        undo_q.pop_back();
        st.qused[(size_t)st.qmap[(size_t)tq]] = false;
        st.qmap[(size_t)tq] = -1;
      }
      while (undo_p.size() > p0) {
        st.bind.bound[(size_t)undo_p.back()] = false;
        undo_p.pop_back();
      }
    }
  };
  extend(0);
  return results;
}

}  // namespace

std::vector<Circuit> apply(const Circuit& c, const Transformation& t) {
  return apply_with_desc(c, t, descendants(c));
}

Circuit optimize(const Circuit& c, const std::vector<Transformation>& ts,
                 const SearchConfig& cfg) {
  auto cost = cfg.cost ? cfg.cost
                       : [](const Circuit& x) { return x.instrs.size(); };
  Circuit best = canonical_form(c);
  size_t best_cost = cost(best);

  struct Entry {
    size_t cost;
    uint64_t tie;
    Circuit circ;
    bool operator<(const Entry& o) const {
      if (cost != o.cost) return cost < o.cost;
      return tie < o.tie;
    }
  };
  std::multiset<Entry> queue;
  std::set<std::pair<uint64_t, uint64_t>> seen{canonical_hash128(best)};
  std::mt19937_64 rng(cfg.seed);
  uint64_t counter = 0;
  auto tie_key = [&]() { return cfg.seed ? rng() : counter++; };
  queue.insert({best_cost, tie_key(), best});

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  double next_log = cfg.log_every_seconds;

  while (!queue.empty()) {
    if (elapsed() > cfg.timeout_seconds) break;
    Entry cur = *queue.begin();
    queue.erase(queue.begin());
    auto desc = descendants(cur.circ);
    for (const auto& t : ts) {
      for (auto& nxt : apply_with_desc(cur.circ, t, desc)) {
        size_t nc = cost(nxt);
        if ((double)nc >= cfg.gamma * (double)best_cost &&
            nc > best_cost)  // admit all candidates at or below best
          continue;
        if (!seen.insert(canonical_hash128(nxt)).second) continue;
        if (nc < best_cost) {
          best = nxt;
          best_cost = nc;
        }
        queue.insert({nc, tie_key(), std::move(nxt)});
      }
      if (elapsed() > cfg.timeout_seconds) break;
    }
    if (queue.size() > cfg.queue_cap) {
      auto it = queue.begin();
      std::advance(it, (long)cfg.queue_keep);
      queue.erase(it, queue.end());
    }
    if (cfg.log && elapsed() > next_log) {
      (*cfg.log) << "[optimize] t=" << (int)elapsed() << "s best=" << best_cost
                 << " queue=" << queue.size() << " seen=" << seen.size()
                 << "\n";
      cfg.log->flush();
      next_log += cfg.log_every_seconds;
    }
  }
  return best;
}

}  // namespace qsopt
