#include "snp/checker.hpp"

#include <algorithm>
#include <chrono>
#include <deque>

namespace snp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Unsatisfied: return "unsatisfied";
    case Verdict::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

Signature expansion_signature(const SnpSentence& phi) {
  Signature sig = phi.input_sig;
  for (const auto& s : phi.existential_sig.symbols) sig.add(s);
  return sig;
}

// ---------------------------------------------------------------------------
// Conjunct matching

namespace {

struct MatchPlan {
  std::vector<std::string> vars;                      // first-occurrence order
  std::map<std::string, int> var_idx;
  std::vector<const Literal*> pos;                    // anchors
  std::vector<const Literal*> neg;
  std::vector<const Inequality*> ineqs;
};

}  // namespace

void match_conjunct(const Structure& st, const NegatedConjunct& c, bool include_sigma,
                    const Signature& sigma,
                    const std::function<bool(const std::map<std::string, int>&)>& cb) {
  MatchPlan p;
  for (const auto& v : c.variables()) {
    p.var_idx[v] = static_cast<int>(p.vars.size());
    p.vars.push_back(v);
  }
  auto add = [&](const Literal& l) { (l.negated ? p.neg : p.pos).push_back(&l); };
  for (const auto& l : c.tau_literals) add(l);
  for (const auto& l : c.sigma_literals) {
    if (include_sigma) {
      add(l);
    }
    // When sigma is excluded the literal's variables still belong to the
    // conjunct and range over the domain.
  }
  for (const auto& q : c.inequalities) p.ineqs.push_back(&q);

  int nv = static_cast<int>(p.vars.size());
  std::vector<int> val(nv, -1);

  // Variables the emitted result actually distinguishes: the ones visible to
  // the excluded sigma part (plus inequality variables). Once they are bound,
  // additional completions of the remaining variables produce one ground
  // clause, so the search is cut after the first.
  std::vector<bool> is_proj(nv, !include_sigma ? false : true);
  if (!include_sigma) {
    for (const auto& l : c.sigma_literals)
      for (const auto& a : l.atom.args) is_proj[p.var_idx[a]] = true;
    for (const auto& q : c.inequalities) {
      is_proj[p.var_idx[q.lhs]] = true;
      is_proj[p.var_idx[q.rhs]] = true;
    }
  }
  int n_proj = 0;
  for (int i = 0; i < nv; ++i)
    if (is_proj[i]) ++n_proj;
  std::set<std::vector<int>> emitted;

  // Greedy anchor order: cover projection variables early, then maximize the
  // number of already-bound variables.
  std::vector<const Literal*> order;
  {
    std::vector<bool> usedAtom(p.pos.size(), false);
    std::vector<bool> bound(nv, false);
    for (size_t step = 0; step < p.pos.size(); ++step) {
      int best = -1, best_proj = -1, best_bound = -1;
      for (size_t i = 0; i < p.pos.size(); ++i) {
        if (usedAtom[i]) continue;
        int nb = 0, np = 0;
        for (const auto& a : p.pos[i]->atom.args) {
          int vi = p.var_idx[a];
          if (bound[vi]) ++nb;
          if (is_proj[vi] && !bound[vi]) ++np;
        }
        if (np > best_proj || (np == best_proj && nb > best_bound)) {
          best_proj = np;
          best_bound = nb;
          best = static_cast<int>(i);
        }
      }
      usedAtom[best] = true;
      order.push_back(p.pos[best]);
      for (const auto& a : p.pos[best]->atom.args) bound[p.var_idx[a]] = true;
    }
  }

  auto fully_bound = [&](const std::vector<std::string>& args) {
    return std::all_of(args.begin(), args.end(),
                       [&](const std::string& a) { return val[p.var_idx[a]] >= 0; });
  };
  auto constraints_ok = [&]() {
    for (const auto* l : p.neg) {
      if (!fully_bound(l->atom.args)) continue;
      std::vector<int> t;
      for (const auto& a : l->atom.args) t.push_back(val[p.var_idx[a]]);
      if (st.has_tuple(l->atom.symbol, t)) return false;
    }
    for (const auto* q : p.ineqs) {
      int x = val[p.var_idx[q->lhs]], y = val[p.var_idx[q->rhs]];
      if (x >= 0 && y >= 0 && x == y) return false;
    }
    return true;
  };

  bool stop = false;
  // Once every projection variable is bound, any further branch yields the
  // same result; cut the subtree after one completion.
  auto proj_cut = [&]() -> bool {
    if (include_sigma || n_proj == nv) return false;
    std::vector<int> key;
    key.reserve(n_proj);
    for (int i = 0; i < nv; ++i) {
      if (!is_proj[i]) continue;
      if (val[i] < 0) return false;
      key.push_back(val[i]);
    }
    return emitted.count(key) > 0;
  };
  auto register_emit = [&]() {
    if (include_sigma || n_proj == nv) return;
    std::vector<int> key;
    for (int i = 0; i < nv; ++i)
      if (is_proj[i]) key.push_back(val[i]);
    emitted.insert(std::move(key));
  };

  auto finish = [&](auto&& self, int free_from) -> void {
    if (stop) return;
    // enumerate variables not bound by anchors, ascending elements
    int next = -1;
    for (int i = free_from; i < nv; ++i)
      if (val[i] < 0) {
        next = i;
        break;
      }
    if (next < 0) {
      if (proj_cut()) return;
      register_emit();
      std::map<std::string, int> out;
      for (int i = 0; i < nv; ++i) out[p.vars[i]] = val[i];
      if (!cb(out)) stop = true;
      return;
    }
    for (int e = 0; e < st.domain_size && !stop; ++e) {
      val[next] = e;
      if (constraints_ok() && !proj_cut()) self(self, next + 1);
      val[next] = -1;
    }
  };

  auto rec = [&](auto&& self, size_t ai) -> void {
    if (stop) return;
    if (ai == order.size()) {
      finish(finish, 0);
      return;
    }
    const Literal* l = order[ai];
    for (const auto& t : st.tuples(l->atom.symbol)) {
      if (stop) return;
      std::vector<int> undo;
      bool ok = true;
      for (size_t i = 0; i < t.size(); ++i) {
        int vi = p.var_idx[l->atom.args[i]];
        if (val[vi] < 0) {
          val[vi] = t[i];
          undo.push_back(vi);
        } else if (val[vi] != t[i]) {
          ok = false;
          break;
        }
      }
      if (ok && constraints_ok() && !proj_cut()) self(self, ai + 1);
      for (int vi : undo) val[vi] = -1;
    }
  };
  rec(rec, 0);
  (void)sigma;
}

std::optional<FoViolation> check_fo_part(const Structure& expansion, const SnpSentence& phi) {
  for (size_t ci = 0; ci < phi.conjuncts.size(); ++ci) {
    std::optional<FoViolation> hit;
    match_conjunct(expansion, phi.conjuncts[ci], true, phi.existential_sig,
                   [&](const std::map<std::string, int>& asg) {
                     hit = FoViolation{static_cast<int>(ci), asg};
                     return false;
                   });
    if (hit) return hit;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// check_sat: ground sigma-literals into clauses, then DPLL with FIFO unit
// propagation. Variables are (sigma symbol, element tuple) booleans ordered
// element-tuple-major then symbol declaration order; decisions try false
// before true.

namespace {

struct VarSpace {
  const SnpSentence* phi = nullptr;
  int domain = 0;
  std::vector<std::pair<int, std::vector<int>>> vars;  // (symbol idx, tuple)
  std::map<std::pair<int, std::vector<int>>, int> index;

  void build(const SnpSentence& p, int n) {
    phi = &p;
    domain = n;
    // element tuples ascending; symbols in declaration order inside a tuple
    // rank; tuples of different arities interleave by lexicographic order of
    // the tuple vector, which is deterministic.
    std::vector<std::pair<std::vector<int>, int>> all;
    for (size_t si = 0; si < p.existential_sig.symbols.size(); ++si) {
      int ar = p.existential_sig.symbols[si].arity;
      std::vector<int> t(ar, 0);
      if (n == 0) continue;
      while (true) {
        all.push_back({t, static_cast<int>(si)});
        int i = ar - 1;
        while (i >= 0 && t[i] == n - 1) t[i--] = 0;
        if (i < 0) break;
        ++t[i];
      }
    }
    std::sort(all.begin(), all.end());
    for (const auto& [t, si] : all) {
      index[{si, t}] = static_cast<int>(vars.size());
      vars.push_back({si, t});
    }
  }
};

constexpr int lit_of(int var, bool positive) { return var * 2 + (positive ? 0 : 1); }
constexpr int lit_var(int l) { return l / 2; }
constexpr bool lit_pos(int l) { return (l & 1) == 0; }

}  // namespace

CheckResult check_sat(const SnpSentence& phi, const Structure& a, const Budget& budget) {
  CheckResult res;
  auto t0 = std::chrono::steady_clock::now();
  auto time_up = [&]() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
               .count() > budget.max_millis;
  };

  VarSpace vs;
  vs.build(phi, a.domain_size);

  // Ground clauses. A clause is the disjunction of negated ground
  // sigma-literals of one matched conjunct.
  std::vector<std::vector<int>> clauses;
  bool empty_clause = false;
  for (size_t ci = 0; ci < phi.conjuncts.size() && !empty_clause; ++ci) {
    const auto& c = phi.conjuncts[ci];
    match_conjunct(a, c, false, phi.existential_sig, [&](const std::map<std::string, int>& asg) {
      ++res.conjunct_checks;
      std::vector<int> clause;
      for (const auto& l : c.sigma_literals) {
        int si = phi.existential_sig.index_of(l.atom.symbol);
        std::vector<int> t;
        for (const auto& v : l.atom.args) t.push_back(asg.at(v));
        int var = vs.index.at({si, t});
        // conjunct demands literal true; clause wants it false
        clause.push_back(lit_of(var, l.negated));
      }
      std::sort(clause.begin(), clause.end());
      clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
      for (size_t i = 0; i + 1 < clause.size(); ++i)
        if (lit_var(clause[i]) == lit_var(clause[i + 1])) return true;  // tautology
      if (clause.empty()) {
        empty_clause = true;
        return false;
      }
      clauses.push_back(std::move(clause));
      return true;
    });
    if (res.conjunct_checks > budget.max_nodes || time_up()) {
      res.verdict = Verdict::BudgetExceeded;
      return res;
    }
  }
  if (empty_clause) {
    res.verdict = Verdict::Unsatisfied;
    return res;
  }
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());

  int nvars = static_cast<int>(vs.vars.size());
  std::vector<std::vector<int>> occur(nvars);
  for (size_t i = 0; i < clauses.size(); ++i)
    for (int l : clauses[i]) occur[lit_var(l)].push_back(static_cast<int>(i));

  std::vector<int8_t> assign(nvars, -1);
  std::vector<int> trail;
  bool capped = false;

  auto lit_value = [&](int l) -> int {  // -1 unknown, 0 false, 1 true
    int v = assign[lit_var(l)];
    if (v < 0) return -1;
    return lit_pos(l) ? v : 1 - v;
  };

  // FIFO unit propagation; returns false on conflict.
  auto propagate = [&](std::deque<int>& q) -> bool {
    while (!q.empty()) {
      int var = q.front();
      q.pop_front();
      for (int cidx : occur[var]) {
        ++res.conjunct_checks;
        int unassigned = -1;
        bool sat = false;
        int n_unknown = 0;
        for (int l : clauses[cidx]) {
          int v = lit_value(l);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v == -1) {
            ++n_unknown;
            unassigned = l;
          }
        }
        if (sat) continue;
        if (n_unknown == 0) return false;
        if (n_unknown == 1) {
          int v = lit_var(unassigned);
          assign[v] = lit_pos(unassigned) ? 1 : 0;
          trail.push_back(v);
          q.push_back(v);
        }
      }
    }
    return true;
  };

  auto search = [&](auto&& self) -> bool {
    if (capped) return false;
    int var = -1;
    for (int i = 0; i < nvars; ++i)
      if (assign[i] < 0) {
        var = i;
        break;
      }
    if (var < 0) return true;
    for (int value = 0; value <= 1; ++value) {
      if (++res.nodes > budget.max_nodes || ((res.nodes & 4095) == 0 && time_up())) {
        capped = true;
        return false;
      }
      size_t mark = trail.size();
      assign[var] = static_cast<int8_t>(value);
      trail.push_back(var);
      std::deque<int> q{var};
      if (propagate(q) && self(self)) return true;
      while (trail.size() > mark) {
        assign[trail.back()] = -1;
        trail.pop_back();
      }
      if (capped) return false;
    }
    return false;
  };

  // Initial propagation of unit clauses.
  {
    std::deque<int> q;
    for (size_t i = 0; i < clauses.size(); ++i) {
      if (clauses[i].size() == 1) {
        int l = clauses[i][0];
        int v = lit_var(l);
        if (assign[v] < 0) {
          assign[v] = lit_pos(l) ? 1 : 0;
          trail.push_back(v);
          q.push_back(v);
        } else if (lit_value(l) == 0) {
          res.verdict = Verdict::Unsatisfied;
          return res;
        }
      }
    }
    if (!propagate(q)) {
      res.verdict = Verdict::Unsatisfied;
      return res;
    }
  }

  bool sat = search(search);
  if (capped) {
    res.verdict = Verdict::BudgetExceeded;
    return res;
  }
  if (!sat) {
    res.verdict = Verdict::Unsatisfied;
    return res;
  }

  res.verdict = Verdict::Satisfied;
  Structure wit(expansion_signature(phi), a.domain_size);
  for (const auto& sym : phi.input_sig.symbols) wit.relations[sym.name] = a.tuples(sym.name);
  for (int i = 0; i < nvars; ++i) {
    if (assign[i] == 1) {
      const auto& [si, t] = vs.vars[i];
      wit.relations[phi.existential_sig.symbols[si].name].insert(t);
    }
  }
  res.witness = std::move(wit);
  return res;
}

EquivReport equivalent_on(const SnpSentence& phi, const SnpSentence& psi,
                          const std::vector<Structure>& instances, const Budget& budget) {
  EquivReport rep;
  for (size_t i = 0; i < instances.size(); ++i) {
    CheckResult l = check_sat(phi, instances[i], budget);
    CheckResult r = check_sat(psi, instances[i], budget);
    bool exceeded =
        l.verdict == Verdict::BudgetExceeded || r.verdict == Verdict::BudgetExceeded;
    bool agree = !exceeded && l.verdict == r.verdict;
    rep.entries.push_back({l.verdict, r.verdict, agree});
    if (exceeded) {
      ++rep.budget_exceeded;
    } else if (!agree) {
      ++rep.disagreements;
      if (!rep.first_disagreement) rep.first_disagreement = static_cast<int>(i);
    }
  }
  return rep;
}

}  // namespace snp
