#include "snp/certify.hpp"

#include <functional>
#include <sstream>

#include "snp/embed.hpp"
#include "snp/gmmsnp.hpp"
#include "snp/gmsnp.hpp"
#include "snp/matrix.hpp"

namespace snp {

std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::GmmsnpEnrich: return "gmmsnp-enrich";
    case Reduction::GmmsnpToMmsnp: return "gmmsnp-to-mmsnp";
    case Reduction::GmsnpPrune: return "gmsnp-prune";
    case Reduction::GmsnpEnrich: return "gmsnp-enrich";
    case Reduction::GmsnpConcat: return "gmsnp-concat";
    case Reduction::MatrixAgree: return "matrix-agree";
    case Reduction::NpRoundtrip: return "np-roundtrip";
    case Reduction::PhiOracleAgree: return "phi-oracle-agree";
  }
  return "?";
}

Reduction parse_reduction(const std::string& name) {
  for (Reduction r : {Reduction::GmmsnpEnrich, Reduction::GmmsnpToMmsnp, Reduction::GmsnpPrune,
                      Reduction::GmsnpEnrich, Reduction::GmsnpConcat, Reduction::MatrixAgree,
                      Reduction::NpRoundtrip, Reduction::PhiOracleAgree})
    if (to_string(r) == name) return r;
  throw std::invalid_argument("unknown reduction " + name);
}

std::string digest_of(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string TrialReport::render() const {
  std::ostringstream os;
  os << "certify " << to_string(reduction) << " seed " << seed << " rng " << kRngAlgorithm
     << "\n";
  for (const auto& l : lines) {
    os << "trial " << l.index << " " << l.digest << " " << l.lhs << " " << l.rhs << " "
       << (l.outcome == TrialOutcome::Agree
               ? "agree"
               : l.outcome == TrialOutcome::Disagree ? "DISAGREE" : "BUDGET")
       << "\n";
  }
  os << "total " << lines.size() << " agree " << agree << " disagree " << disagree
     << " budget " << budget_exceeded << "\n";
  if (!first_counterexample.empty())
    os << "counterexample:\n" << first_counterexample;
  return os.str();
}

namespace {

struct TrialResult {
  std::string lhs, rhs;
  TrialOutcome outcome;
  std::string rendered;  // replayable inputs
};

void push(TrialReport& rep, int index, const TrialResult& t) {
  TrialLine line{index, digest_of(t.rendered), t.lhs, t.rhs, t.outcome};
  rep.lines.push_back(line);
  switch (t.outcome) {
    case TrialOutcome::Agree: ++rep.agree; break;
    case TrialOutcome::Disagree:
      ++rep.disagree;
      if (rep.first_counterexample.empty()) rep.first_counterexample = t.rendered;
      break;
    case TrialOutcome::BudgetExceeded: ++rep.budget_exceeded; break;
  }
}

TrialResult verdict_pair(Verdict l, Verdict r, std::string rendered) {
  TrialResult t;
  t.lhs = to_string(l);
  t.rhs = to_string(r);
  t.rendered = std::move(rendered);
  if (l == Verdict::BudgetExceeded || r == Verdict::BudgetExceeded)
    t.outcome = TrialOutcome::BudgetExceeded;
  else
    t.outcome = l == r ? TrialOutcome::Agree : TrialOutcome::Disagree;
  return t;
}

Structure trial_structure(const Signature& sig, CtrRng& rng, int max_domain,
                          std::uint64_t seed) {
  int size = 1 + rng.below(max_domain);
  double density = 0.15 + 0.1 * rng.below(8);
  return random_structure(sig, size, density, seed);
}

// The toy used by the np-roundtrip pipeline: accepts iff the second raw
// symbol is 'a' (junk-led strings are error-accepted).
EmbeddingBundle roundtrip_bundle() {
  return parse_bundle(
      "machine\n"
      "states q0 q1 qA qR; start q0; accept qA; reject qR; alphabet a b;\n"
      "delta q0 > -> q1 > R;\n"
      "delta q1 > -> q1 > R;\n"
      "delta q1 a -> qA a L; delta q1 b -> qR b L;\n"
      "end\nsteps 3\nyes >a\nno >b\n");
}

}  // namespace

TrialReport certify(Reduction reduction, const TrialConfig& cfg) {
  TrialReport rep;
  rep.reduction = reduction;
  rep.seed = cfg.seed;

  SentenceParams gm_params;
  gm_params.max_arity = cfg.max_arity;
  gm_params.max_conjuncts = std::min(cfg.max_conjuncts, 3);
  gm_params.n_existential = 3;

  Signature two_sym;
  two_sym.add({"E", 2, SymbolKind::Input});
  two_sym.add({"F", 1, SymbolKind::Input});
  SentenceParams gmsnp_params;
  gmsnp_params.input_sig = two_sym;
  gmsnp_params.max_conjuncts = 2;
  gmsnp_params.n_existential = 2;
  gmsnp_params.existential_arity = 2;
  gmsnp_params.require_connected = true;

  for (int i = 0; i < cfg.trials; ++i) {
    std::uint64_t tseed = splitmix64(cfg.seed + 0x517CC1B7 * (std::uint64_t)(i + 1));
    CtrRng rng(tseed, 0xCE27);
    switch (reduction) {
      case Reduction::GmmsnpEnrich: {
        auto phi = random_sentence(Fragment::GMMSNPIneq, gm_params, tseed);
        auto psi = enrich_inequalities(phi);
        Structure a = trial_structure(phi.input_sig, rng, cfg.max_domain, tseed ^ 1);
        auto l = check_sat(phi, a, cfg.budget).verdict;
        auto r = check_sat(psi, a, cfg.budget).verdict;
        push(rep, i, verdict_pair(l, r, render_sentence(phi) + render_structure(a)));
        break;
      }
      case Reduction::GmmsnpToMmsnp: {
        auto phi = random_sentence(Fragment::GMMSNPIneq, gm_params, tseed);
        auto comp = to_mmsnp(phi);
        Structure a = trial_structure(phi.input_sig, rng, cfg.max_domain, tseed ^ 2);
        auto l = check_sat(phi, a, cfg.budget).verdict;
        auto r = check_sat(comp.sentence, structure_forward(a, comp.map), cfg.budget).verdict;
        push(rep, i, verdict_pair(l, r, render_sentence(phi) + render_structure(a)));
        break;
      }
      case Reduction::GmsnpPrune: {
        // plant a singleton-violating conjunct on E so stage 1 applies
        auto phi = random_sentence(Fragment::GMSNP, gmsnp_params, tseed);
        NegatedConjunct killer;
        killer.tau_literals.push_back({{"E", {"x", "y"}}, false});
        phi.conjuncts.push_back(killer);
        phi = canonicalize(std::move(phi));
        const auto& r_sym = *phi.input_sig.find("E");
        auto pruned = prune_relation(phi, r_sym);
        auto no_inst = find_instance_with_verdict(pruned, false, {});
        if (!no_inst) {
          // pruned sentence trivial within the bound: nothing to certify here
          push(rep, i, {"skip", "skip", TrialOutcome::Agree, render_sentence(phi)});
          break;
        }
        Structure a = trial_structure(phi.input_sig, rng, cfg.max_domain, tseed ^ 3);
        Structure mapped = reduce_instance_stage1(a, r_sym, *no_inst);
        auto l = check_sat(phi, a, cfg.budget).verdict;
        auto r = check_sat(pruned, mapped, cfg.budget).verdict;
        push(rep, i, verdict_pair(l, r, render_sentence(phi) + render_structure(a)));
        break;
      }
      case Reduction::GmsnpEnrich: {
        auto phi = random_sentence(Fragment::GMSNP, gmsnp_params, tseed);
        bool singletons_ok = true;
        for (const auto& sym : phi.input_sig.symbols)
          if (!singleton_check(phi, sym, cfg.budget)) singletons_ok = false;
        if (!singletons_ok) {
          push(rep, i, {"skip", "skip", TrialOutcome::Agree, render_sentence(phi)});
          break;
        }
        auto psi = enrich_conjuncts(phi);
        Structure a = trial_structure(phi.input_sig, rng, cfg.max_domain, tseed ^ 4);
        auto l = check_sat(phi, a, cfg.budget).verdict;
        auto r = check_sat(psi, reduce_instance_stage2(a), cfg.budget).verdict;
        push(rep, i, verdict_pair(l, r, render_sentence(phi) + render_structure(a)));
        break;
      }
      case Reduction::GmsnpConcat: {
        auto phi = enrich_conjuncts(random_sentence(Fragment::GMSNP, gmsnp_params, tseed));
        auto psi = concatenate(phi);
        Structure a = trial_structure(phi.input_sig, rng, cfg.max_domain, tseed ^ 5);
        Verdict l = check_sat(phi, a, cfg.budget).verdict;
        Verdict r;
        try {
          r = check_sat(psi, structure_to_single(a), cfg.budget).verdict;
        } catch (const std::exception&) {
          push(rep, i, {"cap", "cap", TrialOutcome::BudgetExceeded, render_structure(a)});
          break;
        }
        push(rep, i, verdict_pair(l, r, render_sentence(phi) + render_structure(a)));
        break;
      }
      case Reduction::MatrixAgree: {
        PartitionMatrix m;
        m.s = 1 + rng.below(3);
        for (int k = 0; k < m.s * m.s; ++k) {
          int e = rng.below(3);
          m.entries.push_back(e == 0 ? MatrixEntry::Zero
                                     : e == 1 ? MatrixEntry::One : MatrixEntry::Star);
        }
        Structure g0 = trial_structure(digraph_signature(), rng,
                                       std::min(cfg.max_domain, 4), tseed ^ 6);
        Structure g(digraph_signature(), g0.domain_size);
        for (const auto& t : g0.tuples("E"))
          if (t[0] != t[1]) g.relations["E"].insert(t);
        bool l = m_partition_check(g, m);
        bool r = check_sat(matrix_to_sentence(m), g, cfg.budget).verdict ==
                 Verdict::Satisfied;
        TrialResult t{l ? "yes" : "no", r ? "yes" : "no",
                      l == r ? TrialOutcome::Agree : TrialOutcome::Disagree,
                      render_matrix(m) + render_structure(g)};
        push(rep, i, t);
        break;
      }
      case Reduction::NpRoundtrip: {
        static const EmbeddingBundle bundle = roundtrip_bundle();
        std::vector<std::string> pool;
        for (const auto& s : bundle.machine.alphabet)
          if (s != kBlankSym) pool.push_back(s);
        int len = 1 + rng.below(3);
        std::vector<std::string> x;
        for (int k = 0; k < len; ++k) x.push_back(pool[rng.below((int)pool.size())]);
        auto grid = build_grid(x, bundle.machine);
        auto out = reverse_reduce(grid, bundle.machine);
        bool round = out.kase == ReductionCase::Machine3 && out.input == x;
        bool agree = round && decide_sat_phi(grid, bundle.machine) ==
                                 simulate(bundle.machine, x).accepted;
        TrialResult t{round ? "roundtrip" : "broken", agree ? "agree" : "differ",
                      agree ? TrialOutcome::Agree : TrialOutcome::Disagree,
                      render_input_string(x)};
        push(rep, i, t);
        break;
      }
      case Reduction::PhiOracleAgree: {
        static const ObliviousMachine micro = micro_machine();
        static const SnpSentence phi = build_sentence(micro);
        std::vector<std::string> pool{">", "_'", "_'^h"};
        std::vector<std::string> x{pool[rng.below(3)]};
        Structure grid = build_grid(x, micro);
        // random mutation: drop or duplicate one tuple
        int mode = rng.below(3);
        if (mode == 1) {
          // drop a random succ/next/row tuple
          const char* rels[3] = {"succ", "next", "row"};
          const char* rel = rels[rng.below(3)];
          auto& set = grid.relations[rel];
          if (!set.empty()) {
            auto it = set.begin();
            std::advance(it, rng.below((int)set.size()));
            set.erase(it);
          }
        } else if (mode == 2) {
          grid.add_tuple("next", {rng.below(grid.domain_size),
                                  rng.below(grid.domain_size)});
        }
        bool l = decide_sat_phi(grid, micro);
        auto rc = check_sat(phi, grid, cfg.budget);
        if (rc.verdict == Verdict::BudgetExceeded) {
          push(rep, i, {"decide", "budget", TrialOutcome::BudgetExceeded,
                        render_structure(grid)});
          break;
        }
        bool r = rc.verdict == Verdict::Satisfied;
        TrialResult t{l ? "yes" : "no", r ? "yes" : "no",
                      l == r ? TrialOutcome::Agree : TrialOutcome::Disagree,
                      render_structure(grid)};
        push(rep, i, t);
        break;
      }
    }
  }
  return rep;
}

}  // namespace snp
