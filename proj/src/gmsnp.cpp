#include "snp/gmsnp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace snp {

std::string StageTrace::render() const {
  std::ostringstream os;
  os << "removed:";
  for (size_t i = 0; i < removed_symbols.size(); ++i)
    os << (i ? "," : " ") << removed_symbols[i];
  os << "; layout:";
  for (size_t i = 0; i < concat_layout.size(); ++i) {
    const auto& b = concat_layout[i];
    os << (i ? "," : " ") << b.source << "@" << b.offset << ".." << (b.offset + b.width);
  }
  os << ";\n";
  if (fixed_yes) os << "yes: " << render_structure(*fixed_yes);
  if (fixed_no) os << "no: " << render_structure(*fixed_no);
  return os.str();
}

bool singleton_check(const SnpSentence& phi, const RelationSymbol& r, const Budget& budget) {
  Structure br = singleton_structure(phi.input_sig, r);
  CheckResult res = check_sat(phi, br, budget);
  if (res.verdict == Verdict::BudgetExceeded)
    throw std::runtime_error("singleton_check: budget exceeded on B_" + r.name);
  return res.verdict == Verdict::Satisfied;
}

SnpSentence prune_relation(const SnpSentence& phi, const RelationSymbol& r) {
  SnpSentence out;
  for (const auto& sym : phi.input_sig.symbols)
    if (sym.name != r.name) out.input_sig.add(sym);
  out.existential_sig = phi.existential_sig;
  for (const auto& c : phi.conjuncts) {
    bool mentions = std::any_of(c.tau_literals.begin(), c.tau_literals.end(),
                                [&](const Literal& l) { return l.atom.symbol == r.name; });
    if (!mentions) out.conjuncts.push_back(c);
  }
  return canonicalize(std::move(out));
}

Structure reduce_instance_stage1(const Structure& a, const RelationSymbol& r,
                                 const Structure& fixed_no) {
  if (!a.tuples(r.name).empty()) return fixed_no;
  Signature keep;
  for (const auto& sym : a.signature.symbols)
    if (sym.name != r.name) keep.add(sym);
  return reduct(a, keep);
}

SnpSentence enrich_conjuncts(const SnpSentence& phi,
                             std::vector<std::vector<std::string>>* added) {
  SnpSentence out = phi;
  if (added) added->clear();
  for (auto& c : out.conjuncts) {
    int fresh = 0;
    std::vector<std::string> names;
    for (const auto& sym : out.input_sig.symbols) {
      Atom a;
      a.symbol = sym.name;
      for (int i = 0; i < sym.arity; ++i) a.args.push_back("u" + std::to_string(fresh++));
      names.push_back(sym.name);
      c.tau_literals.push_back({a, false});
    }
    if (added) added->push_back(std::move(names));
  }
  return canonicalize(std::move(out));
}

Structure reduce_instance_stage2(const Structure& a) {
  std::vector<Structure> parts{a};
  for (const auto& sym : a.signature.symbols)
    parts.push_back(singleton_structure(a.signature, sym));
  return disjoint_union(parts);
}

Signature concatenated_signature(const Signature& tau, std::vector<ConcatBlock>* layout) {
  if (tau.symbols.empty())
    throw std::invalid_argument("concatenated_signature: empty input signature");
  int total = 0;
  if (layout) layout->clear();
  for (const auto& sym : tau.symbols) {
    if (layout) layout->push_back({sym.name, total, sym.arity});
    total += sym.arity;
  }
  Signature out;
  out.add({"P", total, SymbolKind::Input});
  return out;
}

SnpSentence concatenate(const SnpSentence& phi) {
  std::vector<ConcatBlock> layout;
  SnpSentence out;
  out.input_sig = concatenated_signature(phi.input_sig, &layout);
  out.existential_sig = phi.existential_sig;
  for (const auto& c : phi.conjuncts) {
    NegatedConjunct nc;
    nc.sigma_literals = c.sigma_literals;
    nc.inequalities = c.inequalities;
    int fresh = 0;
    for (const auto& l : c.tau_literals) {
      if (l.negated)
        throw std::invalid_argument("concatenate: sentence is not monotone");
      Atom a;
      a.symbol = "P";
      for (const auto& b : layout) {
        if (b.source == l.atom.symbol) {
          for (const auto& v : l.atom.args) a.args.push_back(v);
        } else {
          for (int i = 0; i < b.width; ++i) a.args.push_back("w" + std::to_string(fresh++));
        }
      }
      nc.tau_literals.push_back({a, false});
    }
    out.conjuncts.push_back(std::move(nc));
  }
  return canonicalize(std::move(out));
}

Structure structure_to_single(const Structure& a, long long product_cap) {
  std::vector<ConcatBlock> layout;
  Signature tau1 = concatenated_signature(a.signature, &layout);
  Structure out(tau1, a.domain_size);

  long long product = 1;
  for (const auto& sym : a.signature.symbols) {
    product *= static_cast<long long>(a.tuples(sym.name).size());
    if (product == 0) return out;  // some relation empty: P stays empty
    if (product > product_cap)
      throw std::runtime_error("structure_to_single: product size exceeds cap");
  }

  std::vector<std::vector<std::vector<int>>> pools;
  for (const auto& sym : a.signature.symbols) {
    const auto& s = a.tuples(sym.name);
    pools.emplace_back(s.begin(), s.end());
  }
  std::vector<size_t> idx(pools.size(), 0);
  while (true) {
    std::vector<int> t;
    for (size_t i = 0; i < pools.size(); ++i)
      for (int e : pools[i][idx[i]]) t.push_back(e);
    out.relations["P"].insert(std::move(t));
    size_t i = pools.size();
    while (i > 0) {
      --i;
      if (++idx[i] < pools[i].size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

Structure structure_from_single(const Structure& b1, const Signature& tau,
                                const std::vector<ConcatBlock>& layout) {
  Structure out(tau, b1.domain_size);
  for (const auto& t : b1.tuples("P")) {
    for (const auto& b : layout) {
      std::vector<int> part(t.begin() + b.offset, t.begin() + b.offset + b.width);
      out.relations[b.source].insert(std::move(part));
    }
  }
  return out;
}

SingleCompilation compile_to_single(const SnpSentence& phi,
                                    const WitnessSearchOptions& witness_opts,
                                    const Budget& budget) {
  auto rep = classify(phi);
  if (!rep.is_gmsnp) throw std::invalid_argument("compile_to_single: sentence is not GMSNP");
  if (!rep.is_connected)
    throw std::invalid_argument("compile_to_single: sentence is not connected");

  SingleCompilation out;

  // Stage 1 to fixpoint: dropping conjuncts can change other B_R verdicts.
  SnpSentence cur = phi;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& sym : cur.input_sig.symbols) {
      if (!singleton_check(cur, sym, budget)) {
        out.trace.removed_symbols.push_back(sym.name);
        cur = prune_relation(cur, sym);
        changed = true;
        break;
      }
    }
  }
  if (cur.input_sig.symbols.empty())
    throw std::runtime_error("compile_to_single: every input symbol was pruned; "
                             "the sentence is trivial over the empty signature");
  out.after_prune = cur;

  out.after_enrich = enrich_conjuncts(cur, &out.trace.enrichment_map);
  out.sentence = concatenate(out.after_enrich);
  concatenated_signature(cur.input_sig, &out.trace.concat_layout);

  out.trace.fixed_yes = find_instance_with_verdict(out.sentence, true, witness_opts);
  out.trace.fixed_no = find_instance_with_verdict(out.sentence, false, witness_opts);
  if (!out.trace.fixed_yes || !out.trace.fixed_no)
    throw std::runtime_error("compile_to_single: sentence is trivial within the witness "
                             "search bound (needs both YES and NO instances)");
  return out;
}

}  // namespace snp
