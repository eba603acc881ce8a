#include "snp/gmmsnp.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace snp {

std::string DerivedSignatureMap::render() const {
  std::ostringstream os;
  for (const auto& sym : derived_sig.symbols) {
    const auto& [source, k] = reverse.at(sym.name);
    const auto& fam = families.at(source);
    os << sym.name << " <- " << source << " : " << fam.types[k - 1].render_classes() << "\n";
  }
  return os.str();
}

DerivedSignatureMap derive_signature(const Signature& tau, int max_arity) {
  DerivedSignatureMap out;
  for (const auto& sym : tau.symbols) {
    if (sym.kind != SymbolKind::Input)
      throw std::invalid_argument("derive_signature: input symbols only");
    DerivedFamily fam;
    fam.source = sym.name;
    fam.source_arity = sym.arity;
    fam.types = enumerate_equivalence_types(sym.arity, max_arity);
    for (const auto& t : fam.types) {
      std::string dname = sym.name + "__" + std::to_string(t.index_k);
      fam.derived_names.push_back(dname);
      out.derived_sig.add({dname, t.class_count, SymbolKind::Input});
      out.reverse[dname] = {sym.name, t.index_k};
    }
    out.families[sym.name] = std::move(fam);
  }
  return out;
}

namespace {

// First pair of distinct variables sharing a positive input atom with no
// inequality between them yet; nullopt when the conjunct is saturated.
std::optional<std::pair<std::string, std::string>> missing_pair(const NegatedConjunct& c) {
  auto has_ineq = [&](const std::string& a, const std::string& b) {
    for (const auto& q : c.inequalities)
      if ((q.lhs == a && q.rhs == b) || (q.lhs == b && q.rhs == a)) return true;
    return false;
  };
  for (const auto& l : c.tau_literals) {
    if (l.negated) continue;
    const auto& args = l.atom.args;
    for (size_t i = 0; i < args.size(); ++i)
      for (size_t j = i + 1; j < args.size(); ++j)
        if (args[i] != args[j] && !has_ineq(args[i], args[j]))
          return std::make_pair(args[i], args[j]);
  }
  return std::nullopt;
}

NegatedConjunct substitute(const NegatedConjunct& c, const std::string& from,
                           const std::string& to) {
  NegatedConjunct out = c;
  auto sub = [&](std::string& v) {
    if (v == from) v = to;
  };
  for (auto& l : out.tau_literals)
    for (auto& v : l.atom.args) sub(v);
  for (auto& l : out.sigma_literals)
    for (auto& v : l.atom.args) sub(v);
  for (auto& q : out.inequalities) {
    sub(q.lhs);
    sub(q.rhs);
  }
  return out;
}

}  // namespace

SnpSentence enrich_inequalities(const SnpSentence& phi) {
  if (!classify(phi).is_gmmsnp_ineq)
    throw std::invalid_argument("enrich_inequalities: sentence is not GMMSNP!=");
  SnpSentence out = phi;
  std::deque<NegatedConjunct> work(out.conjuncts.begin(), out.conjuncts.end());
  out.conjuncts.clear();
  while (!work.empty()) {
    NegatedConjunct c = std::move(work.front());
    work.pop_front();
    auto pair = missing_pair(c);
    if (!pair) {
      bool vac = false;
      NegatedConjunct cc = canonical_conjunct(out, c, &vac);
      if (!vac && std::find(out.conjuncts.begin(), out.conjuncts.end(), cc) ==
                      out.conjuncts.end())
        out.conjuncts.push_back(std::move(cc));
      continue;
    }
    const auto& [x, y] = *pair;
    NegatedConjunct with_ineq = c;
    with_ineq.inequalities.push_back({x, y});
    work.push_back(std::move(with_ineq));
    // Identification may produce x != x; canonicalization drops that copy.
    bool vac = false;
    NegatedConjunct ident = canonical_conjunct(out, substitute(c, y, x), &vac);
    if (!vac) work.push_back(std::move(ident));
  }
  return canonicalize(std::move(out));
}

MmsnpCompilation to_mmsnp(const SnpSentence& phi, int max_arity) {
  MmsnpCompilation out;
  out.enriched = enrich_inequalities(phi);
  out.map = derive_signature(phi.input_sig, max_arity);

  SnpSentence res;
  res.input_sig = out.map.derived_sig;
  res.existential_sig = phi.existential_sig;
  for (const auto& c : out.enriched.conjuncts) {
    NegatedConjunct nc;
    for (const auto& l : c.tau_literals) {
      const auto& fam = out.map.families.at(l.atom.symbol);
      EquivalenceType t = equivalence_type_of(l.atom.args, max_arity);
      Atom a;
      a.symbol = fam.derived_names[t.index_k - 1];
      a.args = project_p(l.atom.args);
      nc.tau_literals.push_back({a, false});
    }
    nc.sigma_literals = c.sigma_literals;
    // inequalities dropped
    res.conjuncts.push_back(std::move(nc));
  }
  // Rigidity conjuncts: forbid a repeated variable inside any derived atom.
  for (const auto& sym : out.map.derived_sig.symbols) {
    int m = sym.arity;
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        Atom a;
        a.symbol = sym.name;
        for (int p = 0; p < m; ++p) {
          if (p == j)
            a.args.push_back("x" + std::to_string(i));
          else
            a.args.push_back("x" + std::to_string(p));
        }
        NegatedConjunct nc;
        nc.tau_literals.push_back({a, false});
        res.conjuncts.push_back(std::move(nc));
      }
    }
  }
  out.sentence = canonicalize(std::move(res));
  return out;
}

Structure structure_forward(const Structure& a, const DerivedSignatureMap& map) {
  Structure out(map.derived_sig, a.domain_size);
  for (const auto& [source, fam] : map.families) {
    for (const auto& t : a.tuples(source)) {
      EquivalenceType ty = equivalence_type_of(t, fam.source_arity);
      out.relations[fam.derived_names[ty.index_k - 1]].insert(project_p(t));
    }
  }
  return out;
}

BackwardResult structure_backward(const Structure& a1, const Signature& tau,
                                  const DerivedSignatureMap& map) {
  Structure out(tau, a1.domain_size);
  for (const auto& sym : a1.signature.symbols) {
    auto rev = map.reverse.find(sym.name);
    if (rev == map.reverse.end())
      throw std::invalid_argument("structure_backward: unknown derived symbol " + sym.name);
    const auto& [source, k] = rev->second;
    const EquivalenceType& ty = map.families.at(source).types[k - 1];
    for (const auto& b : a1.tuples(sym.name)) {
      std::set<int> distinct(b.begin(), b.end());
      if (distinct.size() != b.size()) return FixedNo{};  // rigidity violated: no preimage
      std::vector<int> t(ty.n);
      for (int i = 0; i < ty.n; ++i) t[i] = b[ty.rgs[i]];
      out.relations[source].insert(std::move(t));
    }
  }
  return out;
}

Structure fixed_no_instance(const SnpSentence& phi, const WitnessSearchOptions& opts) {
  auto hit = find_instance_with_verdict(phi, false, opts);
  if (!hit)
    throw std::runtime_error(
        "fixed_no_instance: no NO instance within the search bound; sentence is trivial");
  return *hit;
}

}  // namespace snp
