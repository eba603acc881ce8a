#include "snp/generators.hpp"

#include <algorithm>

#include "snp/checker.hpp"

namespace snp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::vector<std::vector<int>> all_tuples(int size, int arity) {
  std::vector<std::vector<int>> out;
  if (size == 0) return out;
  std::vector<int> t(arity, 0);
  while (true) {
    out.push_back(t);
    int i = arity - 1;
    while (i >= 0 && t[i] == size - 1) t[i--] = 0;
    if (i < 0) break;
    ++t[i];
  }
  return out;
}

}  // namespace

Structure random_structure(const Signature& sig, int size, double density,
                           std::uint64_t seed) {
  CtrRng rng(seed, 0xA11CE);
  Structure a(sig, size);
  for (const auto& sym : sig.symbols)
    for (auto& t : all_tuples(size, sym.arity))
      if (rng.uniform() < density) a.relations[sym.name].insert(t);
  return a;
}

std::string to_string(Fragment f) {
  switch (f) {
    case Fragment::MMSNP: return "MMSNP";
    case Fragment::GMMSNPIneq: return "GMMSNP!=";
    case Fragment::GMSNP: return "GMSNP";
    case Fragment::MPART: return "MPART";
    case Fragment::GMPARTIneq: return "GMPART!=";
  }
  return "?";
}

SnpSentence random_sentence(Fragment fragment, const SentenceParams& params,
                            std::uint64_t seed) {
  CtrRng rng(seed, 0x5E17);
  bool monadic = fragment != Fragment::GMSNP;
  bool with_ineq = fragment == Fragment::GMMSNPIneq || fragment == Fragment::GMPARTIneq;
  bool signed_tau = fragment == Fragment::MPART || fragment == Fragment::GMPARTIneq;

  for (int attempt = 0; attempt < params.rejection_cap; ++attempt) {
    SnpSentence s;
    if (params.input_sig.symbols.empty()) {
      s.input_sig.add({"R", 1 + rng.below(params.max_arity), SymbolKind::Input});
    } else {
      s.input_sig = params.input_sig;
    }
    for (int i = 0; i < params.n_existential; ++i) {
      int ar = monadic ? 1 : 1 + rng.below(params.existential_arity);
      s.existential_sig.add({"X" + std::to_string(i + 1), ar, SymbolKind::Existential});
    }

    auto var = [&](int i) { return "x" + std::to_string(i); };
    int n_conj = 1 + rng.below(params.max_conjuncts);
    for (int ci = 0; ci < n_conj; ++ci) {
      NegatedConjunct c;
      int nvars = 1 + rng.below(params.max_vars);
      bool negate_tau = signed_tau && rng.below(2) == 1;
      int n_tau = 1 + rng.below(params.max_tau_atoms);
      for (int ai = 0; ai < n_tau; ++ai) {
        const auto& sym = s.input_sig.symbols[rng.below(
            static_cast<int>(s.input_sig.symbols.size()))];
        Atom a;
        a.symbol = sym.name;
        for (int k = 0; k < sym.arity; ++k) a.args.push_back(var(rng.below(nvars)));
        c.tau_literals.push_back({a, negate_tau});
      }
      // collect variables usable by sigma literals / inequalities
      std::vector<std::string> used;
      for (const auto& l : c.tau_literals)
        for (const auto& v : l.atom.args)
          if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);

      int n_sigma = rng.below(params.max_sigma_literals + 1);
      for (int si = 0; si < n_sigma && !s.existential_sig.symbols.empty(); ++si) {
        const auto& sym = s.existential_sig.symbols[rng.below(
            static_cast<int>(s.existential_sig.symbols.size()))];
        bool neg = rng.below(2) == 1;
        Atom a;
        a.symbol = sym.name;
        if (neg && !monadic) {
          // keep the guard rule: draw args from one positive tau atom
          const auto& g = c.tau_literals[rng.below(static_cast<int>(c.tau_literals.size()))];
          for (int k = 0; k < sym.arity; ++k)
            a.args.push_back(g.atom.args[rng.below(static_cast<int>(g.atom.args.size()))]);
        } else {
          for (int k = 0; k < sym.arity; ++k)
            a.args.push_back(used[rng.below(static_cast<int>(used.size()))]);
        }
        c.sigma_literals.push_back({a, neg});
      }

      if (with_ineq && rng.below(2) == 1) {
        // guarded inequality: two distinct variables of one tau atom
        const auto& g = c.tau_literals[rng.below(static_cast<int>(c.tau_literals.size()))];
        std::vector<std::string> distinct;
        for (const auto& v : g.atom.args)
          if (std::find(distinct.begin(), distinct.end(), v) == distinct.end())
            distinct.push_back(v);
        if (distinct.size() >= 2) {
          int i = rng.below(static_cast<int>(distinct.size()));
          int j = rng.below(static_cast<int>(distinct.size()));
          if (i != j) c.inequalities.push_back({distinct[i], distinct[j]});
        }
      }
      s.conjuncts.push_back(std::move(c));
    }

    s = canonicalize(std::move(s));
    if (s.conjuncts.empty()) continue;
    auto r = classify(s);
    bool ok = false;
    switch (fragment) {
      case Fragment::MMSNP: ok = r.is_mmsnp; break;
      case Fragment::GMMSNPIneq: ok = r.is_gmmsnp_ineq; break;
      case Fragment::GMSNP: ok = r.is_gmsnp; break;
      case Fragment::MPART: ok = r.is_mpart; break;
      case Fragment::GMPARTIneq: ok = r.is_gmpart_ineq; break;
    }
    if (ok && params.require_connected) ok = r.is_connected;
    if (ok) return s;
  }
  throw std::runtime_error("random_sentence: sampling cap exceeded for " +
                           to_string(fragment));
}

void enumerate_structures(const Signature& sig, int size,
                          const std::function<bool(const Structure&)>& cb,
                          int max_universe) {
  std::vector<std::pair<std::string, std::vector<int>>> universe;
  for (const auto& sym : sig.symbols)
    for (auto& t : all_tuples(size, sym.arity)) universe.push_back({sym.name, t});
  if (static_cast<int>(universe.size()) > max_universe)
    throw std::invalid_argument("enumerate_structures: tuple universe too large (" +
                                std::to_string(universe.size()) + ")");
  std::uint64_t count = 1ULL << universe.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Structure a(sig, size);
    for (size_t i = 0; i < universe.size(); ++i)
      if (mask & (1ULL << i)) a.relations[universe[i].first].insert(universe[i].second);
    if (!cb(a)) return;
  }
}

void enumerate_structures_up_to(const Signature& sig, int max_size,
                                const std::function<bool(const Structure&)>& cb,
                                int max_universe) {
  bool stop = false;
  for (int n = 0; n <= max_size && !stop; ++n)
    enumerate_structures(sig, n, [&](const Structure& a) {
      if (!cb(a)) stop = true;
      return !stop;
    }, max_universe);
}

std::optional<Structure> find_instance_with_verdict(const SnpSentence& phi, bool satisfied,
                                                    const WitnessSearchOptions& opts) {
  Budget b;
  b.max_nodes = opts.check_nodes;
  Verdict want = satisfied ? Verdict::Satisfied : Verdict::Unsatisfied;
  std::optional<Structure> hit;
  for (int n = 0; n <= opts.max_size && !hit; ++n) {
    long long universe = 0;
    for (const auto& sym : phi.input_sig.symbols) {
      long long cnt = 1;
      for (int i = 0; i < sym.arity; ++i) cnt *= n;
      universe += cnt;
    }
    if (universe <= opts.exhaustive_universe) {
      enumerate_structures(phi.input_sig, n, [&](const Structure& a) {
        if (check_sat(phi, a, b).verdict == want) {
          hit = a;
          return false;
        }
        return true;
      }, opts.exhaustive_universe);
    } else {
      for (int i = 0; i < opts.random_samples_per_size && !hit; ++i) {
        double density = (i % 10 + 1) / 10.0;
        Structure a = random_structure(phi.input_sig, n, density,
                                       splitmix64(opts.seed + i) ^ (std::uint64_t)n);
        if (check_sat(phi, a, b).verdict == want) hit = a;
      }
    }
  }
  return hit;
}

}  // namespace snp
