#include "snp/matrix.hpp"

#include <sstream>

#include "snp/generators.hpp"

namespace snp {

Signature digraph_signature() {
  Signature s;
  s.add({"E", 2, SymbolKind::Input});
  return s;
}

PartitionMatrix parse_matrix(const std::string& text) {
  std::string clean;
  bool comment = false;
  for (char c : text) {
    if (c == '#') comment = true;
    if (c == '\n') comment = false;
    if (!comment) clean += c;
  }
  std::istringstream in(clean);
  auto fail = [](const std::string& m) { throw std::runtime_error("matrix parse: " + m); };
  std::string tok;
  in >> tok;
  if (tok != "matrix") fail("expected 'matrix'");
  int s;
  if (!(in >> s) || s < 1) fail("class count must be >= 1");
  char ch;
  in >> ch;
  if (ch != ';') fail("expected ';'");
  PartitionMatrix m;
  m.s = s;
  for (int r = 0; r < s; ++r) {
    in >> tok;
    if (tok != "row") fail("expected 'row'");
    for (int c = 0; c < s; ++c) {
      in >> ch;
      if (ch != '0' && ch != '1' && ch != '*') fail("entry must be 0, 1 or *");
      m.entries.push_back(static_cast<MatrixEntry>(ch));
    }
    in >> ch;
    if (ch != ';') fail("expected ';' after row");
  }
  return m;
}

std::string render_matrix(const PartitionMatrix& m) {
  std::ostringstream os;
  os << "matrix " << m.s << ";";
  for (int i = 0; i < m.s; ++i) {
    os << " row";
    for (int j = 0; j < m.s; ++j) os << " " << static_cast<char>(m.at(i, j));
    os << ";";
  }
  os << "\n";
  return os.str();
}

bool m_partition_check(const Structure& g, const PartitionMatrix& m, long long node_cap) {
  if (!g.signature.contains("E"))
    throw std::invalid_argument("m_partition_check: expected an {E/2} structure");
  for (const auto& t : g.tuples("E"))
    if (t[0] == t[1])
      throw std::invalid_argument("m_partition_check: graph has a loop at " +
                                  std::to_string(t[0]));

  int n = g.domain_size;
  std::vector<int> cls(n, -1);
  long long nodes = 0;

  auto consistent = [&](int v) {
    for (int u = 0; u < v; ++u) {
      MatrixEntry e_uv = m.at(cls[u], cls[v]);
      MatrixEntry e_vu = m.at(cls[v], cls[u]);
      bool uv = g.has_tuple("E", {u, v});
      bool vu = g.has_tuple("E", {v, u});
      if (e_uv == MatrixEntry::Zero && uv) return false;
      if (e_uv == MatrixEntry::One && !uv) return false;
      if (e_vu == MatrixEntry::Zero && vu) return false;
      if (e_vu == MatrixEntry::One && !vu) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, int v) -> bool {
    if (v == n) return true;
    for (int c = 0; c < m.s; ++c) {
      if (++nodes > node_cap)
        throw std::runtime_error("m_partition_check: node cap exceeded");
      cls[v] = c;
      if (consistent(v) && self(self, v + 1)) return true;
      cls[v] = -1;
    }
    return false;
  };
  return rec(rec, 0);
}

SnpSentence matrix_to_sentence(const PartitionMatrix& m) {
  SnpSentence phi;
  phi.input_sig = digraph_signature();
  for (int i = 1; i <= m.s; ++i)
    phi.existential_sig.add({"X" + std::to_string(i), 1, SymbolKind::Existential});

  auto X = [&](int i, const std::string& v, bool neg) {
    return Literal{{"X" + std::to_string(i + 1), {v}}, neg};
  };

  // cover: every vertex belongs to some class
  {
    NegatedConjunct c;
    for (int i = 0; i < m.s; ++i) c.sigma_literals.push_back(X(i, "x", true));
    phi.conjuncts.push_back(c);
  }
  // disjointness (the partition semantics:
  // partition semantics requires it)
  for (int i = 0; i < m.s; ++i) {
    for (int j = i + 1; j < m.s; ++j) {
      NegatedConjunct c;
      c.sigma_literals.push_back(X(i, "x", false));
      c.sigma_literals.push_back(X(j, "x", false));
      phi.conjuncts.push_back(c);
    }
  }
  for (int i = 0; i < m.s; ++i) {
    for (int j = 0; j < m.s; ++j) {
      if (m.at(i, j) == MatrixEntry::Zero) {
        NegatedConjunct c;
        c.tau_literals.push_back({{"E", {"x", "y"}}, false});
        c.sigma_literals.push_back(X(i, "x", false));
        c.sigma_literals.push_back(X(j, "y", false));
        c.inequalities.push_back({"x", "y"});
        phi.conjuncts.push_back(c);
      } else if (m.at(i, j) == MatrixEntry::One) {
        NegatedConjunct c;
        c.tau_literals.push_back({{"E", {"x", "y"}}, true});
        c.sigma_literals.push_back(X(i, "x", false));
        c.sigma_literals.push_back(X(j, "y", false));
        c.inequalities.push_back({"x", "y"});
        phi.conjuncts.push_back(c);
      }
    }
  }
  return canonicalize(std::move(phi));
}

std::optional<InverseHomCounterexample> inverse_hom_probe(const SnpSentence& phi,
                                                          int size_cap,
                                                          const Budget& budget) {
  // Collect candidates with their verdicts, then scan hom pairs.
  std::vector<Structure> sat_side, unsat_side;
  bool exceeded = false;
  enumerate_structures_up_to(phi.input_sig, size_cap, [&](const Structure& a) {
    auto r = check_sat(phi, a, budget);
    if (r.verdict == Verdict::BudgetExceeded) {
      exceeded = true;
      return false;
    }
    (r.verdict == Verdict::Satisfied ? sat_side : unsat_side).push_back(a);
    return true;
  });
  if (exceeded) throw std::runtime_error("inverse_hom_probe: budget exceeded");
  for (const auto& a : unsat_side) {
    for (const auto& b : sat_side) {
      auto hom = homomorphism_exists(a, b);
      if (hom.status == HomResult::Status::Budget)
        throw std::runtime_error("inverse_hom_probe: homomorphism budget exceeded");
      if (hom.status == HomResult::Status::Found)
        return InverseHomCounterexample{a, b, hom.mapping};
    }
  }
  return std::nullopt;
}

}  // namespace snp
