#ifndef SNP_LOGIC_HPP
#define SNP_LOGIC_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace snp {

enum class SymbolKind { Input, Existential };

struct RelationSymbol {
  std::string name;
  int arity = 1;
  SymbolKind kind = SymbolKind::Input;

  bool operator==(const RelationSymbol&) const = default;
};

// Ordered list of relation symbols; declaration order is observable (it fixes
// the concatenation layout in the single-relation compiler).
struct Signature {
  std::vector<RelationSymbol> symbols;

  const RelationSymbol* find(const std::string& name) const;
  int index_of(const std::string& name) const;  // -1 when absent
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  void add(RelationSymbol s);

  bool operator==(const Signature&) const = default;
};

struct Atom {
  std::string symbol;
  std::vector<std::string> args;

  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

struct Literal {
  Atom atom;
  bool negated = false;

  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

struct Inequality {
  std::string lhs, rhs;

  bool operator==(const Inequality&) const = default;
  auto operator<=>(const Inequality&) const = default;
};

// One negated conjunct ~(alpha & beta & eps): alpha = input literals,
// beta = existential literals, eps = inequalities.
struct NegatedConjunct {
  std::vector<Literal> tau_literals;
  std::vector<Literal> sigma_literals;
  std::vector<Inequality> inequalities;

  std::vector<std::string> variables() const;  // first-occurrence order
  bool operator==(const NegatedConjunct&) const = default;
  auto operator<=>(const NegatedConjunct&) const = default;
};

struct SnpSentence {
  Signature input_sig;
  Signature existential_sig;
  std::vector<NegatedConjunct> conjuncts;

  bool operator==(const SnpSentence&) const = default;
};

struct parse_error : std::runtime_error {
  int line, column;
  parse_error(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), column(col_) {}
};

// Canonicalization: order literals (tau+, tau-, sigma+, sigma-, ineq), rename
// variables v0, v1, ... in first-occurrence order, drop duplicate literals and
// duplicate conjuncts, drop conjuncts made vacuous by an x != x literal.
NegatedConjunct canonical_conjunct(const SnpSentence& s, const NegatedConjunct& c,
                                   bool* vacuous = nullptr);
SnpSentence canonicalize(SnpSentence s);

SnpSentence parse_sentence(const std::string& text);
std::string render_sentence(const SnpSentence& s);

struct FlagWitness {
  bool ok = true;
  int conjunct = -1;
  std::string reason;
};

struct FragmentReport {
  bool is_snp = true;
  bool is_monadic = true;
  bool is_monotone_syntactic = true;
  bool has_no_inequality = true;
  bool is_mmsnp = true;
  bool is_gmmsnp_ineq = true;
  bool is_gmsnp = true;
  bool is_gmpart_ineq = true;
  bool is_mpart = true;
  bool is_connected = true;
  bool is_enriched = true;

  std::map<std::string, FlagWitness> witnesses;
  // For the first non-connected conjunct: the two variable-disjoint literal
  // groups, as indices into tau_literals ++ sigma_literals ++ inequalities.
  std::vector<int> split_group_a, split_group_b;
  int split_conjunct = -1;
};

FragmentReport classify(const SnpSentence& s);

// Structural diagnostics; empty list iff all invariants hold.
std::vector<std::string> validate(const SnpSentence& s);

bool is_identifier(const std::string& s);

}  // namespace snp

#endif
