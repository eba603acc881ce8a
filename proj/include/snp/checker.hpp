#ifndef SNP_CHECKER_HPP
#define SNP_CHECKER_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snp/logic.hpp"
#include "snp/structures.hpp"

namespace snp {

struct Budget {
  long long max_nodes = 10'000'000;
  long long max_millis = 10'000;
};

enum class Verdict { Satisfied, Unsatisfied, BudgetExceeded };

std::string to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Unsatisfied;
  std::optional<Structure> witness;  // sigma-expansion when satisfied
  long long nodes = 0;
  long long conjunct_checks = 0;
};

struct FoViolation {
  int conjunct = -1;
  std::map<std::string, int> assignment;
};

// Enumerate assignments of structure elements to a conjunct's variables that
// satisfy the given constraints; used both to ground conjuncts and to re-check
// witnesses. Positive atoms anchor the search on relation tuples; variables not
// covered by a positive atom range over the whole domain. Deterministic order.
// The callback returns false to stop the enumeration.
void match_conjunct(const Structure& st, const NegatedConjunct& c, bool include_sigma,
                    const Signature& sigma,
                    const std::function<bool(const std::map<std::string, int>&)>& cb);

// First assignment (deterministic) making some conjunct's literals all true on
// the expansion, or nullopt. Standard FO semantics: distinct variables may
// share an element unless an explicit inequality forbids it.
std::optional<FoViolation> check_fo_part(const Structure& expansion, const SnpSentence& phi);

CheckResult check_sat(const SnpSentence& phi, const Structure& a, const Budget& budget = {});

struct EquivEntry {
  Verdict lhs, rhs;
  bool agree = false;
};

struct EquivReport {
  std::vector<EquivEntry> entries;
  int disagreements = 0;
  int budget_exceeded = 0;
  std::optional<int> first_disagreement;  // instance index
};

EquivReport equivalent_on(const SnpSentence& phi, const SnpSentence& psi,
                          const std::vector<Structure>& instances, const Budget& budget = {});

// Expansion signature tau + sigma of a sentence (input symbols first).
Signature expansion_signature(const SnpSentence& phi);

}  // namespace snp

#endif
