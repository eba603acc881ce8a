#ifndef SNP_GMMSNP_HPP
#define SNP_GMMSNP_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "snp/generators.hpp"
#include "snp/logic.hpp"
#include "snp/partitions.hpp"
#include "snp/structures.hpp"

namespace snp {

// Derived family for one source symbol R of arity n: symbols R__1..R__B_n,
// one per equivalence type, arity(R__k) = class count of type k.
struct DerivedFamily {
  std::string source;
  int source_arity = 0;
  std::vector<EquivalenceType> types;      // index k-1
  std::vector<std::string> derived_names;  // "R__k"
};

struct DerivedSignatureMap {
  Signature derived_sig;
  std::map<std::string, DerivedFamily> families;          // by source name
  std::map<std::string, std::pair<std::string, int>> reverse;  // derived -> (source, k)

  std::string render() const;  // lines "R__k <- R : {1,3}{2}"
};

DerivedSignatureMap derive_signature(const Signature& tau, int max_arity = 6);

// Inequality saturation: every pair of distinct variables co-occurring in an input
// atom ends up carrying an inequality; logically equivalent to the input.
SnpSentence enrich_inequalities(const SnpSentence& phi);

struct MmsnpCompilation {
  SnpSentence sentence;       // the MMSNP output
  SnpSentence enriched;       // the inequality-saturated intermediate
  DerivedSignatureMap map;
};

MmsnpCompilation to_mmsnp(const SnpSentence& phi, int max_arity = 6);

// Instance reducers paired with the sentence compiler.
Structure structure_forward(const Structure& a, const DerivedSignatureMap& map);

struct FixedNo {};
using BackwardResult = std::variant<Structure, FixedNo>;

// Reconstruct the unique source structure, or FixedNo when a derived tuple
// repeats an element (no preimage exists).
BackwardResult structure_backward(const Structure& a1, const Signature& tau,
                                  const DerivedSignatureMap& map);

// A fixed non-satisfying instance (nontrivial sentences have one); error when the
// sentence is trivial within the search bound.
Structure fixed_no_instance(const SnpSentence& phi, const WitnessSearchOptions& opts = {});

}  // namespace snp

#endif
