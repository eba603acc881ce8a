#ifndef SNP_GMSNP_HPP
#define SNP_GMSNP_HPP

#include <optional>
#include <string>
#include <vector>

#include "snp/checker.hpp"
#include "snp/generators.hpp"
#include "snp/logic.hpp"
#include "snp/structures.hpp"

namespace snp {

// Per-symbol block inside the concatenated relation P.
struct ConcatBlock {
  std::string source;
  int offset = 0;
  int width = 0;
};

struct StageTrace {
  std::vector<std::string> removed_symbols;              // stage 1
  std::vector<std::vector<std::string>> enrichment_map;  // per conjunct: added fresh atoms
  std::vector<ConcatBlock> concat_layout;                // stage 3
  std::optional<Structure> fixed_yes;                    // of the final sentence
  std::optional<Structure> fixed_no;

  std::string render() const;
};

// Stage 1: does B_R satisfy phi?
bool singleton_check(const SnpSentence& phi, const RelationSymbol& r,
                     const Budget& budget = {});

// Drops every conjunct containing an R-atom; precondition singleton_check = false.
SnpSentence prune_relation(const SnpSentence& phi, const RelationSymbol& r);

// Instance map for stage 1: R nonempty -> fixed NO instance of the pruned
// sentence, else the reduct.
Structure reduce_instance_stage1(const Structure& a, const RelationSymbol& r,
                                 const Structure& fixed_no);

// Stage 2: every conjunct gains one fresh positive atom per input symbol.
SnpSentence enrich_conjuncts(const SnpSentence& phi,
                             std::vector<std::vector<std::string>>* added = nullptr);

// A |-> A (+) B_R for every input symbol, declaration order.
Structure reduce_instance_stage2(const Structure& a);

// Stage 3: tau_1 = {P} with the summed arity.
Signature concatenated_signature(const Signature& tau, std::vector<ConcatBlock>* layout = nullptr);

SnpSentence concatenate(const SnpSentence& phi);

// P = the full product of all relations; throws when the product exceeds the cap.
Structure structure_to_single(const Structure& a, long long product_cap = 1'000'000);

// The blockwise projections of P.
Structure structure_from_single(const Structure& b1, const Signature& tau,
                                const std::vector<ConcatBlock>& layout);

struct SingleCompilation {
  SnpSentence sentence;        // the single-relation output
  SnpSentence after_prune;     // stage 1 fixpoint
  SnpSentence after_enrich;    // stage 2
  StageTrace trace;
};

SingleCompilation compile_to_single(const SnpSentence& phi,
                                    const WitnessSearchOptions& witness_opts = {},
                                    const Budget& budget = {});

}  // namespace snp

#endif
