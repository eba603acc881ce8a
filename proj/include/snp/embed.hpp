#ifndef SNP_EMBED_HPP
#define SNP_EMBED_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snp/logic.hpp"
#include "snp/structures.hpp"
#include "snp/turing.hpp"

namespace snp {

// Grid vocabulary: one unary relation per Sigma_o symbol except the blank
// (names mangled to identifiers), plus start/1, succ/2, next/2, row/3.
Signature grid_signature(const ObliviousMachine& mo);

std::string grid_symbol_name(const std::string& sigma_o_symbol);   // "sym_..."
std::string grid_sigma_name(const std::string& sigma_o_symbol);    // "S_..."

// The space-time canvas r1(x): g(|x|)+1 rows, each one leader plus |x|+2
// cells (the input string, then two visited-blank cells covering the head's
// turning range), a trailing leader closing the last row's row-triples.
Structure build_grid(const std::vector<std::string>& x, const ObliviousMachine& mo,
                     long long element_cap = 100'000);

// The MMSNP-with-inequality sentence describing accepting runs of mo.
SnpSentence build_sentence(const ObliviousMachine& mo);

struct FoViolationInfo {
  std::string rule;
  std::vector<int> elements;
};

// First-order sanity scan (the inequality-expressible constraints): duplicate
// start, succ/next degrees, conflicting row membership, loops, double symbols.
std::optional<FoViolationInfo> check_fo_constraints(const Structure& b);

struct MarkingState {
  std::set<int> init;
  std::set<int> cm;                             // forced Mark
  std::set<int> ch;                             // forced head positions
  std::map<int, std::pair<int, int>> coords;    // element -> (column i, row j)
  int width = 0;                                // max{i : (i,0) forced}
  int last_head_row = -1;                       // deepest row reached by the walk
};

MarkingState forced_marking(const Structure& b, const ObliviousMachine& mo);

enum class ReductionCase { FixedNo1, FixedYes2, Machine3 };

struct ReductionOutcome {
  ReductionCase kase;
  std::vector<std::string> input;   // extracted string, case 3 only
  std::string detail;

  bool operator==(const ReductionOutcome&) const = default;
};

ReductionOutcome reverse_reduce(const Structure& b, const ObliviousMachine& mo);

// case 1 -> false, case 2 -> true, case 3 -> simulate(mo, x).
bool decide_sat_phi(const Structure& b, const ObliviousMachine& mo,
                    const SimOptions& opts = {});

// Bundle: base machine + steps polynomial + fixed yes/no inputs, one file.
struct EmbeddingBundle {
  ClockedMachine clocked;
  ObliviousMachine machine;
  std::vector<std::string> yes_input;
  std::vector<std::string> no_input;
};

EmbeddingBundle parse_bundle(const std::string& text);
std::string render_bundle(const EmbeddingBundle& b);

// The sigma<=10 hand-built machine used for generic-checker cross-checks:
// empty letter alphabet, three states, f == 1; rejects exactly the strings
// whose first symbol is '>'.
ObliviousMachine micro_machine();

}  // namespace snp

#endif
