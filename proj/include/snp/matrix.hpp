#ifndef SNP_MATRIX_HPP
#define SNP_MATRIX_HPP

#include <optional>
#include <string>
#include <vector>

#include "snp/checker.hpp"
#include "snp/logic.hpp"
#include "snp/structures.hpp"

namespace snp {

enum class MatrixEntry : char { Zero = '0', One = '1', Star = '*' };

struct PartitionMatrix {
  int s = 1;
  std::vector<MatrixEntry> entries;  // row-major s*s

  MatrixEntry at(int i, int j) const { return entries[i * s + j]; }
  bool operator==(const PartitionMatrix&) const = default;
};

PartitionMatrix parse_matrix(const std::string& text);
std::string render_matrix(const PartitionMatrix& m);

// Digraph signature {E/2} used by the matrix problems.
Signature digraph_signature();

// Split the loopless digraph into s classes; for any ordered pair of
// distinct vertices with classes i,j: entry 0 forbids the arc, 1 demands it.
// Throws on loops.
bool m_partition_check(const Structure& g, const PartitionMatrix& m,
                       long long node_cap = 50'000'000);

SnpSentence matrix_to_sentence(const PartitionMatrix& m);

struct InverseHomCounterexample {
  Structure a, b;
  std::vector<int> hom;  // witness A -> B
};

// Searches structures up to size_cap for A -> B with B satisfied and A not.
std::optional<InverseHomCounterexample> inverse_hom_probe(const SnpSentence& phi,
                                                          int size_cap,
                                                          const Budget& budget = {});

}  // namespace snp

#endif
