#ifndef SNP_PARTITIONS_HPP
#define SNP_PARTITIONS_HPP

#include <string>
#include <vector>

namespace snp {

// Canonical set partition of positions {1..n}, indexed 1..B_n in lexicographic
// restricted-growth-string order. Class ids follow first occurrence, which is
// also the minimal-member order used to define p().
struct EquivalenceType {
  int n = 0;
  std::vector<int> rgs;   // rgs[i] = class of position i (0-based classes)
  int index_k = 0;        // 1-based rank in the canonical enumeration
  int class_count = 0;    // n_k

  // Positions (0-based) of the first occurrence of each class, ascending.
  std::vector<int> representative_positions() const;
  // Classes as 1-based position sets, in class order; e.g. "{1,3}{2}".
  std::string render_classes() const;

  bool operator==(const EquivalenceType&) const = default;
};

long long bell_number(int n);

std::vector<EquivalenceType> enumerate_equivalence_types(int n, int max_arity = 6);

// The type grouping equal entries of a tuple.
template <typename T>
EquivalenceType equivalence_type_of(const std::vector<T>& tuple, int max_arity = 6);

// Keep the first occurrence of each distinct entry, in order.
template <typename T>
std::vector<T> project_p(const std::vector<T>& tuple);

// -- template definitions ---------------------------------------------------

namespace detail {
std::vector<int> rgs_of_pattern(const std::vector<int>& eq_class);
int rank_of_rgs(const std::vector<int>& rgs);
}  // namespace detail

template <typename T>
EquivalenceType equivalence_type_of(const std::vector<T>& tuple, int max_arity) {
  (void)max_arity;
  std::vector<int> cls(tuple.size());
  std::vector<T> seen;
  for (size_t i = 0; i < tuple.size(); ++i) {
    int c = -1;
    for (size_t j = 0; j < seen.size(); ++j)
      if (seen[j] == tuple[i]) c = static_cast<int>(j);
    if (c < 0) {
      c = static_cast<int>(seen.size());
      seen.push_back(tuple[i]);
    }
    cls[i] = c;
  }
  EquivalenceType t;
  t.n = static_cast<int>(tuple.size());
  t.rgs = cls;
  t.class_count = static_cast<int>(seen.size());
  t.index_k = detail::rank_of_rgs(cls);
  return t;
}

template <typename T>
std::vector<T> project_p(const std::vector<T>& tuple) {
  std::vector<T> out;
  for (const auto& x : tuple) {
    bool dup = false;
    for (const auto& y : out)
      if (y == x) dup = true;
    if (!dup) out.push_back(x);
  }
  return out;
}

}  // namespace snp

#endif
