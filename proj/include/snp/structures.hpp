#ifndef SNP_STRUCTURES_HPP
#define SNP_STRUCTURES_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "snp/logic.hpp"

namespace snp {

// Finite relational structure; elements are dense integers 0..domain_size-1.
struct Structure {
  Signature signature;
  int domain_size = 0;
  std::map<std::string, std::set<std::vector<int>>> relations;

  Structure() = default;
  explicit Structure(Signature sig, int n = 0);

  const std::set<std::vector<int>>& tuples(const std::string& symbol) const;
  void add_tuple(const std::string& symbol, std::vector<int> t);
  bool has_tuple(const std::string& symbol, const std::vector<int>& t) const;
  std::size_t total_tuples() const;

  bool operator==(const Structure&) const = default;
};

Structure parse_structure(const std::string& text, const Signature& sig);
std::string render_structure(const Structure& a);

struct HomResult {
  enum class Status { Found, None, Budget } status = Status::None;
  std::vector<int> mapping;  // valid when Found
  long long nodes = 0;
};

HomResult homomorphism_exists(const Structure& a, const Structure& b, bool injective = false,
                              long long node_cap = 10'000'000);

Structure disjoint_union(const std::vector<Structure>& parts);
Structure reduct(const Structure& a, const Signature& keep);
Structure induced_substructure(const Structure& a, const std::vector<int>& subset);
Structure singleton_structure(const Signature& sig, const RelationSymbol& r);

}  // namespace snp

#endif
