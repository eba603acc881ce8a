#include "snp/partitions.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace snp {

std::vector<int> EquivalenceType::representative_positions() const {
  std::vector<int> reps(class_count, -1);
  for (int i = 0; i < n; ++i)
    if (reps[rgs[i]] < 0) reps[rgs[i]] = i;
  return reps;
}

std::string EquivalenceType::render_classes() const {
  std::string out;
  for (int c = 0; c < class_count; ++c) {
    out += "{";
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (rgs[i] != c) continue;
      if (!first) out += ",";
      first = false;
      out += std::to_string(i + 1);
    }
    out += "}";
  }
  return out;
}

long long bell_number(int n) {
  std::vector<std::vector<long long>> tri{{1}};
  for (int i = 1; i <= n; ++i) {
    std::vector<long long> row{tri.back().back()};
    for (size_t j = 0; j + 1 <= tri.back().size(); ++j)
      row.push_back(row.back() + tri.back()[j]);
    tri.push_back(std::move(row));
  }
  return tri[n][0];
}

namespace {

// Lexicographic enumeration of restricted growth strings of length n.
void enumerate_rgs(int n, std::vector<int>& cur, int max_used,
                   const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == n) {
    emit(cur);
    return;
  }
  for (int c = 0; c <= max_used + 1; ++c) {
    cur.push_back(c);
    enumerate_rgs(n, cur, std::max(max_used, c), emit);
    cur.pop_back();
  }
}

}  // namespace

namespace detail {

std::vector<int> rgs_of_pattern(const std::vector<int>& eq_class) { return eq_class; }

int rank_of_rgs(const std::vector<int>& rgs) {
  int n = static_cast<int>(rgs.size());
  int rank = 0;
  bool found = false;
  std::vector<int> cur;
  enumerate_rgs(n, cur, -1, [&](const std::vector<int>& s) {
    if (found) return;
    ++rank;
    if (s == rgs) found = true;
  });
  if (!found) throw std::logic_error("rank_of_rgs: not a restricted growth string");
  return rank;
}

}  // namespace detail

std::vector<EquivalenceType> enumerate_equivalence_types(int n, int max_arity) {
  if (n < 1) throw std::invalid_argument("arity must be >= 1");
  if (n > max_arity)
    throw std::invalid_argument("arity " + std::to_string(n) + " above cap " +
                                std::to_string(max_arity));
  std::vector<EquivalenceType> out;
  std::vector<int> cur;
  enumerate_rgs(n, cur, -1, [&](const std::vector<int>& s) {
    EquivalenceType t;
    t.n = n;
    t.rgs = s;
    t.index_k = static_cast<int>(out.size()) + 1;
    t.class_count = *std::max_element(s.begin(), s.end()) + 1;
    out.push_back(std::move(t));
  });
  return out;
}

}  // namespace snp
