#include "doctest.h"
#include "snp/generators.hpp"
#include "snp/matrix.hpp"

using namespace snp;

namespace {

PartitionMatrix diag_zero_star(int s) {
  PartitionMatrix m;
  m.s = s;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      m.entries.push_back(i == j ? MatrixEntry::Zero : MatrixEntry::Star);
  return m;
}

Structure sym_triangle() {
  Structure t(digraph_signature(), 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) t.add_tuple("E", {i, j});
  return t;
}

}  // namespace

TEST_CASE("matrix parse/render round-trip") {
  auto m = parse_matrix("matrix 2; row 0 *; row 1 0;");
  CHECK(m.s == 2);
  CHECK(m.at(0, 0) == MatrixEntry::Zero);
  CHECK(m.at(1, 0) == MatrixEntry::One);
  CHECK(parse_matrix(render_matrix(m)) == m);
  CHECK_THROWS(parse_matrix("matrix 2; row 0 x; row 1 0;"));
  CHECK_THROWS(parse_matrix("matrix 0;"));
}

TEST_CASE("m_partition_check basics") {
  // single vertex, any matrix: no distinct pairs
  Structure v1(digraph_signature(), 1);
  PartitionMatrix ones{1, {MatrixEntry::One}};
  CHECK(m_partition_check(v1, ones));

  // 3-coloring of a symmetric triangle via diag-0/off-star with s=3
  CHECK(m_partition_check(sym_triangle(), diag_zero_star(3)));
  // and not with s=2
  CHECK_FALSE(m_partition_check(sym_triangle(), diag_zero_star(2)));

  // s=1, M=[[1]], two isolated vertices: the pair must be an arc both ways
  Structure two(digraph_signature(), 2);
  CHECK_FALSE(m_partition_check(two, ones));

  // loops are rejected
  Structure loop(digraph_signature(), 1);
  loop.add_tuple("E", {0, 0});
  CHECK_THROWS(m_partition_check(loop, ones));
}

TEST_CASE("matrix_to_sentence shape and classification") {
  // s=1, all-star: only the cover conjunct constrains anything
  PartitionMatrix star{1, {MatrixEntry::Star}};
  auto phi = matrix_to_sentence(star);
  CHECK(phi.conjuncts.size() == 1);
  CHECK(classify(phi).is_gmpart_ineq);

  auto two = matrix_to_sentence(diag_zero_star(2));
  auto rep = classify(two);
  CHECK(rep.is_gmpart_ineq);
  CHECK(rep.is_monotone_syntactic);  // no 1-entries: no negated input atoms
  CHECK_FALSE(rep.is_mpart);         // carries inequalities

  PartitionMatrix one1{1, {MatrixEntry::One}};
  auto s1 = matrix_to_sentence(one1);
  auto rep1 = classify(s1);
  CHECK_FALSE(rep1.is_monotone_syntactic);  // negated E atom
  CHECK_FALSE(rep1.is_mmsnp);
  CHECK(rep1.is_gmpart_ineq);
  CHECK_FALSE(rep1.is_mpart);
}

TEST_CASE("agreement: matrix semantics equals the compiled sentence") {
  std::vector<PartitionMatrix> mats{diag_zero_star(2), diag_zero_star(3),
                                    PartitionMatrix{1, {MatrixEntry::One}},
                                    PartitionMatrix{1, {MatrixEntry::Star}}};
  for (const auto& m : mats) {
    auto phi = matrix_to_sentence(m);
    int checked = 0;
    enumerate_structures_up_to(digraph_signature(), 3, [&](const Structure& g) {
      for (const auto& t : g.tuples("E"))
        if (t[0] == t[1]) return true;  // loopless only
      bool lhs = m_partition_check(g, m);
      bool rhs = check_sat(phi, g).verdict == Verdict::Satisfied;
      CHECK(lhs == rhs);
      ++checked;
      return true;
    });
    CHECK(checked > 0);
  }
}

TEST_CASE("m_partition_check is isomorphism invariant (spot check)") {
  auto m = diag_zero_star(2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Structure g = random_structure(digraph_signature(), 4, 0.3, seed);
    // drop loops
    Structure h(digraph_signature(), 4);
    for (const auto& t : g.tuples("E"))
      if (t[0] != t[1]) h.add_tuple("E", {t[0], t[1]});
    // renumber by reversal
    Structure rev(digraph_signature(), 4);
    for (const auto& t : h.tuples("E")) rev.add_tuple("E", {3 - t[0], 3 - t[1]});
    CHECK(m_partition_check(h, m) == m_partition_check(rev, m));
  }
}

TEST_CASE("probe: complete-digraph sentence is not closed under inverse homs") {
  auto phi = parse_sentence("input E/2; exists ; forbid !E(x,y);");
  auto cex = inverse_hom_probe(phi, 2);
  REQUIRE(cex.has_value());
  CHECK(check_sat(phi, cex->b).verdict == Verdict::Satisfied);
  CHECK(check_sat(phi, cex->a).verdict == Verdict::Unsatisfied);
  // mapping is a homomorphism
  for (const auto& t : cex->a.tuples("E"))
    CHECK(cex->b.has_tuple("E", {cex->hom[t[0]], cex->hom[t[1]]}));
}

TEST_CASE("probe returns none for monotone and for trivially-true sentences") {
  auto two_col = parse_sentence(
      "input E/2; exists X/1;"
      "forbid E(x,y), X(x), X(y); forbid E(x,y), !X(x), !X(y);");
  CHECK_FALSE(inverse_hom_probe(two_col, 3).has_value());

  auto always = parse_sentence("input E/2; exists X/1; forbid E(x,y), X(x), X(y);");
  CHECK_FALSE(inverse_hom_probe(always, 2).has_value());
}
