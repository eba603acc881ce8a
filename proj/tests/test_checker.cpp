#include "doctest.h"
#include "snp/checker.hpp"

using namespace snp;

namespace {

SnpSentence two_coloring() {
  return parse_sentence(
      "input E/2; exists X/1;"
      "forbid E(x,y), X(x), X(y); forbid E(x,y), !X(x), !X(y);");
}

Structure cycle(int n) {
  Signature s;
  s.add({"E", 2, SymbolKind::Input});
  Structure a(s, n);
  for (int i = 0; i < n; ++i) {
    a.add_tuple("E", {i, (i + 1) % n});
    a.add_tuple("E", {(i + 1) % n, i});
  }
  return a;
}

}  // namespace

TEST_CASE("check_fo_part on explicit expansions") {
  auto phi = two_coloring();
  Signature esig = expansion_signature(phi);

  Structure good(esig, 2);
  good.add_tuple("E", {0, 1});
  good.add_tuple("X", {0});
  CHECK_FALSE(check_fo_part(good, phi).has_value());

  Structure bad(esig, 2);
  bad.add_tuple("E", {0, 1});
  bad.add_tuple("X", {0});
  bad.add_tuple("X", {1});
  auto v = check_fo_part(bad, phi);
  REQUIRE(v.has_value());
  CHECK(v->conjunct == 0);

  SnpSentence empty;
  empty.input_sig = phi.input_sig;
  Structure anything(empty.input_sig, 3);
  CHECK_FALSE(check_fo_part(anything, empty).has_value());
}

TEST_CASE("check_fo_part: distinct variables may collapse onto one element") {
  // forbid E(x,y), X(x), X(y) fires on a loop with x=y
  auto phi = parse_sentence("input E/2; exists X/1; forbid E(x,y), X(x), X(y);");
  Structure a(expansion_signature(phi), 1);
  a.add_tuple("E", {0, 0});
  a.add_tuple("X", {0});
  auto v = check_fo_part(a, phi);
  REQUIRE(v.has_value());
  // parse canonicalizes variable names; both variables land on element 0
  REQUIRE(v->assignment.size() == 2);
  for (const auto& [var, elem] : v->assignment) CHECK(elem == 0);
}

TEST_CASE("check_sat: 2-coloring on even and odd cycles") {
  auto phi = two_coloring();
  auto even = check_sat(phi, cycle(4));
  CHECK(even.verdict == Verdict::Satisfied);
  REQUIRE(even.witness.has_value());
  CHECK_FALSE(check_fo_part(*even.witness, phi).has_value());

  auto odd = check_sat(phi, cycle(3));
  CHECK(odd.verdict == Verdict::Unsatisfied);
}

TEST_CASE("check_sat witness restricted to tau equals the input") {
  auto phi = two_coloring();
  auto a = cycle(4);
  auto res = check_sat(phi, a);
  REQUIRE(res.witness.has_value());
  CHECK(reduct(*res.witness, phi.input_sig) == a);
}

TEST_CASE("check_sat determinism") {
  auto phi = two_coloring();
  auto r1 = check_sat(phi, cycle(4));
  auto r2 = check_sat(phi, cycle(4));
  CHECK(r1.witness == r2.witness);
  CHECK(r1.nodes == r2.nodes);
  CHECK(r1.conjunct_checks == r2.conjunct_checks);
}

TEST_CASE("check_sat budget exceeded is distinct") {
  auto phi = two_coloring();
  Budget tiny;
  tiny.max_nodes = 1;
  auto r = check_sat(phi, cycle(6), tiny);
  CHECK(r.verdict == Verdict::BudgetExceeded);
}

TEST_CASE("check_sat with binary existential symbol (GMSNP shape)") {
  // require a sigma-edge wherever there is an input edge, forbid F on loops:
  // satisfiable iff E has no loop
  auto phi = parse_sentence(
      "input E/2; exists F/2;"
      "forbid E(x,y), !F(x,y); forbid F(x,x);");
  Signature s;
  s.add({"E", 2, SymbolKind::Input});
  Structure ok(s, 2);
  ok.add_tuple("E", {0, 1});
  CHECK(check_sat(phi, ok).verdict == Verdict::Satisfied);
  Structure loop(s, 1);
  loop.add_tuple("E", {0, 0});
  CHECK(check_sat(phi, loop).verdict == Verdict::Unsatisfied);
}

TEST_CASE("check_sat: sentence with pure tau conjunct") {
  auto phi = parse_sentence("input E/2; exists ; forbid E(x,x);");
  Signature s;
  s.add({"E", 2, SymbolKind::Input});
  Structure loop(s, 1);
  loop.add_tuple("E", {0, 0});
  CHECK(check_sat(phi, loop).verdict == Verdict::Unsatisfied);
  Structure noloop(s, 2);
  noloop.add_tuple("E", {0, 1});
  CHECK(check_sat(phi, noloop).verdict == Verdict::Satisfied);
}

TEST_CASE("equivalent_on flags disagreement with a witness index") {
  auto two = two_coloring();
  auto three = parse_sentence(
      "input E/2; exists A/1, B/1, C/1;"
      "forbid E(x,y), A(x), A(y); forbid E(x,y), B(x), B(y); forbid E(x,y), C(x), C(y);"
      "forbid !A(x), !B(x), !C(x);");
  std::vector<Structure> instances{cycle(3), cycle(4)};
  auto rep = equivalent_on(two, three, instances);
  CHECK(rep.disagreements == 1);
  REQUIRE(rep.first_disagreement.has_value());
  CHECK(*rep.first_disagreement == 0);  // triangle: 3-colorable, not 2-colorable

  auto self = equivalent_on(two, two, instances);
  CHECK(self.disagreements == 0);
}

TEST_CASE("monotone closure: A -> B and B satisfied implies A satisfied") {
  auto phi = two_coloring();
  auto a = cycle(4);
  Structure b = cycle(6);
  auto hom = homomorphism_exists(a, b);
  if (hom.status == HomResult::Status::Found) {
    auto rb = check_sat(phi, b);
    auto ra = check_sat(phi, a);
    if (rb.verdict == Verdict::Satisfied) CHECK(ra.verdict == Verdict::Satisfied);
  }
}
