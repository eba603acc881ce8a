#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(SNPFORGE_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

std::string tmp_file(const std::string& name, const std::string& content) {
  std::string path = std::string("/tmp/snpforge_test_") + name;
  std::ofstream f(path);
  f << content;
  return path;
}

const char* kTwoColoring =
    "input E/2; exists X/1;"
    "forbid E(x,y), X(x), X(y); forbid E(x,y), !X(x), !X(y);";

const char* kBundle =
    "machine\n"
    "states q0 q1 qA qR; start q0; accept qA; reject qR; alphabet a b;\n"
    "delta q0 > -> q1 > R;\n"
    "delta q1 > -> q1 > R;\n"
    "delta q1 a -> qA a L; delta q1 b -> qR b L;\n"
    "end\nsteps 3\nyes >a\nno >b\n";

}  // namespace

TEST_CASE("cli classify golden line") {
  auto f = tmp_file("two_col.snp", kTwoColoring);
  auto r = run("classify " + f);
  CHECK(r.code == 0);
  CHECK(r.out ==
        "MMSNP GMMSNP≠ GMSNP MPART GMPART≠ monadic monotone no-inequality connected "
        "enriched\n");
}

TEST_CASE("cli check exits 0 on sat, 1 on unsat") {
  auto s = tmp_file("two_col2.snp", kTwoColoring);
  auto even = tmp_file("c4.struct",
                       "domain 4; E(0,1); E(1,0); E(1,2); E(2,1); E(2,3); E(3,2); E(3,0); "
                       "E(0,3);");
  auto odd = tmp_file("c3.struct",
                      "domain 3; E(0,1); E(1,0); E(1,2); E(2,1); E(2,0); E(0,2);");
  auto r1 = run("check --sentence " + s + " --structure " + even);
  CHECK(r1.code == 0);
  CHECK(r1.out.rfind("satisfied", 0) == 0);
  auto r2 = run("check --sentence " + s + " --structure " + odd);
  CHECK(r2.code == 1);
  CHECK(r2.out.rfind("unsatisfied", 0) == 0);
}

TEST_CASE("cli transform gmmsnp2mmsnp golden") {
  auto f = tmp_file("guarded.snp",
                    "input R/2; exists X1/1, X2/1; forbid R(x,y), X1(x), X2(y), x != y;");
  auto r = run("transform gmmsnp2mmsnp " + f + " -o -");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("snpforge-format 1\n", 0) == 0);
  CHECK(r.out.find("input R__1/1, R__2/2;") != std::string::npos);
  CHECK(r.out.find("forbid R__2(v0,v0);") != std::string::npos);
}

TEST_CASE("cli matrix check") {
  auto m = tmp_file("m.matrix", "matrix 2; row 0 *; row * 0;");
  auto tri = tmp_file("tri.struct",
                      "domain 3; E(0,1); E(1,0); E(1,2); E(2,1); E(2,0); E(0,2);");
  auto r = run("matrix check --matrix " + m + " --structure " + tri);
  CHECK(r.code == 1);
  CHECK(r.out == "no\n");
}

TEST_CASE("cli embed reverse prints the case line") {
  auto b = tmp_file("toy.bundle", kBundle);
  auto empty = tmp_file("empty.struct", "domain 0;");
  auto r = run("embed reverse --bundle " + b + " --structure " + empty);
  CHECK(r.code == 0);
  CHECK(r.out == "case2 FixedYes >a\n");
}

TEST_CASE("cli tm verify reports obliviousness") {
  auto m = tmp_file("toy.machine",
                    "states q0 q1 qA qR; start q0; accept qA; reject qR; alphabet a b;\n"
                    "delta q0 > -> qA > R; delta q0 > -> q1 > R;\n"
                    "delta q0 a -> qA a R; delta q0 b -> qA b R;\n"
                    "delta q1 > -> q1 > R; delta q1 a -> q1 a R; delta q1 b -> q1 b R;\n");
  auto r = run("tm verify --machine " + m + " --steps 0,1 --length 2");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("oblivious moves 6 expected 6", 0) == 0);
}

TEST_CASE("cli fuzz certify is deterministic and passes") {
  auto r1 = run("fuzz certify --reduction gmmsnp-to-mmsnp --trials 4 --seed 7");
  auto r2 = run("fuzz certify --reduction gmmsnp-to-mmsnp --trials 4 --seed 7");
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.find("total 4 agree 4 disagree 0 budget 0") != std::string::npos);
}

TEST_CASE("cli usage errors exit 2") {
  CHECK(run("transform nope /dev/null").code == 2);
  CHECK(run("classify /nonexistent/file").code == 2);
}
