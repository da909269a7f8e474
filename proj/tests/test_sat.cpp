#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>

#include "stitch/dimacs.hpp"
#include "stitch/solver.hpp"
#include "test_util.hpp"

using namespace stitch;

TEST_CASE("trivially unsat triple with singleton groups") {
  Cnf f;
  Var x = f.newVar(), y = f.newVar();
  f.add({Lit::pos(x), Lit::pos(y)}, 0);
  f.add({Lit::neg(x)}, 1);
  f.add({Lit::neg(y)}, 2);
  Verdict v = solve(f);
  REQUIRE(v.unsat());
  CHECK(v.core == std::vector<GroupId>{0, 1, 2});
}

TEST_CASE("assumption steers the model") {
  Cnf f;
  Var x = f.newVar(), y = f.newVar();
  f.add({Lit::pos(x), Lit::pos(y)});
  Verdict v = solve(f, {Lit::neg(x)});
  REQUIRE(v.sat());
  CHECK(v.model[static_cast<size_t>(x)] == false);
  CHECK(v.model[static_cast<size_t>(y)] == true);
}

TEST_CASE("random 3-SAT at ratio 3.0 n=50 solves Sat with a checked model") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; t++) {
    Cnf f = test::randomCnf(rng, 50, 150);
    Verdict v = solve(f);
    REQUIRE(v.sat());
    CHECK(modelSatisfies(f, v.model));
  }
}

TEST_CASE("agreement with reference DPLL on random instances") {
  std::mt19937_64 rng(23);
  int sat = 0, unsat = 0;
  for (int t = 0; t < 600; t++) {
    int vars = 5 + static_cast<int>(rng() % 16);
    int clauses = static_cast<int>(vars * (3.0 + (rng() % 30) / 10.0));
    Cnf f = test::randomCnf(rng, vars, clauses);
    bool ref = test::dpllSat(f);
    Verdict v = solve(f);
    REQUIRE_FALSE(v.unknown());
    CHECK(v.sat() == ref);
    if (v.sat()) {
      sat++;
      CHECK(modelSatisfies(f, v.model));
    } else {
      unsat++;
    }
  }
  // the mix must actually exercise both outcomes
  CHECK(sat > 50);
  CHECK(unsat > 50);
}

TEST_CASE("cores re-solve to unsat, and minimization keeps that") {
  std::mt19937_64 rng(31);
  int unsatSeen = 0;
  for (int t = 0; t < 300 && unsatSeen < 60; t++) {
    int vars = 5 + static_cast<int>(rng() % 10);
    Cnf f;
    f.numVars = vars;
    Cnf raw = test::randomCnf(rng, vars, vars * 6);
    // one group per clause
    for (size_t i = 0; i < raw.clauses.size(); i++) f.add(raw.clauses[i], static_cast<GroupId>(i));
    Verdict v = solve(f);
    if (!v.unsat()) continue;
    unsatSeen++;
    REQUIRE_FALSE(v.core.empty());
    Verdict again = solveWithGroups(f, v.core);
    CHECK(again.unsat());
    auto minimized = minimizeCore(f, v.core);
    CHECK(minimized.size() <= v.core.size());
    Verdict third = solveWithGroups(f, minimized);
    CHECK(third.unsat());
    // deletion-minimality: dropping any single group flips to Sat
    for (size_t i = 0; i < minimized.size(); i++) {
      std::vector<GroupId> trial;
      for (size_t j = 0; j < minimized.size(); j++)
        if (j != i) trial.push_back(minimized[j]);
      CHECK(solveWithGroups(f, trial).sat());
    }
  }
  CHECK(unsatSeen >= 60);
}

TEST_CASE("minimized core drops an irrelevant clause group") {
  Cnf f;
  Var x = f.newVar(), y = f.newVar(), z = f.newVar();
  f.add({Lit::pos(x), Lit::pos(y)}, 0);
  f.add({Lit::neg(x)}, 1);
  f.add({Lit::neg(y)}, 2);
  f.add({Lit::pos(z)}, 3);  // irrelevant
  Verdict v = solve(f);
  REQUIRE(v.unsat());
  auto core = minimizeCore(f, {0, 1, 2, 3});
  CHECK(core == std::vector<GroupId>{0, 1, 2});
  // already-minimal core returned unchanged
  CHECK(minimizeCore(f, core) == core);
}

TEST_CASE("conflict budget aborts as Unknown, never Unsat") {
  std::mt19937_64 rng(41);
  // hard random instances near the phase transition
  int unknowns = 0;
  for (int t = 0; t < 10; t++) {
    Cnf f = test::randomCnf(rng, 120, 510);
    SolveLimits lim;
    lim.maxConflicts = 1;
    Verdict v = solve(f, {}, lim);
    if (v.unknown()) unknowns++;
    if (v.unsat()) {
      // has to be genuine: re-solve without budget
      CHECK(solve(f).unsat());
    }
  }
  CHECK(unknowns > 0);
}

TEST_CASE("DIMACS export matches the spec'd bit-exact form") {
  Cnf f;
  f.newVar();
  f.add({Lit::pos(0)});
  CHECK(exportDimacs(f) == "p cnf 1 1\n1 0\n");
}

TEST_CASE("DIMACS round-trip preserves the clause multiset") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 25; t++) {
    Cnf f = test::randomCnf(rng, 12, 40);
    Cnf g = importDimacs(exportDimacs(f));
    CHECK(g.numVars == f.numVars);
    REQUIRE(g.clauses.size() == f.clauses.size());
    auto norm = [](Cnf c) {
      for (auto& cl : c.clauses) std::sort(cl.begin(), cl.end());
      std::sort(c.clauses.begin(), c.clauses.end(),
                [](const std::vector<Lit>& a, const std::vector<Lit>& b) {
                  return std::lexicographical_compare(
                      a.begin(), a.end(), b.begin(), b.end(),
                      [](Lit l, Lit r) { return l.x < r.x; });
                });
      return c;
    };
    CHECK(norm(f).clauses == norm(g).clauses);
  }
}

TEST_CASE("malformed DIMACS is rejected") {
  CHECK_THROWS_AS(importDimacs("p cnf x 1\n1 0\n"), DimacsError);
  CHECK_THROWS_AS(importDimacs("1 0\n"), DimacsError);
  CHECK_THROWS_AS(importDimacs("p cnf 1 1\n2 0\n"), DimacsError);
  CHECK_THROWS_AS(importDimacs("p cnf 1 1\n1\n"), DimacsError);
}

TEST_CASE("solver is deterministic for a fixed seed") {
  std::mt19937_64 rng(53);
  Cnf f = test::randomCnf(rng, 60, 240);
  Verdict a = solve(f, {}, {}, 9);
  Verdict b = solve(f, {}, {}, 9);
  CHECK(a.kind == b.kind);
  if (a.sat()) CHECK(a.model == b.model);
}

// Optional differential run against an external DIMACS solver named by
// STITCH_EXTERNAL_SAT; the binary must exit 10 for sat / 20 for unsat.
TEST_CASE("external solver agreement when configured") {
  const char* ext = std::getenv("STITCH_EXTERNAL_SAT");
  if (!ext) return;
  std::mt19937_64 rng(59);
  for (int t = 0; t < 500; t++) {
    Cnf f = test::randomCnf(rng, 20, 80 + static_cast<int>(rng() % 40));
    std::string path = "/tmp/stitch_ext.cnf";
    std::ofstream(path) << exportDimacs(f);
    int rc = std::system((std::string(ext) + " " + path + " > /dev/null 2>&1").c_str());
    int code = WEXITSTATUS(rc);
    if (code != 10 && code != 20) continue;
    Verdict v = solve(f);
    CHECK(v.sat() == (code == 10));
  }
}
