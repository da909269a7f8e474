#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stitch/encode.hpp"
#include "stitch/parse.hpp"
#include "stitch/pretty.hpp"
#include "stitch/solver.hpp"
#include "stitch/typecheck.hpp"
#include "test_util.hpp"

using namespace stitch;

namespace {

const char* kListDecls = R"(
record Node {
  next: Node;
  value: int;
}

record List {
  head: Node;
  size: int;
}
)";

const char* kGetNodeBody = R"(
method getNode(this: List, i: int): Node
  requires i >= 0 && i <= 2 && i < this.size;
  ensures (!(i == 0) || \result == this.head)
       && (!(i == 1) || ((this.head != null && this.head.next != null && \result == this.head.next) || ((this.head == null || this.head.next == null) && \result == null)))
       && (!(i == 2) || ((this.head != null && this.head.next != null && this.head.next.next != null && \result == this.head.next.next) || ((this.head == null || this.head.next == null || this.head.next.next == null) && \result == null)));
  invariant reach(this.head, next, null);
{
  var current: Node;
  var result: Node;
  var current_index: int;
  current = this.head;
  result = null;
  current_index = 0;
  while (result == null && current != null) {
    if (i == current_index) {
      result = current;
    }
    current_index = current_index + 1;
    current = current.next;
  }
  return result;
}
)";

std::string getNodeSrc() { return std::string(kListDecls) + kGetNodeBody; }

}  // namespace

TEST_CASE("unroll: while-free method is unchanged") {
  Program p = parseAndCheck(R"(
method f(a: int): int {
  a = a + 1;
  return a;
}
)");
  Scope s;
  UnrolledMethod u = unroll(*p.findMethod("f"), s);
  REQUIRE(u.body.size() == 2);
  CHECK(u.body[0].kind == UnrolledStmt::Kind::Assign);
  CHECK(u.body[0].replica == 0);
  CHECK(u.replicaCount.at(u.body[0].originId) == 1);
}

TEST_CASE("unroll: getNode at bound 3 produces 3 guarded copies per loop statement") {
  Program p = parseAndCheck(getNodeSrc());
  const Method& m = *p.findMethod("getNode");
  Scope s;  // unroll 3
  UnrolledMethod u = unroll(m, s);
  // the statement `current_index = current_index + 1` inside the loop
  int loopStmtId = m.body[3].body[1].id;
  CHECK(u.replicaCount.at(loopStmtId) == 3);
  // the while guard: 3 guard copies plus the residual scope check
  int whileId = m.body[3].id;
  CHECK(u.replicaCount.at(whileId) == 4);
  int scopeChecks = 0;
  for (auto* st : allUnrolled(u))
    if (st->kind == UnrolledStmt::Kind::ScopeCheck) scopeChecks++;
  CHECK(scopeChecks == 1);
}

TEST_CASE("unroll: nested loops multiply") {
  Program p = parseAndCheck(R"(
method f(a: int) {
  var i: int;
  var j: int;
  i = 0;
  while (i < a) {
    j = 0;
    while (j < a) {
      j = j + 1;
    }
    i = i + 1;
  }
}
)");
  Scope s;
  s.unrollBound = 2;
  const Method& m = *p.findMethod("f");
  UnrolledMethod u = unroll(m, s);
  int innerBodyId = m.body[1].body[1].body[0].id;  // j = j + 1
  CHECK(u.replicaCount.at(innerBodyId) == 4);      // 2 x 2 copies
}

TEST_CASE("identity method encodes to Unsat") {
  Program p = parseAndCheck(R"(
method id(x: int): int
  ensures x == \old(x);
{
  x = x;
  return x;
}
)");
  Scope s;
  Encoding e = encodeCorrectness(p, *p.findMethod("id"), s);
  CHECK(solve(e.cnf).unsat());
}

TEST_CASE("increment violating its own identity contract is Sat and replays") {
  Program p = parseAndCheck(R"(
method inc(x: int): int
  ensures x == \old(x);
{
  x = x + 1;
  return x;
}
)");
  Scope s;
  Encoding e = encodeCorrectness(p, *p.findMethod("inc"), s);
  Verdict v = solve(e.cnf);
  REQUIRE(v.sat());
  DecodedCex cex = decodeModel(p, e, v.model);
  CHECK(cex.replay.outcome == RunOutcome::ViolatedPost);
}

TEST_CASE("width-8 two's complement: 255 decodes to -1") {
  Cnf f;
  CircuitBuilder b(f);
  Bv bits = b.constBv(255, 8);
  std::vector<bool> model;  // constants only
  CHECK(CircuitBuilder::signedValue(bits, model) == -1);
  CHECK(CircuitBuilder::unsignedValue(bits, model) == 255);
}

TEST_CASE("bitvector circuits agree with wrapped arithmetic") {
  std::mt19937_64 rng(101);
  const int w = 6;
  auto check = [&](int64_t a, int64_t c) {
    Cnf f;
    CircuitBuilder b(f);
    Bv av = b.constBv(a, w), cv = b.constBv(c, w);
    std::vector<bool> model;
    CHECK(CircuitBuilder::signedValue(b.addBv(av, cv), model) == wrapToWidth(a + c, w));
    CHECK(CircuitBuilder::signedValue(b.subBv(av, cv), model) == wrapToWidth(a - c, w));
    CHECK(CircuitBuilder::signedValue(b.mulBv(av, cv), model) == wrapToWidth(a * c, w));
    CHECK(CircuitBuilder::bitValue(b.slt(av, cv), model) == (a < c));
    CHECK(CircuitBuilder::bitValue(b.sle(av, cv), model) == (a <= c));
    CHECK(CircuitBuilder::bitValue(b.eqBv(av, cv), model) == (a == c));
    if (c != 0) {
      auto [q, r] = b.sdivmod(av, cv);
      CHECK(CircuitBuilder::signedValue(q, model) == wrapToWidth(a / c, w));
      CHECK(CircuitBuilder::signedValue(r, model) == wrapToWidth(a % c, w));
    }
  };
  for (int t = 0; t < 400; t++) {
    int64_t a = wrapToWidth(static_cast<int64_t>(rng()), w);
    int64_t c = wrapToWidth(static_cast<int64_t>(rng()), w);
    check(a, c);
  }
  check(-32, -1);  // INT_MIN / -1 wraps
  check(-32, 1);
  check(0, -1);
}

TEST_CASE("fault 9_a is detected at scope (3, w8, u3) and the cex replays") {
  std::string src = getNodeSrc();
  auto pos = src.find("current_index = current_index + 1");
  REQUIRE(pos != std::string::npos);
  src.replace(pos, strlen("current_index = current_index + 1"),
              "current_index = current_index - 1");
  Program p = parseAndCheck(src);
  const Method& m = *p.findMethod("getNode");
  Scope s;
  Encoding e = encodeCorrectness(p, m, s);
  Verdict v = solve(e.cnf);
  REQUIRE(v.sat());
  DecodedCex cex = decodeModel(p, e, v.model);
  CHECK(isViolation(cex.replay.outcome));
}

TEST_CASE("correct getNode verifies Unsat at (3, w8, u3)") {
  Program p = parseAndCheck(getNodeSrc());
  Encoding e = encodeCorrectness(p, *p.findMethod("getNode"), Scope{3, 8, 3});
  CHECK(solve(e.cnf).unsat());
}

TEST_CASE("trace refutation is unsat with a non-empty core; passing inputs are rejected") {
  std::string src = getNodeSrc();
  auto pos = src.find("current_index = current_index + 1");
  src.replace(pos, strlen("current_index = current_index + 1"),
              "current_index = current_index - 1");
  Program p = parseAndCheck(src);
  const Method& m = *p.findMethod("getNode");
  Scope s;
  Encoding e = encodeCorrectness(p, m, s);
  Verdict v = solve(e.cnf);
  REQUIRE(v.sat());
  DecodedCex cex = decodeModel(p, e, v.model);

  Encoding ref = encodeTraceRefutation(p, m, cex.input, s);
  Verdict rv = solve(ref.cnf);
  REQUIRE(rv.unsat());
  CHECK_FALSE(rv.core.empty());

  // a passing input is not a counterexample
  Program correct = parseAndCheck(getNodeSrc());
  const Method& mc = *correct.findMethod("getNode");
  std::mt19937_64 rng(3);
  auto good = test::randomValidInput(rng, correct, mc, s);
  REQUIRE(good.has_value());
  CHECK_THROWS_AS(encodeTraceRefutation(correct, mc, *good, s), InternalError);
}

TEST_CASE("ensures false with empty body: every model decodes and replays") {
  Program p = parseAndCheck(R"(
method nope(x: int)
  ensures false;
{
}
)");
  Scope s;
  Encoding e = encodeCorrectness(p, *p.findMethod("nope"), s);
  Verdict v = solve(e.cnf);
  REQUIRE(v.sat());
  DecodedCex cex = decodeModel(p, e, v.model);
  CHECK(cex.replay.outcome == RunOutcome::ViolatedPost);
}

TEST_CASE("blocking inputs enumerates distinct counterexamples") {
  Program p = parseAndCheck(R"(
method low(x: int): int
  requires x >= 0 && x <= 3;
  ensures \result > x;
{
  return x;
}
)");
  Scope s;
  Encoding e = encodeCorrectness(p, *p.findMethod("low"), s);
  std::set<std::string> seen;
  for (int i = 0; i < 4; i++) {
    Verdict v = solve(e.cnf);
    REQUIRE(v.sat());
    DecodedCex cex = decodeModel(p, e, v.model);
    CHECK(seen.insert(canonicalInputJson(cex.input)).second);
    blockInput(e, cex.input);
  }
  CHECK(solve(e.cnf).unsat());  // all four violating inputs found
}

TEST_CASE("encoder and interpreter agree on pinned runs") {
  // correct and seeded-faulty getNode variants, random pre-satisfying inputs
  std::vector<std::string> sources;
  sources.push_back(getNodeSrc());
  for (auto [from, to] : std::vector<std::pair<const char*, const char*>>{
           {"i == current_index", "i != current_index"},
           {"current_index = current_index + 1", "current_index = current_index - 1"},
           {"result == null && current != null", "result != null && current != null"},
           {"current = current.next", "current = current.next.next"}}) {
    std::string src = getNodeSrc();
    auto pos = src.find(from);
    REQUIRE(pos != std::string::npos);
    src.replace(pos, strlen(from), to);
    sources.push_back(src);
  }
  Scope s;
  std::mt19937_64 rng(77);
  int checked = 0, violations = 0;
  for (auto& src : sources) {
    Program p = parseAndCheck(src);
    const Method& m = *p.findMethod("getNode");
    UnrolledMethod u = unroll(m, s);
    for (int t = 0; t < 150; t++) {
      auto in = test::randomValidInput(rng, p, m, s);
      if (!in) continue;
      ExecResult run = execute(p, m, *in, StepLimits::forMethod(m, s), s.intWidth);
      EncodeOptions opts;
      opts.goal = EncodeOptions::Goal::FindViolation;
      opts.pin = &*in;
      Encoding e = encodeRun(p, m, u, s, opts);
      Verdict v = solve(e.cnf);
      REQUIRE_FALSE(v.unknown());
      bool interpViolation = isViolation(run.outcome);
      CHECK(v.sat() == interpViolation);
      checked++;
      if (interpViolation) violations++;
    }
  }
  CHECK(checked > 200);
  CHECK(violations > 10);
}

TEST_CASE("negation duality on an int-only method at (2, w4, u2)") {
  const char* src = R"(
method clampDiff(a: int, b: int): int
  requires a >= b;
  ensures \result >= 0;
{
  return a - b;
}
)";
  Program p = parseAndCheck(src);
  const Method& m = *p.findMethod("clampDiff");
  Scope s{2, 4, 2};
  Encoding e = encodeCorrectness(p, m, s);
  Verdict v = solve(e.cnf);
  // exhaustive oracle over all 16x16 inputs
  bool anyViolation = false;
  for (int64_t a = -8; a <= 7; a++)
    for (int64_t b = -8; b <= 7; b++) {
      Input in;
      in.heap = ConcreteHeap::empty(p, s.objectsPerRecord, s.intWidth);
      in.args = {Value::intV(a), Value::intV(b)};
      if (!satisfiesPre(p, m, in, s.intWidth)) continue;
      ExecResult r = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
      if (isViolation(r.outcome)) anyViolation = true;
    }
  CHECK(v.sat() == anyViolation);
  CHECK(anyViolation);  // a=7, b=-8 wraps negative
}

TEST_CASE("vacuously correct contracts are detectable via enabled groups") {
  Program p = parseAndCheck(R"(
method never(x: int): int
  requires x > 0 && x < 0;
  ensures false;
{
  return x;
}
)");
  Scope s;
  Encoding e = encodeCorrectness(p, *p.findMethod("never"), s);
  CHECK(solve(e.cnf).unsat());
  auto pre = e.groupsOfKind(ConjunctKind::Requires);
  auto inv = e.groupsOfKind(ConjunctKind::InvariantPre);
  pre.insert(pre.end(), inv.begin(), inv.end());
  CHECK(solveWithGroups(e.cnf, pre).unsat());  // no pre-state at all
}
