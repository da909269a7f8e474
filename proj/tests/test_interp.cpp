#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stitch/interp.hpp"
#include "stitch/parse.hpp"
#include "stitch/typecheck.hpp"
#include "test_util.hpp"

using namespace stitch;

namespace {

const char* kProg = R"(
record Node {
  next: Node;
  value: int;
}

record List {
  head: Node;
  size: int;
}

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

// Builds: List in slot 1 with head -> Node1 -> Node2 -> ... (len nodes), size field = len.
Input listInput(const Program& p, int len, int size, int64_t i, const Scope& s) {
  Input in;
  in.heap = ConcreteHeap::empty(p, s.objectsPerRecord, s.intWidth);
  auto& lists = in.heap.objects["List"];
  lists[0].live = true;
  lists[0].fields["head"] = len > 0 ? Value::refV(1) : Value::nullV();
  lists[0].fields["size"] = Value::intV(size);
  auto& nodes = in.heap.objects["Node"];
  for (int k = 0; k < len; k++) {
    nodes[static_cast<size_t>(k)].live = true;
    nodes[static_cast<size_t>(k)].fields["value"] = Value::intV(10 + k);
    nodes[static_cast<size_t>(k)].fields["next"] =
        (k + 1 < len) ? Value::refV(k + 2) : Value::nullV();
  }
  in.receiver = Value::refV(1);
  in.args = {Value::intV(i)};
  return in;
}

}  // namespace

TEST_CASE("getNode returns the second node of a 2-node list for i=1") {
  Program p = parseAndCheck(kProg);
  const Method& m = *p.findMethod("getNode");
  Scope s;
  Input in = listInput(p, 2, 2, 1, s);
  ExecResult r = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
  CHECK(r.outcome == RunOutcome::PassedContract);
  CHECK(r.returned);
  CHECK(r.result == Value::refV(2));
}

TEST_CASE("getNode brute force over list sizes <= 3 passes its contract") {
  Program p = parseAndCheck(kProg);
  const Method& m = *p.findMethod("getNode");
  Scope s;
  for (int len = 0; len <= 3; len++)
    for (int size = 0; size <= 3; size++)
      for (int64_t i = 0; i <= 2; i++) {
        Input in = listInput(p, len, size, i, s);
        if (!satisfiesPre(p, m, in, s.intWidth)) continue;
        ExecResult r = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
        CAPTURE(len);
        CAPTURE(size);
        CAPTURE(i);
        CHECK(r.outcome == RunOutcome::PassedContract);
      }
}

TEST_CASE("fault 6_b (i != current_index) violates the contract on [a,b] i=0") {
  std::string src(kProg);
  auto pos = src.find("i == current_index");
  REQUIRE(pos != std::string::npos);
  src.replace(pos, strlen("i == current_index"), "i != current_index");
  Program p = parseAndCheck(src);
  const Method& m = *p.findMethod("getNode");
  Scope s;
  Input in = listInput(p, 2, 2, 0, s);
  ExecResult r = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
  CHECK(r.outcome == RunOutcome::ViolatedPost);

  // Brute force over in-scope list inputs: the fault is exposed somewhere.
  int violations = 0;
  for (int len = 0; len <= 3; len++)
    for (int size = 0; size <= 3; size++)
      for (int64_t i = 0; i <= 2; i++) {
        Input cand = listInput(p, len, size, i, s);
        if (!satisfiesPre(p, m, cand, s.intWidth)) continue;
        ExecResult rr = execute(p, m, cand, StepLimits::forMethod(m, s), s.intWidth);
        if (isViolation(rr.outcome)) violations++;
      }
  CHECK(violations > 0);
}

TEST_CASE("null dereference is a defined failure") {
  Program p = parseAndCheck(R"(
record Node {
  next: Node;
  value: int;
}
method deref(n: Node): int {
  var x: Node;
  x = null;
  return x.value;
}
)");
  const Method& m = *p.findMethod("deref");
  Scope s;
  Input in;
  in.heap = ConcreteHeap::empty(p, s.objectsPerRecord, s.intWidth);
  in.args = {Value::nullV()};
  ExecResult r = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
  CHECK(r.outcome == RunOutcome::NullDeref);
}

TEST_CASE("division by zero is a defined failure, wrap semantics hold") {
  Program p = parseAndCheck(R"(
method divs(a: int, b: int): int {
  return a / b;
}
)");
  const Method& m = *p.findMethod("divs");
  Scope s;
  Input in;
  in.heap = ConcreteHeap::empty(p, s.objectsPerRecord, s.intWidth);
  in.args = {Value::intV(1), Value::intV(0)};
  CHECK(execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth).outcome ==
        RunOutcome::DivByZero);
  // INT_MIN / -1 wraps at width 8
  in.args = {Value::intV(-128), Value::intV(-1)};
  ExecResult r = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
  CHECK(r.outcome == RunOutcome::PassedContract);
  CHECK(r.result == Value::intV(-128));
}

TEST_CASE("loop iterations beyond the unroll bound leave the bounded universe") {
  Program p = parseAndCheck(R"(
method spin(n: int): int {
  var i: int;
  i = 0;
  while (i < n) {
    i = i + 1;
  }
  return i;
}
)");
  const Method& m = *p.findMethod("spin");
  Scope s;  // unroll 3
  Input in;
  in.heap = ConcreteHeap::empty(p, s.objectsPerRecord, s.intWidth);
  in.args = {Value::intV(3)};
  CHECK(execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth).outcome ==
        RunOutcome::PassedContract);
  in.args = {Value::intV(4)};
  CHECK(execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth).outcome ==
        RunOutcome::ScopeExceededLoop);
}

TEST_CASE("new exhausts the slot pool") {
  Program p = parseAndCheck(R"(
record Node {
  next: Node;
  value: int;
}
method alloc(k: int): Node {
  var n: Node;
  var i: int;
  n = null;
  i = 0;
  while (i < k) {
    n = new Node;
    i = i + 1;
  }
  return n;
}
)");
  const Method& m = *p.findMethod("alloc");
  Scope s;  // 3 objects
  Input in;
  in.heap = ConcreteHeap::empty(p, s.objectsPerRecord, s.intWidth);
  in.args = {Value::intV(3)};
  ExecResult ok = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
  CHECK(ok.outcome == RunOutcome::PassedContract);
  CHECK(ok.result == Value::refV(3));  // deterministic lowest-dead allocation
  in.args = {Value::intV(4)};
  CHECK(execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth).outcome ==
        RunOutcome::ScopeExceededLoop);  // 4 iterations exceeds unroll 3 first

  Program p4 = parseAndCheck(R"(
record Node {
  next: Node;
  value: int;
}
method alloc4(): Node {
  var n: Node;
  n = new Node;
  n = new Node;
  n = new Node;
  n = new Node;
  return n;
}
)");
  const Method& m4 = *p4.findMethod("alloc4");
  Input in4;
  in4.heap = ConcreteHeap::empty(p4, s.objectsPerRecord, s.intWidth);
  CHECK(execute(p4, m4, in4, StepLimits::forMethod(m4, s), s.intWidth).outcome ==
        RunOutcome::ScopeExceededHeap);
}

TEST_CASE("pool add is idempotent and rejects pre-violating inputs") {
  Program p = parseAndCheck(kProg);
  const Method& m = *p.findMethod("getNode");
  Scope s;
  InputPool pool;
  Input a = listInput(p, 2, 2, 1, s);
  CHECK(pool.add(p, m, a, s.intWidth));
  CHECK(pool.size() == 1);
  CHECK_FALSE(pool.add(p, m, a, s.intWidth));
  CHECK(pool.size() == 1);
  Input bad = listInput(p, 2, 2, -1, s);  // violates requires
  CHECK_THROWS_AS(pool.add(p, m, bad, s.intWidth), std::invalid_argument);
}

TEST_CASE("sieve fails the faulty method on its exposing input and passes the correct one") {
  Program correct = parseAndCheck(kProg);
  std::string faultySrc(kProg);
  auto pos = faultySrc.find("i == current_index");
  faultySrc.replace(pos, strlen("i == current_index"), "i != current_index");
  Program faulty = parseAndCheck(faultySrc);

  Scope s;
  const Method& mc = *correct.findMethod("getNode");
  const Method& mf = *faulty.findMethod("getNode");
  InputPool pool;
  Input witness = listInput(correct, 2, 2, 0, s);
  pool.add(correct, mc, witness, s.intWidth);

  auto lim = StepLimits::forMethod(mc, s);
  SieveResult fail = sieve(faulty, mf, pool, lim, s.intWidth);
  CHECK_FALSE(fail.passed);
  REQUIRE(fail.witness.has_value());
  CHECK(*fail.witness == witness);

  SieveResult pass = sieve(correct, mc, pool, lim, s.intWidth);
  CHECK(pass.passed);
}

TEST_CASE("execute is deterministic") {
  Program p = parseAndCheck(kProg);
  const Method& m = *p.findMethod("getNode");
  Scope s;
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; t++) {
    Input in = test::randomInput(rng, p, m, s);
    ExecResult a = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
    ExecResult b = execute(p, m, in, StepLimits::forMethod(m, s), s.intWidth);
    CHECK(a.outcome == b.outcome);
    CHECK(a.trace.size() == b.trace.size());
  }
}
