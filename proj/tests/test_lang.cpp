#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stitch/parse.hpp"
#include "stitch/pretty.hpp"
#include "stitch/typecheck.hpp"

using namespace stitch;

namespace {

const char* kList = R"(
record Node {
  next: Node;
  value: int;
}

record List {
  head: Node;
  size: int;
}
)";

std::string withPrelude(const std::string& m) { return std::string(kList) + "\n" + m; }

const char* kGetNode = R"(
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
  while (result == null && current != null) { //mutGenLimit 1
    if (i == current_index) { //mutGenLimit 1
      result = current;
    }
    current_index = current_index + 1; //mutGenLimit 1
    current = current.next; //mutGenLimit 1
  }
  return result;
}
)";

}  // namespace

TEST_CASE("mutGenLimit annotation attaches to the preceding statement") {
  Program p = parseAndCheck(withPrelude(R"(
method bump(x: int): int
  ensures \result == \old(x) + 1;
{
  x = x + 1; //mutGenLimit 2
  return x;
}
)"));
  const Method* m = p.findMethod("bump");
  REQUIRE(m != nullptr);
  REQUIRE(m->body.size() == 2);
  CHECK(m->body[0].kind == StmtKind::VarAssign);
  CHECK(m->body[0].mutGenLimit == 2);
  CHECK(m->body[1].mutGenLimit == 0);
}

TEST_CASE("empty method body is valid") {
  Program p = parseAndCheck(withPrelude("method noop() {\n}\n"));
  CHECK(p.findMethod("noop")->body.empty());
}

TEST_CASE("unknown variable is rejected") {
  CHECK_THROWS_AS(parseAndCheck(withPrelude(R"(
method bad(y: int) {
  y = z;
}
)")),
                  TypeError);
}

TEST_CASE("type errors") {
  SUBCASE("int condition") {
    CHECK_THROWS_AS(parseAndCheck(withPrelude(R"(
method bad(n: int) {
  if (n) {
  }
}
)")),
                    TypeError);
  }
  SUBCASE("\\result in requires") {
    CHECK_THROWS_AS(parseAndCheck(withPrelude(R"(
method bad(n: int): int
  requires \result > 0;
{
  return n;
}
)")),
                    TypeError);
  }
  SUBCASE("\\result in a void method") {
    CHECK_THROWS_AS(parseAndCheck(withPrelude(R"(
method bad(n: int)
  ensures \result == n;
{
}
)")),
                    TypeError);
  }
  SUBCASE("refs cannot be ordered") {
    CHECK_THROWS_AS(parseAndCheck(withPrelude(R"(
method bad(a: Node, b: Node): bool {
  return a < b;
}
)")),
                    TypeError);
  }
  SUBCASE("navigation through a non-ref field") {
    CHECK_THROWS_AS(parseAndCheck(withPrelude(R"(
method bad(n: Node): int {
  return n.value.next;
}
)")),
                    TypeError);
  }
  SUBCASE("non-void method may not fall off the end") {
    CHECK_THROWS_AS(parseAndCheck(withPrelude(R"(
method bad(n: int): int {
  n = n + 1;
}
)")),
                    TypeError);
  }
}

TEST_CASE("navigation typing") {
  Program p = parseAndCheck(withPrelude(R"(
method walk(this: List): Node {
  var current: Node;
  current = this.head;
  current = current.next;
  return current;
}
)"));
  const Method* m = p.findMethod("walk");
  CHECK(m->body[1].value.type == Type::refType("Node"));
}

TEST_CASE("round-trip: getNode port") {
  Program p = parseAndCheck(withPrelude(kGetNode));
  std::string printed = prettyPrint(p);
  Program again = parseAndCheck(printed);
  CHECK(p == again);
  // and a second print is a fixpoint
  CHECK(prettyPrint(again) == printed);
}

TEST_CASE("round-trip: nested if/while with budgets and else") {
  Program p = parseAndCheck(withPrelude(R"(
method weird(this: List, a: int, b: bool): int
  requires a >= -3;
  ensures \result >= 0 || b;
{
  var t: int;
  var n: Node;
  t = 0;
  while (a > 0) { //mutGenLimit 3
    if (b ^ (a % 2 == 0)) {
      t = t + a * 2 - 1;
    } else {
      if (t != 0) { //mutGenLimit 1
        t = t / a;
      }
      n = new Node;
      n.value = t;
    }
    a = a - 1;
  }
  ;
  return -t;
}
)"));
  Program again = parseAndCheck(prettyPrint(p));
  CHECK(p == again);
}

TEST_CASE("skip statement round-trips as ';'") {
  Program p = parseAndCheck(withPrelude("method s() {\n  ;\n}\n"));
  CHECK(p.findMethod("s")->body[0].kind == StmtKind::Skip);
  Program again = parseAndCheck(prettyPrint(p));
  CHECK(p == again);
}

TEST_CASE("statement ids are unique and preorder") {
  Program p = parseAndCheck(withPrelude(kGetNode));
  const Method* m = p.findMethod("getNode");
  auto ids = m->allStatements();
  for (size_t i = 0; i < ids.size(); i++) CHECK(ids[i]->id == static_cast<int>(i) + 1);
}

TEST_CASE("bottom-up mutable statement order") {
  Program p = parseAndCheck(withPrelude(kGetNode));
  const Method* m = p.findMethod("getNode");
  auto order = m->mutableStatementIdsBottomUp();
  REQUIRE(order.size() == 4);
  // S_1 is the last mutable statement (current = current.next), S_4 the while guard.
  CHECK(order[0] > order[1]);
  CHECK(order[3] == m->body[3].id);  // the while statement
  CHECK(m->findStatement(order[0])->kind == StmtKind::VarAssign);
}

TEST_CASE("duplicate names are rejected") {
  CHECK_THROWS_AS(parseAndCheck("record A { x: int; }\nrecord A { y: int; }\n"), TypeError);
  CHECK_THROWS_AS(parseAndCheck("record A { x: int; x: bool; }\n"), TypeError);
  CHECK_THROWS_AS(parseAndCheck("method m() {\n}\nmethod m() {\n}\n"), TypeError);
}

TEST_CASE("unknown record in field type") {
  CHECK_THROWS_AS(parseAndCheck("record A { x: B; }\n"), TypeError);
}

TEST_CASE("parse error carries position") {
  try {
    parse("record A { x: int }\n");  // missing ';'
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
  }
}

TEST_CASE("reach typing rules") {
  CHECK_NOTHROW(parseAndCheck(withPrelude(R"(
method ok(this: List): bool {
  return reach(this.head, next, null);
}
)")));
  // `value` is not a Node -> Node field
  CHECK_THROWS_AS(parseAndCheck(withPrelude(R"(
method bad(this: List): bool {
  return reach(this.head, value, null);
}
)")),
                  TypeError);
}
