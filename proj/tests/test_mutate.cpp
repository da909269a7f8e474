#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stitch/corpus.hpp"
#include "stitch/mutate.hpp"
#include "stitch/mutation_vector.hpp"
#include "stitch/parse.hpp"
#include "stitch/pretty.hpp"
#include "stitch/typecheck.hpp"
#include "test_util.hpp"

using namespace stitch;

namespace {

bool listContains(const std::vector<Mutation>& list, const std::string& stmtText) {
  for (auto& mu : list)
    if (prettyPrint(mu.replacement) == stmtText) return true;
  return false;
}

}  // namespace

TEST_CASE("arithmetic replacement covers the size-decrement family") {
  Program p = parseAndCheck(R"(
record Set {
  size: int;
}
method dec(this: Set) {
  this.size = this.size - 1; //mutGenLimit 1
}
)");
  const Method& m = *p.findMethod("dec");
  OperatorSet only = OperatorSet::none();
  only.enable(MutOp::Aorb);
  auto lists = obtainMutants(p, m, only);
  const auto& list = lists.at(m.body[0].id);
  CHECK(listContains(list, "this.size = this.size + 1;"));
  CHECK(listContains(list, "this.size = this.size * 1;"));
  CHECK(listContains(list, "this.size = this.size / 1;"));
  CHECK(listContains(list, "this.size = this.size % 1;"));
  CHECK(list.size() == 4);
}

TEST_CASE("navigation mutator produces the documented root.left.right variants") {
  Program p = parseAndCheck(R"(
record TNode {
  left: TNode;
  right: TNode;
}
method pick(root: TNode): TNode {
  var t: TNode;
  t = root.left.right; //mutGenLimit 1
  return t;
}
)");
  const Method& m = *p.findMethod("pick");
  OperatorSet only = OperatorSet::none();
  only.enable(MutOp::Prv);
  auto list = statementMutations(p, m, m.body[0], only);
  CHECK(listContains(list, "t = root.right;"));
  CHECK(listContains(list, "t = root.right.right;"));
  CHECK(listContains(list, "t = root.left.left.right;"));
  // every PRV variant preserves the final type and is itself well typed
  for (auto& mu : list) {
    Method probe = m;
    Statement r = mu.replacement;
    r.id = probe.body[0].id;
    probe.body[0] = r;
    CHECK_NOTHROW(typecheckMethod(p, probe));
  }
}

TEST_CASE("budget-0 statements get empty mutation lists") {
  Program p = parseAndCheck(R"(
method f(x: int): int {
  x = x + 1; //mutGenLimit 1
  x = x * 2;
  return x;
}
)");
  const Method& m = *p.findMethod("f");
  auto lists = obtainMutants(p, m, OperatorSet::all());
  CHECK(lists.count(m.body[0].id) == 1);
  CHECK_FALSE(lists.at(m.body[0].id).empty());
  CHECK(lists.at(m.body[1].id).empty());
  CHECK(lists.at(m.body[2].id).empty());
}

TEST_CASE("zero vector applies to the structural identity") {
  Program p = test::loadCorpusProgram("setadd");
  Method m = *p.findMethod("add");
  for (Statement* s : m.allStatements()) s->mutGenLimit = 1;
  auto lists = obtainMutants(p, m, OperatorSet::all());
  auto order = m.mutableStatementIdsBottomUp();
  MutationVector zero;
  zero.j.assign(order.size(), 0);
  Method back = applyVector(p, m, lists, order, zero);
  CHECK(back == m);
}

TEST_CASE("[1|0|...|0] mutates exactly the bottom-most statement and spends budget") {
  Program p = parseAndCheck(R"(
method f(x: int, y: int): int {
  x = x + 1; //mutGenLimit 2
  y = y - 2; //mutGenLimit 1
  return x + y;
}
)");
  const Method& m = *p.findMethod("f");
  auto lists = obtainMutants(p, m, OperatorSet::all());
  auto order = m.mutableStatementIdsBottomUp();
  REQUIRE(order.size() == 2);
  CHECK(order[0] == m.body[1].id);  // y-assignment is S_1
  MutationVector v;
  v.j = {1, 0};
  Method out = applyVector(p, m, lists, order, v);
  CHECK(out.body[0] == m.body[0]);
  CHECK_FALSE(out.body[1] == m.body[1]);
  CHECK(out.body[1].mutGenLimit == 0);
  CHECK(out.body[0].mutGenLimit == 2);
}

TEST_CASE("budget violations are rejected") {
  Program p = parseAndCheck(R"(
method f(x: int): int {
  x = x + 1;
  return x;
}
)");
  const Method& m = *p.findMethod("f");
  // hand-build a vector against a statement with no budget
  auto lists = obtainMutants(p, m, OperatorSet::all());
  CHECK(lists.at(m.body[0].id).empty());  // budget 0: no mutations listed
}

TEST_CASE("two derivation paths to one mutant share the MutantId") {
  Program p = parseAndCheck(R"(
method f(a: int, b: int): int {
  a = a + b; //mutGenLimit 2
  return a;
}
)");
  const Method& m = *p.findMethod("f");
  auto order = m.mutableStatementIdsBottomUp();
  auto lists = obtainMutants(p, m, OperatorSet::all());
  // path A: + -> - then - -> *
  int idxMinus = -1;
  for (size_t i = 0; i < lists.at(order[0]).size(); i++)
    if (prettyPrint(lists.at(order[0])[i].replacement) == "a = a - b;")
      idxMinus = static_cast<int>(i) + 1;
  REQUIRE(idxMinus > 0);
  MutationVector v1;
  v1.j = {idxMinus};
  Method mid = applyVector(p, m, lists, order, v1);
  auto lists2 = obtainMutants(p, mid, OperatorSet::all());
  int idxStar = -1;
  for (size_t i = 0; i < lists2.at(order[0]).size(); i++)
    if (prettyPrint(lists2.at(order[0])[i].replacement) == "a = a * b;")
      idxStar = static_cast<int>(i) + 1;
  REQUIRE(idxStar > 0);
  MutationVector v2;
  v2.j = {idxStar};
  Method viaTwo = applyVector(p, mid, lists2, order, v2);
  // path B: + -> * directly
  int idxStarDirect = -1;
  for (size_t i = 0; i < lists.at(order[0]).size(); i++)
    if (prettyPrint(lists.at(order[0])[i].replacement) == "a = a * b;")
      idxStarDirect = static_cast<int>(i) + 1;
  REQUIRE(idxStarDirect > 0);
  MutationVector v3;
  v3.j = {idxStarDirect};
  Method direct = applyVector(p, m, lists, order, v3);

  CHECK(mutantHash(viaTwo) == mutantHash(direct));
  CHECK(viaTwo.body[0].mutGenLimit == 0);    // two applications spent
  CHECK(direct.body[0].mutGenLimit == 1);    // one application spent
  CHECK_FALSE(mutantHash(direct) == mutantHash(m));
}

TEST_CASE("pretty-print round-trip preserves the MutantId") {
  Program p = test::loadCorpusProgram("sll");
  Method m = *p.findMethod("getNode");
  for (Statement* s : m.allStatements()) s->mutGenLimit = 1;
  auto lists = obtainMutants(p, m, OperatorSet::all());
  auto order = m.mutableStatementIdsBottomUp();
  MutationVector v;
  v.j.assign(order.size(), 0);
  v.j[0] = 1;
  Method mut = applyVector(p, m, lists, order, v);
  Program wrapper = p;
  *wrapper.findMethod("getNode") = mut;
  Program again = parseAndCheck(prettyPrint(wrapper));
  CHECK(mutantHash(*again.findMethod("getNode")) == mutantHash(mut));
}

TEST_CASE("every catalog mutation typechecks across the corpus") {
  for (auto& name : {"sll", "bst", "setadd"}) {
    Program p = test::loadCorpusProgram(name);
    for (auto& m : p.methods) {
      for (const Statement* s : m.allStatements()) {
        auto muts = statementMutations(p, m, *s, OperatorSet::all());
        for (auto& mu : muts) {
          Method probe = m;
          Statement r = mu.replacement;
          r.id = s->id;
          r.mutGenLimit = 0;
          *probe.findStatement(s->id) = r;
          CAPTURE(mu.note);
          CHECK_NOTHROW(typecheckMethod(p, probe));
          CHECK_FALSE(canonicalKey(r) == canonicalKey(*s));  // never the identity
        }
      }
    }
  }
}

TEST_CASE("depth-1 mutant count equals the sum of the arities") {
  Program p = test::loadCorpusProgram("setadd");
  Method m = *p.findMethod("add");
  for (Statement* s : m.allStatements()) s->mutGenLimit = 1;
  auto lists = obtainMutants(p, m, OperatorSet::all());
  auto order = m.mutableStatementIdsBottomUp();
  uint64_t sum = 0;
  for (int id : order) sum += lists.at(id).size();
  std::set<std::string> seen;
  for (size_t i = 0; i < order.size(); i++) {
    for (size_t j = 1; j <= lists.at(order[i]).size(); j++) {
      MutationVector v;
      v.j.assign(order.size(), 0);
      v.j[i] = static_cast<int>(j);
      seen.insert(mutantHash(applyVector(p, m, lists, order, v)).canonical);
    }
  }
  CHECK(seen.size() == sum);
}

TEST_CASE("growth law: vector count is (b+1)^m") {
  CHECK(VectorIterator::totalCount({3, 3, 3}) == 64);
  CHECK(VectorIterator::totalCount({}) == 1);
  CHECK(VectorIterator::totalCount({0, 0}) == 1);
}

TEST_CASE("iterator: the documented carry example") {
  // [3|2|5|k4|k5|2|4].advanceOneStartingAtIndex(3) == [3|2|5|0|0|3|4]
  std::vector<int> arities{9, 9, 9, 4, 5, 9, 9};
  MutationVector v;
  v.j = {3, 2, 5, 4, 5, 2, 4};  // positions 3,4 saturated at their arity
  auto out = VectorIterator::advanceOneAt(v, arities, 3);
  REQUIRE(out.has_value());
  CHECK(out->j == std::vector<int>{3, 2, 5, 0, 0, 3, 4});
}

TEST_CASE("iterator: zero vector first, successor bumps position 0") {
  VectorIterator it({2, 3});
  REQUIRE(it.hasNext());
  CHECK(it.next().j == std::vector<int>{0, 0});
  CHECK(it.next().j == std::vector<int>{1, 0});
}

TEST_CASE("iterator: full order for arities (1,1)") {
  VectorIterator it({1, 1});
  std::vector<std::vector<int>> seen;
  while (it.hasNext()) seen.push_back(it.next().j);
  CHECK(seen == std::vector<std::vector<int>>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

TEST_CASE("iterator: exhaustive order equals the reference odometer") {
  std::vector<std::vector<int>> tuples = {
      {1, 1}, {2}, {0}, {3, 0, 2}, {1, 2, 3}, {4, 4, 4}, {1, 1, 1, 1, 1, 1, 1}, {9, 9, 9}, {15, 15}, {2, 0, 2, 0, 2}};
  for (auto& t : tuples) {
    REQUIRE(VectorIterator::totalCount(t) <= 10000);
    VectorIterator it(t);
    std::vector<int> ref(t.size(), 0);
    uint64_t count = 0;
    bool more = true;
    while (more) {
      REQUIRE(it.hasNext());
      MutationVector v = it.next();
      CHECK(v.j == ref);
      CHECK(VectorIterator::rank(v, t) == count);
      count++;
      size_t i = 0;
      while (i < ref.size()) {
        if (ref[i] < t[i]) {
          ref[i]++;
          break;
        }
        ref[i] = 0;
        i++;
      }
      more = i < ref.size();
    }
    CHECK_FALSE(it.hasNext());
    CHECK(count == VectorIterator::totalCount(t));
  }
}

TEST_CASE("iterator: jump then next returns the jump target itself") {
  VectorIterator it({3, 3, 3});
  it.next();  // [0,0,0]
  it.next();  // [1,0,0]
  it.setToZeroAllPositionsInRange(0, 0);
  it.advanceOneStartingAtIndex(1);
  CHECK(it.next().j == std::vector<int>{0, 1, 0});
  // jumping past the end exhausts the iterator
  it.setToZeroAllPositionsInRange(0, 1);
  it.advanceOneStartingAtIndex(2);  // [0,0,1]
  CHECK(it.next().j == std::vector<int>{0, 0, 1});
  it.advanceOneStartingAtIndex(2);
  it.advanceOneStartingAtIndex(2);
  CHECK(it.next().j == std::vector<int>{0, 0, 3});
  it.advanceOneStartingAtIndex(2);
  CHECK_FALSE(it.hasNext());
}

TEST_CASE("operator set parsing") {
  auto all = OperatorSet::parse("all");
  REQUIRE(all.has_value());
  CHECK(all->enabled(MutOp::Prv));
  auto some = OperatorSet::parse("aorb,ROR , prv");
  REQUIRE(some.has_value());
  CHECK(some->enabled(MutOp::Aorb));
  CHECK(some->enabled(MutOp::Ror));
  CHECK(some->enabled(MutOp::Prv));
  CHECK_FALSE(some->enabled(MutOp::Vrr));
  CHECK_FALSE(OperatorSet::parse("bogus").has_value());
}

TEST_CASE("write target forms cover kind-changing navigation mutations") {
  Program p = parseAndCheck(R"(
record Node {
  next: Node;
  value: int;
}
method step(current: Node): Node {
  current = current.next; //mutGenLimit 1
  return current;
}
)");
  const Method& m = *p.findMethod("step");
  auto forms = writeTargetForms(p, m, m.body[0], OperatorSet::all());
  bool hasVar = false, hasNextField = false;
  for (auto& f : forms) {
    if (!f.isField && f.var == "current") hasVar = true;
    if (f.isField && f.field == "next" && f.record == "Node") hasNextField = true;
  }
  CHECK(hasVar);
  CHECK(hasNextField);  // PRV can turn `current = e` into `current.next = e`
}
