#include "stitch/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "stitch/diagnostics.hpp"
#include "stitch/parse.hpp"
#include "stitch/pretty.hpp"
#include "stitch/typecheck.hpp"
#include "stitch/verify.hpp"

namespace stitch {

namespace {

const char* kSll = R"(record Node {
  next: Node;
  value: int;
}

record List {
  head: Node;
  size: int;
}

method contains(this: List, v: int): bool
  ensures \result == (this.head != null && (this.head.value == v || (this.head.next != null && (this.head.next.value == v || (this.head.next.next != null && this.head.next.next.value == v)))));
  invariant reach(this.head, next, null);
{
  var current: Node;
  current = this.head;
  while (current != null) {
    if (current.value == v) {
      return true;
    }
    current = current.next;
  }
  return false;
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

method insert(this: List, n: Node)
  requires n != null && n.next == null && !reach(this.head, next, n);
  ensures reach(this.head, next, n) && n.next == null
       && this.size == \old(this.size) + 1
       && ((\old(this.head) == null && this.head == n) || (\old(this.head) != null && this.head == \old(this.head)));
  invariant reach(this.head, next, null);
{
  var last: Node;
  if (this.head == null) {
    this.head = n;
    this.size = this.size + 1;
    return;
  }
  last = this.head;
  while (last.next != null) {
    last = last.next;
  }
  last.next = n;
  this.size = this.size + 1;
}
)";

const char* kBst = R"(record TNode {
  key: int;
  left: TNode;
  right: TNode;
}

record Tree {
  root: TNode;
}

method contains(this: Tree, k: int): bool
  ensures \result == (this.root != null && (this.root.key == k
       || (this.root.left != null && (this.root.left.key == k
           || (this.root.left.left != null && this.root.left.left.key == k)
           || (this.root.left.right != null && this.root.left.right.key == k)))
       || (this.root.right != null && (this.root.right.key == k
           || (this.root.right.left != null && this.root.right.left.key == k)
           || (this.root.right.right != null && this.root.right.right.key == k)))));
  invariant this.root == null || (
       (this.root.left == null || (this.root.left.key < this.root.key
          && (this.root.left.left == null || this.root.left.left.key < this.root.left.key)
          && (this.root.left.right == null || (this.root.left.right.key > this.root.left.key && this.root.left.right.key < this.root.key))))
    && (this.root.right == null || (this.root.right.key > this.root.key
          && (this.root.right.right == null || this.root.right.right.key > this.root.right.key)
          && (this.root.right.left == null || (this.root.right.left.key < this.root.right.key && this.root.right.left.key > this.root.key)))));
{
  var current: TNode;
  current = this.root;
  while (current != null) {
    if (current.key == k) {
      return true;
    }
    if (k < current.key) {
      current = current.left;
    } else {
      current = current.right;
    }
  }
  return false;
}

method insert(this: Tree, n: TNode)
  requires n != null && n.left == null && n.right == null
       && n != this.root
       && (this.root == null || (n != this.root.left && n != this.root.right
           && (this.root.left == null || (n != this.root.left.left && n != this.root.left.right))
           && (this.root.right == null || (n != this.root.right.left && n != this.root.right.right))))
       && (this.root == null || (this.root.key != n.key
           && (this.root.left == null || this.root.left.key != n.key)
           && (this.root.right == null || this.root.right.key != n.key)));
  ensures n.left == null && n.right == null
       && (this.root == n || this.root.left == n || this.root.right == n
           || (this.root.left != null && (this.root.left.left == n || this.root.left.right == n))
           || (this.root.right != null && (this.root.right.left == n || this.root.right.right == n)));
  invariant this.root == null || (
       (this.root.left == null || (this.root.left.key < this.root.key
          && (this.root.left.left == null || this.root.left.left.key < this.root.left.key)
          && (this.root.left.right == null || (this.root.left.right.key > this.root.left.key && this.root.left.right.key < this.root.key))))
    && (this.root.right == null || (this.root.right.key > this.root.key
          && (this.root.right.right == null || this.root.right.right.key > this.root.right.key)
          && (this.root.right.left == null || (this.root.right.left.key < this.root.right.key && this.root.right.left.key > this.root.key)))));
{
  var current: TNode;
  if (this.root == null) {
    this.root = n;
    return;
  }
  current = this.root;
  while (current != null) {
    if (n.key < current.key) {
      if (current.left == null) {
        current.left = n;
        return;
      }
      current = current.left;
    } else {
      if (current.right == null) {
        current.right = n;
        return;
      }
      current = current.right;
    }
  }
}
)";

const char* kSetAdd = R"(record Node {
  next: Node;
}

record Set {
  head: Node;
  size: int;
}

method add(this: Set, n: Node): bool
  requires n != null && (reach(this.head, next, n) || n.next == null);
  ensures reach(this.head, next, n)
       && ((\result && this.size == \old(this.size) + 1) || (!\result && this.size == \old(this.size)))
       && (\result == !\old(reach(this.head, next, n)));
  invariant reach(this.head, next, null);
{
  var current: Node;
  var last: Node;
  current = this.head;
  while (current != null) {
    if (current == n) {
      return false;
    }
    current = current.next;
  }
  last = this.head;
  if (last == null) {
    this.head = n;
  } else {
    while (last.next != null) {
      last = last.next;
    }
    last.next = n;
  }
  this.size = this.size + 1;
  return true;
}
)";

}  // namespace

const std::map<std::string, std::string>& corpusSources() {
  static const std::map<std::string, std::string> sources = {
      {"sll", kSll},
      {"bst", kBst},
      {"setadd", kSetAdd},
  };
  return sources;
}

Program corpusProgram(const std::string& name) {
  auto it = corpusSources().find(name);
  if (it == corpusSources().end()) throw InternalError("unknown corpus program " + name);
  return parseAndCheck(it->second);
}

namespace {

// Mutations of one statement restricted to one operator, canonical order.
std::vector<Mutation> opMutations(const Program& p, const Method& m, const Statement& s,
                                  MutOp op) {
  OperatorSet only = OperatorSet::none();
  only.enable(op);
  return statementMutations(p, m, s, only);
}

}  // namespace

Program materializeCase(const BenchmarkCase& c) {
  Program p = corpusProgram(c.programName);
  Method* m = p.findMethod(c.methodName);
  if (!m) throw InternalError("case method missing");
  for (const SeedStep& step : c.seeds) {
    Statement* target = m->findStatement(step.stmtId);
    if (!target) throw InternalError("seed statement missing");
    auto muts = opMutations(p, *m, *target, step.op);
    if (step.index < 0 || step.index >= static_cast<int>(muts.size()))
      throw InternalError("seed index out of range");
    Statement repl = muts[static_cast<size_t>(step.index)].replacement;
    repl.id = target->id;
    repl.mutGenLimit = 0;
    *target = std::move(repl);
  }
  for (Statement* s : m->allStatements()) {
    auto it = c.groundTruthBudgets.find(s->id);
    s->mutGenLimit = it == c.groundTruthBudgets.end() ? 0 : it->second;
  }
  typecheck(p);
  return p;
}

BenchmarkCase seedBugs(const std::string& programName, const std::string& methodName,
                       int bugCount, uint64_t rngSeed, const Scope& scope,
                       const OperatorSet& ops) {
  std::mt19937_64 rng(rngSeed);
  BenchmarkCase c;
  c.programName = programName;
  c.methodName = methodName;
  c.scope = scope;

  for (int attempt = 0; attempt < 200; attempt++) {
    Program p = corpusProgram(programName);
    Method* m = p.findMethod(methodName);
    if (!m) throw InternalError("no such corpus method " + methodName);
    c.seeds.clear();
    c.groundTruthBudgets.clear();
    bool ok = true;
    for (int b = 0; b < bugCount && ok; b++) {
      // statements that currently admit at least one mutation
      std::vector<const Statement*> eligible;
      for (auto* s : m->allStatements())
        if (!statementMutations(p, *m, *s, ops).empty()) eligible.push_back(s);
      if (eligible.empty()) {
        ok = false;
        break;
      }
      const Statement* pick =
          eligible[static_cast<size_t>(rng() % eligible.size())];
      Statement before = *pick;
      auto all = statementMutations(p, *m, *pick, ops);
      const Mutation& mu = all[static_cast<size_t>(rng() % all.size())];
      // reversibility: the original statement must be reachable back
      Statement mutated = mu.replacement;
      mutated.id = before.id;
      bool reversible = false;
      {
        Statement probe = mutated;
        Method tmp = *m;
        *tmp.findStatement(before.id) = probe;
        try {
          typecheckMethod(p, tmp);
        } catch (const TypeError&) {
          ok = false;
          break;
        }
        std::string beforeKey = canonicalKey(before);
        for (auto& rev : statementMutations(p, tmp, *tmp.findStatement(before.id), ops)) {
          if (canonicalKey(rev.replacement) == beforeKey) {
            reversible = true;
            break;
          }
        }
      }
      if (!reversible) {
        c.redraws++;
        b--;  // redraw this bug
        if (c.redraws > 500) {
          ok = false;
          break;
        }
        continue;
      }
      // find the mutation's index within its operator's list for the record
      auto inOp = opMutations(p, *m, *pick, mu.op);
      int idx = -1;
      for (size_t i = 0; i < inOp.size(); i++)
        if (canonicalKey(inOp[i].replacement) == canonicalKey(mu.replacement))
          idx = static_cast<int>(i);
      if (idx < 0) throw InternalError("seed mutation not found in its operator list");
      c.seeds.push_back(SeedStep{before.id, mu.op, idx});
      c.groundTruthBudgets[before.id]++;
      Statement applied = mu.replacement;
      applied.id = before.id;
      applied.mutGenLimit = 0;
      *m->findStatement(before.id) = std::move(applied);
      typecheckMethod(p, *m);
    }
    if (!ok) {
      c.redraws++;
      c.seeds.clear();
      c.groundTruthBudgets.clear();
      continue;
    }
    // must actually be faulty at the case scope
    Program seeded = materializeCase(c);
    DetectResult d = detect(seeded, *seeded.findMethod(methodName), scope);
    if (d.faulty()) {
      c.name = programName + "." + methodName + "_b" + std::to_string(bugCount) + "_s" +
               std::to_string(rngSeed);
      return c;
    }
    c.redraws++;
    c.seeds.clear();
    c.groundTruthBudgets.clear();
  }
  throw InternalError("seedBugs: generator exhausted its attempts (method " + methodName + ")");
}

std::vector<BenchmarkCase> corpusManifest(int maxBugs, int draws) {
  const std::pair<const char*, const char*> methods[] = {
      {"sll", "contains"}, {"sll", "getNode"}, {"sll", "insert"},
      {"bst", "contains"}, {"bst", "insert"},  {"setadd", "add"},
  };
  Scope scope;  // 3 objects, width 8, unroll 3
  std::vector<BenchmarkCase> out;
  for (auto& [prog, method] : methods)
    for (int bugs = 1; bugs <= maxBugs; bugs++)
      for (int draw = 0; draw < draws; draw++) {
        uint64_t seed = fnv1a64(std::string(prog) + "." + method) + 977u * static_cast<uint64_t>(bugs) +
                        131u * static_cast<uint64_t>(draw);
        out.push_back(seedBugs(prog, method, bugs, seed, scope));
      }
  return out;
}

std::string caseJson(const BenchmarkCase& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["program"] = c.programName;
  j["method"] = c.methodName;
  nlohmann::json seeds = nlohmann::json::array();
  for (auto& s : c.seeds)
    seeds.push_back({{"stmt", s.stmtId}, {"op", mutOpName(s.op)}, {"index", s.index}});
  j["seeds"] = seeds;
  nlohmann::json budgets = nlohmann::json::object();
  for (auto& [id, b] : c.groundTruthBudgets) budgets[std::to_string(id)] = b;
  j["budgets"] = budgets;
  j["scope"] = {{"objects", c.scope.objectsPerRecord},
                {"intWidth", c.scope.intWidth},
                {"unroll", c.scope.unrollBound}};
  j["redraws"] = c.redraws;
  return j.dump(2);
}

void exportCorpus(const std::string& dir, const std::vector<BenchmarkCase>& cases) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (auto& [name, src] : corpusSources()) {
    std::ofstream out(fs::path(dir) / (name + ".imp"));
    out << src;
  }
  for (auto& c : cases) {
    Program seeded = materializeCase(c);
    std::ofstream imp(fs::path(dir) / (c.name + ".imp"));
    imp << prettyPrint(seeded);
    std::ofstream js(fs::path(dir) / (c.name + ".case.json"));
    js << caseJson(c) << "\n";
  }
}

}  // namespace stitch
