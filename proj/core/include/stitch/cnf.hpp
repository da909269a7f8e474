#pragma once

#include <cstdint>
#include <vector>

namespace stitch {

using Var = int;  // 0-based

struct Lit {
  int x = -2;  // var << 1 | sign; sign bit set means negated

  Lit() = default;
  static Lit make(Var v, bool neg = false) {
    Lit l;
    l.x = v * 2 + (neg ? 1 : 0);
    return l;
  }
  static Lit fromCode(int code) {
    Lit l;
    l.x = code;
    return l;
  }
  static Lit pos(Var v) { return make(v, false); }
  static Lit neg(Var v) { return make(v, true); }

  Var var() const { return x >> 1; }
  bool sign() const { return x & 1; }  // true: negated
  Lit operator~() const {
    Lit l;
    l.x = x ^ 1;
    return l;
  }
  int toDimacs() const { return sign() ? -(var() + 1) : var() + 1; }

  bool operator==(const Lit& o) const { return x == o.x; }
  bool operator!=(const Lit& o) const { return x != o.x; }
  bool operator<(const Lit& o) const { return x < o.x; }
};

using GroupId = int;
constexpr GroupId kNoGroup = -1;

// Clause database with optional per-clause group tags. Groups drive
// assumption-selector based unsat cores; untagged clauses are always on.
struct Cnf {
  int numVars = 0;
  std::vector<std::vector<Lit>> clauses;
  std::vector<GroupId> clauseGroups;

  Var newVar() { return numVars++; }

  void add(std::vector<Lit> c, GroupId g = kNoGroup) {
    clauses.push_back(std::move(c));
    clauseGroups.push_back(g);
  }

  // Distinct group ids in ascending order (kNoGroup excluded).
  std::vector<GroupId> groupIds() const;
  size_t clauseCount() const { return clauses.size(); }
};

}  // namespace stitch
