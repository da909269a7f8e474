#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stitch/cnf.hpp"

namespace stitch {

// A Bit is a CNF literal; variable 0 is reserved and pinned true so that
// constants are ordinary literals.
using Bit = Lit;
using Bv = std::vector<Bit>;  // LSB first

// Tseitin-style circuit construction over a Cnf. Emitted clauses carry the
// current group tag; constant operands fold away.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(Cnf& f);

  Cnf& cnf() { return f_; }
  GroupId group() const { return group_; }
  void setGroup(GroupId g) {
    if (isolateGroups_ && g != group_) gateCache_.clear();
    group_ = g;
  }
  // When set, gates never cross group boundaries, so disabling a group in a
  // core query really havocs only that group's semantics.
  void setGroupIsolation(bool on) { isolateGroups_ = on; }

  Bit trueBit() const { return Lit::pos(0); }
  Bit falseBit() const { return Lit::neg(0); }
  Bit constBit(bool b) const { return b ? trueBit() : falseBit(); }
  bool isTrue(Bit b) const { return b == trueBit(); }
  bool isFalse(Bit b) const { return b == falseBit(); }
  bool isConst(Bit b) const { return b.var() == 0; }

  Bit freshBit();
  // Constant-aware: clauses with a true literal vanish, false literals drop.
  void addClause(std::vector<Bit> lits);
  void assertBit(Bit b) { addClause({b}); }

  Bit mkNot(Bit a) const { return ~a; }
  Bit mkAnd(Bit a, Bit b);
  Bit mkOr(Bit a, Bit b);
  Bit mkXor(Bit a, Bit b);
  Bit mkIte(Bit c, Bit t, Bit e);
  Bit mkAndList(const std::vector<Bit>& bs);
  Bit mkOrList(const std::vector<Bit>& bs);

  Bv constBv(int64_t value, int width) const;
  Bv freshBv(int width);
  Bv iteBv(Bit c, const Bv& a, const Bv& b);
  Bit eqBv(const Bv& a, const Bv& b);
  Bit eqConst(const Bv& a, int64_t value);
  // Excludes one concrete value from a vector's range.
  void forbidValue(const Bv& a, int64_t value);

  Bv addBv(const Bv& a, const Bv& b);
  Bv subBv(const Bv& a, const Bv& b);
  Bv negBv(const Bv& a);
  Bv mulBv(const Bv& a, const Bv& b);
  // Signed truncating division/remainder (wraparound two's complement);
  // the b == 0 case is the caller's trap.
  std::pair<Bv, Bv> sdivmod(const Bv& a, const Bv& b);

  Bit ult(const Bv& a, const Bv& b);
  Bit slt(const Bv& a, const Bv& b);
  Bit sle(const Bv& a, const Bv& b);

  // Model readback: value of a bit / signed value of a vector under a model.
  static bool bitValue(Bit b, const std::vector<bool>& model);
  static int64_t signedValue(const Bv& a, const std::vector<bool>& model);
  static int64_t unsignedValue(const Bv& a, const std::vector<bool>& model);

 private:
  std::pair<Bv, Bv> udivmod(const Bv& a, const Bv& b);

  Cnf& f_;
  GroupId group_ = kNoGroup;
  bool isolateGroups_ = false;
  // Structural hashing: identical gates collapse onto one variable. Keys are
  // (op tag, operand literal codes); Tseitin clauses are emitted once, under
  // the group active at first construction.
  std::unordered_map<uint64_t, int> gateCache_;
};

int bitsForRange(int64_t maxValue);  // smallest width representing 0..maxValue

}  // namespace stitch
