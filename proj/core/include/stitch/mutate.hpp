#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stitch/ast.hpp"
#include "stitch/mutation_vector.hpp"
#include "stitch/unroll.hpp"

namespace stitch {

// Intra-statement mutation operators. AORB arithmetic replacement, ROR
// relational replacement, COR connector replacement, COI/COD negation
// insertion/deletion, AOIU/AODU unary-minus insertion/deletion, CRCR integer
// literal replacement, PRV navigation-chain edits, VRR variable replacement.
enum class MutOp { Aodu, Aoiu, Aorb, Cod, Coi, Cor, Crcr, Prv, Ror, Vrr };

const char* mutOpName(MutOp op);

struct OperatorSet {
  uint32_t mask = 0x3FF;  // all ten

  static OperatorSet all() { return OperatorSet{}; }
  static OperatorSet none() { return OperatorSet{0}; }
  bool enabled(MutOp op) const { return mask & (1u << static_cast<int>(op)); }
  void enable(MutOp op) { mask |= (1u << static_cast<int>(op)); }
  void disable(MutOp op) { mask &= ~(1u << static_cast<int>(op)); }
  // comma-separated names, case-insensitive ("aorb,ror,prv")
  static std::optional<OperatorSet> parse(const std::string& csv);
  std::string str() const;
};

struct Mutation {
  int stmtId = 0;
  MutOp op = MutOp::Aorb;
  std::string note;       // e.g. "+ -> -" or "drop .next"
  Statement replacement;  // id/budget fixed up at apply time
};

// The applicable mutations of one (typed) statement in canonical order:
// operator name, then expression position preorder (assignment targets
// first), then replacement token order. Duplicates and identity results are
// dropped. The statement's own budget is not consulted.
std::vector<Mutation> statementMutations(const Program& p, const Method& m, const Statement& s,
                                         const OperatorSet& ops);

// Per-statement lists for every statement with mutGenLimit > 0 (empty list
// for mutable statements no operator applies to).
std::map<int, std::vector<Mutation>> obtainMutants(const Program& p, const Method& m,
                                                   const OperatorSet& ops);

// Canonical identity of a mutant: structural hash excluding statement ids and
// remaining budgets; two derivation paths to the same code agree.
struct MutantId {
  uint64_t digest = 0;
  std::string canonical;
  uint64_t baseDigest = 0;   // provenance: method it was derived from
  std::string viaVector;     // provenance: the applied vector

  bool operator==(const MutantId& o) const { return canonical == o.canonical; }
};

MutantId mutantHash(const Method& m);

// Applies one mutation vector: position i (bottom-up order) selects the
// j_i-th mutation of statement orderBottomUp[i]; 0 leaves it alone. Mutated
// statements keep their id and lose one budget unit. The result typechecks
// (throws InternalError otherwise -- a catalog bug).
Method applyVector(const Program& p, const Method& m,
                   const std::map<int, std::vector<Mutation>>& lists,
                   const std::vector<int>& orderBottomUp, const MutationVector& v);

// Assignment targets reachable by mutating `s` once (plus its own target):
// what a sound write abstraction of this statement must cover.
std::vector<UnrolledStmt::WriteForm> writeTargetForms(const Program& p, const Method& m,
                                                      const Statement& s, const OperatorSet& ops);

}  // namespace stitch
