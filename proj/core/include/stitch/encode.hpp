#pragma once

#include <map>
#include <string>
#include <vector>

#include "stitch/ast.hpp"
#include "stitch/circuit.hpp"
#include "stitch/cnf.hpp"
#include "stitch/interp.hpp"
#include "stitch/scope.hpp"
#include "stitch/unroll.hpp"
#include "stitch/value.hpp"

namespace stitch {

// Originating conjunct of a clause group. Code groups carry the statement id
// and replica index; contract groups carry neither. Structural input-domain
// clauses (slot liveness shape, reference ranges, the constant anchor) are
// untagged and always on.
enum class ConjunctKind { Requires, InvariantPre, Code, InvariantPost, Ensures };

struct GroupKey {
  ConjunctKind kind = ConjunctKind::Code;
  int stmtId = -1;
  int replica = -1;
};

// Bit positions of the symbolic initial state, for decoding and blocking.
struct InputLayout {
  Bv receiver;
  std::vector<Bv> args;
  std::map<std::string, std::vector<Bit>> live;                    // record -> slot bit
  std::map<std::string, std::map<std::string, std::vector<Bv>>> fields;  // record -> field -> slot
};

// Fresh symbolic values introduced by variabilization; they become
// unconstrained extra inputs ranging over their type's full in-scope domain.
struct FreshLedger {
  struct Entry {
    std::string note;
    Type type;
    int width = 0;          // 0: derive from type and scope
    int64_t maxValue = -1;  // >= 0: unsigned range constraint (selectors)
  };
  std::vector<Entry> entries;
  int add(std::string note, Type t, int width = 0, int64_t maxValue = -1) {
    entries.push_back(Entry{std::move(note), std::move(t), width, maxValue});
    return static_cast<int>(entries.size()) - 1;
  }
};

struct Encoding {
  Cnf cnf;
  std::vector<GroupKey> groupKeys;  // GroupId -> key
  InputLayout layout;
  const Program* program = nullptr;
  Method method;  // copy: encodings outlive transient mutants
  Scope scope;

  std::vector<GroupId> groupsOfKind(ConjunctKind k) const;
  std::vector<GroupId> allGroups() const;
};

struct EncodeOptions {
  enum class Goal {
    FindViolation,  // sat iff an in-scope pre-state leads to a contract violation
    FindPassing     // sat iff some completion satisfies the (positive) post
  };
  Goal goal = Goal::FindViolation;
  const Input* pin = nullptr;      // pin the initial state to a concrete input
  bool assertContractPre = true;   // requires/invariant conjuncts at entry
  const FreshLedger* ledger = nullptr;
  // Keep gate sharing within single clause groups so per-group core queries
  // havoc exactly one conjunct; costs encoding size. Used for localization.
  bool isolateGroups = false;
};

// Core translation: loop-free guarded single-assignment over bitvectors and a
// bounded slot heap. `unrolled` must come from `m` (possibly variabilized).
Encoding encodeRun(const Program& p, const Method& m, const UnrolledMethod& unrolled,
                   const Scope& s, const EncodeOptions& opts);

// Conjuncts 1-4 with the negated invariant-and-ensures final conjunct:
// satisfiable iff some in-scope input satisfying pre ends (within scope) in a
// violating state.
Encoding encodeCorrectness(const Program& p, const Method& m, const Scope& s);

// Positive-post encoding with the input pinned; guaranteed unsat when `cex`
// replays to a violation (checked; throws InternalError otherwise). Unsat
// cores over the Code groups blame statements.
Encoding encodeTraceRefutation(const Program& p, const Method& m, const Input& cex,
                               const Scope& s);

struct DecodedCex {
  Input input;
  ExecResult replay;
};

// Reads the initial state off a Sat model. decodeModel replays the input
// through the interpreter and insists on a violation (hard postcondition).
Input extractInput(const Encoding& e, const std::vector<bool>& model);
DecodedCex decodeModel(const Program& p, const Encoding& e, const std::vector<bool>& model);

// Adds a single always-on clause excluding exactly this initial state.
void blockInput(Encoding& e, const Input& in);

}  // namespace stitch
