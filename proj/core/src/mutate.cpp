#include "stitch/mutate.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "stitch/diagnostics.hpp"
#include "stitch/typecheck.hpp"

namespace stitch {

const char* mutOpName(MutOp op) {
  switch (op) {
    case MutOp::Aodu: return "AODU";
    case MutOp::Aoiu: return "AOIU";
    case MutOp::Aorb: return "AORB";
    case MutOp::Cod: return "COD";
    case MutOp::Coi: return "COI";
    case MutOp::Cor: return "COR";
    case MutOp::Crcr: return "CRCR";
    case MutOp::Prv: return "PRV";
    case MutOp::Ror: return "ROR";
    case MutOp::Vrr: return "VRR";
  }
  return "?";
}

std::optional<OperatorSet> OperatorSet::parse(const std::string& csv) {
  OperatorSet out = OperatorSet::none();
  std::string cur;
  auto flush = [&]() -> bool {
    if (cur.empty()) return true;
    std::string up;
    for (char c : cur) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    for (int i = 0; i < 10; i++) {
      MutOp op = static_cast<MutOp>(i);
      if (up == mutOpName(op)) {
        out.enable(op);
        cur.clear();
        return true;
      }
    }
    if (up == "ALL") {
      out = OperatorSet::all();
      cur.clear();
      return true;
    }
    return false;
  };
  for (char c : csv) {
    if (c == ',' || c == ' ') {
      if (!flush()) return std::nullopt;
    } else {
      cur.push_back(c);
    }
  }
  if (!flush()) return std::nullopt;
  return out;
}

std::string OperatorSet::str() const {
  std::string out;
  for (int i = 0; i < 10; i++) {
    MutOp op = static_cast<MutOp>(i);
    if (!enabled(op)) continue;
    if (!out.empty()) out += ",";
    out += mutOpName(op);
  }
  return out;
}

namespace {

// receiver, params, locals in declaration order
std::vector<Param> envOf(const Method& m) {
  std::vector<Param> out;
  if (m.receiver) out.push_back(*m.receiver);
  for (auto& p : m.params) out.push_back(p);
  for (auto& l : m.locals) out.push_back(l);
  return out;
}

const Type* envType(const std::vector<Param>& env, const std::string& name) {
  for (auto& p : env)
    if (p.name == name) return &p.type;
  return nullptr;
}

std::optional<Type> chainType(const Program& p, Type cur, const std::vector<std::string>& fields) {
  for (auto& f : fields) {
    if (!cur.isRef() || cur.record.empty()) return std::nullopt;
    const RecordDecl* rd = p.findRecord(cur.record);
    if (!rd) return std::nullopt;
    const Param* fp = rd->findField(f);
    if (!fp) return std::nullopt;
    cur = fp->type;
  }
  return cur;
}

struct ExprPos {
  std::vector<int> path;
  const Expr* node;
  const Expr* parent;  // nullptr at the root
};

void collectPositions(const Expr& e, const Expr* parent, std::vector<int>& cur,
                      std::vector<ExprPos>& out) {
  out.push_back(ExprPos{cur, &e, parent});
  for (size_t i = 0; i < e.kids.size(); i++) {
    cur.push_back(static_cast<int>(i));
    collectPositions(e.kids[i], &e, cur, out);
    cur.pop_back();
  }
}

std::vector<ExprPos> positionsOf(const Expr& root) {
  std::vector<ExprPos> out;
  std::vector<int> cur;
  collectPositions(root, nullptr, cur, out);
  return out;
}

Expr replaceAt(const Expr& root, const std::vector<int>& path, size_t idx, const Expr& sub) {
  if (idx == path.size()) return sub;
  Expr out = root;
  out.kids[static_cast<size_t>(path[idx])] =
      replaceAt(root.kids[static_cast<size_t>(path[idx])], path, idx + 1, sub);
  return out;
}

Expr intLiteral(int64_t v) {
  if (v >= 0) return Expr::intLit(v);
  return Expr::unary(UnOp::Neg, Expr::intLit(-v));
}

class Gen {
 public:
  Gen(const Program& p, const Method& m, const Statement& s, const OperatorSet& ops)
      : p_(p), m_(m), s_(s), ops_(ops), env_(envOf(m)) {
    originalKey_ = canonicalKey(s);
  }

  std::vector<Mutation> run() {
    static const MutOp order[] = {MutOp::Aodu, MutOp::Aoiu, MutOp::Aorb, MutOp::Cod, MutOp::Coi,
                                  MutOp::Cor,  MutOp::Crcr, MutOp::Prv,  MutOp::Ror, MutOp::Vrr};
    for (MutOp op : order) {
      if (!ops_.enabled(op)) continue;
      switch (s_.kind) {
        case StmtKind::VarAssign:
          lhsVarMutations(op);
          overExpr(op, s_.value, [&](Expr e) {
            Statement r = s_;
            r.value = std::move(e);
            return r;
          });
          break;
        case StmtKind::FieldAssign:
          lhsFieldMutations(op);
          overExpr(op, s_.value, [&](Expr e) {
            Statement r = s_;
            r.value = std::move(e);
            return r;
          });
          break;
        case StmtKind::If:
        case StmtKind::While:
          overExpr(op, s_.cond, [&](Expr e) {
            Statement r = s_;
            r.cond = std::move(e);
            return r;
          });
          break;
        case StmtKind::Return:
          if (s_.hasValue)
            overExpr(op, s_.value, [&](Expr e) {
              Statement r = s_;
              r.value = std::move(e);
              return r;
            });
          break;
        case StmtKind::New:
        case StmtKind::Skip:
          break;
      }
    }
    return std::move(out_);
  }

 private:
  void emit(MutOp op, std::string note, Statement repl) {
    repl.id = 0;
    repl.mutGenLimit = 0;  // both are re-established at apply time
    std::string key = canonicalKey(repl);
    if (key == originalKey_) return;  // identity
    if (!seen_.insert(key).second) return;
    Mutation mu;
    mu.stmtId = s_.id;
    mu.op = op;
    mu.note = std::move(note);
    mu.replacement = std::move(repl);
    out_.push_back(std::move(mu));
  }

  // ---- assignment-target mutations ----

  void lhsVarMutations(MutOp op) {
    const Type* xt = envType(env_, s_.var);
    if (!xt) return;
    if (op == MutOp::Vrr) {
      for (auto& cand : env_) {
        if (cand.name == s_.var || cand.name == "this") continue;
        if (!(cand.type == *xt)) continue;
        Statement r = s_;
        r.var = cand.name;
        emit(op, "target " + s_.var + " -> " + cand.name, std::move(r));
      }
    } else if (op == MutOp::Prv && xt->isRef()) {
      const RecordDecl* rd = p_.findRecord(xt->record);
      for (auto& f : rd->fields) {
        if (!(f.type == *xt)) continue;  // location type must be preserved
        Statement r = Statement::fieldAssign(Expr::var(s_.var), f.name, s_.value);
        emit(op, "target " + s_.var + " -> " + s_.var + "." + f.name, std::move(r));
      }
    }
  }

  void lhsFieldMutations(MutOp op) {
    const std::string baseVar = s_.lhsBase.kind == ExprKind::Var ? s_.lhsBase.name : s_.lhsBase.name;
    const Type* bt = envType(env_, baseVar);
    if (!bt) return;
    std::vector<std::string> chain;
    if (s_.lhsBase.kind == ExprKind::Nav) chain = s_.lhsBase.fields;
    chain.push_back(s_.field);
    auto tf = chainType(p_, *bt, chain);
    if (!tf) return;

    if (op == MutOp::Vrr) {
      for (auto& cand : env_) {
        if (cand.name == baseVar) continue;
        if (!(cand.type == *bt)) continue;
        Statement r = s_;
        if (r.lhsBase.kind == ExprKind::Var)
          r.lhsBase = Expr::var(cand.name);
        else
          r.lhsBase = Expr::nav(cand.name, r.lhsBase.fields);
        emit(op, "target base " + baseVar + " -> " + cand.name, std::move(r));
      }
    } else if (op == MutOp::Prv) {
      for (auto& [newChain, note] : chainEdits(*bt, chain, *tf)) {
        if (newChain.empty()) {
          if (baseVar == "this") continue;  // `this` is not assignable
          emit(op, "target " + note, Statement::assign(baseVar, s_.value));
        } else {
          std::vector<std::string> prefix(newChain.begin(), newChain.end() - 1);
          Expr base = prefix.empty() ? Expr::var(baseVar) : Expr::nav(baseVar, prefix);
          emit(op, "target " + note,
               Statement::fieldAssign(std::move(base), newChain.back(), s_.value));
        }
      }
    }
  }

  // ---- expression mutations ----

  void overExpr(MutOp op, const Expr& root, const std::function<Statement(Expr)>& build) {
    for (const ExprPos& pos : positionsOf(root)) {
      const Expr& sub = *pos.node;
      auto put = [&](Expr variant, std::string note) {
        emit(op, std::move(note), build(replaceAt(root, pos.path, 0, variant)));
      };
      switch (op) {
        case MutOp::Aodu:
          if (sub.kind == ExprKind::Unary && sub.uop == UnOp::Neg) put(sub.kids[0], "drop unary -");
          break;
        case MutOp::Aoiu:
          if (sub.type.isInt() && sub.kind != ExprKind::IntLit &&
              !(sub.kind == ExprKind::Unary && sub.uop == UnOp::Neg) &&
              !(pos.parent && pos.parent->kind == ExprKind::Unary && pos.parent->uop == UnOp::Neg))
            put(Expr::unary(UnOp::Neg, sub), "insert unary -");
          break;
        case MutOp::Aorb:
          if (sub.kind == ExprKind::Binary && isArith(sub.bop)) {
            for (BinOp to : {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod}) {
              if (to == sub.bop) continue;
              Expr v = sub;
              v.bop = to;
              put(std::move(v), std::string(binOpToken(sub.bop)) + " -> " + binOpToken(to));
            }
          }
          break;
        case MutOp::Cod:
          if (sub.kind == ExprKind::Unary && sub.uop == UnOp::Not) put(sub.kids[0], "drop !");
          break;
        case MutOp::Coi:
          if (sub.type.isBool() && !(sub.kind == ExprKind::Unary && sub.uop == UnOp::Not) &&
              !(pos.parent && pos.parent->kind == ExprKind::Unary &&
                pos.parent->uop == UnOp::Not))
            put(Expr::unary(UnOp::Not, sub), "insert !");
          break;
        case MutOp::Cor:
          if (sub.kind == ExprKind::Binary && isConnector(sub.bop)) {
            for (BinOp to : {BinOp::And, BinOp::Or, BinOp::Xor}) {
              if (to == sub.bop) continue;
              Expr v = sub;
              v.bop = to;
              put(std::move(v), std::string(binOpToken(sub.bop)) + " -> " + binOpToken(to));
            }
          }
          break;
        case MutOp::Crcr:
          if (sub.kind == ExprKind::IntLit) {
            const int64_t c = sub.intVal;
            std::vector<int64_t> cands{0, 1, -1, c + 1, c - 1, -c};
            std::set<int64_t> emitted;
            for (int64_t v : cands) {
              if (v == c || !emitted.insert(v).second) continue;
              put(intLiteral(v), std::to_string(c) + " -> " + std::to_string(v));
            }
          }
          break;
        case MutOp::Prv: prvAt(sub, pos, root, build); break;
        case MutOp::Ror:
          if (sub.kind == ExprKind::Binary &&
              (isRelational(sub.bop) || isEquality(sub.bop))) {
            bool intArgs = sub.kids[0].type.isInt();
            if (intArgs) {
              for (BinOp to : {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne}) {
                if (to == sub.bop) continue;
                Expr v = sub;
                v.bop = to;
                put(std::move(v), std::string(binOpToken(sub.bop)) + " -> " + binOpToken(to));
              }
            } else if (isEquality(sub.bop)) {
              Expr v = sub;
              v.bop = sub.bop == BinOp::Eq ? BinOp::Ne : BinOp::Eq;
              put(std::move(v), std::string(binOpToken(sub.bop)) + " -> " + binOpToken(v.bop));
            }
          }
          break;
        case MutOp::Vrr:
          if (sub.kind == ExprKind::Var) {
            for (auto& cand : env_) {
              if (cand.name == sub.name || !(cand.type == sub.type)) continue;
              Expr v = Expr::var(cand.name);
              put(std::move(v), sub.name + " -> " + cand.name);
            }
          } else if (sub.kind == ExprKind::Nav) {
            const Type* bt = envType(env_, sub.name);
            if (!bt) break;
            for (auto& cand : env_) {
              if (cand.name == sub.name || !(cand.type == *bt)) continue;
              Expr v = sub;
              v.name = cand.name;
              put(std::move(v), sub.name + " -> " + cand.name);
            }
          }
          break;
      }
    }
  }

  // All single-edit chain variants preserving the final type.
  std::vector<std::pair<std::vector<std::string>, std::string>> chainEdits(
      const Type& baseType, const std::vector<std::string>& chain, const Type& finalType) {
    std::vector<std::pair<std::vector<std::string>, std::string>> out;
    const size_t k = chain.size();
    // types[i]: type before chain[i]; types[k]: final
    std::vector<Type> types{baseType};
    for (auto& f : chain) {
      auto t = chainType(p_, types.back(), {f});
      if (!t) return out;
      types.push_back(*t);
    }
    auto valid = [&](const std::vector<std::string>& c) {
      auto t = chainType(p_, baseType, c);
      return t && *t == finalType;
    };
    // insertions
    for (size_t pos = 0; pos <= k; pos++) {
      if (!types[pos].isRef()) continue;
      const RecordDecl* rd = p_.findRecord(types[pos].record);
      if (!rd) continue;
      for (auto& g : rd->fields) {
        std::vector<std::string> c(chain.begin(), chain.begin() + static_cast<long>(pos));
        c.push_back(g.name);
        c.insert(c.end(), chain.begin() + static_cast<long>(pos), chain.end());
        if (valid(c)) out.push_back({c, "insert ." + g.name});
      }
    }
    // removals
    for (size_t i = 0; i < k; i++) {
      std::vector<std::string> c = chain;
      c.erase(c.begin() + static_cast<long>(i));
      if (c.empty()) {
        if (baseType == finalType) out.push_back({c, "drop ." + chain[i]});
      } else if (valid(c)) {
        out.push_back({c, "drop ." + chain[i]});
      }
    }
    // replacements
    for (size_t i = 0; i < k; i++) {
      if (!types[i].isRef()) continue;
      const RecordDecl* rd = p_.findRecord(types[i].record);
      if (!rd) continue;
      for (auto& g : rd->fields) {
        if (g.name == chain[i]) continue;
        std::vector<std::string> c = chain;
        c[i] = g.name;
        if (valid(c)) out.push_back({c, "." + chain[i] + " -> ." + g.name});
      }
    }
    return out;
  }

  void prvAt(const Expr& sub, const ExprPos& pos, const Expr& root,
             const std::function<Statement(Expr)>& build) {
    std::vector<std::string> chain;
    std::string base;
    Type baseType;
    if (sub.kind == ExprKind::Var && sub.type.isRef() && !sub.type.record.empty()) {
      base = sub.name;
      baseType = sub.type;
    } else if (sub.kind == ExprKind::Nav) {
      base = sub.name;
      const Type* bt = envType(env_, base);
      if (!bt) return;
      baseType = *bt;
      chain = sub.fields;
    } else {
      return;
    }
    // Nested Var inside a Nav never occurs (Nav holds its base by name), so
    // positions never double-report chains.
    auto tf = chainType(p_, baseType, chain);
    if (!tf) return;
    for (auto& [newChain, note] : chainEdits(baseType, chain, *tf)) {
      Expr v = newChain.empty() ? Expr::var(base) : Expr::nav(base, newChain);
      emit(MutOp::Prv, note, build(replaceAt(root, pos.path, 0, v)));
    }
  }

  const Program& p_;
  const Method& m_;
  const Statement& s_;
  OperatorSet ops_;
  std::vector<Param> env_;
  std::string originalKey_;
  std::set<std::string> seen_;
  std::vector<Mutation> out_;
};

}  // namespace

std::vector<Mutation> statementMutations(const Program& p, const Method& m, const Statement& s,
                                         const OperatorSet& ops) {
  return Gen(p, m, s, ops).run();
}

std::map<int, std::vector<Mutation>> obtainMutants(const Program& p, const Method& m,
                                                   const OperatorSet& ops) {
  std::map<int, std::vector<Mutation>> out;
  for (const Statement* s : m.allStatements())
    out[s->id] = s->mutGenLimit > 0 ? statementMutations(p, m, *s, ops)
                                    : std::vector<Mutation>{};
  return out;
}

MutantId mutantHash(const Method& m) {
  MutantId id;
  id.canonical = canonicalKey(m);
  id.digest = fnv1a64(id.canonical);
  return id;
}

Method applyVector(const Program& p, const Method& m,
                   const std::map<int, std::vector<Mutation>>& lists,
                   const std::vector<int>& orderBottomUp, const MutationVector& v) {
  if (v.j.size() != orderBottomUp.size())
    throw InternalError("mutation vector length mismatch");
  Method out = m;
  for (size_t i = 0; i < v.j.size(); i++) {
    int pick = v.j[i];
    if (pick == 0) continue;
    int stmtId = orderBottomUp[i];
    Statement* target = out.findStatement(stmtId);
    if (!target) throw InternalError("mutation target vanished");
    if (target->mutGenLimit < 1) throw InternalError("mutation budget exhausted");
    const auto& list = lists.at(stmtId);
    if (pick < 1 || pick > static_cast<int>(list.size()))
      throw InternalError("mutation index out of range");
    Statement repl = list[static_cast<size_t>(pick - 1)].replacement;
    repl.id = target->id;
    repl.mutGenLimit = target->mutGenLimit - 1;
    *target = std::move(repl);
  }
  typecheckMethod(p, out);  // catalog invariant: mutants typecheck
  return out;
}

std::vector<UnrolledStmt::WriteForm> writeTargetForms(const Program& p, const Method& m,
                                                      const Statement& s,
                                                      const OperatorSet& ops) {
  std::vector<UnrolledStmt::WriteForm> out;
  if (s.kind != StmtKind::VarAssign && s.kind != StmtKind::FieldAssign) return out;
  auto env = envOf(m);
  std::set<std::string> seen;
  auto addVarForm = [&](const std::string& var) {
    if (!seen.insert("v:" + var).second) return;
    UnrolledStmt::WriteForm f;
    f.isField = false;
    f.var = var;
    out.push_back(f);
  };
  auto addFieldForm = [&](const std::string& record, const std::string& field) {
    if (!seen.insert("f:" + record + "." + field).second) return;
    UnrolledStmt::WriteForm f;
    f.isField = true;
    f.record = record;
    f.field = field;
    out.push_back(f);
  };
  auto formOf = [&](const Statement& st) {
    if (st.kind == StmtKind::VarAssign) {
      addVarForm(st.var);
    } else if (st.kind == StmtKind::FieldAssign) {
      const Type* bt = envType(env, st.lhsBase.name);
      if (!bt) return;
      std::vector<std::string> prefix;
      if (st.lhsBase.kind == ExprKind::Nav) prefix = st.lhsBase.fields;
      auto owner = chainType(p, *bt, prefix);
      if (owner && owner->isRef()) addFieldForm(owner->record, st.field);
    }
  };
  formOf(s);
  for (const Mutation& mu : statementMutations(p, m, s, ops)) formOf(mu.replacement);
  return out;
}

}  // namespace stitch
