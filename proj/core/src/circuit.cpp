#include "stitch/circuit.hpp"

#include "stitch/diagnostics.hpp"

namespace stitch {

int bitsForRange(int64_t maxValue) {
  int w = 1;
  while ((1ll << w) - 1 < maxValue) w++;
  return w;
}

CircuitBuilder::CircuitBuilder(Cnf& f) : f_(f) {
  if (f_.numVars != 0) throw InternalError("CircuitBuilder needs a fresh Cnf");
  f_.newVar();                      // var 0: the constant anchor
  f_.add({Lit::pos(0)}, kNoGroup);  // always on
}

Bit CircuitBuilder::freshBit() { return Lit::pos(f_.newVar()); }

void CircuitBuilder::addClause(std::vector<Bit> lits) {
  std::vector<Lit> out;
  for (Bit b : lits) {
    if (isTrue(b)) return;  // satisfied
    if (isFalse(b)) continue;
    out.push_back(b);
  }
  f_.add(std::move(out), group_);  // empty clause = intentional contradiction
}

namespace {
uint64_t gateKey(int tag, int a, int b, int c = -1) {
  uint64_t h = 1469598103934665603ull;
  for (uint64_t part : {static_cast<uint64_t>(tag), static_cast<uint64_t>(a) + 1,
                        static_cast<uint64_t>(b) + 1, static_cast<uint64_t>(c) + 1}) {
    h ^= part;
    h *= 1099511628211ull;
  }
  return h;
}
}  // namespace

Bit CircuitBuilder::mkAnd(Bit a, Bit b) {
  if (isFalse(a) || isFalse(b)) return falseBit();
  if (isTrue(a)) return b;
  if (isTrue(b)) return a;
  if (a == b) return a;
  if (a == ~b) return falseBit();
  if (b.x < a.x) std::swap(a, b);
  uint64_t key = gateKey(1, a.x, b.x);
  auto it = gateCache_.find(key);
  if (it != gateCache_.end()) return Lit::fromCode(it->second);
  Bit z = freshBit();
  addClause({~z, a});
  addClause({~z, b});
  addClause({~a, ~b, z});
  gateCache_.emplace(key, z.x);
  return z;
}

Bit CircuitBuilder::mkOr(Bit a, Bit b) { return ~mkAnd(~a, ~b); }

Bit CircuitBuilder::mkXor(Bit a, Bit b) {
  if (isConst(a) && isConst(b)) return constBit(isTrue(a) != isTrue(b));
  if (isTrue(a)) return ~b;
  if (isFalse(a)) return b;
  if (isTrue(b)) return ~a;
  if (isFalse(b)) return a;
  if (a == b) return falseBit();
  if (a == ~b) return trueBit();
  // normalize: positive operands, ordered; sign folds into the output
  bool flip = false;
  if (a.sign()) {
    a = ~a;
    flip = !flip;
  }
  if (b.sign()) {
    b = ~b;
    flip = !flip;
  }
  if (b.x < a.x) std::swap(a, b);
  uint64_t key = gateKey(2, a.x, b.x);
  auto it = gateCache_.find(key);
  if (it != gateCache_.end()) {
    Bit z = Lit::fromCode(it->second);
    return flip ? ~z : z;
  }
  Bit z = freshBit();
  addClause({~z, a, b});
  addClause({~z, ~a, ~b});
  addClause({z, ~a, b});
  addClause({z, a, ~b});
  gateCache_.emplace(key, z.x);
  return flip ? ~z : z;
}

Bit CircuitBuilder::mkIte(Bit c, Bit t, Bit e) {
  if (isTrue(c)) return t;
  if (isFalse(c)) return e;
  if (t == e) return t;
  if (isTrue(t)) return mkOr(c, e);
  if (isFalse(t)) return mkAnd(~c, e);
  if (isTrue(e)) return mkOr(~c, t);
  if (isFalse(e)) return mkAnd(c, t);
  if (c.sign()) {
    c = ~c;
    std::swap(t, e);
  }
  if (t == ~e) return ~mkXor(c, t);
  if (c == t) return mkOr(c, e);   // c ? c : e
  if (c == ~t) return mkAnd(~c, e);
  if (c == e) return mkAnd(c, t);  // c ? t : c
  if (c == ~e) return mkOr(~c, t);
  uint64_t key = gateKey(3, c.x, t.x, e.x);
  auto it = gateCache_.find(key);
  if (it != gateCache_.end()) return Lit::fromCode(it->second);
  Bit z = freshBit();
  addClause({~z, ~c, t});
  addClause({~z, c, e});
  addClause({z, ~c, ~t});
  addClause({z, c, ~e});
  gateCache_.emplace(key, z.x);
  return z;
}

Bit CircuitBuilder::mkAndList(const std::vector<Bit>& bs) {
  Bit acc = trueBit();
  for (Bit b : bs) acc = mkAnd(acc, b);
  return acc;
}

Bit CircuitBuilder::mkOrList(const std::vector<Bit>& bs) {
  Bit acc = falseBit();
  for (Bit b : bs) acc = mkOr(acc, b);
  return acc;
}

Bv CircuitBuilder::constBv(int64_t value, int width) const {
  Bv out;
  for (int i = 0; i < width; i++) out.push_back(constBit((value >> i) & 1));
  return out;
}

Bv CircuitBuilder::freshBv(int width) {
  Bv out;
  for (int i = 0; i < width; i++) out.push_back(freshBit());
  return out;
}

Bv CircuitBuilder::iteBv(Bit c, const Bv& a, const Bv& b) {
  if (a.size() != b.size()) throw InternalError("iteBv width mismatch");
  Bv out;
  for (size_t i = 0; i < a.size(); i++) out.push_back(mkIte(c, a[i], b[i]));
  return out;
}

Bit CircuitBuilder::eqBv(const Bv& a, const Bv& b) {
  if (a.size() != b.size()) throw InternalError("eqBv width mismatch");
  Bit acc = trueBit();
  for (size_t i = 0; i < a.size(); i++) acc = mkAnd(acc, ~mkXor(a[i], b[i]));
  return acc;
}

Bit CircuitBuilder::eqConst(const Bv& a, int64_t value) {
  Bit acc = trueBit();
  for (size_t i = 0; i < a.size(); i++) {
    Bit want = ((value >> i) & 1) ? a[i] : ~a[i];
    acc = mkAnd(acc, want);
  }
  return acc;
}

void CircuitBuilder::forbidValue(const Bv& a, int64_t value) {
  std::vector<Bit> clause;
  for (size_t i = 0; i < a.size(); i++) clause.push_back(((value >> i) & 1) ? ~a[i] : a[i]);
  addClause(std::move(clause));
}

Bv CircuitBuilder::addBv(const Bv& a, const Bv& b) {
  if (a.size() != b.size()) throw InternalError("addBv width mismatch");
  Bv out;
  Bit carry = falseBit();
  for (size_t i = 0; i < a.size(); i++) {
    Bit axb = mkXor(a[i], b[i]);
    out.push_back(mkXor(axb, carry));
    carry = mkOr(mkAnd(a[i], b[i]), mkAnd(carry, axb));
  }
  return out;  // wraparound: carry out dropped
}

Bv CircuitBuilder::subBv(const Bv& a, const Bv& b) {
  Bv out;
  Bit carry = trueBit();  // a + ~b + 1
  for (size_t i = 0; i < a.size(); i++) {
    Bit nb = ~b[i];
    Bit axb = mkXor(a[i], nb);
    out.push_back(mkXor(axb, carry));
    carry = mkOr(mkAnd(a[i], nb), mkAnd(carry, axb));
  }
  return out;
}

Bv CircuitBuilder::negBv(const Bv& a) { return subBv(constBv(0, static_cast<int>(a.size())), a); }

Bv CircuitBuilder::mulBv(const Bv& a, const Bv& b) {
  const int w = static_cast<int>(a.size());
  Bv acc = constBv(0, w);
  for (int i = 0; i < w; i++) {
    // (b << i) masked by a[i], truncated to w bits
    Bv partial = constBv(0, w);
    for (int j = 0; i + j < w; j++) partial[static_cast<size_t>(i + j)] = mkAnd(a[static_cast<size_t>(i)], b[static_cast<size_t>(j)]);
    acc = addBv(acc, partial);
  }
  return acc;
}

std::pair<Bv, Bv> CircuitBuilder::udivmod(const Bv& a, const Bv& b) {
  const int w = static_cast<int>(a.size());
  // One extra bit so the shifted remainder compares safely.
  Bv rem = constBv(0, w + 1);
  Bv bExt = b;
  bExt.push_back(falseBit());
  Bv quo = constBv(0, w);
  for (int i = w - 1; i >= 0; i--) {
    // rem = (rem << 1) | a[i]
    Bv shifted;
    shifted.push_back(a[static_cast<size_t>(i)]);
    for (int j = 0; j < w; j++) shifted.push_back(rem[static_cast<size_t>(j)]);
    Bit ge = ~ult(shifted, bExt);
    Bv reduced = subBv(shifted, bExt);
    rem = iteBv(ge, reduced, shifted);
    quo[static_cast<size_t>(i)] = ge;
  }
  rem.pop_back();
  return {quo, rem};
}

std::pair<Bv, Bv> CircuitBuilder::sdivmod(const Bv& a, const Bv& b) {
  const int w = static_cast<int>(a.size());
  Bit signA = a[static_cast<size_t>(w - 1)];
  Bit signB = b[static_cast<size_t>(w - 1)];
  Bv ua = iteBv(signA, negBv(a), a);
  Bv ub = iteBv(signB, negBv(b), b);
  auto [uq, ur] = udivmod(ua, ub);
  Bit qNeg = mkXor(signA, signB);
  Bv q = iteBv(qNeg, negBv(uq), uq);
  Bv r = iteBv(signA, negBv(ur), ur);
  return {q, r};
}

Bit CircuitBuilder::ult(const Bv& a, const Bv& b) {
  if (a.size() != b.size()) throw InternalError("ult width mismatch");
  Bit lt = falseBit();
  for (size_t i = 0; i < a.size(); i++)  // LSB to MSB; higher bits override
    lt = mkIte(mkXor(a[i], b[i]), mkAnd(~a[i], b[i]), lt);
  return lt;
}

Bit CircuitBuilder::slt(const Bv& a, const Bv& b) {
  // Flip sign bits, compare unsigned.
  Bv a2 = a, b2 = b;
  a2.back() = ~a2.back();
  b2.back() = ~b2.back();
  return ult(a2, b2);
}

Bit CircuitBuilder::sle(const Bv& a, const Bv& b) { return ~slt(b, a); }

bool CircuitBuilder::bitValue(Bit b, const std::vector<bool>& model) {
  if (b.var() == 0) return !b.sign();
  bool v = model[static_cast<size_t>(b.var())];
  return b.sign() ? !v : v;
}

int64_t CircuitBuilder::unsignedValue(const Bv& a, const std::vector<bool>& model) {
  int64_t out = 0;
  for (size_t i = 0; i < a.size(); i++)
    if (bitValue(a[i], model)) out |= (1ll << i);
  return out;
}

int64_t CircuitBuilder::signedValue(const Bv& a, const std::vector<bool>& model) {
  int64_t u = unsignedValue(a, model);
  const int w = static_cast<int>(a.size());
  if (u & (1ll << (w - 1))) u -= (1ll << w);
  return u;
}

}  // namespace stitch
