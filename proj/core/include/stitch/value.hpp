#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stitch/ast.hpp"

namespace stitch {

// Runtime value. Refs use 0 for null and k for slot k-1 of the field's record
// type; the record is known from context (variable/field static types).
struct Value {
  TypeKind kind = TypeKind::Int;
  int64_t v = 0;  // int: signed value (already wrapped); bool: 0/1; ref: 0=null, k=slot k-1

  static Value intV(int64_t x) { return {TypeKind::Int, x}; }
  static Value boolV(bool b) { return {TypeKind::Bool, b ? 1 : 0}; }
  static Value refV(int64_t slotPlus1) { return {TypeKind::Ref, slotPlus1}; }
  static Value nullV() { return {TypeKind::Ref, 0}; }

  bool isNullRef() const { return kind == TypeKind::Ref && v == 0; }
  bool operator==(const Value& o) const { return kind == o.kind && v == o.v; }
};

// Wraps x to a signed w-bit two's-complement value.
int64_t wrapToWidth(int64_t x, int width);

struct HeapSlot {
  bool live = false;
  std::map<std::string, Value> fields;  // field name -> value
};

// Per-record-type slot arrays, all of the same configured size (the scope's
// object bound). Slots never die; `new` revives the lowest dead slot.
struct ConcreteHeap {
  std::map<std::string, std::vector<HeapSlot>> objects;  // record name -> slots

  static ConcreteHeap empty(const Program& p, int slotsPerRecord, int intWidth);
  int slotCount(const std::string& record) const;
  int liveCount(const std::string& record) const;
  // Lowest dead slot index or -1 when exhausted.
  int lowestDeadSlot(const std::string& record) const;
};

// Default value for a declared type: 0, false or null.
Value defaultValue(const Type& t);

struct Input {
  Value receiver = Value::nullV();  // meaningful only for receiver-bearing methods
  std::vector<Value> args;
  ConcreteHeap heap;

  bool operator==(const Input& o) const;
};

// Canonical JSON form (slot-indexed heap, alphabetical keys). Equal strings
// iff equal inputs; used for pool dedup and report attachments.
std::string canonicalInputJson(const Input& in);
Input inputFromJson(const Program& p, const Method& m, const std::string& json);

}  // namespace stitch
