#include <nlohmann/json.hpp>

#include "stitch/diagnostics.hpp"
#include "stitch/json_io.hpp"

namespace stitch {

using nlohmann::json;

namespace {

json valueToJson(const Value& v) {
  switch (v.kind) {
    case TypeKind::Int: return json(v.v);
    case TypeKind::Bool: return json(v.v != 0);
    case TypeKind::Ref: return json{{"ref", v.v}};
    default: return json();
  }
}

Value valueFromJson(const Type& t, const json& j) {
  if (t.isInt()) return Value::intV(j.get<int64_t>());
  if (t.isBool()) return Value::boolV(j.get<bool>());
  if (t.isRef()) return Value::refV(j.at("ref").get<int64_t>());
  throw InternalError("void value in input JSON");
}

}  // namespace

std::string canonicalInputJson(const Input& in) {
  json j;
  j["receiver"] = valueToJson(in.receiver);
  json args = json::array();
  for (auto& a : in.args) args.push_back(valueToJson(a));
  j["args"] = args;
  json heap = json::object();
  for (auto& [rec, slots] : in.heap.objects) {
    json recJ = json::array();
    for (auto& s : slots) {
      json slotJ;
      slotJ["live"] = s.live;
      json fieldsJ = json::object();
      for (auto& [f, v] : s.fields) fieldsJ[f] = valueToJson(v);
      slotJ["fields"] = fieldsJ;
      recJ.push_back(slotJ);
    }
    heap[rec] = recJ;
  }
  j["heap"] = heap;
  // nlohmann::json objects keep keys sorted; dump() is canonical.
  return j.dump();
}

Input inputFromJson(const Program& p, const Method& m, const std::string& text) {
  json j = json::parse(text);
  Input in;
  if (m.receiver) in.receiver = valueFromJson(m.receiver->type, j.at("receiver"));
  const json& args = j.at("args");
  if (args.size() != m.params.size()) throw InternalError("input JSON: argument count mismatch");
  for (size_t i = 0; i < m.params.size(); i++)
    in.args.push_back(valueFromJson(m.params[i].type, args[i]));
  for (auto& r : p.records) {
    const json& recJ = j.at("heap").at(r.name);
    std::vector<HeapSlot> slots;
    for (auto& slotJ : recJ) {
      HeapSlot s;
      s.live = slotJ.at("live").get<bool>();
      for (auto& f : r.fields) s.fields[f.name] = valueFromJson(f.type, slotJ.at("fields").at(f.name));
      slots.push_back(std::move(s));
    }
    in.heap.objects[r.name] = std::move(slots);
  }
  return in;
}

}  // namespace stitch
