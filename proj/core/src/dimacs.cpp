#include "stitch/dimacs.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace stitch {

std::string exportDimacs(const Cnf& f) {
  std::ostringstream os;
  os << "p cnf " << f.numVars << " " << f.clauses.size() << "\n";
  for (auto& c : f.clauses) {
    for (Lit l : c) os << l.toDimacs() << " ";
    os << "0\n";
  }
  return os.str();
}

Cnf importDimacs(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  Cnf f;
  bool headerSeen = false;
  size_t declaredClauses = 0;
  std::vector<Lit> cur;
  while (is >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    if (tok == "p") {
      std::string kind;
      long long vars = -1, clauses = -1;
      if (!(is >> kind >> vars >> clauses) || kind != "cnf" || vars < 0 || clauses < 0)
        throw DimacsError("malformed DIMACS header");
      f.numVars = static_cast<int>(vars);
      declaredClauses = static_cast<size_t>(clauses);
      headerSeen = true;
      continue;
    }
    if (!headerSeen) throw DimacsError("literal before DIMACS header");
    long long v;
    try {
      size_t used = 0;
      v = std::stoll(tok, &used);
      if (used != tok.size()) throw DimacsError("bad literal '" + tok + "'");
    } catch (const std::exception&) {
      throw DimacsError("bad literal '" + tok + "'");
    }
    if (v == 0) {
      f.add(cur);
      cur.clear();
      continue;
    }
    long long var = v > 0 ? v : -v;
    if (var > f.numVars) throw DimacsError("literal exceeds declared variable count");
    cur.push_back(Lit::make(static_cast<Var>(var - 1), v < 0));
  }
  if (!headerSeen) throw DimacsError("missing DIMACS header");
  if (!cur.empty()) throw DimacsError("unterminated clause");
  if (f.clauses.size() != declaredClauses)
    throw DimacsError("clause count does not match header");
  return f;
}

std::string exportGroupMapJson(const Cnf& f) {
  nlohmann::json j;
  j["clauses"] = f.clauseGroups;
  return j.dump();
}

}  // namespace stitch
