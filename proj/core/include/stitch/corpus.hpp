#pragma once

#include <map>
#include <string>
#include <vector>

#include "stitch/ast.hpp"
#include "stitch/mutate.hpp"
#include "stitch/scope.hpp"

namespace stitch {

// Desk-scale benchmark programs (singly linked list, binary search tree, and
// a size-tracking set over a list). Contracts are quantifier-free with reach
// and written against the default scope (3 objects, width 8, unroll 3):
// bounded case splits are exhaustive within it.
const std::map<std::string, std::string>& corpusSources();  // name -> .imp text
Program corpusProgram(const std::string& name);

struct SeedStep {
  int stmtId = 0;
  MutOp op = MutOp::Aorb;
  int index = 0;  // position within that operator's mutations of the statement
};

struct BenchmarkCase {
  std::string name;
  std::string programName;  // key into corpusSources()
  std::string methodName;
  std::vector<SeedStep> seeds;
  std::map<int, int> groundTruthBudgets;  // statement id -> mutations applied there
  Scope scope;
  int redraws = 0;  // seeding attempts discarded (not faulty / irreversible)
};

// The seeded faulty program: seeds applied in order, ground-truth budgets
// annotated on the mutated statements (0 elsewhere).
Program materializeCase(const BenchmarkCase& c);

// Draws `bugCount` random catalog mutations (each reversible by the catalog,
// checked step by step) such that the seeded method is detected Faulty at
// `scope`. Deterministic per rngSeed; accidental-correct draws are redrawn
// and counted.
BenchmarkCase seedBugs(const std::string& programName, const std::string& methodName,
                       int bugCount, uint64_t rngSeed, const Scope& scope,
                       const OperatorSet& ops = OperatorSet::all());

// 6 methods x {1,2,3} bugs x 3 draws, deterministic. Detection runs during
// construction, so this takes a few seconds.
std::vector<BenchmarkCase> corpusManifest(int maxBugs = 3, int draws = 3);

// Writes name.imp (seeded, annotated) and name.case.json per case, plus the
// correct base programs.
void exportCorpus(const std::string& dir, const std::vector<BenchmarkCase>& cases);

std::string caseJson(const BenchmarkCase& c);

}  // namespace stitch
