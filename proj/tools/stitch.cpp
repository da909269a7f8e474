// stitch: specification-based repair for Mini-IMP programs.
//
//   stitch detect   FILE --method NAME [scope flags]
//   stitch localize FILE --method NAME [scope flags] [--cex-count K]
//   stitch mutants  FILE --method NAME [--operators LIST] [--all-statements]
//   stitch repair   FILE --method NAME [scope flags] [--budget K]
//                   [--max-depth D] [--prune on|off] [--seed S]
//                   [--timeout SECS] [--report out.json]
//   stitch corpus   --out DIR [--max-bugs N] [--draws N]
//
// repair exit codes: 0 fixed, 1 not fixable, 2 timeout / non-exhaustive,
// 3 usage error, 4 internal error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "stitch/corpus.hpp"
#include "stitch/localize.hpp"
#include "stitch/parse.hpp"
#include "stitch/pretty.hpp"
#include "stitch/repair.hpp"
#include "stitch/typecheck.hpp"
#include "stitch/verify.hpp"

namespace {

using namespace stitch;

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void writeReport(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text << "\n";
}

struct ScopeFlags {
  int objects = 3;
  int intWidth = 8;
  int unroll = 3;
  Scope scope() const { return Scope{objects, intWidth, unroll}; }
  void attach(CLI::App* cmd) {
    cmd->add_option("--scope", objects, "objects per record type")->check(CLI::PositiveNumber);
    cmd->add_option("--int-width", intWidth, "signed integer bit width")
        ->check(CLI::Range(1, 16));
    cmd->add_option("--unroll", unroll, "loop unroll bound")->check(CLI::PositiveNumber);
  }
};

const Method& findMethodOrThrow(const Program& p, const std::string& name) {
  const Method* m = p.findMethod(name);
  if (!m) throw std::runtime_error("no method named '" + name + "'");
  return *m;
}

int cmdDetect(const std::string& file, const std::string& method, const Scope& scope,
              const std::string& reportPath) {
  Program p = parseAndCheck(readFile(file));
  const Method& m = findMethodOrThrow(p, method);
  DetectResult d = detect(p, m, scope);
  nlohmann::json j;
  j["method"] = method;
  j["scope"] = {{"objects", scope.objectsPerRecord},
                {"intWidth", scope.intWidth},
                {"unroll", scope.unrollBound}};
  if (d.correct()) {
    j["verdict"] = "correct";
    j["vacuous"] = d.vacuous;
    std::cout << "correct within scope" << (d.vacuous ? " (vacuously: no in-scope pre-state)" : "")
              << "\n";
  } else if (d.faulty()) {
    j["verdict"] = "faulty";
    j["counterexample"] = nlohmann::json::parse(canonicalInputJson(d.cex->input));
    j["outcome"] = runOutcomeName(d.cex->replay.outcome);
    std::cout << "faulty: " << runOutcomeName(d.cex->replay.outcome) << "\n"
              << canonicalInputJson(d.cex->input) << "\n";
  } else {
    j["verdict"] = "unknown";
    std::cout << "unknown (solver budget exhausted)\n";
  }
  writeReport(reportPath, j.dump(2));
  return 0;
}

int cmdLocalize(const std::string& file, const std::string& method, const Scope& scope,
                int cexCount, double threshold, const std::string& reportPath) {
  Program p = parseAndCheck(readFile(file));
  const Method& m = findMethodOrThrow(p, method);
  auto cexs = collectCounterexamples(p, m, scope, cexCount);
  if (cexs.empty()) {
    std::cout << "no failing inputs found; nothing to localize\n";
    writeReport(reportPath, "{}");
    return 0;
  }
  std::vector<Input> inputs;
  for (auto& c : cexs) inputs.push_back(c.input);
  SuspiciousReport r = localize(p, m, inputs, scope, threshold);
  std::string json = suspiciousReportJson(r);
  std::cout << json << "\n";
  writeReport(reportPath, json);
  return 0;
}

int cmdMutants(const std::string& file, const std::string& method, const std::string& operators,
               bool allStatements, const std::string& reportPath) {
  Program p = parseAndCheck(readFile(file));
  const Method& m = findMethodOrThrow(p, method);
  auto ops = OperatorSet::parse(operators);
  if (!ops) throw std::runtime_error("bad operator list: " + operators);
  nlohmann::json stmts = nlohmann::json::array();
  for (const Statement* s : m.allStatements()) {
    if (!allStatements && s->mutGenLimit == 0) continue;
    auto list = statementMutations(p, m, *s, *ops);
    nlohmann::json sj;
    sj["stmt"] = s->id;
    auto it = m.spans.find(s->id);
    if (it != m.spans.end()) sj["line"] = it->second.line;
    sj["budget"] = s->mutGenLimit;
    nlohmann::json muts = nlohmann::json::array();
    for (size_t i = 0; i < list.size(); i++) {
      muts.push_back({{"index", i + 1},
                      {"op", mutOpName(list[i].op)},
                      {"note", list[i].note},
                      {"statement", prettyPrint(list[i].replacement)}});
    }
    sj["mutations"] = muts;
    stmts.push_back(sj);
  }
  nlohmann::json j;
  j["method"] = method;
  j["operators"] = ops->str();
  j["statements"] = stmts;
  std::cout << j.dump(2) << "\n";
  writeReport(reportPath, j.dump(2));
  return 0;
}

int cmdRepair(const std::string& file, const std::string& method, const RepairConfig& cfg,
              const std::string& reportPath) {
  Program p = parseAndCheck(readFile(file));
  findMethodOrThrow(p, method);
  RepairReport r = repair(p, method, cfg);
  std::cout << "outcome: " << repairOutcomeName(r.outcome) << "\n"
            << "candidates: " << r.candidatesGenerated << " generated, " << r.sievedOut
            << " sieved out, " << r.verifierRejected << " verifier-rejected, " << r.duplicates
            << " duplicates, " << r.prunedSkipped << " pruned-skipped\n"
            << "pool size: " << (r.poolSizes.empty() ? 0 : r.poolSizes.back()) << ", "
            << "time: " << r.seconds << "s\n";
  if (r.outcome == RepairOutcome::Fixed && !r.alreadyCorrect) {
    std::cout << "fix (after ";
    for (size_t i = 0; i < r.provenance.size(); i++)
      std::cout << (i ? " then " : "") << r.provenance[i];
    std::cout << "):\n" << r.fixedSource;
  } else if (r.alreadyCorrect) {
    std::cout << "method is already correct within the scope\n";
  }
  writeReport(reportPath, repairReportJson(r));
  switch (r.outcome) {
    case RepairOutcome::Fixed: return 0;
    case RepairOutcome::NotFixable: return 1;
    case RepairOutcome::Timeout:
    case RepairOutcome::NonExhaustive: return 2;
  }
  return 4;
}

int cmdCorpus(const std::string& outDir, int maxBugs, int draws) {
  auto cases = corpusManifest(maxBugs, draws);
  exportCorpus(outDir, cases);
  std::cout << "wrote " << corpusSources().size() << " programs and " << cases.size()
            << " seeded cases to " << outDir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specification-based program repair for Mini-IMP"};
  app.require_subcommand(1);

  std::string file, method, reportPath, operators = "all", pruneFlag = "on",
                                         localization = "oracle";
  ScopeFlags scope;
  int cexCount = 3;
  double threshold = 1.0;
  RepairConfig cfg;
  bool allStatements = false;
  std::string corpusOut = "corpus-out";
  int maxBugs = 3, draws = 3;

  auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "Mini-IMP source file (.imp)")->required();
    cmd->add_option("--method", method, "method under analysis")->required();
    cmd->add_option("--report", reportPath, "write a JSON report here");
  };

  CLI::App* detectCmd = app.add_subcommand("detect", "bounded fault detection");
  addCommon(detectCmd);
  scope.attach(detectCmd);

  CLI::App* localizeCmd = app.add_subcommand("localize", "unsat-core fault localization");
  addCommon(localizeCmd);
  scope.attach(localizeCmd);
  localizeCmd->add_option("--cex-count", cexCount, "failing inputs to collect");
  localizeCmd->add_option("--threshold", threshold, "fraction of cores (1.0 = all)");

  CLI::App* mutantsCmd = app.add_subcommand("mutants", "dump per-statement mutation lists");
  addCommon(mutantsCmd);
  mutantsCmd->add_option("--operators", operators, "operator subset, e.g. aorb,ror,prv");
  mutantsCmd->add_flag("--all-statements", allStatements,
                       "include statements without a mutGenLimit budget");

  CLI::App* repairCmd = app.add_subcommand("repair", "search for a verified fix");
  addCommon(repairCmd);
  scope.attach(repairCmd);
  repairCmd->add_option("--budget", cfg.perStatementBudget, "budget for localized statements");
  repairCmd->add_option("--max-depth", cfg.maxTotalDepth, "successive mutation bound");
  repairCmd->add_option("--prune", pruneFlag, "on|off")->check(CLI::IsMember({"on", "off"}));
  repairCmd->add_option("--seed", cfg.seed, "solver seed");
  repairCmd->add_option("--timeout", cfg.timeoutSeconds, "seconds");
  repairCmd->add_option("--operators", operators, "operator subset");
  repairCmd->add_option("--localization", localization, "oracle|unsat-core")
      ->check(CLI::IsMember({"oracle", "unsat-core"}));
  repairCmd->add_option("--cex-count", cexCount, "failing inputs for unsat-core localization");

  CLI::App* corpusCmd = app.add_subcommand("corpus", "export the benchmark corpus");
  corpusCmd->add_option("--out", corpusOut, "output directory");
  corpusCmd->add_option("--max-bugs", maxBugs, "seeded bug counts 1..N");
  corpusCmd->add_option("--draws", draws, "random draws per (method, bug count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (detectCmd->parsed()) return cmdDetect(file, method, scope.scope(), reportPath);
    if (localizeCmd->parsed())
      return cmdLocalize(file, method, scope.scope(), cexCount, threshold, reportPath);
    if (mutantsCmd->parsed())
      return cmdMutants(file, method, operators, allStatements, reportPath);
    if (repairCmd->parsed()) {
      cfg.scope = scope.scope();
      cfg.pruning = pruneFlag == "on";
      cfg.localization = localization == "oracle" ? LocalizationMode::OracleAnnotations
                                                  : LocalizationMode::UnsatCore;
      cfg.cexCount = cexCount;
      auto ops = OperatorSet::parse(operators);
      if (!ops) throw std::runtime_error("bad operator list: " + operators);
      cfg.operators = *ops;
      return cmdRepair(file, method, cfg, reportPath);
    }
    if (corpusCmd->parsed()) return cmdCorpus(corpusOut, maxBugs, draws);
  } catch (const LangError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 3;
}
