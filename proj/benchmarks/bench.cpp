#include <benchmark/benchmark.h>

#include <random>

#include "stitch/corpus.hpp"
#include "stitch/encode.hpp"
#include "stitch/interp.hpp"
#include "stitch/mutation_vector.hpp"
#include "stitch/prune.hpp"
#include "stitch/solver.hpp"
#include "stitch/verify.hpp"

using namespace stitch;

namespace {

Cnf random3Sat(uint64_t seed, int vars, int clauses) {
  std::mt19937_64 rng(seed);
  Cnf f;
  f.numVars = vars;
  std::uniform_int_distribution<int> varD(0, vars - 1);
  for (int i = 0; i < clauses; i++) {
    std::vector<Lit> c;
    while (c.size() < 3) {
      Lit l = Lit::make(varD(rng), rng() & 1);
      bool dup = false;
      for (Lit o : c)
        if (o.var() == l.var()) dup = true;
      if (!dup) c.push_back(l);
    }
    f.add(std::move(c));
  }
  return f;
}

Input sampleListInput(const Program& p, const Scope& s) {
  Input in;
  in.heap = ConcreteHeap::empty(p, s.objectsPerRecord, s.intWidth);
  auto& lists = in.heap.objects["List"];
  lists[0].live = true;
  lists[0].fields["head"] = Value::refV(1);
  lists[0].fields["size"] = Value::intV(2);
  auto& nodes = in.heap.objects["Node"];
  nodes[0].live = true;
  nodes[0].fields["next"] = Value::refV(2);
  nodes[0].fields["value"] = Value::intV(4);
  nodes[1].live = true;
  nodes[1].fields["next"] = Value::nullV();
  nodes[1].fields["value"] = Value::intV(9);
  in.receiver = Value::refV(1);
  in.args = {Value::intV(1)};
  return in;
}

void BM_SolveRandom3Sat(benchmark::State& state) {
  uint64_t seed = 1;
  for (auto _ : state) {
    Cnf f = random3Sat(seed++, 120, 480);
    Verdict v = solve(f);
    benchmark::DoNotOptimize(v.kind);
  }
}
BENCHMARK(BM_SolveRandom3Sat);

void BM_EncodeGetNode(benchmark::State& state) {
  Program p = corpusProgram("sll");
  const Method& m = *p.findMethod("getNode");
  Scope s;
  for (auto _ : state) {
    Encoding e = encodeCorrectness(p, m, s);
    benchmark::DoNotOptimize(e.cnf.clauses.size());
  }
}
BENCHMARK(BM_EncodeGetNode);

void BM_DetectGetNode(benchmark::State& state) {
  Program p = corpusProgram("sll");
  const Method& m = *p.findMethod("getNode");
  Scope s;
  for (auto _ : state) {
    DetectResult d = detect(p, m, s);
    benchmark::DoNotOptimize(d.kind);
  }
}
BENCHMARK(BM_DetectGetNode);

void BM_InterpGetNode(benchmark::State& state) {
  Program p = corpusProgram("sll");
  const Method& m = *p.findMethod("getNode");
  Scope s;
  Input in = sampleListInput(p, s);
  StepLimits lim = StepLimits::forMethod(m, s);
  for (auto _ : state) {
    ExecResult r = execute(p, m, in, lim, s.intWidth);
    benchmark::DoNotOptimize(r.outcome);
  }
}
BENCHMARK(BM_InterpGetNode);

void BM_IteratorSweep(benchmark::State& state) {
  for (auto _ : state) {
    VectorIterator it({9, 9, 9, 9, 9, 9});  // 10^6 vectors
    uint64_t n = 0;
    while (it.hasNext()) {
      it.next();
      n++;
    }
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_IteratorSweep);

void BM_FeedbackLevel1(benchmark::State& state) {
  // the two-fault size-tracking add: level-1 variabilization of the size stmt
  BenchmarkCase c = seedBugs("setadd", "add", 2, 7, Scope{});
  Program p = materializeCase(c);
  const Method& m = *p.findMethod("add");
  Scope s;
  DetectResult d = detect(p, m, s);
  if (!d.faulty()) {
    state.SkipWithError("seeded case not faulty");
    return;
  }
  for (auto _ : state) {
    Feedback fb = getFeedback(p, m, d.cex->input, s);
    benchmark::DoNotOptimize(fb.k);
  }
}
BENCHMARK(BM_FeedbackLevel1);

}  // namespace

BENCHMARK_MAIN();
