#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <utility>

#include "rex/enumerate.hpp"
#include "rex/generator.hpp"
#include "rex/measures.hpp"
#include "rex/rank.hpp"

namespace {

using namespace rex;

const KnowledgeBase& bench_kb() {
  static const KnowledgeBase kb = [] {
    GenSpec spec;
    spec.nodes = 2000;
    spec.labels = 8;
    spec.avg_degree = 6.0;
    spec.shape = DegreeShape::PowerLaw;
    spec.gamma = 0.5;
    spec.seed = 11;
    return generate_kb(spec);
  }();
  return kb;
}

// The two highest-degree entities; in a skewed graph they are well connected.
std::pair<EntityId, EntityId> bench_pair() {
  const KnowledgeBase& kb = bench_kb();
  EntityId best = 0, second = 1;
  for (EntityId v = 0; v < kb.entity_count(); ++v) {
    if (kb.degree(v) > kb.degree(best)) {
      second = best;
      best = v;
    } else if (v != best && kb.degree(v) > kb.degree(second)) {
      second = v;
    }
  }
  return {best, second};
}

std::string kb_text() {
  std::ostringstream out;
  write_kb(bench_kb(), out);
  return out.str();
}

void BM_LoadKb(benchmark::State& state) {
  const std::string text = kb_text();
  for (auto _ : state) {
    std::istringstream in(text);
    KnowledgeBase kb = load_kb(in, "<bench>");
    benchmark::DoNotOptimize(kb);
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_LoadKb);

void BM_Connectedness(benchmark::State& state) {
  auto [a, b] = bench_pair();
  for (auto _ : state) {
    uint64_t n = connectedness(bench_kb(), a, b, 4, 101);
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_Connectedness);

void BM_PathEnum(benchmark::State& state) {
  auto kind = static_cast<PathEnumKind>(state.range(0));
  int max_len = static_cast<int>(state.range(1));
  auto [a, b] = bench_pair();
  uint64_t paths = 0;
  for (auto _ : state) {
    auto out = enumerate_path_instances(bench_kb(), a, b, max_len, kind);
    paths = out.size();
    benchmark::DoNotOptimize(out);
  }
  state.counters["paths"] = static_cast<double>(paths);
}
BENCHMARK(BM_PathEnum)
    ->ArgsProduct({{0, 1, 2}, {2, 3}})  // naive/basic/prioritized x max_len
    ->ArgNames({"kind", "len"});

void BM_PathUnion(benchmark::State& state) {
  auto join = static_cast<UnionKind>(state.range(0));
  auto [a, b] = bench_pair();
  std::vector<Explanation> paths = enumerate_paths(bench_kb(), a, b, 3, PathEnumKind::Basic);
  uint64_t produced = 0;
  for (auto _ : state) {
    UnionOptions opt;
    opt.n = 4;
    opt.kind = join;
    auto out = path_union(paths, opt);
    produced = out.size();
    benchmark::DoNotOptimize(out);
  }
  state.counters["explanations"] = static_cast<double>(produced);
}
BENCHMARK(BM_PathUnion)->Arg(0)->Arg(1)->ArgName("join");  // basic, prune

void BM_MatchWedge(benchmark::State& state) {
  const KnowledgeBase& kb = bench_kb();
  auto [a, b] = bench_pair();
  // label 0 is undirected in the generated KB, so the pattern edges are too
  Pattern wedge(3, {{kStartVar, 2, 0, false}, {kEndVar, 2, 0, false}});
  for (auto _ : state) {
    auto out = match_instances(kb, wedge, a, b);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_MatchWedge);

void BM_Canonicalize(benchmark::State& state) {
  // a 7-variable double-diamond; canonicalization permutes 5 interiors
  Pattern p(7, {{kStartVar, 2, 0, true},
                {kStartVar, 3, 1, false},
                {2, 4, 0, true},
                {3, 4, 1, false},
                {4, 5, 2, true},
                {4, 6, 2, true},
                {5, kEndVar, 0, true},
                {6, kEndVar, 0, true}});
  for (auto _ : state) {
    std::string key = canonical_form(p);
    benchmark::DoNotOptimize(key);
  }
}
BENCHMARK(BM_Canonicalize);

void BM_LocalDistribution(benchmark::State& state) {
  const KnowledgeBase& kb = bench_kb();
  auto [a, b] = bench_pair();
  Pattern wedge(3, {{kStartVar, 2, 0, false}, {kEndVar, 2, 0, false}});
  for (auto _ : state) {
    Distribution d = local_distribution(kb, wedge, a, AggKind::Count);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_LocalDistribution);

void BM_RankTopK(benchmark::State& state) {
  const KnowledgeBase& kb = bench_kb();
  auto [a, b] = bench_pair();
  RankConfig cfg;
  cfg.n = 4;
  cfg.k = 10;
  cfg.measure = MeasureId::SizeMonocount;
  cfg.prune = state.range(0) != 0;
  for (auto _ : state) {
    RankedResult res = rank_explanations(kb, a, b, cfg);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_RankTopK)->Arg(0)->Arg(1)->ArgName("prune");

}  // namespace

BENCHMARK_MAIN();
