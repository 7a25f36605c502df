#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "rex/generator.hpp"
#include "rex/rng.hpp"
#include "rex/serialize.hpp"

namespace {

using namespace rex;

EnumLimits limits_from_env() {
  EnumLimits limits;
  if (const char* env = std::getenv("REX_MAX_EXPLANATIONS")) {
    std::size_t value = 0;
    std::string_view sv(env);
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), value);
    if (ec != std::errc() || ptr != sv.data() + sv.size() || value == 0)
      throw ConfigError("REX_MAX_EXPLANATIONS must be a positive integer");
    limits.max_explanations = value;
  }
  return limits;
}

struct QueryArgs {
  std::string kb_path;
  std::string start;
  std::string end;
  int max_size = 5;
  std::string strategy = "prioritized+prune";
  std::string format = "text";
  std::size_t instances = 3;
};

void add_query_flags(CLI::App* cmd, QueryArgs& q) {
  cmd->add_option("--kb", q.kb_path, "knowledge base file")->required();
  cmd->add_option("--start", q.start, "start entity")->required();
  cmd->add_option("--end", q.end, "end entity")->required();
  cmd->add_option("--max-size", q.max_size, "maximum pattern variables")
      ->default_val(5)
      ->check(CLI::Range(2, int{kMaxPatternVars}));
  cmd->add_option("--strategy", q.strategy, "path enumeration + union, e.g. prioritized+prune")
      ->default_val("prioritized+prune");
  cmd->add_option("--format", q.format, "output format")
      ->default_val("text")
      ->check(CLI::IsMember({"text", "structured"}));
  cmd->add_option("--instances", q.instances, "instances to print per explanation")
      ->default_val(3);
}

std::pair<EntityId, EntityId> resolve_pair(const KnowledgeBase& kb, const QueryArgs& q) {
  EntityId s = kb.require_entity(q.start);
  EntityId e = kb.require_entity(q.end);
  if (s == e) throw ConfigError("start and end must be different entities");
  return {s, e};
}

void print_explanation_text(const KnowledgeBase& kb, const Explanation& e,
                            std::size_t instances) {
  std::istringstream edges(format_pattern(kb, e.pattern));
  std::string line;
  while (std::getline(edges, line)) std::cout << "  " << line << "\n";
  std::size_t limit = std::min(instances, e.instances.size());
  for (std::size_t i = 0; i < limit; ++i)
    std::cout << "  instance: " << format_instance(kb, e.pattern, e.instances[i]) << "\n";
}

int run_explain(const QueryArgs& q, const std::string& measure, int k, bool prune,
                bool prune_explicit, uint64_t sample_size, uint64_t seed, int threads) {
  RankConfig cfg;
  cfg.n = q.max_size;
  cfg.k = k;
  cfg.measure = parse_measure(measure);
  cfg.strategy = parse_strategy(q.strategy);
  cfg.prune = prune;
  cfg.dist.sample_size = sample_size;
  cfg.dist.seed = seed;
  cfg.dist.threads = threads;
  cfg.limits = limits_from_env();
  if (prune_explicit && prune && !measure_antimonotone(cfg.measure) &&
      !measure_positional(cfg.measure))
    throw ConfigError("--prune is not supported with measure " + measure);

  KnowledgeBase kb = load_kb(q.kb_path);
  auto [s, e] = resolve_pair(kb, q);
  RankedResult res = rank_explanations(kb, s, e, cfg);

  if (q.format == "structured") {
    std::cout << ranked_to_json(kb, res, cfg, q.start, q.end, q.instances).dump(2) << "\n";
    return 0;
  }
  if (res.items.empty()) {
    std::cout << "no explanations found\n";
    return 0;
  }
  for (std::size_t i = 0; i < res.items.size(); ++i) {
    const RankedItem& it = res.items[i];
    std::cout << "#" << (i + 1) << " score=" << format_score(it.score)
              << " size=" << it.explanation.pattern.num_vars()
              << " level=" << it.explanation.level
              << " instances=" << it.explanation.instances.size() << "\n";
    print_explanation_text(kb, it.explanation, q.instances);
  }
  return 0;
}

int run_enumerate(const QueryArgs& q, bool verify) {
  KnowledgeBase kb = load_kb(q.kb_path);
  auto [s, e] = resolve_pair(kb, q);
  EnumResult er =
      general_enum(kb, s, e, q.max_size, parse_strategy(q.strategy), limits_from_env());
  std::sort(er.explanations.begin(), er.explanations.end(),
            [](const Explanation& a, const Explanation& b) {
              if (a.pattern.num_vars() != b.pattern.num_vars())
                return a.pattern.num_vars() < b.pattern.num_vars();
              return a.canon < b.canon;
            });
  if (verify) {
    for (const Explanation& ex : er.explanations) verify_explanation(kb, ex, s, e);
    std::cerr << "verified " << er.explanations.size() << " explanations\n";
  }
  if (q.format == "structured") {
    json out;
    out["start"] = q.start;
    out["end"] = q.end;
    out["max_size"] = q.max_size;
    out["strategy"] = q.strategy;
    out["count"] = er.explanations.size();
    json items = json::array();
    for (const Explanation& ex : er.explanations)
      items.push_back(explanation_to_json(kb, ex, q.instances));
    out["items"] = std::move(items);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "found " << er.explanations.size() << " explanations\n";
  for (std::size_t i = 0; i < er.explanations.size(); ++i) {
    const Explanation& ex = er.explanations[i];
    std::cout << "#" << (i + 1) << " size=" << ex.pattern.num_vars() << " level=" << ex.level
              << " instances=" << ex.instances.size() << "\n";
    print_explanation_text(kb, ex, q.instances);
  }
  return 0;
}

int run_gen(const GenSpec& spec, const std::string& out_path) {
  std::string text = generate_kb_text(spec);
  if (out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + out_path);
  out << text;
  if (!out.flush()) throw IoError("write failed: " + out_path);
  return 0;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

// Entities at undirected distance 1 or 2 from a, excluding a itself.
std::vector<EntityId> nearby_entities(const KnowledgeBase& kb, EntityId a) {
  std::set<EntityId> out;
  for (const IncidentEdge& ie : kb.incident(a)) {
    EntityId b = kb.other_endpoint(kb.edge(ie.edge), a);
    out.insert(b);
    for (const IncidentEdge& je : kb.incident(b))
      out.insert(kb.other_endpoint(kb.edge(je.edge), b));
  }
  out.erase(a);
  return {out.begin(), out.end()};
}

int run_bench(const std::string& kb_path, int pairs_per_class, uint64_t seed,
              const std::string& strategies_arg, int max_size, int64_t budget_ms) {
  KnowledgeBase kb = load_kb(kb_path);
  std::vector<Strategy> strategies;
  if (strategies_arg == "all") {
    strategies = all_strategies();
  } else {
    std::stringstream ss(strategies_arg);
    std::string name;
    while (std::getline(ss, name, ',')) strategies.push_back(parse_strategy(name));
  }
  if (strategies.empty()) throw ConfigError("no strategies given");
  if (kb.entity_count() < 2) throw ConfigError("knowledge base too small for pair sampling");

  // Sample start entities uniformly and partners at undirected distance <= 2,
  // then bucket pairs by connectedness class until each class has its quota.
  std::mt19937_64 rng(seed);
  std::map<Connectedness, std::vector<std::pair<EntityId, EntityId>>> buckets;
  std::set<std::pair<EntityId, EntityId>> taken;
  const uint64_t max_attempts = 600ull * pairs_per_class + 1000;
  auto full = [&] {
    for (Connectedness c : {Connectedness::Low, Connectedness::Medium, Connectedness::High})
      if (buckets[c].size() < static_cast<std::size_t>(pairs_per_class)) return false;
    return true;
  };
  for (uint64_t attempt = 0; attempt < max_attempts && !full(); ++attempt) {
    EntityId a = static_cast<EntityId>(uniform_below(rng, kb.entity_count()));
    std::vector<EntityId> near = nearby_entities(kb, a);
    if (near.empty()) continue;
    EntityId b = near[uniform_below(rng, near.size())];
    if (!taken.insert({a, b}).second) continue;
    uint64_t paths = connectedness(kb, a, b, 4, 101);
    Connectedness cls = classify_connectedness(paths);
    if (buckets[cls].size() < static_cast<std::size_t>(pairs_per_class))
      buckets[cls].push_back({a, b});
  }
  for (Connectedness c : {Connectedness::Low, Connectedness::Medium, Connectedness::High})
    if (buckets[c].size() < static_cast<std::size_t>(pairs_per_class))
      std::cerr << "warning: found only " << buckets[c].size() << " of " << pairs_per_class
                << " " << to_string(c) << "-connectedness pairs\n";

  std::cout << "pair,class,strategy,wall_ms,paths,merges,explanations,duplicates\n";
  for (Connectedness cls :
       {Connectedness::Low, Connectedness::Medium, Connectedness::High}) {
    for (auto [a, b] : buckets[cls]) {
      std::string pair_id = kb.entity_name(a) + "~" + kb.entity_name(b);
      std::optional<std::vector<std::string>> reference_canons;
      std::string rows;
      bool consistent = true;
      for (const Strategy& st : strategies) {
        EnumLimits limits = limits_from_env();
        if (budget_ms > 0)
          limits.deadline =
              std::chrono::steady_clock::now() + std::chrono::milliseconds(budget_ms);
        auto t0 = std::chrono::steady_clock::now();
        EnumResult er;
        try {
          er = general_enum(kb, a, b, max_size, st, limits);
        } catch (const TimeoutError&) {
          std::cerr << "warning: " << to_string(st) << " timed out on " << pair_id << "\n";
          continue;
        }
        auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        std::vector<std::string> canons;
        canons.reserve(er.explanations.size());
        for (const Explanation& ex : er.explanations) canons.push_back(ex.canon);
        std::sort(canons.begin(), canons.end());
        if (!reference_canons) {
          reference_canons = std::move(canons);
        } else if (*reference_canons != canons) {
          consistent = false;
          break;
        }
        std::ostringstream row;
        row << csv_field(pair_id) << ',' << to_string(cls) << ',' << to_string(st) << ','
            << wall_ms << ',' << er.path_stats.path_instances << ','
            << er.union_stats.merge_calls << ',' << er.explanations.size() << ','
            << er.union_stats.duplicates_rejected << '\n';
        rows += row.str();
      }
      if (!consistent)
        throw Error("strategies disagree on the explanation set for pair " + pair_id);
      std::cout << rows;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relationship explanations over edge-labeled knowledge graphs"};
  app.require_subcommand(1);

  QueryArgs explain_q;
  std::string measure = "size+local-dist";
  int k = 10;
  bool prune = true;
  uint64_t sample_size = 100;
  uint64_t dist_seed = 42;
  int threads = 1;
  CLI::App* explain = app.add_subcommand("explain", "rank explanations between two entities");
  add_query_flags(explain, explain_q);
  explain->add_option("--measure", measure, "interestingness measure")->default_val("size+local-dist");
  explain->add_option("--k", k, "results to keep")->default_val(10)->check(CLI::PositiveNumber);
  CLI::Option* prune_opt = explain->add_flag("--prune,!--no-prune", prune, "score-guided pruning");
  explain->add_option("--sample-size", sample_size, "global distribution sample")->default_val(100);
  explain->add_option("--seed", dist_seed, "global distribution seed")->default_val(42);
  explain->add_option("--threads", threads, "worker threads for distributional measures")
      ->default_val(1)
      ->check(CLI::PositiveNumber);

  QueryArgs enum_q;
  bool verify = false;
  CLI::App* enumerate = app.add_subcommand("enumerate", "list all minimal explanations");
  add_query_flags(enumerate, enum_q);
  enumerate->add_flag("--verify", verify, "recheck instances and minimality from scratch");

  GenSpec spec;
  std::string shape = "uniform";
  std::string out_path;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic knowledge base");
  gen->add_option("--nodes", spec.nodes, "entity count")->default_val(1000);
  gen->add_option("--labels", spec.labels, "label alphabet size")->default_val(8);
  gen->add_option("--undirected-fraction", spec.undirected_fraction,
                  "fraction of labels that are undirected")
      ->default_val(0.25);
  gen->add_option("--avg-degree", spec.avg_degree, "target average degree")->default_val(4.0);
  gen->add_option("--shape", shape, "degree distribution")
      ->default_val("uniform")
      ->check(CLI::IsMember({"uniform", "powerlaw"}));
  gen->add_option("--gamma", spec.gamma, "power-law exponent")->default_val(2.5);
  gen->add_option("--seed", spec.seed, "generator seed")->default_val(42);
  gen->add_option("--out", out_path, "output file, - for stdout")->required();

  std::string bench_kb;
  int pairs = 10;
  uint64_t bench_seed = 42;
  std::string strategies = "all";
  int bench_max_size = 5;
  int64_t budget_ms = 0;
  CLI::App* bench = app.add_subcommand("bench", "compare strategies over sampled pairs (CSV)");
  bench->add_option("--kb", bench_kb, "knowledge base file")->required();
  bench->add_option("--pairs", pairs, "pairs per connectedness class")
      ->default_val(10)
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "pair sampling seed")->default_val(42);
  bench->add_option("--strategies", strategies, "comma-separated list or 'all'")
      ->default_val("all");
  bench->add_option("--max-size", bench_max_size, "maximum pattern variables")
      ->default_val(5)
      ->check(CLI::Range(2, int{kMaxPatternVars}));
  bench->add_option("--budget-ms", budget_ms, "per-run time budget, 0 = none")->default_val(0);

  std::string labels_path;
  CLI::App* eval = app.add_subcommand("eval", "discounted-cumulative-gain of a label file");
  eval->add_option("labels", labels_path, "file with ten lines of 0/1/2")->required();

  try {
    app.parse(argc, argv);
    if (explain->parsed())
      return run_explain(explain_q, measure, k, prune, prune_opt->count() > 0 && prune,
                         sample_size, dist_seed, threads);
    if (enumerate->parsed()) return run_enumerate(enum_q, verify);
    if (gen->parsed()) {
      spec.shape = parse_degree_shape(shape);
      return run_gen(spec, out_path);
    }
    if (bench->parsed())
      return run_bench(bench_kb, pairs, bench_seed, strategies, bench_max_size, budget_ms);
    if (eval->parsed()) {
      std::cout << dcg_score(load_dcg_labels(labels_path)) << "\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const rex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
