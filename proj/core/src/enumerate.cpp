#include "rex/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace rex {

namespace {

void check_deadline(const EnumLimits& limits) {
  if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline)
    throw TimeoutError("enumeration deadline exceeded");
}

// Distinct bound entities per variable; a merge mapping that pairs variables
// with disjoint value sets can never produce an instance.
using VarSets = std::vector<std::vector<EntityId>>;

VarSets var_value_sets(const Explanation& re) {
  VarSets s(re.pattern.num_vars());
  for (const Instance& inst : re.instances)
    for (std::size_t v = 0; v < inst.binding.size(); ++v) s[v].push_back(inst.binding[v]);
  for (auto& vals : s) {
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  }
  return s;
}

bool sorted_intersects(const std::vector<EntityId>& a, const std::vector<EntityId>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else
      return true;
  }
  return false;
}

uint64_t fnv1a(std::span<const EntityId> vals) {
  uint64_t h = 1469598103934665603ull;
  for (EntityId v : vals) {
    h ^= v;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<Explanation> merge_impl(const Explanation& a, const Explanation& b, int n,
                                    UnionStats* stats, const VarSets* sets_a,
                                    const VarSets* sets_b) {
  const Pattern& p1 = a.pattern;
  const Pattern& p2 = b.pattern;
  const int n1 = p1.num_vars();
  const int n2 = p2.num_vars();
  const int a_int = n1 - 2;
  const int b_int = n2 - 2;

  VarSets local_a, local_b;
  if (!sets_a) {
    local_a = var_value_sets(a);
    sets_a = &local_a;
  }
  if (!sets_b) {
    local_b = var_value_sets(b);
    sets_b = &local_b;
  }

  std::vector<Explanation> out;
  if (a_int == 0 || b_int == 0) return out;  // no interior pair can be matched

  // assign[t]: image of p1 interior var (2 + t) among p2 interiors, or -1.
  std::vector<int> assign(a_int, -1);
  std::vector<bool> taken(b_int, false);

  auto emit_mapping = [&] {
    if (stats) ++stats->mappings_enumerated;

    std::vector<std::pair<VarId, VarId>> matched;  // (p1 var, p2 var)
    for (int t = 0; t < a_int; ++t)
      if (assign[t] >= 0)
        matched.push_back({static_cast<VarId>(2 + t), static_cast<VarId>(2 + assign[t])});

    for (auto [va, vb] : matched)
      if (!sorted_intersects((*sets_a)[va], (*sets_b)[vb])) return;

    // p2 variable renumbering into the merged pattern.
    std::vector<VarId> map2(n2);
    map2[kStartVar] = kStartVar;
    map2[kEndVar] = kEndVar;
    std::vector<VarId> unmatched2;
    {
      std::vector<int> image(b_int, -1);
      for (int t = 0; t < a_int; ++t)
        if (assign[t] >= 0) image[assign[t]] = 2 + t;
      VarId next = static_cast<VarId>(n1);
      for (int u = 0; u < b_int; ++u) {
        if (image[u] >= 0) {
          map2[2 + u] = static_cast<VarId>(image[u]);
        } else {
          map2[2 + u] = next++;
          unmatched2.push_back(static_cast<VarId>(2 + u));
        }
      }
    }
    const int num_new = n1 + static_cast<int>(unmatched2.size());
    if (num_new > n) return;  // also guarded during enumeration

    std::vector<PatternEdge> edges(p1.edges().begin(), p1.edges().end());
    for (const PatternEdge& e : p2.edges())
      edges.push_back({map2[e.from], map2[e.to], e.label, e.directed});
    Pattern merged(num_new, std::move(edges));

    // Join instance sets on the matched variables' values.
    std::unordered_map<uint64_t, std::vector<uint32_t>> by_key;
    std::vector<EntityId> key;
    for (uint32_t j = 0; j < b.instances.size(); ++j) {
      key.clear();
      for (const auto& mv : matched) key.push_back(b.instances[j].binding[mv.second]);
      by_key[fnv1a(key)].push_back(j);
    }

    std::vector<Instance> joined;
    for (const Instance& i1 : a.instances) {
      key.clear();
      for (const auto& mv : matched) key.push_back(i1.binding[mv.first]);
      auto it = by_key.find(fnv1a(key));
      if (it == by_key.end()) continue;
      for (uint32_t j : it->second) {
        const Instance& i2 = b.instances[j];
        if (stats) ++stats->instance_pairs_tested;
        bool agree = true;
        for (auto [va, vb] : matched)
          if (i1.binding[va] != i2.binding[vb]) {
            agree = false;
            break;
          }
        if (!agree) continue;

        Instance g;
        g.binding.resize(num_new);
        std::copy(i1.binding.begin(), i1.binding.end(), g.binding.begin());
        bool injective = true;
        for (VarId u : unmatched2) {
          EntityId x = i2.binding[u];
          for (EntityId y : i1.binding)
            if (x == y) {
              injective = false;
              break;
            }
          if (!injective) break;
          g.binding[map2[u]] = x;
        }
        if (injective) joined.push_back(std::move(g));
      }
    }
    if (joined.empty()) return;

    Canonical c = canonicalize(merged);
    for (Instance& g : joined) {
      Instance mapped;
      mapped.binding.resize(g.binding.size());
      for (std::size_t v = 0; v < g.binding.size(); ++v)
        mapped.binding[c.var_map[v]] = g.binding[v];
      g = std::move(mapped);
    }
    std::sort(joined.begin(), joined.end());
    joined.erase(std::unique(joined.begin(), joined.end()), joined.end());

    Explanation re;
    re.pattern = std::move(c.pattern);
    re.instances = std::move(joined);
    re.canon = std::move(c.key);
    out.push_back(std::move(re));
  };

  // Enumerate partial injective mappings, pruning branches whose best-case
  // merged size already exceeds n.
  auto rec = [&](auto&& self, int t, int matched_count) -> void {
    if (t == a_int) {
      if (matched_count >= 1) emit_mapping();
      return;
    }
    int best_final_matched = matched_count + std::min(a_int - t, b_int - matched_count);
    if (n1 + b_int - best_final_matched > n) return;  // every completion is too large

    assign[t] = -1;
    self(self, t + 1, matched_count);
    for (int u = 0; u < b_int; ++u) {
      if (taken[u]) continue;
      taken[u] = true;
      assign[t] = u;
      self(self, t + 1, matched_count + 1);
      taken[u] = false;
    }
    assign[t] = -1;
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace

std::vector<Explanation> merge_explanations(const Explanation& a, const Explanation& b, int n,
                                            UnionStats* stats) {
  if (stats) ++stats->merge_calls;
  return merge_impl(a, b, n, stats, nullptr, nullptr);
}

bool duplicated(const Explanation& re, std::span<const Explanation> pool) {
  for (const Explanation& other : pool)
    if (other.canon == re.canon) return true;
  return false;
}

std::vector<Explanation> path_union(std::vector<Explanation> paths, const UnionOptions& opt) {
  if (opt.n < 2) throw ConfigError("pattern size bound must be at least 2");
  UnionStats local_stats;
  UnionStats& st = opt.stats ? *opt.stats : local_stats;

  std::vector<Explanation> q = std::move(paths);
  const uint32_t npaths = static_cast<uint32_t>(q.size());
  if (q.size() > opt.limits.max_explanations)
    throw LimitError("explanation cap exceeded: " + std::to_string(q.size()));

  std::unordered_map<std::string, uint32_t> canon_index;
  std::vector<VarSets> sets;
  sets.reserve(q.size());
  for (uint32_t i = 0; i < q.size(); ++i) {
    canon_index.emplace(q[i].canon, i);
    sets.push_back(var_value_sets(q[i]));
  }

  using HistPair = std::pair<uint32_t, uint32_t>;  // (expanded index in prev round, path index)
  std::vector<uint32_t> expand;
  expand.reserve(npaths);
  for (uint32_t i = 0; i < npaths; ++i) expand.push_back(i);
  std::vector<std::vector<HistPair>> hist_expand;  // parallel to `expand`
  bool first_round = true;
  int round = 0;

  std::vector<uint32_t> all_paths(expand);

  while (!expand.empty()) {
    ++round;
    ++st.rounds;
    check_deadline(opt.limits);

    std::vector<char> mask(expand.size(), 1);
    if (opt.expand_filter) {
      mask = opt.expand_filter(q, expand);
      if (mask.size() != expand.size())
        throw ConfigError("expansion filter returned a mask of the wrong size");
    }

    // Path partners that share a parent with a sibling composition, keyed by
    // that parent. Built from every sibling's history, filtered or not.
    std::unordered_map<uint32_t, std::vector<uint32_t>> by_parent;
    if (opt.kind == UnionKind::Prune && !first_round) {
      for (const auto& hist : hist_expand)
        for (const HistPair& hp : hist) by_parent[hp.first].push_back(hp.second);
      for (auto& [x, js] : by_parent) {
        std::sort(js.begin(), js.end());
        js.erase(std::unique(js.begin(), js.end()), js.end());
      }
    }

    const uint32_t round_base = static_cast<uint32_t>(q.size());
    std::vector<std::vector<HistPair>> hist_new;

    for (uint32_t li = 0; li < expand.size(); ++li) {
      if (!mask[li]) continue;
      check_deadline(opt.limits);

      std::vector<uint32_t> partner_scratch;
      std::span<const uint32_t> partners;
      if (opt.kind == UnionKind::Prune && !first_round) {
        for (const HistPair& hp : hist_expand[li]) {
          const auto it = by_parent.find(hp.first);
          if (it != by_parent.end())
            partner_scratch.insert(partner_scratch.end(), it->second.begin(), it->second.end());
        }
        std::sort(partner_scratch.begin(), partner_scratch.end());
        partner_scratch.erase(std::unique(partner_scratch.begin(), partner_scratch.end()),
                              partner_scratch.end());
        partners = partner_scratch;
      } else {
        partners = all_paths;
      }

      for (uint32_t j2 : partners) {
        ++st.merge_calls;
        std::vector<Explanation> results =
            merge_impl(q[expand[li]], q[j2], opt.n, &st, &sets[expand[li]], &sets[j2]);
        for (Explanation& re : results) {
          auto it = canon_index.find(re.canon);
          if (it == canon_index.end()) {
            uint32_t idx = static_cast<uint32_t>(q.size());
            re.level = round + 1;
            canon_index.emplace(re.canon, idx);
            sets.push_back(var_value_sets(re));
            q.push_back(std::move(re));
            if (q.size() > opt.limits.max_explanations)
              throw LimitError("explanation cap exceeded: " + std::to_string(q.size()));
            if (opt.kind == UnionKind::Prune) {
              hist_new.emplace_back();
              hist_new.back().push_back({li, j2});
            }
            if (opt.trace) opt.trace->events.push_back({expand[li], j2, idx, false});
          } else {
            ++st.duplicates_rejected;
            uint32_t idx = it->second;
            // Duplicates of earlier rounds are dropped outright; duplicates
            // born this round still extend the composition history.
            if (opt.kind == UnionKind::Prune && idx >= round_base)
              hist_new[idx - round_base].push_back({li, j2});
            if (opt.trace) opt.trace->events.push_back({expand[li], j2, idx, true});
          }
        }
      }
    }

    expand.clear();
    for (uint32_t idx = round_base; idx < q.size(); ++idx) expand.push_back(idx);
    hist_expand = std::move(hist_new);
    first_round = false;
  }
  return q;
}

std::vector<Explanation> naive_enum(const KnowledgeBase& kb, EntityId start, EntityId end, int n,
                                    const EnumLimits& limits, UnionStats* stats) {
  if (start == end) throw ConfigError("target entities must differ");
  if (start >= kb.entity_count() || end >= kb.entity_count())
    throw NotFoundError("target entity id out of range");
  if (n < 2 || n > kMaxPatternVars)
    throw ConfigError("pattern size bound out of range: " + std::to_string(n));

  UnionStats local_stats;
  UnionStats& st = stats ? *stats : local_stats;

  struct Shape {
    Pattern pat;
    std::vector<Instance> inst;
  };

  std::deque<Shape> queue;
  std::unordered_set<std::string> seen;
  std::vector<Explanation> emitted;

  {
    Shape seed;
    seed.pat = Pattern(2, {});
    seed.inst.push_back({{start, end}});
    seen.insert(canonical_form(seed.pat));
    queue.push_back(std::move(seed));
  }

  while (!queue.empty()) {
    check_deadline(limits);
    Shape cur = std::move(queue.front());
    queue.pop_front();
    const Pattern& p = cur.pat;

    // Data-driven edge proposals: an extension is worth trying only if some
    // instance can support it.
    std::set<PatternEdge> proposals;
    for (const Instance& g : cur.inst) {
      for (VarId v = 0; v < p.num_vars(); ++v) {
        EntityId ev = g.binding[v];
        for (const IncidentEdge& ie : kb.incident(ev)) {
          const Edge& ke = kb.edge(ie.edge);
          EntityId w = kb.other_endpoint(ke, ev);
          int u = -1;
          for (std::size_t x = 0; x < g.binding.size(); ++x)
            if (g.binding[x] == w) {
              u = static_cast<int>(x);
              break;
            }
          VarId wv;
          if (u >= 0) {
            wv = static_cast<VarId>(u);
          } else {
            if (p.num_vars() >= n) continue;  // no room for a fresh variable
            wv = static_cast<VarId>(p.num_vars());
          }
          VarId from = ke.src == ev ? v : wv;
          VarId to = ke.src == ev ? wv : v;
          if (!ke.directed && from > to) std::swap(from, to);
          proposals.insert({from, to, ke.label, ke.directed});
        }
      }
    }

    for (const PatternEdge& pe : proposals) {
      bool forward = pe.from >= p.num_vars() || pe.to >= p.num_vars();
      std::vector<PatternEdge> edges(p.edges().begin(), p.edges().end());
      edges.push_back(pe);
      int new_vars = p.num_vars() + (forward ? 1 : 0);
      Pattern grown(new_vars, std::move(edges));
      if (static_cast<int>(grown.edges().size()) == static_cast<int>(p.edges().size()))
        continue;  // proposal already present
      std::string key = canonical_form(grown);
      if (!seen.insert(key).second) {
        ++st.duplicates_rejected;
        continue;
      }
      if (seen.size() > limits.max_explanations)
        throw LimitError("candidate shape cap exceeded: " + std::to_string(seen.size()));

      std::vector<Instance> inst;
      if (!forward) {
        for (const Instance& g : cur.inst)
          if (kb.has_edge(g.binding[pe.from], g.binding[pe.to], pe.label, pe.directed))
            inst.push_back(g);
      } else {
        VarId fresh = static_cast<VarId>(p.num_vars());
        VarId anchor = pe.from == fresh ? pe.to : pe.from;
        for (const Instance& g : cur.inst) {
          EntityId av = g.binding[anchor];
          for (const IncidentEdge& ie : kb.incident(av)) {
            const Edge& ke = kb.edge(ie.edge);
            if (ke.label != pe.label || ke.directed != pe.directed) continue;
            EntityId w = kb.other_endpoint(ke, av);
            // orientation: the fresh variable sits on a fixed side for
            // directed proposals
            if (ke.directed) {
              if (pe.from == fresh && ke.src != w) continue;
              if (pe.to == fresh && ke.dst != w) continue;
            }
            bool used = false;
            for (EntityId y : g.binding)
              if (y == w) {
                used = true;
                break;
              }
            if (used) continue;
            Instance ext = g;
            ext.binding.push_back(w);
            inst.push_back(std::move(ext));
          }
        }
        std::sort(inst.begin(), inst.end());
        inst.erase(std::unique(inst.begin(), inst.end()), inst.end());
      }
      if (inst.empty()) continue;

      if (is_minimal(grown)) {
        Canonical c = canonicalize(grown);
        Explanation re;
        re.pattern = std::move(c.pattern);
        re.canon = std::move(c.key);
        re.level = 0;
        for (const Instance& g : inst) {
          Instance mapped;
          mapped.binding.resize(g.binding.size());
          for (std::size_t v = 0; v < g.binding.size(); ++v)
            mapped.binding[c.var_map[v]] = g.binding[v];
          re.instances.push_back(std::move(mapped));
        }
        std::sort(re.instances.begin(), re.instances.end());
        emitted.push_back(std::move(re));
      }
      queue.push_back({std::move(grown), std::move(inst)});
    }
  }

  std::sort(emitted.begin(), emitted.end(),
            [](const Explanation& a, const Explanation& b) { return a.canon < b.canon; });
  return emitted;
}

EnumResult general_enum(const KnowledgeBase& kb, EntityId start, EntityId end, int n,
                        const Strategy& strategy, const EnumLimits& limits, UnionTrace* trace) {
  if (n < 2 || n > kMaxPatternVars)
    throw ConfigError("pattern size bound out of range: " + std::to_string(n));
  EnumResult res;
  std::vector<Explanation> paths =
      enumerate_paths(kb, start, end, n - 1, strategy.path, &res.path_stats);
  UnionOptions opt;
  opt.n = n;
  opt.kind = strategy.join;
  opt.limits = limits;
  opt.stats = &res.union_stats;
  opt.trace = trace;
  res.explanations = path_union(std::move(paths), opt);
  return res;
}

void verify_explanation(const KnowledgeBase& kb, const Explanation& re, EntityId start,
                        EntityId end) {
  if (!is_minimal(re.pattern))
    throw Error("explanation pattern is not minimal: " + re.canon);
  if (re.instances.empty()) throw Error("explanation has no instances: " + re.canon);
  std::vector<Instance> fresh = match_instances(kb, re.pattern, start, end);
  if (fresh != re.instances)
    throw Error("instance set mismatch for " + re.canon + ": stored " +
                std::to_string(re.instances.size()) + ", matched " +
                std::to_string(fresh.size()));
  if (canonical_form(re.pattern) != re.canon)
    throw Error("stale canonical form: " + re.canon);
}

Strategy parse_strategy(const std::string& name) {
  auto plus = name.find('+');
  if (plus == std::string::npos)
    throw ConfigError("strategy must look like <pathenum>+<union>: " + name);
  Strategy s;
  s.path = parse_path_enum_kind(name.substr(0, plus));
  std::string u = name.substr(plus + 1);
  if (u == "basic")
    s.join = UnionKind::Basic;
  else if (u == "prune")
    s.join = UnionKind::Prune;
  else
    throw ConfigError("unknown union kind: " + u);
  return s;
}

std::string to_string(const Strategy& s) {
  return std::string(to_string(s.path)) + "+" + to_string(s.join);
}

const char* to_string(UnionKind kind) {
  return kind == UnionKind::Basic ? "basic" : "prune";
}

std::vector<Strategy> all_strategies() {
  std::vector<Strategy> out;
  for (PathEnumKind p : {PathEnumKind::Naive, PathEnumKind::Basic, PathEnumKind::Prioritized})
    for (UnionKind u : {UnionKind::Basic, UnionKind::Prune}) out.push_back({p, u});
  return out;
}

}  // namespace rex
