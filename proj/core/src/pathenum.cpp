#include "rex/pathenum.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace rex {

namespace {

struct Partial {
  std::vector<EntityId> nodes;  // nodes[0] is the side's origin
  std::vector<uint32_t> edges;

  int len() const { return static_cast<int>(edges.size()); }
  EntityId head() const { return nodes.back(); }
  bool contains(EntityId v) const {
    return std::find(nodes.begin(), nodes.end(), v) != nodes.end();
  }
};

// Join a start-side partial with an end-side partial meeting at a common
// head. The split is canonical (start part holds ceil(len/2) edges) so every
// full path is produced exactly once.
bool join_compatible(const Partial& from_start, const Partial& from_end) {
  int d = from_start.len() - from_end.len();
  if (d != 0 && d != 1) return false;
  if (from_start.head() != from_end.head()) return false;
  for (std::size_t i = 0; i + 1 < from_start.nodes.size(); ++i)
    for (std::size_t j = 0; j + 1 < from_end.nodes.size(); ++j)
      if (from_start.nodes[i] == from_end.nodes[j]) return false;
  return true;
}

PathInstance assemble(const Partial& from_start, const Partial& from_end) {
  PathInstance out;
  out.nodes = from_start.nodes;
  out.edges = from_start.edges;
  for (std::size_t i = from_end.nodes.size() - 1; i-- > 0;) out.nodes.push_back(from_end.nodes[i]);
  for (std::size_t i = from_end.edges.size(); i-- > 0;) out.edges.push_back(from_end.edges[i]);
  return out;
}

std::vector<PathInstance> enum_naive(const KnowledgeBase& kb, EntityId start, EntityId end,
                                     int max_len, PathEnumStats& st) {
  std::vector<PathInstance> out;
  std::vector<bool> visited(kb.entity_count(), false);
  PathInstance cur;
  cur.nodes.push_back(start);

  auto dfs = [&](auto&& self, EntityId v) -> void {
    ++st.nodes_expanded;
    visited[v] = true;
    for (const IncidentEdge& ie : kb.incident(v)) {
      EntityId u = kb.other_endpoint(kb.edge(ie.edge), v);
      if (u == end) {
        cur.nodes.push_back(u);
        cur.edges.push_back(ie.edge);
        ++st.path_instances;
        out.push_back(cur);
        cur.nodes.pop_back();
        cur.edges.pop_back();
        continue;
      }
      if (visited[u] || static_cast<int>(cur.edges.size()) + 1 >= max_len) continue;
      cur.nodes.push_back(u);
      cur.edges.push_back(ie.edge);
      ++st.partials_created;
      self(self, u);
      cur.nodes.pop_back();
      cur.edges.pop_back();
    }
    visited[v] = false;
  };
  if (max_len >= 1) dfs(dfs, start);
  return out;
}

std::vector<PathInstance> enum_basic(const KnowledgeBase& kb, EntityId start, EntityId end,
                                     int max_len, PathEnumStats& st) {
  const int budget[2] = {(max_len + 1) / 2, max_len / 2};
  const EntityId origin[2] = {start, end};

  std::vector<Partial> pool[2];
  for (int side = 0; side < 2; ++side) {
    pool[side].push_back({{origin[side]}, {}});
    ++st.partials_created;
    std::size_t layer_begin = 0;
    for (int len = 0; len < budget[side]; ++len) {
      std::size_t layer_end = pool[side].size();
      for (std::size_t i = layer_begin; i < layer_end; ++i) {
        if (pool[side][i].head() == origin[1 - side]) continue;  // never extend past the far target
        ++st.nodes_expanded;
        for (const IncidentEdge& ie : kb.incident(pool[side][i].head())) {
          EntityId u = kb.other_endpoint(kb.edge(ie.edge), pool[side][i].head());
          if (pool[side][i].contains(u)) continue;
          Partial next = pool[side][i];
          next.nodes.push_back(u);
          next.edges.push_back(ie.edge);
          pool[side].push_back(std::move(next));
          ++st.partials_created;
        }
      }
      layer_begin = layer_end;
    }
  }

  std::unordered_map<EntityId, std::vector<uint32_t>> end_at;
  for (uint32_t i = 0; i < pool[1].size(); ++i) end_at[pool[1][i].head()].push_back(i);

  std::vector<PathInstance> out;
  for (const Partial& ps : pool[0]) {
    auto it = end_at.find(ps.head());
    if (it == end_at.end()) continue;
    for (uint32_t j : it->second) {
      ++st.joins_tested;
      if (!join_compatible(ps, pool[1][j])) continue;
      out.push_back(assemble(ps, pool[1][j]));
      ++st.path_instances;
    }
  }
  return out;
}

// Activation-driven bidirectional search. Both targets start with activation
// 1/degree on their own side; expanding a node spreads its side score to
// non-target neighbors (divided by the neighbor's degree) and zeroes it.
// The node with the largest summed score that still holds unexpanded partial
// paths within budget is expanded next; ties go to the smaller entity id.
struct PrioritizedEnum {
  const KnowledgeBase& kb;
  EntityId origin[2];
  int budget[2];
  PathEnumStats& st;

  std::vector<Partial> pool[2];
  std::unordered_map<EntityId, std::vector<uint32_t>> at_node[2];
  std::unordered_map<EntityId, std::vector<uint32_t>> pending[2];
  std::unordered_map<EntityId, double> act[2];
  // max-heap on (score, node); larger score first, then smaller id
  using HeapItem = std::pair<double, EntityId>;
  struct HeapCmp {
    bool operator()(const HeapItem& a, const HeapItem& b) const {
      if (a.first != b.first) return a.first < b.first;
      return a.second > b.second;
    }
  };
  std::priority_queue<HeapItem, std::vector<HeapItem>, HeapCmp> heap;
  std::vector<PathInstance> out;

  double score(EntityId v) const {
    double s = 0;
    for (int side = 0; side < 2; ++side) {
      auto it = act[side].find(v);
      if (it != act[side].end()) s += it->second;
    }
    return s;
  }

  bool has_pending(EntityId v) const {
    for (int side = 0; side < 2; ++side) {
      auto it = pending[side].find(v);
      if (it != pending[side].end() && !it->second.empty()) return true;
    }
    return false;
  }

  void add_partial(int side, Partial partial) {
    EntityId h = partial.head();
    uint32_t idx = static_cast<uint32_t>(pool[side].size());
    ++st.partials_created;

    // Join against already-created opposite partials, then register; each
    // cross pair is therefore tested exactly once.
    auto it = at_node[1 - side].find(h);
    if (it != at_node[1 - side].end()) {
      for (uint32_t j : it->second) {
        ++st.joins_tested;
        const Partial& other = pool[1 - side][j];
        const Partial& fs = side == 0 ? partial : other;
        const Partial& fe = side == 0 ? other : partial;
        if (!join_compatible(fs, fe)) continue;
        out.push_back(assemble(fs, fe));
        ++st.path_instances;
      }
    }
    bool extendable = partial.len() < budget[side] && h != origin[1 - side];
    pool[side].push_back(std::move(partial));
    at_node[side][h].push_back(idx);
    if (extendable) {
      pending[side][h].push_back(idx);
      heap.push({score(h), h});
    }
  }

  void run() {
    for (int side = 0; side < 2; ++side) {
      std::size_t deg = kb.degree(origin[side]);
      if (deg > 0) act[side][origin[side]] = 1.0 / static_cast<double>(deg);
      add_partial(side, {{origin[side]}, {}});
    }
    while (!heap.empty()) {
      auto [s, v] = heap.top();
      heap.pop();
      if (!has_pending(v)) continue;
      if (s != score(v)) continue;  // stale entry; a fresher one exists
      expand(v);
    }
  }

  void expand(EntityId v) {
    ++st.nodes_expanded;
    for (int side = 0; side < 2; ++side) {
      auto pit = pending[side].find(v);
      if (pit == pending[side].end() || pit->second.empty()) continue;
      std::vector<uint32_t> todo = std::move(pit->second);
      pit->second.clear();

      // Spread this side's activation to distinct non-target neighbors.
      double a = 0;
      if (auto ait = act[side].find(v); ait != act[side].end()) {
        a = ait->second;
        ait->second = 0;
      }
      if (a > 0) {
        std::vector<EntityId> neigh;
        for (const IncidentEdge& ie : kb.incident(v))
          neigh.push_back(kb.other_endpoint(kb.edge(ie.edge), v));
        std::sort(neigh.begin(), neigh.end());
        neigh.erase(std::unique(neigh.begin(), neigh.end()), neigh.end());
        for (EntityId u : neigh) {
          if (u == origin[0] || u == origin[1]) continue;
          act[side][u] += a / static_cast<double>(kb.degree(u));
          if (has_pending(u)) heap.push({score(u), u});
        }
      }

      for (uint32_t idx : todo) {
        for (const IncidentEdge& ie : kb.incident(v)) {
          EntityId u = kb.other_endpoint(kb.edge(ie.edge), v);
          if (pool[side][idx].contains(u)) continue;
          Partial next = pool[side][idx];
          next.nodes.push_back(u);
          next.edges.push_back(ie.edge);
          add_partial(side, std::move(next));
        }
      }
    }
  }
};

}  // namespace

std::vector<PathInstance> enumerate_path_instances(const KnowledgeBase& kb, EntityId start,
                                                   EntityId end, int max_len, PathEnumKind kind,
                                                   PathEnumStats* stats) {
  if (start == end) throw ConfigError("target entities must differ");
  if (start >= kb.entity_count() || end >= kb.entity_count())
    throw NotFoundError("target entity id out of range");
  PathEnumStats local;
  PathEnumStats& st = stats ? *stats : local;
  if (max_len < 1) return {};
  switch (kind) {
    case PathEnumKind::Naive: return enum_naive(kb, start, end, max_len, st);
    case PathEnumKind::Basic: return enum_basic(kb, start, end, max_len, st);
    case PathEnumKind::Prioritized: {
      PrioritizedEnum pe{kb, {start, end}, {(max_len + 1) / 2, max_len / 2}, st, {}, {}, {}, {}, {}, {}};
      pe.run();
      return std::move(pe.out);
    }
  }
  throw ConfigError("unknown path enumeration kind");
}

std::vector<Explanation> group_paths(const KnowledgeBase& kb,
                                     const std::vector<PathInstance>& paths) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<Explanation> out;
  for (const PathInstance& pi : paths) {
    auto [pattern, inst] = path_to_pattern(kb, pi);
    Canonical c = canonicalize(pattern);
    Instance mapped;
    mapped.binding.resize(inst.binding.size());
    for (std::size_t v = 0; v < inst.binding.size(); ++v)
      mapped.binding[c.var_map[v]] = inst.binding[v];

    auto [it, fresh] = index.try_emplace(c.key, out.size());
    if (fresh) {
      Explanation re;
      re.pattern = std::move(c.pattern);
      re.level = 1;
      re.canon = std::move(c.key);
      out.push_back(std::move(re));
    }
    out[it->second].instances.push_back(std::move(mapped));
  }
  for (Explanation& re : out) {
    std::sort(re.instances.begin(), re.instances.end());
    re.instances.erase(std::unique(re.instances.begin(), re.instances.end()),
                       re.instances.end());
  }
  std::sort(out.begin(), out.end(),
            [](const Explanation& a, const Explanation& b) { return a.canon < b.canon; });
  return out;
}

std::vector<Explanation> enumerate_paths(const KnowledgeBase& kb, EntityId start, EntityId end,
                                         int max_len, PathEnumKind kind, PathEnumStats* stats) {
  return group_paths(kb, enumerate_path_instances(kb, start, end, max_len, kind, stats));
}

PathEnumKind parse_path_enum_kind(const std::string& name) {
  if (name == "naive") return PathEnumKind::Naive;
  if (name == "basic") return PathEnumKind::Basic;
  if (name == "prioritized") return PathEnumKind::Prioritized;
  throw ConfigError("unknown path enumeration kind: " + name);
}

const char* to_string(PathEnumKind kind) {
  switch (kind) {
    case PathEnumKind::Naive: return "naive";
    case PathEnumKind::Basic: return "basic";
    case PathEnumKind::Prioritized: return "prioritized";
  }
  return "?";
}

}  // namespace rex
