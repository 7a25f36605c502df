#include "rex/pattern.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace rex {

Pattern::Pattern(int num_vars, std::vector<PatternEdge> edges) {
  if (num_vars < 2 || num_vars > 255)
    throw ConfigError("pattern needs at least the two target variables");
  num_vars_ = static_cast<uint8_t>(num_vars);
  for (PatternEdge& e : edges) {
    if (e.from >= num_vars_ || e.to >= num_vars_)
      throw ConfigError("pattern edge endpoint out of range");
    if (e.from == e.to) throw ConfigError("pattern edge endpoints must differ");
    if (!e.directed && e.from > e.to) std::swap(e.from, e.to);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

namespace {

// Enumerates simple start->end paths in the pattern graph (direction ignored)
// and marks visited vars/edges. Pattern graphs are tiny, so plain DFS.
struct EssentialScan {
  const std::span<const PatternEdge> edges;
  int num_vars;
  std::vector<std::vector<int>> adj;  // var -> incident edge indices
  std::vector<bool> on_path_var;
  std::vector<bool> var_covered, edge_covered;

  explicit EssentialScan(const Pattern& p)
      : edges(p.edges()),
        num_vars(p.num_vars()),
        adj(p.num_vars()),
        on_path_var(p.num_vars(), false),
        var_covered(p.num_vars(), false),
        edge_covered(p.edges().size(), false) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      adj[edges[i].from].push_back(static_cast<int>(i));
      adj[edges[i].to].push_back(static_cast<int>(i));
    }
  }

  std::vector<int> path_edges;

  void mark_path(VarId v) {
    var_covered[v] = true;
    for (int ei : path_edges) {
      edge_covered[ei] = true;
      var_covered[edges[ei].from] = true;
      var_covered[edges[ei].to] = true;
    }
  }

  void dfs(VarId v) {
    if (v == kEndVar) {
      mark_path(v);
      return;
    }
    on_path_var[v] = true;
    for (int ei : adj[v]) {
      const PatternEdge& e = edges[ei];
      VarId u = e.from == v ? e.to : e.from;
      if (on_path_var[u]) continue;
      path_edges.push_back(ei);
      dfs(u);
      path_edges.pop_back();
    }
    on_path_var[v] = false;
  }
};

}  // namespace

bool is_essential(const Pattern& p) {
  EssentialScan scan(p);
  scan.dfs(kStartVar);
  if (!scan.var_covered[kStartVar] || !scan.var_covered[kEndVar]) return false;
  for (bool c : scan.var_covered)
    if (!c) return false;
  for (bool c : scan.edge_covered)
    if (!c) return false;
  return true;
}

bool is_decomposable(const Pattern& p) {
  const auto edges = p.edges();
  if (edges.size() < 2) return false;
  // Union-find over edges; edges sharing an interior variable must stay in
  // the same part. Two or more classes means a valid split exists.
  std::vector<int> parent(edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> last_edge_at(p.num_vars(), -1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (VarId v : {edges[i].from, edges[i].to}) {
      if (v == kStartVar || v == kEndVar) continue;
      if (last_edge_at[v] >= 0) parent[find(static_cast<int>(i))] = find(last_edge_at[v]);
      last_edge_at[v] = static_cast<int>(i);
    }
  }
  int root = find(0);
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (find(static_cast<int>(i)) != root) return true;
  return false;
}

std::string canonical_key(int num_vars, std::span<const PatternEdge> edges, int pinned,
                          std::vector<VarId>* best_perm) {
  if (num_vars > kMaxPatternVars)
    throw LimitError("pattern exceeds canonicalization size bound (" +
                     std::to_string(kMaxPatternVars) + " variables)");

  auto encode = [&](const std::vector<VarId>& perm) {
    std::vector<std::array<char, 8>> tokens;
    tokens.reserve(edges.size());
    static const char* hex = "0123456789abcdef";
    for (const PatternEdge& e : edges) {
      VarId a = perm[e.from], b = perm[e.to];
      if (!e.directed && a > b) std::swap(a, b);
      std::array<char, 8> t;
      t[0] = static_cast<char>('a' + a);
      t[1] = e.directed ? '>' : '-';
      t[2] = static_cast<char>('a' + b);
      t[3] = hex[(e.label >> 12) & 0xf];
      t[4] = hex[(e.label >> 8) & 0xf];
      t[5] = hex[(e.label >> 4) & 0xf];
      t[6] = hex[e.label & 0xf];
      t[7] = ';';
      tokens.push_back(t);
    }
    std::sort(tokens.begin(), tokens.end());
    std::string out;
    out.reserve(2 + tokens.size() * 8);
    out.push_back(static_cast<char>('0' + num_vars));
    out.push_back('|');
    for (const auto& t : tokens) out.append(t.data(), t.size());
    return out;
  };

  std::vector<VarId> perm(num_vars);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best = encode(perm);
  std::vector<VarId> winner = perm;

  // Permute the non-pinned tail; identity was handled above.
  std::vector<VarId> tail(perm.begin() + pinned, perm.end());
  while (std::next_permutation(tail.begin(), tail.end())) {
    std::vector<VarId> full(num_vars);
    std::iota(full.begin(), full.begin() + pinned, 0);
    // full[v] = new id of old var v for the tail assignment: tail lists the
    // old vars in the order they take new ids pinned, pinned+1, ...
    for (std::size_t i = 0; i < tail.size(); ++i)
      full[tail[i]] = static_cast<VarId>(pinned + i);
    std::string key = encode(full);
    if (key < best) {
      best = std::move(key);
      winner = full;
    }
  }
  if (best_perm) *best_perm = std::move(winner);
  return best;
}

std::string canonical_form(const Pattern& p) {
  return canonical_key(p.num_vars(), p.edges(), 2, nullptr);
}

Canonical canonicalize(const Pattern& p) {
  Canonical c;
  c.key = canonical_key(p.num_vars(), p.edges(), 2, &c.var_map);
  std::vector<PatternEdge> mapped;
  mapped.reserve(p.edges().size());
  for (const PatternEdge& e : p.edges())
    mapped.push_back({c.var_map[e.from], c.var_map[e.to], e.label, e.directed});
  c.pattern = Pattern(p.num_vars(), std::move(mapped));
  return c;
}

std::pair<Pattern, Instance> path_to_pattern(const KnowledgeBase& kb, const PathInstance& path) {
  const std::size_t len = path.edges.size();
  if (path.nodes.size() != len + 1 || len == 0)
    throw ConfigError("path instance shape mismatch");

  // Variable for each position: start, end, then interiors in walk order.
  std::vector<VarId> var_at(path.nodes.size());
  var_at.front() = kStartVar;
  var_at.back() = kEndVar;
  for (std::size_t i = 1; i + 1 < path.nodes.size(); ++i)
    var_at[i] = static_cast<VarId>(1 + i);

  Instance inst;
  inst.binding.resize(path.nodes.size());
  for (std::size_t i = 0; i < path.nodes.size(); ++i) inst.binding[var_at[i]] = path.nodes[i];

  std::vector<PatternEdge> pedges;
  pedges.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    const Edge& e = kb.edge(path.edges[i]);
    bool forward = e.src == path.nodes[i];
    if (!forward && e.dst != path.nodes[i]) throw ConfigError("path edge does not touch node");
    VarId a = var_at[i], b = var_at[i + 1];
    if (forward)
      pedges.push_back({a, b, e.label, e.directed});
    else
      pedges.push_back({b, a, e.label, e.directed});
  }
  return {Pattern(static_cast<int>(path.nodes.size()), std::move(pedges)), std::move(inst)};
}

}  // namespace rex
