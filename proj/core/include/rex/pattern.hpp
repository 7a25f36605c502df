#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rex/kb.hpp"

namespace rex {

// Pattern variables are dense ids. Variable 0 is always the start target and
// variable 1 the end target; variables >= 2 are interior (existential) ones.
using VarId = uint8_t;
inline constexpr VarId kStartVar = 0;
inline constexpr VarId kEndVar = 1;

// Canonicalization enumerates permutations of interior variables, so pattern
// size is hard-capped; enumeration configs validate against this.
inline constexpr int kMaxPatternVars = 9;

struct PatternEdge {
  VarId from;
  VarId to;
  LabelId label;
  bool directed;

  auto operator<=>(const PatternEdge&) const = default;
};

// A query graph over variables. Stored normalized: undirected edges keep
// from < to, the edge list is sorted, and exact duplicate edges are merged.
// Connectivity is not enforced here; minimality checks reject stray shapes.
class Pattern {
 public:
  Pattern() = default;
  Pattern(int num_vars, std::vector<PatternEdge> edges);

  int num_vars() const { return num_vars_; }
  int interior_vars() const { return num_vars_ - 2; }
  std::span<const PatternEdge> edges() const { return edges_; }

  bool operator==(const Pattern&) const = default;

 private:
  uint8_t num_vars_ = 2;
  std::vector<PatternEdge> edges_;
};

// True iff every variable and every edge lies on at least one simple
// undirected path from the start variable to the end variable.
bool is_essential(const Pattern& p);

// True iff the edges split into two non-empty groups that share no interior
// variable as an endpoint.
bool is_decomposable(const Pattern& p);

inline bool is_minimal(const Pattern& p) { return is_essential(p) && !is_decomposable(p); }

// Canonical string key: equal iff the patterns are isomorphic under a
// variable bijection that fixes both targets and preserves labels, direction
// and orientation. Computed by minimizing over interior permutations; throws
// LimitError beyond kMaxPatternVars.
std::string canonical_form(const Pattern& p);

struct Canonical {
  Pattern pattern;             // representative with renumbered interiors
  std::string key;             // == canonical_form(pattern)
  std::vector<VarId> var_map;  // old var id -> new var id
};

Canonical canonicalize(const Pattern& p);

// Shared low-level key: the first `pinned` variables are fixed points of the
// isomorphisms considered. The public canonical_form pins both targets;
// enumeration internals reuse this for partially grown shapes.
std::string canonical_key(int num_vars, std::span<const PatternEdge> edges, int pinned,
                          std::vector<VarId>* best_perm = nullptr);

// One occurrence of a pattern: binding[var] is the bound entity. Bindings are
// injective; interiors never bind a target entity.
struct Instance {
  std::vector<EntityId> binding;

  auto operator<=>(const Instance&) const = default;
};

// A pattern together with its full instance set between a fixed entity pair.
// level records which union round first produced the shape: 1 for path shapes,
// r+1 for round r, 0 when unknown (whole-graph enumeration).
struct Explanation {
  Pattern pattern;
  std::vector<Instance> instances;
  int level = 0;
  std::string canon;  // cached canonical_form(pattern)
};

// All instances of p between start and end, sorted by binding vector.
// pre: start != end, both in the kb.
std::vector<Instance> match_instances(const KnowledgeBase& kb, const Pattern& p,
                                      EntityId start, EntityId end);

// Instances with only the start target bound; the end variable ranges over
// every entity other than start. Used for per-end aggregation. Sorted by
// binding vector.
std::vector<Instance> match_with_free_end(const KnowledgeBase& kb, const Pattern& p,
                                          EntityId start);

// A concrete simple path in the kb: nodes[0..len], edges[i] connects nodes[i]
// and nodes[i+1]. Parallel edges are distinguished by edge index.
struct PathInstance {
  std::vector<EntityId> nodes;
  std::vector<uint32_t> edges;
};

// Convert a simple path between the targets into a path-shaped pattern plus
// the binding it came from. Interior variables are numbered in traversal
// order; edge orientation is preserved relative to the stored edge.
// pre: nodes distinct, nodes.front() is the start entity, nodes.back() the end.
std::pair<Pattern, Instance> path_to_pattern(const KnowledgeBase& kb, const PathInstance& path);

}  // namespace rex
