#include <algorithm>

#include "rex/pattern.hpp"

namespace rex {

namespace {

// Incident edges of v carrying the given label (they are sorted by label).
std::span<const IncidentEdge> incident_with_label(const KnowledgeBase& kb, EntityId v,
                                                  LabelId label) {
  auto all = kb.incident(v);
  auto lo = std::lower_bound(all.begin(), all.end(), label,
                             [&](const IncidentEdge& ie, LabelId l) {
                               return kb.edge(ie.edge).label < l;
                             });
  auto hi = std::upper_bound(lo, all.end(), label, [&](LabelId l, const IncidentEdge& ie) {
    return l < kb.edge(ie.edge).label;
  });
  return {lo, hi};
}

// Backtracking subgraph matcher. Bindings are injective over all variables,
// which also keeps interior variables away from the bound targets. Variable
// order is most-constrained-first among variables adjacent to the bound set.
struct Matcher {
  const KnowledgeBase& kb;
  const Pattern& p;
  std::vector<std::vector<int>> var_edges;
  std::vector<EntityId> binding;
  int num_bound = 0;
  std::vector<Instance> out;

  Matcher(const KnowledgeBase& k, const Pattern& pat)
      : kb(k), p(pat), var_edges(pat.num_vars()), binding(pat.num_vars(), kNoEntity) {
    for (std::size_t i = 0; i < p.edges().size(); ++i) {
      var_edges[p.edges()[i].from].push_back(static_cast<int>(i));
      var_edges[p.edges()[i].to].push_back(static_cast<int>(i));
    }
  }

  bool used(EntityId ent) const {
    for (EntityId b : binding)
      if (b == ent) return true;
    return false;
  }

  bool edges_ok(VarId v) const {
    for (int ei : var_edges[v]) {
      const PatternEdge& e = p.edges()[ei];
      VarId o = e.from == v ? e.to : e.from;
      if (binding[o] == kNoEntity) continue;
      if (!kb.has_edge(binding[e.from], binding[e.to], e.label, e.directed)) return false;
    }
    return true;
  }

  void try_bind(VarId v, EntityId ent) {
    if (used(ent)) return;
    binding[v] = ent;
    ++num_bound;
    if (edges_ok(v)) recurse();
    binding[v] = kNoEntity;
    --num_bound;
  }

  void recurse() {
    if (num_bound == p.num_vars()) {
      out.push_back({binding});
      return;
    }
    VarId best_var = 255;
    std::size_t best_cost = SIZE_MAX;
    int best_anchor = -1;
    for (int v = 0; v < p.num_vars(); ++v) {
      if (binding[v] != kNoEntity) continue;
      for (int ei : var_edges[v]) {
        const PatternEdge& e = p.edges()[ei];
        VarId o = e.from == v ? e.to : e.from;
        if (binding[o] == kNoEntity) continue;
        std::size_t cost = incident_with_label(kb, binding[o], e.label).size();
        if (cost < best_cost) {
          best_cost = cost;
          best_var = static_cast<VarId>(v);
          best_anchor = ei;
        }
      }
    }
    if (best_anchor < 0) {
      // No unbound variable touches the bound set (disconnected pattern or a
      // free end variable with no edges): scan all entities.
      for (int v = 0; v < p.num_vars(); ++v)
        if (binding[v] == kNoEntity) {
          for (EntityId ent = 0; ent < kb.entity_count(); ++ent)
            try_bind(static_cast<VarId>(v), ent);
          return;
        }
      return;
    }
    const PatternEdge& ae = p.edges()[best_anchor];
    VarId o = ae.from == best_var ? ae.to : ae.from;
    EntityId oe = binding[o];
    for (const IncidentEdge& ie : incident_with_label(kb, oe, ae.label)) {
      const Edge& ke = kb.edge(ie.edge);
      if (ke.directed != ae.directed) continue;
      if (ae.directed) {
        if (ae.from == best_var) {
          if (ke.dst != oe) continue;
          try_bind(best_var, ke.src);
        } else {
          if (ke.src != oe) continue;
          try_bind(best_var, ke.dst);
        }
      } else {
        try_bind(best_var, kb.other_endpoint(ke, oe));
      }
    }
  }
};

}  // namespace

std::vector<Instance> match_instances(const KnowledgeBase& kb, const Pattern& p,
                                      EntityId start, EntityId end) {
  if (start == end) throw ConfigError("target entities must differ");
  if (start >= kb.entity_count() || end >= kb.entity_count())
    throw NotFoundError("target entity id out of range");
  Matcher m(kb, p);
  m.binding[kStartVar] = start;
  m.num_bound = 1;
  m.try_bind(kEndVar, end);
  std::sort(m.out.begin(), m.out.end());
  return std::move(m.out);
}

std::vector<Instance> match_with_free_end(const KnowledgeBase& kb, const Pattern& p,
                                          EntityId start) {
  if (start >= kb.entity_count()) throw NotFoundError("target entity id out of range");
  Matcher m(kb, p);
  m.binding[kStartVar] = start;
  m.num_bound = 1;
  m.recurse();
  std::sort(m.out.begin(), m.out.end());
  return std::move(m.out);
}

}  // namespace rex
