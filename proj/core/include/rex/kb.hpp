#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rex/errors.hpp"

namespace rex {

using EntityId = uint32_t;
using LabelId = uint32_t;

inline constexpr EntityId kNoEntity = std::numeric_limits<EntityId>::max();

// One knowledge base edge. Undirected edges are stored once with src < dst
// (ids are assigned in lexicographic name order, so id order == name order).
struct Edge {
  EntityId src;
  EntityId dst;
  LabelId label;
  bool directed;

  bool operator==(const Edge&) const = default;
};

enum class EndpointRole : uint8_t { Src, Dst, Undirected };

// Adjacency entry for one entity: which edge touches it and in what role.
struct IncidentEdge {
  uint32_t edge;  // index into KnowledgeBase::edges()
  EndpointRole role;
};

enum class Connectedness { Low, Medium, High };

const char* to_string(Connectedness c);

// Immutable edge-labeled graph over interned entity and label names.
// Built by load_kb(); entity/label ids are dense indices in sorted name order.
class KnowledgeBase {
 public:
  std::size_t entity_count() const { return entity_names_.size(); }
  std::size_t label_count() const { return label_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Exact duplicate lines dropped during load (diagnostic, not an error).
  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

  const std::string& entity_name(EntityId v) const { return entity_names_[v]; }
  const std::string& label_name(LabelId l) const { return label_names_[l]; }

  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<LabelId> find_label(std::string_view name) const;
  EntityId require_entity(std::string_view name) const;  // throws NotFoundError

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(uint32_t index) const { return edges_[index]; }

  // Every edge touching v, sorted by (label, other endpoint, role).
  std::span<const IncidentEdge> incident(EntityId v) const;

  // Number of incident edges; each edge counts once regardless of direction.
  std::size_t degree(EntityId v) const { return incident(v).size(); }

  EntityId other_endpoint(const Edge& e, EntityId v) const {
    return e.src == v ? e.dst : e.src;
  }

  // Exact edge lookup. For directed == false the endpoint order is ignored.
  bool has_edge(EntityId src, EntityId dst, LabelId label, bool directed) const;

  bool operator==(const KnowledgeBase& rhs) const {
    return entity_names_ == rhs.entity_names_ && label_names_ == rhs.label_names_ &&
           edges_ == rhs.edges_;
  }

 private:
  friend KnowledgeBase load_kb(std::istream& in, std::string_view source);

  void build_index();
  static uint64_t edge_key(EntityId src, EntityId dst, LabelId label, bool directed);

  std::vector<std::string> entity_names_;  // sorted; EntityId is the index
  std::vector<std::string> label_names_;   // sorted; LabelId is the index
  std::vector<Edge> edges_;
  std::vector<IncidentEdge> incident_;  // CSR payload
  std::vector<uint32_t> incident_offsets_;
  std::unordered_set<uint64_t> edge_keys_;
  std::size_t duplicates_dropped_ = 0;
};

// Load the tab-separated edge-list format:
//   src <TAB> label <TAB> dst <TAB> flag        flag is D (directed) or U
// Lines that are blank or start with '#' are skipped. A line whose src equals
// its dst declares an isolated entity and stores no edge. Exact duplicate
// edges are dropped and counted; malformed lines raise ParseError with the
// line number.
KnowledgeBase load_kb(std::istream& in, std::string_view source = "<stream>");
KnowledgeBase load_kb(const std::string& path);

// Serialize back to the same format; load_kb(write_kb(kb)) == kb.
void write_kb(const KnowledgeBase& kb, std::ostream& out);
void write_kb(const KnowledgeBase& kb, const std::string& path);

// Number of simple paths between a and b with at most max_len edges, edge
// direction ignored. Parallel edges yield distinct paths. Stops counting at
// `cap` (exact result when below). pre: a != b.
uint64_t connectedness(const KnowledgeBase& kb, EntityId a, EntityId b, int max_len,
                       uint64_t cap = std::numeric_limits<uint64_t>::max());

// Brackets: [0,30] low, [31,100] medium, >100 high.
Connectedness classify_connectedness(uint64_t paths);

}  // namespace rex
