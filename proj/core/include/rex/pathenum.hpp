#pragma once

#include <cstdint>
#include <vector>

#include "rex/pattern.hpp"

namespace rex {

enum class PathEnumKind { Naive, Basic, Prioritized };

struct PathEnumStats {
  uint64_t nodes_expanded = 0;
  uint64_t partials_created = 0;
  uint64_t joins_tested = 0;
  uint64_t path_instances = 0;
};

// All simple paths between start and end with at most max_len edges,
// direction ignored; parallel edges give distinct paths. All three kinds
// return the same set; order is deterministic but unspecified.
std::vector<PathInstance> enumerate_path_instances(const KnowledgeBase& kb, EntityId start,
                                                   EntityId end, int max_len, PathEnumKind kind,
                                                   PathEnumStats* stats = nullptr);

// Group path instances into path-shaped explanations (level 1): one
// explanation per distinct pattern, instances sorted, explanations sorted by
// canonical form.
std::vector<Explanation> group_paths(const KnowledgeBase& kb,
                                     const std::vector<PathInstance>& paths);

// enumerate_path_instances + group_paths.
std::vector<Explanation> enumerate_paths(const KnowledgeBase& kb, EntityId start, EntityId end,
                                         int max_len, PathEnumKind kind,
                                         PathEnumStats* stats = nullptr);

PathEnumKind parse_path_enum_kind(const std::string& name);  // naive|basic|prioritized
const char* to_string(PathEnumKind kind);

}  // namespace rex
