#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rex/pathenum.hpp"
#include "rex/pattern.hpp"

namespace rex {

enum class UnionKind { Basic, Prune };

struct Strategy {
  PathEnumKind path = PathEnumKind::Prioritized;
  UnionKind join = UnionKind::Prune;
};

Strategy parse_strategy(const std::string& name);  // e.g. "prioritized+prune"
std::string to_string(const Strategy& s);
const char* to_string(UnionKind kind);
std::vector<Strategy> all_strategies();

struct UnionStats {
  uint64_t merge_calls = 0;
  uint64_t mappings_enumerated = 0;
  uint64_t instance_pairs_tested = 0;
  uint64_t duplicates_rejected = 0;
  uint64_t rounds = 0;
};

// Hard bounds on an enumeration call. max_explanations counts retained
// explanations (and, for the whole-graph enumerator, live candidate shapes).
struct EnumLimits {
  std::size_t max_explanations = 100000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

inline constexpr std::size_t kDefaultExplanationCap = 100000;

// Records which merge produced which explanation; used for measure
// monotonicity checks. Indices refer to the result vector of the producing
// call; a duplicate child points at its earlier equivalent.
struct DerivationEvent {
  uint32_t parent;   // expanded explanation
  uint32_t partner;  // path explanation merged in
  uint32_t child;
  bool duplicate;
};

struct UnionTrace {
  std::vector<DerivationEvent> events;
};

// Pairwise union of two explanations (shared targets implied). Enumerates
// every partial injective mapping between interior variables (at least one
// pair matched), coalesces the patterns, and joins the instance sets on the
// matched variables. Keeps results with <= n variables and at least one
// instance. Output patterns are canonicalized; isomorphic duplicates across
// mappings are possible and left to the caller.
std::vector<Explanation> merge_explanations(const Explanation& a, const Explanation& b, int n,
                                            UnionStats* stats = nullptr);

bool duplicated(const Explanation& re, std::span<const Explanation> pool);

struct UnionOptions {
  int n = 5;
  UnionKind kind = UnionKind::Prune;
  EnumLimits limits;
  UnionStats* stats = nullptr;
  UnionTrace* trace = nullptr;
  // Called at the start of each round with the pool so far and the indices
  // about to be expanded; a false mask entry excludes that explanation from
  // expansion (it stays in the result). Used by score-guided top-k ranking.
  std::function<std::vector<char>(std::span<const Explanation>, std::span<const uint32_t>)>
      expand_filter;
};

// Round-based union closure over a path explanation pool: round r merges the
// previous round's new explanations with every path, dropping canonical
// duplicates. Kind Prune consults composition history to merge only path
// partners that share a parent component with some sibling, per the covering
// decomposition property of minimal patterns. Returns paths + all new
// explanations; level = round + 1.
std::vector<Explanation> path_union(std::vector<Explanation> paths, const UnionOptions& opt);

// Whole-graph reference enumerator: grows patterns edge by edge from a seed
// holding only the targets, prunes canonical duplicates and zero-instance
// shapes, and emits minimal ones. Exponential; used as oracle and baseline.
// Levels are not derived here (level = 0).
std::vector<Explanation> naive_enum(const KnowledgeBase& kb, EntityId start, EntityId end, int n,
                                    const EnumLimits& limits = {}, UnionStats* stats = nullptr);

struct EnumResult {
  std::vector<Explanation> explanations;
  PathEnumStats path_stats;
  UnionStats union_stats;
};

// Path enumeration (max_len = n - 1) followed by path_union.
EnumResult general_enum(const KnowledgeBase& kb, EntityId start, EntityId end, int n,
                        const Strategy& strategy, const EnumLimits& limits = {},
                        UnionTrace* trace = nullptr);

// Recompute an explanation's instance set and minimality from scratch;
// throws Error on mismatch. Used by --verify and tests.
void verify_explanation(const KnowledgeBase& kb, const Explanation& re, EntityId start,
                        EntityId end);

}  // namespace rex
