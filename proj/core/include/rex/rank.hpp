#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rex/enumerate.hpp"
#include "rex/measures.hpp"

namespace rex {

struct RankConfig {
  int n = 5;  // max pattern variables
  int k = 10;
  MeasureId measure = MeasureId::SizeLocalDist;
  Strategy strategy;
  bool prune = true;  // score-guided pruning when the measure supports it
  DistOptions dist;
  EnumLimits limits;
};

struct RankedItem {
  Explanation explanation;
  InterestScore score;
};

struct RankCounters {
  uint64_t enumerated = 0;  // explanations produced
  uint64_t scored = 0;      // full score computations
  uint64_t pruned = 0;      // candidates discarded without a full score
  PathEnumStats path_stats;
  UnionStats union_stats;
};

struct RankedResult {
  std::vector<RankedItem> items;  // best first; ties broken by canonical form
  RankCounters counters;
};

// Score of an already-enumerated explanation, reusing its instance set.
// Equals measure_score on the explanation's pattern.
InterestScore score_explanation(const KnowledgeBase& kb, const Explanation& e, EntityId start,
                                EntityId end, MeasureId m, const DistOptions& opt = {});

// True when a derived explanation can never outscore the explanations it was
// merged from, which makes threshold pruning during the union rounds exact.
bool measure_antimonotone(MeasureId m);
// True when the score ranks a pair count inside a distribution, enabling
// lazily capped position computation.
bool measure_positional(MeasureId m);

// Enumerate everything, score everything, keep the best k.
RankedResult rank_general(const KnowledgeBase& kb, EntityId start, EntityId end,
                          const RankConfig& cfg);

// Dispatch: prune=false or a non-prunable measure falls back to
// rank_general; otherwise threshold pruning (anti-monotone measures) or
// capped position evaluation (positional measures). Results are always
// identical to rank_general.
RankedResult rank_explanations(const KnowledgeBase& kb, EntityId start, EntityId end,
                               const RankConfig& cfg);

// Relevance labels for a ranked list: exactly ten lines, each 0, 1 or 2.
std::vector<int> load_dcg_labels(std::istream& in);
std::vector<int> load_dcg_labels(const std::string& path);

// Discounted cumulative gain of ten graded labels, scaled so that all-2s
// scores exactly 100.
double dcg_score(const std::vector<int>& labels);

}  // namespace rex
