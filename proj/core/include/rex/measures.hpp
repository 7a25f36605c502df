#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rex/pattern.hpp"

namespace rex {

// Interestingness measures. Scores compare lexicographically; larger means
// more interesting.
enum class MeasureId {
  Size,
  RandomWalk,
  Count,
  Monocount,
  LocalDist,
  GlobalDist,
  SizeMonocount,
  SizeLocalDist,
};

MeasureId parse_measure(const std::string& name);
const char* to_string(MeasureId m);

struct InterestScore {
  std::vector<double> parts;

  auto operator<=>(const InterestScore&) const = default;
};

enum class AggKind { Count, Monocount };

struct DistributionEntry {
  double value;
  uint64_t pair_count;
};

// Histogram of an aggregate over entity pairs: entries sorted ascending by
// value, only aggregates >= 1 appear. Local form varies the end entity for a
// fixed start; global form merges local ones over a seeded start sample.
struct Distribution {
  std::vector<DistributionEntry> entries;
  bool global = false;
  uint64_t sample_size = 0;
  uint64_t seed = 0;
  bool sample_clamped = false;  // requested sample exceeded the entity count

  uint64_t total_pairs() const {
    uint64_t t = 0;
    for (const auto& e : entries) t += e.pair_count;
    return t;
  }
};

int64_t count_value(const std::vector<Instance>& instances);

// Min over interior variables of the number of distinct bound entities;
// 1 when the pattern has no interior variables, 0 when there are no
// instances.
int64_t monocount_value(int num_vars, const std::vector<Instance>& instances);

// Negated variable count.
InterestScore m_size(const Pattern& p);

// Effective electrical conductance between the targets with every edge a
// unit resistor, direction ignored, parallel edges in parallel. pre: pattern
// connected.
double conductance(const Pattern& p);
InterestScore m_random_walk(const Pattern& p);

InterestScore m_count(const KnowledgeBase& kb, const Pattern& p, EntityId start, EntityId end);
InterestScore m_monocount(const KnowledgeBase& kb, const Pattern& p, EntityId start,
                          EntityId end);

Distribution local_distribution(const KnowledgeBase& kb, const Pattern& p, EntityId start,
                                AggKind agg);

// Merge of local distributions over sample_size distinct start entities
// drawn uniformly with the given seed (clamped to the entity count).
Distribution global_distribution(const KnowledgeBase& kb, const Pattern& p, AggKind agg,
                                 uint64_t sample_size, uint64_t seed, int threads = 1);

// Number of pairs whose aggregate strictly exceeds `value`.
int64_t position_in(const Distribution& d, double value);

// Lazy positions: identical to position_in over the corresponding
// distribution when they complete, but return nullopt as soon as the running
// pair count exceeds cap. Used by top-k ranking to discard hopeless
// candidates early.
std::optional<int64_t> local_position_capped(const KnowledgeBase& kb, const Pattern& p,
                                             EntityId start, AggKind agg, double value,
                                             int64_t cap);
std::optional<int64_t> global_position_capped(const KnowledgeBase& kb, const Pattern& p,
                                              AggKind agg, double value, uint64_t sample_size,
                                              uint64_t seed, int64_t cap);

// Negated position, so that rarer (smaller-position) aggregates score higher.
InterestScore m_position(double value, const Distribution& d);

struct DistOptions {
  uint64_t sample_size = 100;
  uint64_t seed = 42;
  int threads = 1;
};

// Score of a single measure for a pattern between two targets. Distributional
// measures aggregate with count.
InterestScore measure_score(MeasureId m, const KnowledgeBase& kb, const Pattern& p,
                            EntityId start, EntityId end, const DistOptions& opt = {});

// Lexicographic combination: primary score parts followed by secondary ones.
InterestScore m_combined(MeasureId primary, MeasureId secondary, const KnowledgeBase& kb,
                         const Pattern& p, EntityId start, EntityId end,
                         const DistOptions& opt = {});

}  // namespace rex
