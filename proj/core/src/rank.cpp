#include "rex/rank.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace rex {

namespace {

void validate(const RankConfig& cfg) {
  if (cfg.n < 2 || cfg.n > kMaxPatternVars)
    throw ConfigError("max pattern size must be between 2 and " +
                      std::to_string(int{kMaxPatternVars}));
  if (cfg.k < 1) throw ConfigError("k must be positive");
  if (cfg.dist.sample_size == 0) throw ConfigError("sample size must be positive");
  if (cfg.dist.threads < 1) throw ConfigError("thread count must be positive");
}

bool ranks_before(const RankedItem& a, const RankedItem& b) {
  if (a.score != b.score) return b.score < a.score;
  return a.explanation.canon < b.explanation.canon;
}

struct TopK {
  explicit TopK(int k) : k(static_cast<std::size_t>(k)) {}

  bool full() const { return items.size() >= k; }
  const RankedItem& kth() const { return items.back(); }

  void offer(RankedItem&& it) {
    auto pos = std::lower_bound(items.begin(), items.end(), it, ranks_before);
    if (full() && pos == items.end()) return;
    items.insert(pos, std::move(it));
    if (items.size() > k) items.pop_back();
  }

  std::size_t k;
  std::vector<RankedItem> items;
};

int64_t position_part(const InterestScore& s, std::size_t idx) {
  return static_cast<int64_t>(std::llround(-s.parts[idx]));
}

}  // namespace

InterestScore score_explanation(const KnowledgeBase& kb, const Explanation& e, EntityId start,
                                EntityId end, MeasureId m, const DistOptions& opt) {
  switch (m) {
    case MeasureId::Size: return m_size(e.pattern);
    case MeasureId::RandomWalk: return m_random_walk(e.pattern);
    case MeasureId::Count: return {{static_cast<double>(count_value(e.instances))}};
    case MeasureId::Monocount:
      return {{static_cast<double>(monocount_value(e.pattern.num_vars(), e.instances))}};
    case MeasureId::LocalDist: {
      double a = static_cast<double>(count_value(e.instances));
      return m_position(a, local_distribution(kb, e.pattern, start, AggKind::Count));
    }
    case MeasureId::GlobalDist: {
      double a = static_cast<double>(count_value(e.instances));
      return m_position(a, global_distribution(kb, e.pattern, AggKind::Count, opt.sample_size,
                                               opt.seed, opt.threads));
    }
    case MeasureId::SizeMonocount: {
      InterestScore s = m_size(e.pattern);
      s.parts.push_back(
          static_cast<double>(monocount_value(e.pattern.num_vars(), e.instances)));
      return s;
    }
    case MeasureId::SizeLocalDist: {
      InterestScore s = m_size(e.pattern);
      InterestScore pos = score_explanation(kb, e, start, end, MeasureId::LocalDist, opt);
      s.parts.push_back(pos.parts[0]);
      return s;
    }
  }
  throw ConfigError("unknown measure");
}

bool measure_antimonotone(MeasureId m) {
  return m == MeasureId::Size || m == MeasureId::Monocount || m == MeasureId::SizeMonocount;
}

bool measure_positional(MeasureId m) {
  return m == MeasureId::LocalDist || m == MeasureId::GlobalDist ||
         m == MeasureId::SizeLocalDist;
}

RankedResult rank_general(const KnowledgeBase& kb, EntityId start, EntityId end,
                          const RankConfig& cfg) {
  validate(cfg);
  RankedResult res;
  UnionTrace* trace = nullptr;
  EnumResult er = general_enum(kb, start, end, cfg.n, cfg.strategy, cfg.limits, trace);
  res.counters.path_stats = er.path_stats;
  res.counters.union_stats = er.union_stats;
  res.counters.enumerated = er.explanations.size();
  TopK top(cfg.k);
  for (Explanation& e : er.explanations) {
    InterestScore s = score_explanation(kb, e, start, end, cfg.measure, cfg.dist);
    ++res.counters.scored;
    top.offer({std::move(e), std::move(s)});
  }
  res.items = std::move(top.items);
  return res;
}

namespace {

// Threshold pruning: anti-monotone scores only decrease along union
// derivations, so an explanation scoring strictly below the current k-th
// best cannot contribute an ancestor of any top-k result and need not be
// expanded. Every candidate still enters the pool (and the top-k list), so
// the output matches rank_general exactly, ties included.
RankedResult rank_topk_antimonotone(const KnowledgeBase& kb, EntityId start, EntityId end,
                                    const RankConfig& cfg) {
  RankedResult res;
  std::vector<Explanation> paths = enumerate_paths(kb, start, end, cfg.n - 1, cfg.strategy.path,
                                                   &res.counters.path_stats);
  TopK top(cfg.k);
  UnionOptions uo;
  uo.n = cfg.n;
  uo.kind = cfg.strategy.join;
  uo.limits = cfg.limits;
  uo.stats = &res.counters.union_stats;
  uo.expand_filter = [&](std::span<const Explanation> pool,
                         std::span<const uint32_t> cand) {
    std::vector<InterestScore> scores;
    scores.reserve(cand.size());
    for (uint32_t idx : cand) {
      InterestScore s =
          score_explanation(kb, pool[idx], start, end, cfg.measure, cfg.dist);
      ++res.counters.scored;
      scores.push_back(s);
      top.offer({pool[idx], std::move(s)});
    }
    std::vector<char> mask(cand.size(), 1);
    if (top.full()) {
      const InterestScore& threshold = top.kth().score;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        if (scores[i] < threshold) {
          mask[i] = 0;
          ++res.counters.pruned;
        }
      }
    }
    return mask;
  };
  std::vector<Explanation> pool = path_union(std::move(paths), uo);
  res.counters.enumerated = pool.size();
  res.items = std::move(top.items);
  return res;
}

// Capped position evaluation: enumerate everything, then visit candidates in
// an order that lets the k-th best score bound how much of each position
// computation is needed. Anything that enters the top-k list is scored in
// full, so the output matches rank_general exactly.
RankedResult rank_topk_position(const KnowledgeBase& kb, EntityId start, EntityId end,
                                const RankConfig& cfg) {
  RankedResult res;
  EnumResult er = general_enum(kb, start, end, cfg.n, cfg.strategy, cfg.limits, nullptr);
  res.counters.path_stats = er.path_stats;
  res.counters.union_stats = er.union_stats;
  res.counters.enumerated = er.explanations.size();

  const bool sized = cfg.measure == MeasureId::SizeLocalDist;
  std::vector<uint32_t> order(er.explanations.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const Explanation& ea = er.explanations[a];
    const Explanation& eb = er.explanations[b];
    if (sized && ea.pattern.num_vars() != eb.pattern.num_vars())
      return ea.pattern.num_vars() < eb.pattern.num_vars();
    return ea.canon < eb.canon;
  });

  auto position_full = [&](const Explanation& e, double value) -> int64_t {
    if (cfg.measure == MeasureId::GlobalDist)
      return position_in(global_distribution(kb, e.pattern, AggKind::Count,
                                             cfg.dist.sample_size, cfg.dist.seed,
                                             cfg.dist.threads),
                         value);
    return position_in(local_distribution(kb, e.pattern, start, AggKind::Count), value);
  };
  auto position_capped = [&](const Explanation& e, double value,
                             int64_t cap) -> std::optional<int64_t> {
    if (cfg.measure == MeasureId::GlobalDist)
      return global_position_capped(kb, e.pattern, AggKind::Count, value,
                                    cfg.dist.sample_size, cfg.dist.seed, cap);
    return local_position_capped(kb, e.pattern, start, AggKind::Count, value, cap);
  };

  TopK top(cfg.k);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const Explanation& e = er.explanations[order[oi]];
    double value = static_cast<double>(count_value(e.instances));
    double size_part = -static_cast<double>(e.pattern.num_vars());
    bool capped = false;
    int64_t cap = 0;
    if (top.full()) {
      const InterestScore& kth = top.kth().score;
      if (sized) {
        if (size_part < kth.parts[0]) {
          // Candidates come in ascending variable count: nothing later can
          // reach the list either.
          res.counters.pruned += order.size() - oi;
          break;
        }
        if (size_part == kth.parts[0]) {
          capped = true;
          cap = position_part(kth, 1);
        }
      } else {
        capped = true;
        cap = position_part(kth, 0);
      }
    }
    int64_t pos;
    if (capped) {
      std::optional<int64_t> p = position_capped(e, value, cap);
      if (!p) {
        ++res.counters.pruned;
        continue;
      }
      pos = *p;
    } else {
      pos = position_full(e, value);
    }
    ++res.counters.scored;
    InterestScore s;
    if (sized) s.parts.push_back(size_part);
    s.parts.push_back(static_cast<double>(-pos));
    top.offer({e, std::move(s)});
  }
  res.items = std::move(top.items);
  return res;
}

}  // namespace

RankedResult rank_explanations(const KnowledgeBase& kb, EntityId start, EntityId end,
                               const RankConfig& cfg) {
  validate(cfg);
  if (!cfg.prune) return rank_general(kb, start, end, cfg);
  if (measure_antimonotone(cfg.measure)) return rank_topk_antimonotone(kb, start, end, cfg);
  if (measure_positional(cfg.measure)) return rank_topk_position(kb, start, end, cfg);
  return rank_general(kb, start, end, cfg);
}

std::vector<int> load_dcg_labels(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line != "0" && line != "1" && line != "2")
      throw ParseError("relevance label must be 0, 1 or 2", lineno);
    labels.push_back(line[0] - '0');
  }
  if (labels.size() != 10)
    throw ParseError(
        "expected exactly 10 relevance labels, got " + std::to_string(labels.size()), lineno);
  return labels;
}

std::vector<int> load_dcg_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_dcg_labels(in);
}

double dcg_score(const std::vector<int>& labels) {
  if (labels.size() != 10) throw ConfigError("expected exactly 10 relevance labels");
  double weight_total = 0.0;
  double gain = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] > 2) throw ConfigError("relevance label out of range");
    double w = 1.0 / std::log2(static_cast<double>(i) + 2.0);
    weight_total += w;
    gain += labels[i] * w;
  }
  return 100.0 * gain / (2.0 * weight_total);
}

}  // namespace rex
