#include "rex/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "rex/rng.hpp"

namespace rex {

MeasureId parse_measure(const std::string& name) {
  if (name == "size") return MeasureId::Size;
  if (name == "random-walk") return MeasureId::RandomWalk;
  if (name == "count") return MeasureId::Count;
  if (name == "monocount") return MeasureId::Monocount;
  if (name == "local-dist") return MeasureId::LocalDist;
  if (name == "global-dist") return MeasureId::GlobalDist;
  if (name == "size+monocount") return MeasureId::SizeMonocount;
  if (name == "size+local-dist") return MeasureId::SizeLocalDist;
  throw ConfigError("unknown measure: " + name);
}

const char* to_string(MeasureId m) {
  switch (m) {
    case MeasureId::Size: return "size";
    case MeasureId::RandomWalk: return "random-walk";
    case MeasureId::Count: return "count";
    case MeasureId::Monocount: return "monocount";
    case MeasureId::LocalDist: return "local-dist";
    case MeasureId::GlobalDist: return "global-dist";
    case MeasureId::SizeMonocount: return "size+monocount";
    case MeasureId::SizeLocalDist: return "size+local-dist";
  }
  return "?";
}

int64_t count_value(const std::vector<Instance>& instances) {
  return static_cast<int64_t>(instances.size());
}

int64_t monocount_value(int num_vars, const std::vector<Instance>& instances) {
  if (instances.empty()) return 0;
  if (num_vars <= 2) return 1;  // direct edge between the targets
  int64_t best = INT64_MAX;
  std::vector<EntityId> vals;
  vals.reserve(instances.size());
  for (int v = 2; v < num_vars; ++v) {
    vals.clear();
    for (const Instance& g : instances) vals.push_back(g.binding[v]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    best = std::min(best, static_cast<int64_t>(vals.size()));
  }
  return best;
}

InterestScore m_size(const Pattern& p) { return {{-static_cast<double>(p.num_vars())}}; }

double conductance(const Pattern& p) {
  const int n = p.num_vars();
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [&](int i, int j) -> double& { return c[static_cast<std::size_t>(i) * n + j]; };
  for (const PatternEdge& e : p.edges()) {
    at(e.from, e.to) += 1.0;
    at(e.to, e.from) += 1.0;
  }

  // Fix potential 1 at start, 0 at end; solve Kirchhoff balance for the
  // interior potentials with Gaussian elimination (systems stay tiny).
  const int m = n - 2;
  std::vector<double> a(static_cast<std::size_t>(m) * (m + 1), 0.0);
  auto row = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * (m + 1) + j]; };
  for (int i = 0; i < m; ++i) {
    double total = 0;
    for (int j = 0; j < n; ++j) total += at(i + 2, j);
    row(i, i) = total;
    for (int j = 0; j < m; ++j)
      if (j != i) row(i, j) = -at(i + 2, j + 2);
    row(i, m) = at(i + 2, kStartVar) * 1.0;
  }
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r)
      if (std::fabs(row(r, col)) > std::fabs(row(pivot, col))) pivot = r;
    if (std::fabs(row(pivot, col)) < 1e-12)
      throw ConfigError("conductance undefined: pattern is not connected");
    if (pivot != col)
      for (int j = 0; j <= m; ++j) std::swap(row(pivot, j), row(col, j));
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      double f = row(r, col) / row(col, col);
      if (f == 0) continue;
      for (int j = col; j <= m; ++j) row(r, j) -= f * row(col, j);
    }
  }
  std::vector<double> x(m);
  for (int i = 0; i < m; ++i) x[i] = row(i, m) / row(i, i);

  double current = at(kStartVar, kEndVar);  // direct-edge branches
  for (int i = 0; i < m; ++i) current += at(kStartVar, i + 2) * (1.0 - x[i]);
  return current;
}

InterestScore m_random_walk(const Pattern& p) { return {{conductance(p)}}; }

InterestScore m_count(const KnowledgeBase& kb, const Pattern& p, EntityId start, EntityId end) {
  return {{static_cast<double>(count_value(match_instances(kb, p, start, end)))}};
}

InterestScore m_monocount(const KnowledgeBase& kb, const Pattern& p, EntityId start,
                          EntityId end) {
  return {{static_cast<double>(
      monocount_value(p.num_vars(), match_instances(kb, p, start, end)))}};
}

namespace {

// Per-end aggregates from one grouped matching pass (instances are sorted,
// so each end entity's group is contiguous).
std::vector<std::pair<EntityId, int64_t>> end_aggregates(const KnowledgeBase& kb,
                                                         const Pattern& p, EntityId start,
                                                         AggKind agg) {
  std::vector<Instance> all = match_with_free_end(kb, p, start);
  std::vector<std::pair<EntityId, int64_t>> out;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    EntityId y = all[i].binding[kEndVar];
    while (j < all.size() && all[j].binding[kEndVar] == y) ++j;
    int64_t value;
    if (agg == AggKind::Count) {
      value = static_cast<int64_t>(j - i);
    } else {
      std::vector<Instance> group(all.begin() + i, all.begin() + j);
      value = monocount_value(p.num_vars(), group);
    }
    out.push_back({y, value});
    i = j;
  }
  return out;
}

Distribution histogram(std::map<int64_t, uint64_t>&& tally) {
  Distribution d;
  d.entries.reserve(tally.size());
  for (const auto& [value, count] : tally)
    d.entries.push_back({static_cast<double>(value), count});
  return d;
}

}  // namespace

Distribution local_distribution(const KnowledgeBase& kb, const Pattern& p, EntityId start,
                                AggKind agg) {
  std::map<int64_t, uint64_t> tally;
  for (const auto& [y, value] : end_aggregates(kb, p, start, agg)) ++tally[value];
  return histogram(std::move(tally));
}

Distribution global_distribution(const KnowledgeBase& kb, const Pattern& p, AggKind agg,
                                 uint64_t sample_size, uint64_t seed, int threads) {
  if (sample_size == 0) throw ConfigError("sample size must be positive");
  Distribution d;
  d.global = true;
  d.seed = seed;
  d.sample_clamped = sample_size > kb.entity_count();
  uint64_t k = std::min<uint64_t>(sample_size, kb.entity_count());
  d.sample_size = k;

  std::mt19937_64 rng(seed);
  std::vector<uint64_t> starts = sample_without_replacement(rng, kb.entity_count(), k);

  int nthreads = std::max(1, threads);
  std::vector<std::map<int64_t, uint64_t>> tallies(nthreads);
  auto work = [&](int t) {
    for (std::size_t i = t; i < starts.size(); i += nthreads)
      for (const auto& [y, value] :
           end_aggregates(kb, p, static_cast<EntityId>(starts[i]), agg))
        ++tallies[t][value];
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::map<int64_t, uint64_t> merged;
  for (const auto& tally : tallies)
    for (const auto& [value, count] : tally) merged[value] += count;

  Distribution h = histogram(std::move(merged));
  h.global = true;
  h.seed = d.seed;
  h.sample_size = d.sample_size;
  h.sample_clamped = d.sample_clamped;
  return h;
}

std::optional<int64_t> local_position_capped(const KnowledgeBase& kb, const Pattern& p,
                                             EntityId start, AggKind agg, double value,
                                             int64_t cap) {
  int64_t better = 0;
  for (const auto& [y, v] : end_aggregates(kb, p, start, agg)) {
    if (static_cast<double>(v) > value) ++better;
    if (better > cap) return std::nullopt;
  }
  return better;
}

std::optional<int64_t> global_position_capped(const KnowledgeBase& kb, const Pattern& p,
                                              AggKind agg, double value, uint64_t sample_size,
                                              uint64_t seed, int64_t cap) {
  if (sample_size == 0) throw ConfigError("sample size must be positive");
  uint64_t k = std::min<uint64_t>(sample_size, kb.entity_count());
  std::mt19937_64 rng(seed);
  std::vector<uint64_t> starts = sample_without_replacement(rng, kb.entity_count(), k);
  int64_t better = 0;
  for (uint64_t s : starts) {
    for (const auto& [y, v] : end_aggregates(kb, p, static_cast<EntityId>(s), agg)) {
      if (static_cast<double>(v) > value) ++better;
      if (better > cap) return std::nullopt;
    }
  }
  return better;
}

int64_t position_in(const Distribution& d, double value) {
  int64_t pos = 0;
  for (const auto& e : d.entries)
    if (e.value > value) pos += static_cast<int64_t>(e.pair_count);
  return pos;
}

InterestScore m_position(double value, const Distribution& d) {
  return {{static_cast<double>(-position_in(d, value))}};
}

InterestScore measure_score(MeasureId m, const KnowledgeBase& kb, const Pattern& p,
                            EntityId start, EntityId end, const DistOptions& opt) {
  switch (m) {
    case MeasureId::Size: return m_size(p);
    case MeasureId::RandomWalk: return m_random_walk(p);
    case MeasureId::Count: return m_count(kb, p, start, end);
    case MeasureId::Monocount: return m_monocount(kb, p, start, end);
    case MeasureId::LocalDist: {
      InterestScore a = m_count(kb, p, start, end);
      return m_position(a.parts[0], local_distribution(kb, p, start, AggKind::Count));
    }
    case MeasureId::GlobalDist: {
      InterestScore a = m_count(kb, p, start, end);
      return m_position(a.parts[0], global_distribution(kb, p, AggKind::Count, opt.sample_size,
                                                        opt.seed, opt.threads));
    }
    case MeasureId::SizeMonocount:
      return m_combined(MeasureId::Size, MeasureId::Monocount, kb, p, start, end, opt);
    case MeasureId::SizeLocalDist:
      return m_combined(MeasureId::Size, MeasureId::LocalDist, kb, p, start, end, opt);
  }
  throw ConfigError("unknown measure");
}

InterestScore m_combined(MeasureId primary, MeasureId secondary, const KnowledgeBase& kb,
                         const Pattern& p, EntityId start, EntityId end,
                         const DistOptions& opt) {
  InterestScore a = measure_score(primary, kb, p, start, end, opt);
  InterestScore b = measure_score(secondary, kb, p, start, end, opt);
  InterestScore out;
  out.parts = a.parts;
  out.parts.insert(out.parts.end(), b.parts.begin(), b.parts.end());
  return out;
}

}  // namespace rex
