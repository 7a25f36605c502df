#include "support.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "rex/rng.hpp"

namespace rex::test {

KnowledgeBase make_kb(const std::string& text) {
  std::istringstream in(text);
  return load_kb(in, "<test>");
}

const char* kTg1 =
    "A\tstarring\tM1\tD\n"
    "B\tstarring\tM1\tD\n"
    "A\tstarring\tM2\tD\n"
    "B\tstarring\tM2\tD\n"
    "A\tspouse\tB\tU\n"
    "C\tdirected\tM1\tD\n"
    "C\tdirected\tM3\tD\n"
    "B\tstarring\tM3\tD\n";

const char* kCouple =
    "actor1\tstarring\tfilm_a\tD\n"
    "actor2\tstarring\tfilm_a\tD\n"
    "actor1\tspouse\tdirector\tU\n"
    "director\tdirected\tfilm_a\tD\n"
    "actor1\tstarring\tfilm_b\tD\n"
    "actor2\tstarring\tfilm_b\tD\n"
    "director\tdirected\tfilm_b\tD\n";

Pattern couple_pattern(const KnowledgeBase& kb) {
  LabelId starring = *kb.find_label("starring");
  LabelId spouse = *kb.find_label("spouse");
  LabelId directed = *kb.find_label("directed");
  return Pattern(4, {{kStartVar, 2, starring, true},
                     {kEndVar, 2, starring, true},
                     {kStartVar, 3, spouse, false},
                     {3, 2, directed, true}});
}

std::string hub_kb_text() {
  std::ostringstream out;
  out << "hub\tspouse\tmate\tU\n";
  int partner_no = 0;
  auto partners = [&](int how_many, int movies, const char* prefix) {
    for (int i = 0; i < how_many; ++i) {
      std::string name;
      if (prefix[0] == 'p' && i == 0) {
        name = "mate";  // the spouse is one of the single-movie partners
      } else {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%s%03d", prefix, partner_no);
        name = buf;
      }
      ++partner_no;
      for (int m = 0; m < movies; ++m) {
        std::string movie = "m_" + name + "_" + std::to_string(m);
        out << "hub\tstarring\t" << movie << "\tD\n";
        out << name << "\tstarring\t" << movie << "\tD\n";
      }
    }
  };
  partners(130, 1, "p");
  partners(8, 2, "q");
  partners(10, 3, "r");
  partners(2, 4, "s");
  return out.str();
}

std::string random_kb_text(std::mt19937_64& rng) {
  int nodes = 4 + static_cast<int>(uniform_below(rng, 9));    // 4..12
  int labels = 1 + static_cast<int>(uniform_below(rng, 4));   // 1..4
  int lines = 5 + static_cast<int>(uniform_below(rng, 21));   // 5..25
  std::vector<bool> label_directed(labels);
  for (int l = 0; l < labels; ++l) label_directed[l] = uniform_below(rng, 2) == 0;
  std::ostringstream out;
  for (int i = 0; i < lines; ++i) {
    int src = static_cast<int>(uniform_below(rng, nodes));
    int dst = static_cast<int>(uniform_below(rng, nodes));
    if (src == dst) continue;
    int label = static_cast<int>(uniform_below(rng, labels));
    out << "n" << (src < 10 ? "0" : "") << src << "\tr" << label << "\tn"
        << (dst < 10 ? "0" : "") << dst << "\t" << (label_directed[label] ? 'D' : 'U') << "\n";
  }
  return out.str();
}

std::vector<std::pair<EntityId, EntityId>> connected_pairs(const KnowledgeBase& kb) {
  std::vector<std::pair<EntityId, EntityId>> out;
  for (EntityId a = 0; a < kb.entity_count(); ++a)
    for (EntityId b = 0; b < kb.entity_count(); ++b)
      if (a != b && connectedness(kb, a, b, 4, 1) > 0) out.push_back({a, b});
  return out;
}

Pattern random_pattern(std::mt19937_64& rng, int max_vars, LabelId num_labels) {
  int vars = 2 + static_cast<int>(uniform_below(rng, static_cast<uint64_t>(max_vars - 1)));
  int edges = 1 + static_cast<int>(uniform_below(rng, 7));
  std::vector<PatternEdge> list;
  for (int i = 0; i < edges; ++i) {
    auto from = static_cast<VarId>(uniform_below(rng, static_cast<uint64_t>(vars)));
    auto to = static_cast<VarId>(uniform_below(rng, static_cast<uint64_t>(vars)));
    if (from == to) continue;
    auto label = static_cast<LabelId>(uniform_below(rng, num_labels));
    bool directed = uniform_below(rng, 2) == 0;
    list.push_back({from, to, label, directed});
  }
  if (list.empty()) list.push_back({kStartVar, kEndVar, 0, true});
  return Pattern(vars, std::move(list));
}

bool isomorphic(const Pattern& a, const Pattern& b) {
  if (a.num_vars() != b.num_vars() || a.edges().size() != b.edges().size()) return false;
  std::vector<VarId> perm;  // full map: b var -> a var
  for (int v = 0; v < b.num_vars(); ++v) perm.push_back(static_cast<VarId>(v));
  do {
    std::vector<PatternEdge> mapped;
    for (const PatternEdge& e : b.edges())
      mapped.push_back({perm[e.from], perm[e.to], e.label, e.directed});
    Pattern relabeled(b.num_vars(), std::move(mapped));
    if (std::ranges::equal(relabeled.edges(), a.edges())) return true;
  } while (std::next_permutation(perm.begin() + 2, perm.end()));
  return false;
}

std::vector<Instance> brute_match(const KnowledgeBase& kb, const Pattern& p, EntityId start,
                                  EntityId end) {
  const int n = p.num_vars();
  std::vector<EntityId> binding(n, kNoEntity);
  binding[kStartVar] = start;
  binding[kEndVar] = end;
  std::vector<Instance> out;
  auto edges_hold = [&]() {
    for (const PatternEdge& e : p.edges()) {
      EntityId u = binding[e.from], v = binding[e.to];
      if (!kb.has_edge(u, v, e.label, e.directed)) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int var) -> void {
    if (var == n) {
      if (edges_hold()) out.push_back({binding});
      return;
    }
    for (EntityId cand = 0; cand < kb.entity_count(); ++cand) {
      bool used = false;
      for (int prev = 0; prev < var; ++prev) used = used || binding[prev] == cand;
      if (used) continue;
      binding[var] = cand;
      self(self, var + 1);
    }
    binding[var] = kNoEntity;
  };
  rec(rec, 2);
  std::sort(out.begin(), out.end());
  return out;
}

Distribution brute_global_distribution(const KnowledgeBase& kb, const Pattern& p, AggKind agg) {
  std::map<int64_t, uint64_t> tally;
  for (EntityId x = 0; x < kb.entity_count(); ++x) {
    for (EntityId y = 0; y < kb.entity_count(); ++y) {
      if (x == y) continue;
      std::vector<Instance> got = match_instances(kb, p, x, y);
      if (got.empty()) continue;
      int64_t value = agg == AggKind::Count ? count_value(got)
                                            : monocount_value(p.num_vars(), got);
      ++tally[value];
    }
  }
  Distribution d;
  d.global = true;
  for (const auto& [value, count] : tally)
    d.entries.push_back({static_cast<double>(value), count});
  return d;
}

std::optional<std::string> diff_explanations(const std::vector<Explanation>& a,
                                             const std::vector<Explanation>& b) {
  auto key_sorted = [](const std::vector<Explanation>& v) {
    std::vector<const Explanation*> out;
    for (const Explanation& e : v) out.push_back(&e);
    std::sort(out.begin(), out.end(),
              [](const Explanation* x, const Explanation* y) { return x->canon < y->canon; });
    return out;
  };
  auto sa = key_sorted(a);
  auto sb = key_sorted(b);
  if (sa.size() != sb.size())
    return "set sizes differ: " + std::to_string(sa.size()) + " vs " + std::to_string(sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i]->canon != sb[i]->canon)
      return "pattern mismatch at " + std::to_string(i) + ": " + sa[i]->canon + " vs " +
             sb[i]->canon;
    if (sa[i]->instances != sb[i]->instances)
      return "instance sets differ for " + sa[i]->canon;
  }
  return std::nullopt;
}

}  // namespace rex::test
