#include "rex/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace rex {

std::string var_name(VarId v) {
  if (v == kStartVar) return "start";
  if (v == kEndVar) return "end";
  return "v" + std::to_string(int{v});
}

VarId parse_var_name(const std::string& name) {
  if (name == "start") return kStartVar;
  if (name == "end") return kEndVar;
  if (name.size() >= 2 && name[0] == 'v') {
    int v = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') v = -1;
      if (v < 0) break;
      v = v * 10 + (name[i] - '0');
    }
    if (v >= 2 && v < kMaxPatternVars) return static_cast<VarId>(v);
  }
  throw ParseError("bad variable name: " + name, 0);
}

json pattern_to_json(const KnowledgeBase& kb, const Pattern& p) {
  json vars = json::array();
  for (int v = 0; v < p.num_vars(); ++v) {
    const char* role = v == kStartVar ? "start" : v == kEndVar ? "end" : "interior";
    vars.push_back({{"name", var_name(static_cast<VarId>(v))}, {"role", role}});
  }
  json edges = json::array();
  for (const PatternEdge& e : p.edges()) {
    edges.push_back({{"from", var_name(e.from)},
                     {"to", var_name(e.to)},
                     {"label", std::string(kb.label_name(e.label))},
                     {"directed", e.directed}});
  }
  return {{"variables", std::move(vars)}, {"edges", std::move(edges)}};
}

Pattern pattern_from_json(const KnowledgeBase& kb, const json& j) {
  if (!j.contains("variables") || !j.contains("edges"))
    throw ParseError("pattern document needs variables and edges", 0);
  int num_vars = static_cast<int>(j.at("variables").size());
  std::vector<PatternEdge> edges;
  for (const json& je : j.at("edges")) {
    PatternEdge e;
    e.from = parse_var_name(je.at("from").get<std::string>());
    e.to = parse_var_name(je.at("to").get<std::string>());
    std::string label = je.at("label").get<std::string>();
    auto lid = kb.find_label(label);
    if (!lid) throw NotFoundError("unknown label: " + label);
    e.label = *lid;
    e.directed = je.at("directed").get<bool>();
    edges.push_back(e);
  }
  return Pattern(num_vars, std::move(edges));
}

json instance_to_json(const KnowledgeBase& kb, const Pattern& p, const Instance& g) {
  json out = json::object();
  for (int v = 0; v < p.num_vars(); ++v)
    out[var_name(static_cast<VarId>(v))] = std::string(kb.entity_name(g.binding[v]));
  return out;
}

json explanation_to_json(const KnowledgeBase& kb, const Explanation& e,
                         std::size_t max_instances) {
  json out;
  out["pattern"] = pattern_to_json(kb, e.pattern);
  out["size"] = e.pattern.num_vars();
  out["level"] = e.level;
  out["instance_count"] = e.instances.size();
  if (max_instances > 0) {
    json list = json::array();
    std::size_t limit = std::min(max_instances, e.instances.size());
    for (std::size_t i = 0; i < limit; ++i)
      list.push_back(instance_to_json(kb, e.pattern, e.instances[i]));
    out["instances"] = std::move(list);
  }
  return out;
}

json ranked_to_json(const KnowledgeBase& kb, const RankedResult& r, const RankConfig& cfg,
                    const std::string& start, const std::string& end,
                    std::size_t max_instances) {
  json out;
  out["start"] = start;
  out["end"] = end;
  out["measure"] = to_string(cfg.measure);
  out["strategy"] = to_string(cfg.strategy);
  out["k"] = cfg.k;
  out["max_size"] = cfg.n;
  json items = json::array();
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    json it = explanation_to_json(kb, r.items[i].explanation, max_instances);
    json head;
    head["rank"] = i + 1;
    head["score"] = r.items[i].score.parts;
    for (auto& [key, value] : it.items()) head[key] = std::move(value);
    items.push_back(std::move(head));
  }
  out["items"] = std::move(items);
  json counters;
  counters["enumerated"] = r.counters.enumerated;
  counters["scored"] = r.counters.scored;
  counters["pruned"] = r.counters.pruned;
  counters["path_instances"] = r.counters.path_stats.path_instances;
  counters["merge_calls"] = r.counters.union_stats.merge_calls;
  counters["duplicates_rejected"] = r.counters.union_stats.duplicates_rejected;
  counters["rounds"] = r.counters.union_stats.rounds;
  out["counters"] = std::move(counters);
  return out;
}

std::string format_edge(const KnowledgeBase& kb, const PatternEdge& e) {
  std::string out = var_name(e.from);
  out += " -[";
  out += kb.label_name(e.label);
  out += e.directed ? "]-> " : "]- ";
  out += var_name(e.to);
  return out;
}

std::string format_pattern(const KnowledgeBase& kb, const Pattern& p) {
  std::string out;
  for (const PatternEdge& e : p.edges()) {
    if (!out.empty()) out += '\n';
    out += format_edge(kb, e);
  }
  return out;
}

std::string format_instance(const KnowledgeBase& kb, const Pattern& p, const Instance& g) {
  std::string out;
  for (int v = 0; v < p.num_vars(); ++v) {
    if (!out.empty()) out += ' ';
    out += var_name(static_cast<VarId>(v));
    out += '=';
    out += kb.entity_name(g.binding[v]);
  }
  return out;
}

std::string format_score(const InterestScore& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.parts.size(); ++i) {
    if (i) out += ", ";
    double v = s.parts[i];
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
      out += std::to_string(static_cast<long long>(v));
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", v);
      out += buf;
    }
  }
  out += ")";
  return out;
}

}  // namespace rex
