#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "rex/rank.hpp"

namespace rex {

using json = nlohmann::ordered_json;

std::string var_name(VarId v);  // start, end, v2, v3, ...
VarId parse_var_name(const std::string& name);

// {"variables": [{"name": ..., "role": start|end|interior}, ...],
//  "edges": [{"from": ..., "to": ..., "label": ..., "directed": ...}, ...]}
json pattern_to_json(const KnowledgeBase& kb, const Pattern& p);
Pattern pattern_from_json(const KnowledgeBase& kb, const json& j);

json instance_to_json(const KnowledgeBase& kb, const Pattern& p, const Instance& g);

// Pattern plus size, level, instance count and up to max_instances sample
// bindings (0 = omit the list entirely).
json explanation_to_json(const KnowledgeBase& kb, const Explanation& e,
                         std::size_t max_instances);

json ranked_to_json(const KnowledgeBase& kb, const RankedResult& r, const RankConfig& cfg,
                    const std::string& start, const std::string& end,
                    std::size_t max_instances);

// start -[starring]-> v2 for directed edges, v1 -[spouse]- v2 for
// undirected ones.
std::string format_edge(const KnowledgeBase& kb, const PatternEdge& e);
// One edge per line, no trailing newline.
std::string format_pattern(const KnowledgeBase& kb, const Pattern& p);
// start=kate end=leo v2=revolutionary_road
std::string format_instance(const KnowledgeBase& kb, const Pattern& p, const Instance& g);
// (-3, 0); integral parts print without decimals.
std::string format_score(const InterestScore& s);

}  // namespace rex
