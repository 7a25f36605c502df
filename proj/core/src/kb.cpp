#include "rex/kb.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

namespace rex {

namespace {

// Id-space bounds implied by the packed 64-bit edge key below.
constexpr std::size_t kMaxEntities = 1u << 24;
constexpr std::size_t kMaxLabels = 1u << 14;

struct RawLine {
  std::string src, label, dst;
  bool directed;
  bool declaration;  // src == dst: declares an entity, stores no edge
};

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

const char* to_string(Connectedness c) {
  switch (c) {
    case Connectedness::Low: return "low";
    case Connectedness::Medium: return "medium";
    case Connectedness::High: return "high";
  }
  return "?";
}

std::optional<EntityId> KnowledgeBase::find_entity(std::string_view name) const {
  auto it = std::lower_bound(entity_names_.begin(), entity_names_.end(), name);
  if (it == entity_names_.end() || *it != name) return std::nullopt;
  return static_cast<EntityId>(it - entity_names_.begin());
}

std::optional<LabelId> KnowledgeBase::find_label(std::string_view name) const {
  auto it = std::lower_bound(label_names_.begin(), label_names_.end(), name);
  if (it == label_names_.end() || *it != name) return std::nullopt;
  return static_cast<LabelId>(it - label_names_.begin());
}

EntityId KnowledgeBase::require_entity(std::string_view name) const {
  if (auto id = find_entity(name)) return *id;
  throw NotFoundError("entity not in knowledge base: " + std::string(name));
}

std::span<const IncidentEdge> KnowledgeBase::incident(EntityId v) const {
  return {incident_.data() + incident_offsets_[v],
          incident_.data() + incident_offsets_[v + 1]};
}

uint64_t KnowledgeBase::edge_key(EntityId src, EntityId dst, LabelId label, bool directed) {
  if (!directed && src > dst) std::swap(src, dst);
  return (uint64_t(src) << 39) | (uint64_t(dst) << 15) | (uint64_t(label) << 1) |
         uint64_t(directed);
}

bool KnowledgeBase::has_edge(EntityId src, EntityId dst, LabelId label, bool directed) const {
  return edge_keys_.count(edge_key(src, dst, label, directed)) != 0;
}

void KnowledgeBase::build_index() {
  edge_keys_.reserve(edges_.size() * 2);
  for (const Edge& e : edges_) edge_keys_.insert(edge_key(e.src, e.dst, e.label, e.directed));

  std::vector<std::vector<IncidentEdge>> adj(entity_count());
  for (uint32_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.directed) {
      adj[e.src].push_back({i, EndpointRole::Src});
      adj[e.dst].push_back({i, EndpointRole::Dst});
    } else {
      adj[e.src].push_back({i, EndpointRole::Undirected});
      adj[e.dst].push_back({i, EndpointRole::Undirected});
    }
  }
  incident_offsets_.assign(entity_count() + 1, 0);
  incident_.clear();
  for (EntityId v = 0; v < entity_count(); ++v) {
    auto& list = adj[v];
    std::sort(list.begin(), list.end(), [&](const IncidentEdge& a, const IncidentEdge& b) {
      const Edge& ea = edges_[a.edge];
      const Edge& eb = edges_[b.edge];
      EntityId oa = ea.src == v ? ea.dst : ea.src;
      EntityId ob = eb.src == v ? eb.dst : eb.src;
      return std::tie(ea.label, oa, a.role, a.edge) < std::tie(eb.label, ob, b.role, b.edge);
    });
    incident_offsets_[v] = static_cast<uint32_t>(incident_.size());
    incident_.insert(incident_.end(), list.begin(), list.end());
  }
  incident_offsets_[entity_count()] = static_cast<uint32_t>(incident_.size());
}

KnowledgeBase load_kb(std::istream& in, std::string_view source) {
  if (!in) throw IoError("cannot read knowledge base from " + std::string(source));

  std::vector<RawLine> rows;
  std::vector<std::string> entities;
  std::vector<std::string> labels;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line) || line[0] == '#') continue;

    std::array<std::string, 4> field;
    std::size_t nfields = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = line.find('\t', pos);
      std::string part = line.substr(pos, tab == std::string::npos ? tab : tab - pos);
      if (nfields < 4) field[nfields] = std::move(part);
      ++nfields;
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (nfields != 4)
      throw ParseError("expected 4 tab-separated fields, got " + std::to_string(nfields), lineno);
    for (const std::string& f : field)
      if (f.empty()) throw ParseError("empty field", lineno);
    bool directed;
    if (field[3] == "D") {
      directed = true;
    } else if (field[3] == "U") {
      directed = false;
    } else {
      throw ParseError("unknown edge flag '" + field[3] + "' (want D or U)", lineno);
    }

    RawLine r{std::move(field[0]), std::move(field[1]), std::move(field[2]), directed,
              /*declaration=*/false};
    r.declaration = r.src == r.dst;
    entities.push_back(r.src);
    if (!r.declaration) {
      entities.push_back(r.dst);
      labels.push_back(r.label);
    }
    rows.push_back(std::move(r));
  }

  std::sort(entities.begin(), entities.end());
  entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (entities.size() > kMaxEntities)
    throw LimitError("too many entities: " + std::to_string(entities.size()));
  if (labels.size() > kMaxLabels)
    throw LimitError("too many labels: " + std::to_string(labels.size()));

  KnowledgeBase kb;
  kb.entity_names_ = std::move(entities);
  kb.label_names_ = std::move(labels);

  std::unordered_set<uint64_t> seen;
  seen.reserve(rows.size() * 2);
  for (const RawLine& r : rows) {
    if (r.declaration) continue;
    Edge e;
    e.src = *kb.find_entity(r.src);
    e.dst = *kb.find_entity(r.dst);
    e.label = *kb.find_label(r.label);
    e.directed = r.directed;
    if (!e.directed && e.src > e.dst) std::swap(e.src, e.dst);
    if (!seen.insert(KnowledgeBase::edge_key(e.src, e.dst, e.label, e.directed)).second) {
      ++kb.duplicates_dropped_;
      continue;
    }
    kb.edges_.push_back(e);
  }
  kb.build_index();
  return kb;
}

KnowledgeBase load_kb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open knowledge base file: " + path);
  return load_kb(in, path);
}

void write_kb(const KnowledgeBase& kb, std::ostream& out) {
  std::vector<bool> touched(kb.entity_count(), false);
  for (const Edge& e : kb.edges()) {
    touched[e.src] = true;
    touched[e.dst] = true;
    out << kb.entity_name(e.src) << '\t' << kb.label_name(e.label) << '\t'
        << kb.entity_name(e.dst) << '\t' << (e.directed ? 'D' : 'U') << '\n';
  }
  for (EntityId v = 0; v < kb.entity_count(); ++v)
    if (!touched[v])
      out << kb.entity_name(v) << "\tnode\t" << kb.entity_name(v) << "\tU\n";
}

void write_kb(const KnowledgeBase& kb, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  write_kb(kb, out);
  if (!out.flush()) throw IoError("write failed: " + path);
}

namespace {

struct PathCounter {
  const KnowledgeBase& kb;
  EntityId target;
  int max_len;
  uint64_t cap;
  uint64_t count = 0;
  std::vector<bool> visited;

  void dfs(EntityId v, int len) {
    visited[v] = true;
    for (const IncidentEdge& ie : kb.incident(v)) {
      if (count >= cap) break;  // also stops ancestor frames after unwinding
      EntityId u = kb.other_endpoint(kb.edge(ie.edge), v);
      if (u == target) {
        ++count;
        continue;  // simple paths end at the target
      }
      if (!visited[u] && len + 1 < max_len) dfs(u, len + 1);
    }
    visited[v] = false;
  }
};

}  // namespace

uint64_t connectedness(const KnowledgeBase& kb, EntityId a, EntityId b, int max_len,
                       uint64_t cap) {
  if (a == b) throw ConfigError("connectedness requires two distinct entities");
  if (a >= kb.entity_count() || b >= kb.entity_count())
    throw NotFoundError("entity id out of range");
  if (max_len < 1) return 0;
  PathCounter pc{kb, b, max_len, cap, 0, std::vector<bool>(kb.entity_count(), false)};
  pc.dfs(a, 0);
  return pc.count;
}

Connectedness classify_connectedness(uint64_t paths) {
  if (paths <= 30) return Connectedness::Low;
  if (paths <= 100) return Connectedness::Medium;
  return Connectedness::High;
}

}  // namespace rex
