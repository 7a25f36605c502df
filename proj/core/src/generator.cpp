#include "rex/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "rex/rng.hpp"

namespace rex {

DegreeShape parse_degree_shape(const std::string& name) {
  if (name == "uniform") return DegreeShape::Uniform;
  if (name == "powerlaw") return DegreeShape::PowerLaw;
  throw ConfigError("unknown degree shape: " + name);
}

const char* to_string(DegreeShape s) {
  return s == DegreeShape::Uniform ? "uniform" : "powerlaw";
}

namespace {

constexpr uint64_t kMaxGenNodes = (1u << 24) - 1;
constexpr uint64_t kMaxGenLabels = (1u << 14) - 1;

std::string padded(const char* prefix, uint64_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  std::string out(prefix);
  if (digits.size() < width) out.append(width - digits.size(), '0');
  out += digits;
  return out;
}

void check(const GenSpec& s) {
  if (s.nodes < 1 || s.nodes > kMaxGenNodes) throw ConfigError("node count out of range");
  if (s.labels < 1 || s.labels > kMaxGenLabels) throw ConfigError("label count out of range");
  if (s.undirected_fraction < 0.0 || s.undirected_fraction > 1.0)
    throw ConfigError("undirected fraction must be in [0,1]");
  if (s.avg_degree < 0.0) throw ConfigError("average degree must be nonnegative");
  if (s.shape == DegreeShape::PowerLaw && s.gamma <= 0.0)
    throw ConfigError("power-law exponent must be positive");
}

// Fixed-point uniform in [0,1); avoids the library distributions whose
// sequences vary across standard library implementations.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(uniform_below(rng, uint64_t{1} << 53)) /
         static_cast<double>(uint64_t{1} << 53);
}

}  // namespace

std::string generate_kb_text(const GenSpec& spec) {
  check(spec);
  const uint64_t edges_target = static_cast<uint64_t>(
      std::llround(static_cast<double>(spec.nodes) * spec.avg_degree / 2.0));
  if (spec.nodes > 1) {
    long double capacity = static_cast<long double>(spec.nodes) * (spec.nodes - 1) / 2.0L *
                           static_cast<long double>(spec.labels);
    if (static_cast<long double>(edges_target) > capacity)
      throw ConfigError("average degree too high for node/label counts");
  } else if (edges_target > 0) {
    throw ConfigError("cannot place edges on a single node");
  }

  const std::size_t node_width = std::to_string(spec.nodes).size();
  const std::size_t label_width =
      std::max<std::size_t>(2, std::to_string(spec.labels - 1).size());
  const uint64_t undirected_labels =
      static_cast<uint64_t>(std::llround(spec.undirected_fraction * spec.labels));

  std::vector<double> cum;
  if (spec.shape == DegreeShape::PowerLaw) {
    cum.resize(spec.nodes);
    double total = 0.0;
    for (uint64_t i = 0; i < spec.nodes; ++i) {
      total += std::pow(static_cast<double>(i + 1), -spec.gamma);
      cum[i] = total;
    }
    for (double& c : cum) c /= total;
  }

  std::mt19937_64 rng(spec.seed);
  auto draw_node = [&]() -> uint64_t {
    if (spec.shape == DegreeShape::Uniform) return uniform_below(rng, spec.nodes);
    double u = unit(rng);
    return static_cast<uint64_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
  };
  auto node_name = [&](uint64_t v) { return padded("e", v + 1, node_width); };

  std::ostringstream out;
  out << "# synthetic kb: nodes=" << spec.nodes << " labels=" << spec.labels
      << " undirected-fraction=" << spec.undirected_fraction
      << " avg-degree=" << spec.avg_degree << " shape=" << to_string(spec.shape);
  if (spec.shape == DegreeShape::PowerLaw) out << " gamma=" << spec.gamma;
  out << " seed=" << spec.seed << "\n";

  std::unordered_set<uint64_t> keys;
  std::vector<bool> touched(spec.nodes, false);
  uint64_t placed = 0;
  uint64_t attempts = 0;
  const uint64_t max_attempts = 100 * edges_target + 1000;
  while (placed < edges_target) {
    if (++attempts > max_attempts)
      throw ConfigError("gave up placing edges; lower the average degree");
    uint64_t src = draw_node();
    uint64_t dst = draw_node();
    if (src == dst) continue;
    uint64_t label = uniform_below(rng, spec.labels);
    bool directed = label >= undirected_labels;
    uint64_t a = src, b = dst;
    if (!directed && a > b) std::swap(a, b);
    uint64_t key = (a << 39) | (b << 15) | (label << 1) | (directed ? 1 : 0);
    if (!keys.insert(key).second) continue;
    touched[src] = true;
    touched[dst] = true;
    out << node_name(src) << '\t' << padded("rel", label, label_width) << '\t' << node_name(dst)
        << '\t' << (directed ? 'D' : 'U') << '\n';
    ++placed;
  }
  for (uint64_t v = 0; v < spec.nodes; ++v)
    if (!touched[v]) out << node_name(v) << "\tnode\t" << node_name(v) << "\tU\n";
  return out.str();
}

KnowledgeBase generate_kb(const GenSpec& spec) {
  std::istringstream in(generate_kb_text(spec));
  return load_kb(in, "<generated>");
}

}  // namespace rex
