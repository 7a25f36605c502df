#pragma once

#include <cstdint>
#include <string>

#include "rex/kb.hpp"

namespace rex {

enum class DegreeShape { Uniform, PowerLaw };

DegreeShape parse_degree_shape(const std::string& name);  // uniform|powerlaw
const char* to_string(DegreeShape s);

// Parameters for the synthetic knowledge-base generator. Output is
// deterministic for a fixed spec (byte-identical text per seed).
struct GenSpec {
  uint64_t nodes = 1000;
  uint64_t labels = 8;
  double undirected_fraction = 0.25;  // leading labels are undirected
  double avg_degree = 4.0;
  DegreeShape shape = DegreeShape::Uniform;
  double gamma = 2.5;  // power-law exponent (shape == PowerLaw)
  uint64_t seed = 42;
};

// The generated KB in load_kb text form: round(nodes*avg_degree/2) distinct
// edges, endpoints drawn per the degree shape, labels uniform, no self
// loops, plus declaration lines for untouched entities.
std::string generate_kb_text(const GenSpec& spec);

KnowledgeBase generate_kb(const GenSpec& spec);

}  // namespace rex
