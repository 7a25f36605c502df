#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rex/enumerate.hpp"
#include "rex/kb.hpp"
#include "rex/measures.hpp"
#include "rex/pattern.hpp"

namespace rex::test {

KnowledgeBase make_kb(const std::string& text);

// Six entities, eight edges: the spouse/co-star graph used across the tests.
extern const char* kTg1;

// Couple + director fixture: two co-starred movies by the same director,
// one spouse edge to that director.
extern const char* kCouple;
// The four-variable pattern (co-star movie + spouse-of-director) it exercises.
Pattern couple_pattern(const KnowledgeBase& kb);

// Hub fixture: one actor with 150 co-star partners whose shared-movie counts
// form the histogram {1:130, 2:8, 3:10, 4:2}; the single spouse edge goes to
// one of the count-1 partners.
std::string hub_kb_text();

// Deterministic small random KBs for oracle comparisons: <= 12 nodes,
// <= 25 edge lines, <= 4 labels, mixed directedness per label.
std::string random_kb_text(std::mt19937_64& rng);

// Ordered pairs (a, b) with at least one simple connecting path of <= 4
// edges.
std::vector<std::pair<EntityId, EntityId>> connected_pairs(const KnowledgeBase& kb);

// Random pattern over the given label universe; always returns a valid
// Pattern, not necessarily connected or minimal.
Pattern random_pattern(std::mt19937_64& rng, int max_vars, LabelId num_labels);

// Permutation brute force over interior variables, targets pinned.
bool isomorphic(const Pattern& a, const Pattern& b);

// Exhaustive binding search; independent of the backtracking matcher.
std::vector<Instance> brute_match(const KnowledgeBase& kb, const Pattern& p, EntityId start,
                                  EntityId end);

// All-ordered-pairs distribution, bypassing sampling.
Distribution brute_global_distribution(const KnowledgeBase& kb, const Pattern& p, AggKind agg);

// Compare explanation sets by canonical pattern + full instance sets,
// ignoring levels. Returns a description of the first difference.
std::optional<std::string> diff_explanations(const std::vector<Explanation>& a,
                                             const std::vector<Explanation>& b);

}  // namespace rex::test
