#include <doctest.h>

#include <sstream>

#include "support.hpp"

using namespace rex;
using namespace rex::test;

TEST_CASE("loader interns entities and labels in sorted order") {
  KnowledgeBase kb = make_kb(kTg1);
  CHECK(kb.entity_count() == 6);
  CHECK(kb.edge_count() == 8);
  CHECK(kb.label_count() == 3);
  // id order == lexicographic name order
  for (EntityId v = 1; v < kb.entity_count(); ++v)
    CHECK(kb.entity_name(v - 1) < kb.entity_name(v));
  CHECK(kb.entity_name(*kb.find_entity("A")) == "A");
  CHECK(kb.find_entity("nope") == std::nullopt);
  CHECK(kb.find_label("spouse").has_value());
  CHECK_THROWS_AS((void)kb.require_entity("nope"), NotFoundError);
}

TEST_CASE("exact duplicate lines are dropped and counted") {
  std::string text = std::string(kTg1) + "A\tstarring\tM1\tD\n";
  KnowledgeBase kb = make_kb(text);
  CHECK(kb.edge_count() == 8);
  CHECK(kb.duplicates_dropped() == 1);

  // undirected duplicates match regardless of endpoint order
  KnowledgeBase kb2 = make_kb("x\tr\ty\tU\ny\tr\tx\tU\n");
  CHECK(kb2.edge_count() == 1);
  CHECK(kb2.duplicates_dropped() == 1);

  // opposite directed edges and parallel labels are distinct
  KnowledgeBase kb3 = make_kb("x\tr\ty\tD\ny\tr\tx\tD\nx\ts\ty\tD\n");
  CHECK(kb3.edge_count() == 3);
  CHECK(kb3.duplicates_dropped() == 0);
}

TEST_CASE("malformed lines raise ParseError with 1-based line numbers") {
  auto load_text = [](const std::string& text) {
    std::istringstream in(text);
    return load_kb(in, "<bad>");
  };
  CHECK_THROWS_WITH_AS(load_text("a\tr\tb\n"), doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_WITH_AS(load_text("a\tr\tb\tD\na\tr\tb\tX\n"), doctest::Contains("line 2"),
                       ParseError);
  CHECK_THROWS_AS(load_text("a\t\tb\tD\n"), ParseError);
  CHECK_THROWS_AS(load_text("a\tr\tb\tD\textra\n"), ParseError);
  CHECK_NOTHROW(load_text("# comment\n\na\tr\tb\tD\n"));
}

TEST_CASE("self-descriptive line declares an isolated entity") {
  KnowledgeBase kb = make_kb("a\tr\tb\tD\nlonely\tnode\tlonely\tU\n");
  CHECK(kb.entity_count() == 3);
  CHECK(kb.edge_count() == 1);
  CHECK(kb.label_count() == 1);  // declaration labels are not interned
  EntityId lonely = kb.require_entity("lonely");
  CHECK(kb.incident(lonely).empty());
  CHECK(kb.degree(lonely) == 0);
}

TEST_CASE("incident edges are sorted by label then other endpoint") {
  KnowledgeBase kb = make_kb(kTg1);
  EntityId a = kb.require_entity("A");
  EntityId m2 = kb.require_entity("M2");
  EntityId c = kb.require_entity("C");
  CHECK(kb.degree(a) == 3);
  CHECK(kb.degree(c) == 2);
  auto m2_edges = kb.incident(m2);
  REQUIRE(m2_edges.size() == 2);
  LabelId starring = *kb.find_label("starring");
  for (const IncidentEdge& ie : m2_edges) {
    CHECK(kb.edge(ie.edge).label == starring);
    CHECK(ie.role == EndpointRole::Dst);
  }
  LabelId prev_label = 0;
  EntityId prev_other = 0;
  bool first = true;
  for (const IncidentEdge& ie : kb.incident(a)) {
    const Edge& e = kb.edge(ie.edge);
    EntityId other = kb.other_endpoint(e, a);
    if (!first) CHECK(std::pair(prev_label, prev_other) <= std::pair(e.label, other));
    prev_label = e.label;
    prev_other = other;
    first = false;
  }
}

TEST_CASE("degree sum equals twice the edge count") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    KnowledgeBase kb = make_kb(random_kb_text(rng));
    std::size_t total = 0;
    for (EntityId v = 0; v < kb.entity_count(); ++v) total += kb.degree(v);
    CHECK(total == 2 * kb.edge_count());
  }
}

TEST_CASE("has_edge respects direction only for directed edges") {
  KnowledgeBase kb = make_kb(kTg1);
  EntityId a = kb.require_entity("A"), b = kb.require_entity("B");
  EntityId m1 = kb.require_entity("M1");
  LabelId starring = *kb.find_label("starring");
  LabelId spouse = *kb.find_label("spouse");
  CHECK(kb.has_edge(a, m1, starring, true));
  CHECK_FALSE(kb.has_edge(m1, a, starring, true));
  CHECK(kb.has_edge(a, b, spouse, false));
  CHECK(kb.has_edge(b, a, spouse, false));
  CHECK_FALSE(kb.has_edge(a, b, starring, true));
}

TEST_CASE("write/load round trip preserves the knowledge base") {
  for (const std::string text :
       {std::string(kTg1), std::string(kTg1) + "lonely\tnode\tlonely\tU\n",
        std::string(kCouple)}) {
    KnowledgeBase kb = make_kb(text);
    std::ostringstream out;
    write_kb(kb, out);
    KnowledgeBase again = make_kb(out.str());
    CHECK(kb == again);
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    KnowledgeBase kb = make_kb(random_kb_text(rng));
    std::ostringstream out;
    write_kb(kb, out);
    CHECK(kb == make_kb(out.str()));
  }
}

TEST_CASE("connectedness counts bounded simple paths ignoring direction") {
  KnowledgeBase one = make_kb("a\tx\tb\tU\n");
  CHECK(connectedness(one, one.require_entity("a"), one.require_entity("b"), 4) == 1);

  KnowledgeBase kb = make_kb(kTg1);
  EntityId a = kb.require_entity("A"), b = kb.require_entity("B");
  CHECK(connectedness(kb, a, b, 4) == 4);  // spouse; via M1; via M2; A-M1-C-M3-B
  CHECK(connectedness(kb, a, b, 1) == 1);
  CHECK(connectedness(kb, a, b, 2) == 3);
  CHECK(connectedness(kb, a, b, 4, 2) == 2);  // cap stops the count early

  // parallel edges are distinct paths
  KnowledgeBase par = make_kb("a\tx\tb\tD\na\ty\tb\tD\n");
  CHECK(connectedness(par, par.require_entity("a"), par.require_entity("b"), 1) == 2);
}

TEST_CASE("connectedness classes use the documented brackets") {
  CHECK(classify_connectedness(0) == Connectedness::Low);
  CHECK(classify_connectedness(30) == Connectedness::Low);
  CHECK(classify_connectedness(31) == Connectedness::Medium);
  CHECK(classify_connectedness(100) == Connectedness::Medium);
  CHECK(classify_connectedness(101) == Connectedness::High);
  CHECK(std::string(to_string(Connectedness::Low)) == "low");
}

TEST_CASE("missing file raises IoError") {
  CHECK_THROWS_AS((void)load_kb("/nonexistent/kb.tsv"), IoError);
}
