#include <doctest.h>

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "support.hpp"
#include "wfsynth/ontology.hpp"

using namespace wfsynth;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Independent oracle: breadth-first search from the root over reversed is_a edges.
std::set<std::string> reachable_below(const OntologySource& src, const std::string& root) {
  std::multimap<std::string, std::string> children;
  for (const auto& t : src.terms)
    for (const auto& p : t.parents) children.emplace(p, t.id);
  std::set<std::string> seen{root};
  std::deque<std::string> queue{root};
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    auto [lo, hi] = children.equal_range(cur);
    for (auto it = lo; it != hi; ++it)
      if (seen.insert(it->second).second) queue.push_back(it->second);
  }
  return seen;
}

std::set<std::string> class_ids(const Taxonomy& tax) {
  std::set<std::string> out;
  for (const auto& c : tax.classes()) out.insert(c.id);
  return out;
}

const char* kSmall =
    "format-version: 1.2\n"
    "\n"
    "[Term]\nid: A\nname: a\n\n"
    "[Term]\nid: B\nname: b\nis_a: A ! a\n\n"
    "[Term]\nid: C\nname: c\nis_a: B\n\n"
    "[Term]\nid: E\nname: e\n\n"
    "[Term]\nid: D\nname: d\nis_a: E\n";

}  // namespace

TEST_SUITE("parse_obo") {
  TEST_CASE("child with is_a comment") {
    const auto src = parse_obo("[Term]\nid: X:1\nname: parent\n\n[Term]\nid: X:2\nname: child\nis_a: X:1 ! parent\n");
    REQUIRE(src.terms.size() == 2);
    const auto* child = src.find("X:2");
    REQUIRE(child);
    CHECK(child->name == "child");
    CHECK(child->parents == std::vector<std::string>{"X:1"});
  }

  TEST_CASE("obsolete term excluded") {
    const auto src = parse_obo("[Term]\nid: X:1\nname: a\n\n[Term]\nid: X:2\nname: old\nis_obsolete: true\n");
    CHECK(src.terms.size() == 1);
    CHECK(src.find("X:2") == nullptr);
  }

  TEST_CASE("is_a to an obsolete term is dropped") {
    const auto src =
        parse_obo("[Term]\nid: X:1\nname: old\nis_obsolete: true\n\n[Term]\nid: X:2\nname: b\nis_a: X:1\n");
    REQUIRE(src.find("X:2"));
    CHECK(src.find("X:2")->parents.empty());
  }

  TEST_CASE("duplicate id reports the line") {
    try {
      parse_obo("[Term]\nid: X:1\n\n[Term]\nid: X:1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
      CHECK(std::string(e.what()).find("X:1") != std::string::npos);
    }
  }

  TEST_CASE("stanza without id") { CHECK_THROWS_AS(parse_obo("[Term]\nname: nameless\n"), ParseError); }

  TEST_CASE("dangling is_a") {
    try {
      parse_obo("[Term]\nid: X:1\nis_a: X:9\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("non-term stanzas and qualifiers are ignored") {
    const auto src = parse_obo(
        "[Typedef]\nid: part_of\nname: part of\n\n[Term]\nid: X:1\nname: a\n\n"
        "[Term]\nid: X:2\nname: b\nis_a: X:1 {source=\"x\"} ! a\nrelationship: part_of X:1\n");
    REQUIRE(src.terms.size() == 2);
    CHECK(src.find("X:2")->parents == std::vector<std::string>{"X:1"});
    CHECK(src.find("part_of") == nullptr);
  }

  TEST_CASE("parse, serialize, parse round trip") {
    for (const auto& text : {std::string(kSmall), read_file(testing::data_path("edam_subset.obo"))}) {
      const auto a = parse_obo(text);
      const auto b = parse_obo(to_obo(a));
      REQUIRE(a.terms.size() == b.terms.size());
      for (const auto& t : a.terms) {
        const auto* u = b.find(t.id);
        REQUIRE(u);
        CHECK(u->name == t.name);
        auto p = t.parents, q = u->parents;
        std::sort(p.begin(), p.end());
        std::sort(q.begin(), q.end());
        CHECK(p == q);
      }
    }
  }
}

TEST_SUITE("build_taxonomy") {
  TEST_CASE("transitive closure below the root") {
    const auto tax = Taxonomy::build(parse_obo(kSmall), "A");
    CHECK(class_ids(tax) == std::set<std::string>{"A", "B", "C"});
  }

  TEST_CASE("leaf root gives a single class") {
    const auto tax = Taxonomy::build(parse_obo(kSmall), "C");
    CHECK(class_ids(tax) == std::set<std::string>{"C"});
    CHECK(tax.classes()[tax.root()].parents.empty());
  }

  TEST_CASE("missing root") { CHECK_THROWS_AS(Taxonomy::build(parse_obo(kSmall), "Z"), LookupError); }

  TEST_CASE("EDAM-style operation subtree matches BFS reachability") {
    const auto src = parse_obo(read_file(testing::data_path("edam_subset.obo")));
    for (const std::string root : {"op:Operation", "data:Data", "data:Sequence", "op:Phylogenetic_analysis"}) {
      const auto tax = Taxonomy::build(src, root);
      CHECK(class_ids(tax) == reachable_below(src, root));
    }
    const auto ops = Taxonomy::build(src, "op:Operation");
    for (const auto& c : ops.classes()) CHECK(c.id.rfind("data:", 0) == std::string::npos);
  }

  TEST_CASE("multi-parent term keeps both parents") {
    const auto src = parse_obo(read_file(testing::data_path("edam_subset.obo")));
    const auto ops = Taxonomy::build(src, "op:Operation");
    CHECK(ops.is_subsumed("op:Phylogenetic_tree_drawing", "op:Phylogenetic_analysis"));
    CHECK(ops.is_subsumed("op:Phylogenetic_tree_drawing", "op:Visualisation_and_rendering"));
  }

  TEST_CASE("cycle rejected") {
    nlohmann::json doc = {{"root", "A"},
                          {"classes",
                           {{{"id", "A"}, {"name", "a"}, {"parents", nlohmann::json::array()}},
                            {{"id", "B"}, {"name", "b"}, {"parents", {"A", "C"}}},
                            {{"id", "C"}, {"name", "c"}, {"parents", {"B"}}}}},
                          {"instances", nlohmann::json::array()}};
    CHECK_THROWS_AS(Taxonomy::from_json(doc), ModelError);
  }
}

TEST_SUITE("taxonomy queries") {
  const Taxonomy& types() { return testing::domain()->type_taxonomy(); }
  const Taxonomy& services() { return testing::domain()->service_taxonomy(); }

  TEST_CASE("is_subsumed examples") {
    CHECK(types().is_subsumed("data:Sequence", "data:Sequence"));
    CHECK(types().is_subsumed("data:DNA_sequence", "data:Sequence"));
    CHECK_FALSE(types().is_subsumed("data:Multiple_sequence_alignment", "data:Sequence"));
    CHECK_FALSE(types().is_subsumed("data:Sequence", "data:DNA_sequence"));
    CHECK_FALSE(types().is_subsumed("data:Sequence", "data:Protein_sequence"));
  }

  TEST_CASE("satisfies examples") {
    const auto gmsa = *services().find("op:Global_multiple_sequence_alignment");
    CHECK(services().satisfies(testing::service_term("ClustalW"), gmsa));
    CHECK(types().satisfies(testing::type("DNA sequence"), testing::type("Data")));
    const auto poptree = types().resolve("poptree_outfile");
    CHECK(poptree.is_instance());
    CHECK_FALSE(types().satisfies(poptree, testing::type("Phylogenetic tree")));
    CHECK(types().satisfies(poptree, testing::type("Data")));
    CHECK(types().satisfies(poptree, poptree));
    CHECK_FALSE(types().satisfies(testing::type("Data"), poptree));
  }

  TEST_CASE("add_instance") {
    auto tax = Taxonomy::build(parse_obo(read_file(testing::data_path("edam_subset.obo"))), "op:Operation");
    const std::vector<std::string> gmsa{"op:Global_multiple_sequence_alignment"};
    const auto clustal = tax.add_instance("ClustalW", gmsa);
    CHECK(tax.resolve("ClustalW") == clustal);
    const std::vector<std::string> phy{"op:Phylogenetic_tree_construction_from_molecular_sequences"};
    const auto phyml = tax.add_instance("PhyML_DNA", phy);
    CHECK(tax.satisfies(phyml, *tax.find("op:Phylogenetic_tree_construction")));
    const std::vector<std::string> bogus{"op:No_such_class"};
    CHECK_THROWS_AS(tax.add_instance("X", bogus), LookupError);
    CHECK_THROWS_AS(tax.add_instance("ClustalW", gmsa), ModelError);
  }

  TEST_CASE("subsumption is a partial order with the root on top") {
    const auto& t = types();
    const auto n = static_cast<std::uint32_t>(t.class_count());
    for (std::uint32_t a = 0; a < n; ++a) {
      CHECK(t.is_subsumed(a, a));
      CHECK(t.is_subsumed(a, t.root()));
      for (std::uint32_t b = 0; b < n; ++b) {
        if (a != b && t.is_subsumed(a, b)) CHECK_FALSE(t.is_subsumed(b, a));
        for (std::uint32_t c = 0; c < n; ++c)
          if (t.is_subsumed(a, b) && t.is_subsumed(b, c)) CHECK(t.is_subsumed(a, c));
      }
    }
  }

  TEST_CASE("ancestors agree with is_subsumed") {
    const auto& t = services();
    for (std::uint32_t a = 0; a < t.class_count(); ++a) {
      const auto anc = t.ancestors(TermRef::make_class(a));
      for (std::uint32_t b = 0; b < t.class_count(); ++b)
        CHECK((std::find(anc.begin(), anc.end(), b) != anc.end()) == t.is_subsumed(a, b));
    }
  }
}

TEST_SUITE("taxonomy json") {
  TEST_CASE("round trip is byte-stable") {
    for (const auto* file : {"service_taxonomy.json", "type_taxonomy.json"}) {
      const auto text = read_file(testing::data_path(file));
      const auto tax = Taxonomy::from_json(nlohmann::json::parse(text));
      const auto once = tax.to_json().dump(2);
      const auto twice = Taxonomy::from_json(nlohmann::json::parse(once)).to_json().dump(2);
      CHECK(once == twice);
      CHECK(once + "\n" == text);
    }
  }
}
