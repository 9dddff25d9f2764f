#include <doctest.h>

#include <fstream>
#include <random>

#include "support.hpp"
#include "wfsynth/domain.hpp"
#include "wfsynth/problem.hpp"

using namespace wfsynth;
using testing::state;
using testing::type;

namespace {

nlohmann::json bundled_doc() {
  std::ifstream in(testing::data_path("example.domain.json"));
  return nlohmann::json::parse(in);
}

DomainModel without(std::initializer_list<std::string> dropped) {
  auto doc = bundled_doc();
  auto& services = doc["services"];
  for (auto it = services.begin(); it != services.end();) {
    const auto name = (*it)["name"].get<std::string>();
    if (std::find(dropped.begin(), dropped.end(), name) != dropped.end())
      it = services.erase(it);
    else
      ++it;
  }
  return DomainModel::from_json(doc, testing::data_path());
}

bool has_diagnostic(const std::vector<Diagnostic>& ds, Diagnostic::Kind kind, const std::string& subject) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.kind == kind && d.subject == subject; });
}

}  // namespace

TEST_SUITE("load_domain") {
  TEST_CASE("bundled domain has 22 services") {
    const auto model = DomainModel::load(testing::data_path("example.domain.json"));
    CHECK(model.size() == 22);
    CHECK(model.find_service("PhyML_DNA").has_value());
    CHECK_FALSE(model.find_service("BLAST").has_value());
  }

  TEST_CASE("unknown type names service and reference") {
    auto doc = bundled_doc();
    doc["services"][0]["inputs"] = {"data:No_such_type"};
    try {
      DomainModel::from_json(doc, testing::data_path());
      FAIL("expected LookupError");
    } catch (const LookupError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("ClustalW") != std::string::npos);
      CHECK(msg.find("data:No_such_type") != std::string::npos);
    }
  }

  TEST_CASE("empty service list") {
    auto doc = bundled_doc();
    doc["services"] = nlohmann::json::array();
    const auto model = DomainModel::from_json(doc, testing::data_path());
    CHECK(model.size() == 0);
    CHECK(validate_domain(model).size() > 0);  // every class is unused
    for (const auto& d : validate_domain(model)) CHECK(d.kind == Diagnostic::Kind::UnusedClass);
  }

  TEST_CASE("empty model with bare taxonomies has no diagnostics") {
    const nlohmann::json tax = {{"root", "R"},
                                {"classes", {{{"id", "R"}, {"name", "R"}, {"parents", nlohmann::json::array()}}}},
                                {"instances", nlohmann::json::array()}};
    const nlohmann::json doc = {{"service_taxonomy", tax}, {"type_taxonomy", tax}, {"services", nlohmann::json::array()}};
    CHECK(validate_domain(DomainModel::from_json(doc)).empty());
  }

  TEST_CASE("duplicate service name") {
    auto doc = bundled_doc();
    doc["services"].push_back(doc["services"][0]);
    CHECK_THROWS_AS(DomainModel::from_json(doc, testing::data_path()), ModelError);
  }

  TEST_CASE("missing file") { CHECK_THROWS(DomainModel::load(testing::data_path("nope.json"))); }

  TEST_CASE("services are instances of their classifications") {
    const auto& model = *testing::domain();
    const auto& svc = model.service_taxonomy();
    CHECK(svc.satisfies(model.service("ClustalW").instance, *svc.find("op:Global_multiple_sequence_alignment")));
    CHECK(svc.satisfies(model.service("WUBlast").instance, *svc.find("op:Sequence_database_search_by_sequence")));
    CHECK(model.service_of_instance(model.service("Gblocks").instance) == model.service_index("Gblocks"));
  }
}

TEST_SUITE("validate_domain") {
  TEST_CASE("bundled domain warnings") {
    const auto ds = validate_domain(*testing::domain());
    CHECK(has_diagnostic(ds, Diagnostic::Kind::InputNeverProduced, "Sequence composition"));
    CHECK(has_diagnostic(ds, Diagnostic::Kind::InputNeverProduced, "Protein sequence"));
    CHECK_FALSE(has_diagnostic(ds, Diagnostic::Kind::OutputNeverConsumed, "Phylogenetic tree image"));
    const auto it = std::find_if(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.subject == "Sequence composition"; });
    REQUIRE(it != ds.end());
    CHECK(it->message.find("Sequence composition is produced by no service") == 0);
  }

  TEST_CASE("image consumer depends on Viewer, WriteFile and ps2pdf") {
    const auto some = without({"Viewer", "WriteFile"});
    CHECK_FALSE(has_diagnostic(validate_domain(some), Diagnostic::Kind::OutputNeverConsumed, "Phylogenetic tree image"));
    const auto none = without({"Viewer", "WriteFile", "ps2pdf"});
    CHECK(has_diagnostic(validate_domain(none), Diagnostic::Kind::OutputNeverConsumed, "Phylogenetic tree image"));
  }
}

TEST_SUITE("semantics") {
  const DomainModel& m() { return *testing::domain(); }

  TEST_CASE("applicable") {
    CHECK(m().applicable(state({"DNA sequence"}), "WUBlast"));
    CHECK_FALSE(m().applicable(state({"DNA sequence"}), "Gblocks"));
    CHECK(m().applicable(TypeState{}, "ReadFile"));
    CHECK(m().applicable(state({"Multiple sequence alignment"}), "ReadFile"));
    CHECK_FALSE(m().applicable(state({"Sequence"}), "PhyML_DNA"));
    CHECK(m().applicable(state({"DNA sequence"}), "PhyML_DNA"));
  }

  TEST_CASE("successor") {
    CHECK(m().successor(state({"DNA sequence"}), "WUBlast", UniverseMode::Pipelining) == state({"Sequence database hits"}));
    CHECK(m().successor(state({"DNA sequence"}), "WUBlast", UniverseMode::Accumulating) ==
          state({"DNA sequence", "Sequence database hits"}));
    CHECK(m().successor(state({"Phylogenetic tree"}), "WriteFile", UniverseMode::Pipelining).empty());
    CHECK_THROWS_AS(m().successor(state({"DNA sequence"}), "Gblocks", UniverseMode::Pipelining), std::invalid_argument);
  }

  TEST_CASE("accumulating is monotone and contains pipelining") {
    std::mt19937 rng(7);
    const auto& types = m().type_taxonomy();
    for (int round = 0; round < 500; ++round) {
      TypeState small, big;
      for (std::uint32_t c = 0; c < types.class_count(); ++c) {
        const auto r = rng() % 8;
        if (r == 0) small.insert(TermRef::make_class(c));
        if (r <= 1) big.insert(TermRef::make_class(c));
      }
      for (const auto& ref : small) big.insert(ref);
      for (std::size_t s = 0; s < m().size(); ++s) {
        if (!m().applicable(small, s)) continue;
        CHECK(m().applicable(big, s));
        const auto acc = m().successor(small, s, UniverseMode::Accumulating);
        CHECK(small.subset_of(acc));
        CHECK(m().successor(small, s, UniverseMode::Pipelining).subset_of(acc));
      }
    }
  }
}

TEST_SUITE("derive_problem") {
  TEST_CASE("loose branch endpoints") {
    const auto p = derive_problem(testing::domain(), "ReadDNASequence", "Viewer", f_true(), 5, UniverseMode::Pipelining);
    CHECK(p.start == state({"DNA sequence"}));
    CHECK(p.goal == std::vector<TermRef>{type("Data")});

    const auto q = derive_problem(testing::domain(), "ReadFile", "WriteFile", f_true(), 5, UniverseMode::Accumulating);
    CHECK(q.start == state({"Data"}));
    CHECK(q.goal == std::vector<TermRef>{type("Data")});
    CHECK(q.mode == UniverseMode::Accumulating);
  }

  TEST_CASE("sink without inputs accepts every state") {
    const auto p = derive_problem(testing::domain(), "ReadDNASequence", "ReadFile", f_true(), 3, UniverseMode::Pipelining);
    CHECK(p.goal.empty());
    CHECK(p.goal_holds(TypeState{}));
    CHECK(p.goal_holds(state({"Image"})));
  }

  TEST_CASE("unknown endpoints") {
    CHECK_THROWS_AS(derive_problem(testing::domain(), "Nope", "Viewer", f_true(), 5, UniverseMode::Pipelining), LookupError);
  }
}
