#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "wfsynth/synthesis.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("wfsynth_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI with `args` (already shell-quoted), capturing both streams.
Run cli(const std::string& args) {
  const auto err_file = scratch() / "stderr.txt";
  const std::string cmd = std::string("WFSYNTH_DOMAIN= WFSYNTH_DATA= '") + WFSYNTH_TEST_CLI + "' " + args + " 2>'" +
                          err_file.string() + "'";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = ::pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out, slurp(err_file)};
}

std::string data(const std::string& f) { return "'" + testing::data_path(f).string() + "'"; }

}  // namespace

TEST_SUITE("convert-obo") {
  TEST_CASE("operation subtree") {
    const auto r = cli("convert-obo " + data("edam_subset.obo") + " --root op:Operation");
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["root"] == "op:Operation");
    for (const auto& c : doc["classes"]) CHECK(c["id"].get<std::string>().rfind("op:", 0) == 0);
    CHECK(r.out == slurp(testing::data_path("service_taxonomy.json")));
    CHECK(r.err.find("38") != std::string::npos);
  }

  TEST_CASE("instances and output file") {
    const auto out = scratch() / "types.json";
    const auto r = cli("convert-obo --in " + data("edam_subset.obo") +
                       " --root data:Data --instance poptree_outfile=data:Data --out '" + out.string() + "'");
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    CHECK(slurp(out) == slurp(testing::data_path("type_taxonomy.json")));
  }

  TEST_CASE("missing file") {
    const auto r = cli("convert-obo /nonexistent/x.obo --root op:Operation");
    CHECK(r.status == 2);
    CHECK(r.err.find("no such file") != std::string::npos);
  }

  TEST_CASE("missing root") {
    const auto r = cli("convert-obo " + data("edam_subset.obo") + " --root op:Nothing");
    CHECK(r.status == 1);
    CHECK(r.err.find("root") != std::string::npos);
    CHECK(r.err.find("not found") != std::string::npos);
  }

  TEST_CASE("malformed obo") {
    const auto bad = scratch() / "bad.obo";
    std::ofstream(bad) << "[Term]\nid: A\n\n[Term]\nid: A\n";
    const auto r = cli("convert-obo '" + bad.string() + "' --root A");
    CHECK(r.status == 2);
    CHECK(r.err.find("line 5") != std::string::npos);
  }
}

TEST_SUITE("validate") {
  TEST_CASE("bundled domain") {
    const auto r = cli("validate " + data("example.domain.json"));
    CHECK(r.status == 0);
    CHECK(r.out.find("Sequence composition is produced by no service") != std::string::npos);
  }

  TEST_CASE("default domain") {
    CHECK(cli("validate --format json").status == 0);
    const auto r = cli("validate");
    CHECK(r.out.find("Sequence composition") != std::string::npos);
    const auto missing = cli("validate /nonexistent/domain.json");
    CHECK(missing.status == 1);
    CHECK(missing.err.find("no such file") != std::string::npos);
  }

  TEST_CASE("corrupt json") {
    const auto bad = scratch() / "corrupt.json";
    std::ofstream(bad) << "{ \"services\": [ ";
    CHECK(cli("validate '" + bad.string() + "'").status == 1);
  }

  TEST_CASE("dangling type reference") {
    std::ifstream in(testing::data_path("example.domain.json"));
    auto doc = nlohmann::json::parse(in);
    doc["services"][3]["outputs"] = {"data:Nowhere"};
    doc["service_taxonomy"] = testing::data_path("service_taxonomy.json").string();
    doc["type_taxonomy"] = testing::data_path("type_taxonomy.json").string();
    const auto bad = scratch() / "dangling.json";
    std::ofstream(bad) << doc.dump();
    const auto r = cli("validate '" + bad.string() + "'");
    CHECK(r.status == 1);
    CHECK(r.err.find("data:Nowhere") != std::string::npos);
    CHECK(r.err.find("DBFetch_FetchData") != std::string::npos);
  }
}

TEST_SUITE("synth") {
  const std::string base = "synth --domain " + data("example.domain.json") + " --source ReadDNASequence --sink Viewer ";

  TEST_CASE("constraints 1 and 4") {
    const auto r = cli(base + "--constraints " + data("c1_c4.sltl") + " --depth 5 --mode pipelining");
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["solutions"].size() == 24);
    const auto& model = *testing::domain();
    const auto problem = wfsynth::bundled::base_problem(testing::experiment(), testing::library({"c1", "c4"}));
    for (const auto& s : wfsynth::solutions_from_json(doc, model)) CHECK(wfsynth::revalidate(problem, s).empty());
  }

  TEST_CASE("library names and text output") {
    const auto r = cli(base + "--use \"c1,c4'\" --format text");
    CHECK(r.status == 0);
    CHECK(r.out.find("PhyML_DNA") != std::string::npos);
  }

  TEST_CASE("no solution exits 3") {
    CHECK(cli(base + "--constraints " + data("c1_c3_c4prime.sltl")).status == 3);
    CHECK(cli(base + "--depth 0").status == 3);
    CHECK(cli(base + "--depth 0 --allow-empty").status == 0);
  }

  TEST_CASE("bad input exits 2") {
    CHECK(cli(base + "--formula 'G('").status == 2);
    CHECK(cli(base + "--constraints /nonexistent.sltl").status == 2);
    CHECK(cli(base + "--use c9").status == 2);
  }

  TEST_CASE("unknown service is a domain error") {
    CHECK(cli("synth --domain " + data("example.domain.json") + " --source ReadDNASequence --sink Nope").status == 1);
  }

  TEST_CASE("output file and sequential flag") {
    const auto out = scratch() / "result.json";
    const auto r = cli(base + "--use c1,c4 --seq --out '" + out.string() + "'");
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    CHECK(nlohmann::json::parse(slurp(out))["solutions"].size() == 24);
  }
}

TEST_SUITE("repro-table2") {
  TEST_CASE("csv has 32 rows and is stable") {
    const std::string args = "repro-table2 --data '" + testing::data_path().string() + "'";
    const auto a = cli(args);
    REQUIRE(a.status == 0);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 33);
    CHECK(a.out.find("\n\"1,4\",") != std::string::npos);
    CHECK(a.out.find(",24,8309,24,0\n") != std::string::npos);
    CHECK(a.err.find("{1,3,4'}") != std::string::npos);
    CHECK(cli(args).out == a.out);
  }

  TEST_CASE("missing data") { CHECK(cli("repro-table2 --data /nonexistent").status == 1); }
}

TEST_SUITE("list-services") {
  TEST_CASE("lists 22 services") {
    const auto r = cli("list-services " + data("example.domain.json"));
    CHECK(r.status == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') >= 22);
  }
}
