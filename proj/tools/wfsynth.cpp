// wfsynth: command-line front end for workflow synthesis.
//
// Exit codes: 0 success (synth: at least one solution), 3 synth found no
// solution, 1 domain/model error, 2 I/O or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wfsynth/bundled.hpp"
#include "wfsynth/grid.hpp"
#include "wfsynth/synthesis.hpp"

namespace fs = std::filesystem;
using namespace wfsynth;

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kInputError = 2;
constexpr int kNoSolution = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "': no such file");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  out << text;
}

DomainModel load_domain_or_throw(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("cannot open '" + path.string() + "': no such file");
  return DomainModel::load(path);
}

// Maps exceptions to exit codes; `domain_code` is used for model errors.
template <typename Body>
int guarded(Body body, int parse_code = kInputError) {
  try {
    return body();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return parse_code;
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}

// ---------------------------------------------------------------------------

struct ConvertOptions {
  std::string in_path;
  std::string root;
  std::string out_path;
  std::vector<std::string> instances;  // id=class[,class...]
};

int cmd_convert_obo(const ConvertOptions& opt) {
  return guarded([&] {
    const auto source = parse_obo(read_file(opt.in_path));
    auto taxonomy = Taxonomy::build(source, opt.root);
    for (const auto& spec : opt.instances) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw ParseError("--instance expects id=class[,class...], got '" + spec + "'", 0);
      std::vector<std::string> classes;
      std::stringstream list(spec.substr(eq + 1));
      for (std::string c; std::getline(list, c, ',');) classes.push_back(c);
      taxonomy.add_instance(spec.substr(0, eq), std::span<const std::string>(classes));
    }
    write_output(taxonomy.to_json().dump(2) + "\n", opt.out_path);
    std::cerr << "taxonomy rooted at " << opt.root << ": " << taxonomy.class_count() << " classes, "
              << taxonomy.instance_count() << " instances (" << source.terms.size() << " terms read)\n";
    return kOk;
  });
}

// ---------------------------------------------------------------------------

struct ValidateOptions {
  std::string domain_path;
  std::string format = "text";
};

int cmd_validate(const ValidateOptions& opt) {
  // Every failure to load is a domain error here, including I/O and JSON syntax.
  const int code = guarded(
      [&] {
        const auto model = load_domain_or_throw(opt.domain_path);
        const auto diagnostics = validate_domain(model);
        if (opt.format == "json") {
          nlohmann::ordered_json doc;
          doc["services"] = model.size();
          doc["diagnostics"] = nlohmann::ordered_json::array();
          for (const auto& d : diagnostics)
            doc["diagnostics"].push_back({{"kind", std::string(to_string(d.kind))}, {"subject", d.subject}, {"message", d.message}});
          std::cout << doc.dump(2) << '\n';
        } else {
          for (const auto& d : diagnostics) std::cout << "warning [" << to_string(d.kind) << "]: " << d.message << '\n';
          std::cout << opt.domain_path << ": " << model.size() << " services, " << diagnostics.size() << " warning(s)\n";
        }
        return kOk;
      },
      kDomainError);
  return code == kOk ? kOk : kDomainError;
}

// ---------------------------------------------------------------------------

struct SynthOptions {
  std::string domain_path;
  std::string source;
  std::string sink;
  std::vector<std::string> start;
  std::vector<std::string> goal;
  std::vector<std::string> constraint_files;
  std::vector<std::string> formulas;
  std::string use;  // comma-separated library names
  std::string library_path;
  std::size_t depth = 5;
  std::string mode = "pipelining";
  bool filter_permutations = false;
  bool allow_empty = false;
  std::string format = "json";
  std::string out_path;
  bool sequential = false;
  unsigned threads = 0;
  std::uint64_t max_solutions = SearchLimits{}.max_solutions;
  std::uint64_t max_visited = SearchLimits{}.max_visited;
};

int cmd_synth(const SynthOptions& opt) {
  return guarded([&]() -> int {
    const auto domain = std::make_shared<const DomainModel>(load_domain_or_throw(opt.domain_path));
    const auto vocab = Vocabulary::of(*domain);

    std::vector<Formula> parts;
    for (const auto& file : opt.constraint_files) {
      if (!fs::exists(file)) throw IoError("cannot open '" + file + "': no such file");
      parts.push_back(load_constraint_file(file, vocab).conjunction());
    }
    for (const auto& text : opt.formulas) parts.push_back(parse_constraint(text, vocab));
    if (!opt.use.empty()) {
      const fs::path lib = opt.library_path.empty() ? fs::path(opt.domain_path).parent_path() / bundled::kLibraryFile
                                                    : fs::path(opt.library_path);
      if (!fs::exists(lib)) throw IoError("cannot open '" + lib.string() + "': no such file");
      const auto library = load_constraint_file(lib, vocab);
      std::vector<std::string> names;
      std::stringstream list(opt.use);
      for (std::string n; std::getline(list, n, ',');)
        if (!n.empty()) names.push_back(n);
      try {
        parts.push_back(bundled::constraints_named(library, names));
      } catch (const LookupError& e) {
        throw std::invalid_argument(e.what());  // a bad --use list is an input error
      }
    }

    const auto mode = universe_mode_from_string(opt.mode);
    const ProblemFlags flags{opt.filter_permutations, opt.allow_empty};
    SynthesisProblem problem;
    if (!opt.source.empty() || !opt.sink.empty()) {
      if (opt.source.empty() || opt.sink.empty()) throw std::invalid_argument("--source and --sink go together");
      problem = derive_problem(domain, opt.source, opt.sink, conjoin(parts), opt.depth, mode, flags);
    } else {
      problem.domain = domain;
      problem.start = domain->make_state(opt.start);
      for (const auto& g : opt.goal) problem.goal.push_back(domain->type_taxonomy().resolve(g));
      problem.constraint = conjoin(parts);
      problem.max_depth = opt.depth;
      problem.mode = mode;
      problem.filter_permutations = flags.filter_permutations;
      problem.allow_empty_solution = flags.allow_empty_solution;
    }

    SearchLimits limits;
    limits.max_solutions = opt.max_solutions;
    limits.max_visited = opt.max_visited;
    limits.threads = opt.sequential ? 1 : opt.threads;
    const auto result = synthesize(problem, limits);

    if (opt.format == "text") {
      std::ostringstream out;
      for (const auto& sol : result.solutions) {
        const auto names = service_names(sol, *domain);
        for (std::size_t i = 0; i < names.size(); ++i) out << (i ? " -> " : "") << names[i];
        out << '\n';
      }
      write_output(out.str(), opt.out_path);
    } else {
      write_output(to_json(problem, result).dump(2) + "\n", opt.out_path);
    }
    std::cerr << result.solutions.size() << " solution(s), " << result.stats.visited_nodes << " visited node(s)"
              << (result.truncated ? ", truncated" : "") << '\n';
    return result.solutions.empty() ? kNoSolution : kOk;
  });
}

// ---------------------------------------------------------------------------

struct ReproOptions {
  std::string data_dir;
  std::string out_path;
  std::string report_path;
};

int cmd_repro_table2(const ReproOptions& opt) {
  const fs::path dir = opt.data_dir.empty() ? bundled::data_dir() : fs::path(opt.data_dir);
  if (!fs::exists(dir / bundled::kDomainFile) || !fs::exists(dir / bundled::kLibraryFile)) {
    std::cerr << "error: bundled data not found in '" << dir.string() << "'\n";
    return kDomainError;
  }
  const int code = guarded([&] {
    const auto experiment = bundled::load(dir);
    SearchLimits limits;
    limits.threads = 1;
    const auto report = bundled::repro_table(experiment, limits);
    write_output(report.to_csv(), opt.out_path);
    const auto monotonicity = report.monotonicity_report();
    std::cerr << monotonicity;
    if (!opt.report_path.empty()) {
      std::ofstream out(opt.report_path);
      out << monotonicity;
    }
    return kOk;
  });
  return code == kOk ? kOk : kDomainError;
}

// ---------------------------------------------------------------------------

struct ListOptions {
  std::string domain_path;
  std::string format = "text";
};

int cmd_list_services(const ListOptions& opt) {
  return guarded([&] {
    const auto model = load_domain_or_throw(opt.domain_path);
    const auto& types = model.type_taxonomy();
    const auto& services = model.service_taxonomy();
    auto names = [&](const Taxonomy& tax, const auto& refs) {
      std::vector<std::string> out;
      for (const auto r : refs) out.push_back(tax.name(r));
      return out;
    };
    if (opt.format == "json") {
      auto doc = nlohmann::ordered_json::array();
      for (const auto& s : model.services()) {
        std::vector<TermRef> cls;
        for (const auto c : s.classifications) cls.push_back(TermRef::make_class(c));
        doc.push_back({{"name", s.name},
                       {"classifications", names(services, cls)},
                       {"inputs", names(types, s.inputs)},
                       {"outputs", names(types, s.outputs)}});
      }
      std::cout << doc.dump(2) << '\n';
      return kOk;
    }
    for (const auto& s : model.services()) {
      std::cout << s.name << "\n  class:";
      for (const auto c : s.classifications) std::cout << ' ' << services.name(TermRef::make_class(c)) << ';';
      std::cout << "\n  in:";
      for (const auto& n : names(types, s.inputs)) std::cout << ' ' << n << ';';
      std::cout << "\n  out:";
      for (const auto& n : names(types, s.outputs)) std::cout << ' ' << n << ';';
      std::cout << '\n';
    }
    return kOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-guided workflow synthesis over taxonomy-backed service domains"};
  app.require_subcommand(1);
  const std::string default_domain = bundled::default_domain_path().string();

  ConvertOptions convert;
  auto* convert_cmd = app.add_subcommand("convert-obo", "Extract a rooted taxonomy from an OBO file");
  convert_cmd->add_option("--in,input", convert.in_path, "OBO file")->required();
  convert_cmd->add_option("--root", convert.root, "Root term id")->required();
  convert_cmd->add_option("--out", convert.out_path, "Output taxonomy JSON (default: stdout)");
  convert_cmd->add_option("--instance", convert.instances, "Attach an instance: id=class[,class...]");

  ValidateOptions validate;
  validate.domain_path = default_domain;
  auto* validate_cmd = app.add_subcommand("validate", "Load a domain file and report warnings");
  validate_cmd->add_option("--domain,domain", validate.domain_path, "Domain file");
  validate_cmd->add_option("--format", validate.format)->check(CLI::IsMember({"text", "json"}));

  SynthOptions synth;
  synth.domain_path = default_domain;
  auto* synth_cmd = app.add_subcommand("synth", "Enumerate workflows for a loose branch");
  synth_cmd->add_option("--domain", synth.domain_path, "Domain file");
  synth_cmd->add_option("--source", synth.source, "Service at the start of the loose branch");
  synth_cmd->add_option("--sink", synth.sink, "Service at the end of the loose branch");
  synth_cmd->add_option("--start", synth.start, "Explicit start type (repeatable)");
  synth_cmd->add_option("--goal", synth.goal, "Explicit goal type (repeatable)");
  synth_cmd->add_option("--constraints", synth.constraint_files, "Constraint file (repeatable)");
  synth_cmd->add_option("--formula", synth.formulas, "Inline formula or template (repeatable)");
  synth_cmd->add_option("--use", synth.use, "Comma-separated constraint names from the library");
  synth_cmd->add_option("--library", synth.library_path, "Constraint library (default: next to the domain)");
  synth_cmd->add_option("--depth", synth.depth, "Maximum sequence length")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--mode", synth.mode)->check(CLI::IsMember({"pipelining", "accumulating"}));
  synth_cmd->add_flag("--filter-permutations", synth.filter_permutations, "Keep one sequence per service multiset");
  synth_cmd->add_flag("--allow-empty", synth.allow_empty, "Admit the empty sequence");
  synth_cmd->add_option("--format", synth.format)->check(CLI::IsMember({"json", "text"}));
  synth_cmd->add_option("--out", synth.out_path, "Output file (default: stdout)");
  synth_cmd->add_flag("--seq", synth.sequential, "Search sequentially");
  synth_cmd->add_option("--threads", synth.threads, "Worker threads (0: hardware)");
  synth_cmd->add_option("--max-solutions", synth.max_solutions);
  synth_cmd->add_option("--max-visited", synth.max_visited);

  ReproOptions repro;
  auto* repro_cmd = app.add_subcommand("repro-table2", "Rerun the 32 constraint combinations on the bundled domain");
  repro_cmd->add_option("--data", repro.data_dir, "Bundled data directory");
  repro_cmd->add_option("--out", repro.out_path, "CSV output (default: stdout)");
  repro_cmd->add_option("--report", repro.report_path, "Also write the monotonicity report here");

  ListOptions list;
  list.domain_path = default_domain;
  auto* list_cmd = app.add_subcommand("list-services", "Print the services of a domain");
  list_cmd->add_option("--domain,domain", list.domain_path, "Domain file");
  list_cmd->add_option("--format", list.format)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (*convert_cmd) return cmd_convert_obo(convert);
  if (*validate_cmd) return cmd_validate(validate);
  if (*synth_cmd) return cmd_synth(synth);
  if (*repro_cmd) return cmd_repro_table2(repro);
  if (*list_cmd) return cmd_list_services(list);
  return kInputError;
}
