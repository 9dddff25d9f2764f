#include "wfsynth/bundled.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>

namespace wfsynth::bundled {

namespace {

constexpr std::array<PublishedRow, 32> kPublished{{
    {"none", 34'026, 2'269},     {"1", 1'139, 55},            {"2", 82'343, 2'194},
    {"3", 132'809, 1'916},       {"4", 436'102, 471},         {"4'", 129'200, 406},
    {"1,2", 1'103, 49},          {"1,3", 3'123, 52},          {"1,4", 8'309, 24},
    {"1,4'", 2'336, 1},          {"2,3", 138'137, 1'847},     {"2,4", 443'860, 459},
    {"2,4'", 181'365, 394},      {"3,4", 910'672, 138},       {"3,4'", 277'239, 359},
    {"4,4'", 847'845, 18},       {"1,2,3", 9'603, 31},        {"1,2,4", 8'057, 24},
    {"1,2,4'", 2'084, 1},        {"1,3,4", 28'545, 24},       {"1,3,4'", 18'699, 0},
    {"1,4,4'", 15'919, 0},       {"2,3,4", 919'162, 138},     {"2,3,4'", 284'463, 347},
    {"2,4,4'", 859'047, 18},     {"3,4,4'", 1'752'153, 0},    {"1,2,3,4", 28'545, 24},
    {"1,2,3,4'", 2'084, 1},      {"1,2,4,4'", 15'235, 0},     {"1,3,4,4'", 54'711, 0},
    {"2,3,4,4'", 1'764'843, 0},  {"1,2,3,4,4'", 54'027, 0},
}};

std::vector<std::string> split_label(std::string_view label) {
  std::vector<std::string> parts;
  if (label == "none") return parts;
  std::size_t start = 0;
  while (start <= label.size()) {
    const auto comma = std::min(label.find(',', start), label.size());
    parts.emplace_back(label.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

}  // namespace

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("WFSYNTH_DATA"); env && *env) return env;
  return WFSYNTH_DATA_DIR;
}

std::filesystem::path default_domain_path() {
  if (const char* env = std::getenv("WFSYNTH_DOMAIN"); env && *env) return env;
  return data_dir() / kDomainFile;
}

Experiment load(const std::filesystem::path& dir) {
  Experiment exp;
  exp.domain = std::make_shared<const DomainModel>(DomainModel::load(dir / kDomainFile));
  exp.library = load_constraint_file(dir / kLibraryFile, Vocabulary::of(*exp.domain));
  return exp;
}

SynthesisProblem base_problem(const Experiment& experiment, Formula constraint, std::size_t max_depth, UniverseMode mode) {
  return derive_problem(experiment.domain, kSourceService, kSinkService, std::move(constraint), max_depth, mode);
}

Formula constraints_named(const ConstraintSet& library, std::span<const std::string> names) {
  std::vector<Formula> parts;
  for (const auto& name : names) {
    const auto* entry = library.find(name);
    if (!entry) throw LookupError("no constraint named '" + name + "' in the library");
    parts.push_back(entry->formula);
  }
  return conjoin(parts);
}

std::vector<NamedConstraintSet> table_constraint_sets(const ConstraintSet& library) {
  std::vector<NamedConstraintSet> sets;
  for (const auto& subset : ordered_subsets(std::size(kConstraintNames))) {
    NamedConstraintSet set;
    for (const auto i : subset) {
      const auto name = std::string(kConstraintNames[i]);
      if (!set.label.empty()) set.label += ',';
      set.label += name.substr(1);
      set.names.push_back(name);
    }
    if (set.label.empty()) set.label = "none";
    set.formula = constraints_named(library, set.names);
    sets.push_back(std::move(set));
  }
  return sets;
}

std::span<const PublishedRow> published_table() { return kPublished; }

std::optional<PublishedRow> published_row(std::string_view label) {
  const auto it = std::find_if(kPublished.begin(), kPublished.end(), [&](const PublishedRow& r) { return r.label == label; });
  if (it == kPublished.end()) return std::nullopt;
  return *it;
}

std::vector<PublishedViolation> published_monotonicity_violations() {
  std::vector<PublishedViolation> out;
  for (const auto& sub : kPublished) {
    auto sub_parts = split_label(sub.label);
    std::sort(sub_parts.begin(), sub_parts.end());
    for (const auto& super : kPublished) {
      auto super_parts = split_label(super.label);
      if (super_parts.size() <= sub_parts.size()) continue;
      std::sort(super_parts.begin(), super_parts.end());
      if (!std::includes(super_parts.begin(), super_parts.end(), sub_parts.begin(), sub_parts.end())) continue;
      if (super.solutions > sub.solutions)
        out.push_back({std::string(sub.label), std::string(super.label), sub.solutions, super.solutions});
    }
  }
  return out;
}

std::string ReproReport::to_csv() const {
  std::ostringstream out;
  out << "constraints,visited_nodes,solutions,published_visited_nodes,published_solutions,solutions_delta\n";
  for (const auto& row : grid.rows) {
    out << csv_field(row.label) << ',' << row.visited_nodes << ',' << row.solutions.size();
    if (const auto pub = published_row(row.label)) {
      const auto delta = static_cast<std::int64_t>(row.solutions.size()) - static_cast<std::int64_t>(pub->solutions);
      out << ',' << pub->visited_nodes << ',' << pub->solutions << ',' << (delta > 0 ? "+" : "") << delta;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  return out.str();
}

std::string ReproReport::monotonicity_report() const {
  std::ostringstream out;
  out << "published table: " << published_violations.size() << " monotonicity violation(s)\n";
  for (const auto& v : published_violations) {
    out << "  {" << v.subset << "} -> " << v.subset_solutions << " but {" << v.superset << "} -> "
        << v.superset_solutions << '\n';
  }
  out << "this run: " << grid.violations.size() << " monotonicity violation(s)\n";
  for (const auto& v : grid.violations)
    out << "  {" << v.superset << "} admits " << v.extra << " solution(s) rejected by {" << v.subset << "}\n";
  return out.str();
}

ReproReport repro_table(const Experiment& experiment, const SearchLimits& limits) {
  ReproReport report;
  const auto base = base_problem(experiment, f_true());
  report.grid = run_constraint_grid(base, table_constraint_sets(experiment.library), limits);
  report.published_violations = published_monotonicity_violations();
  return report;
}

}  // namespace wfsynth::bundled
