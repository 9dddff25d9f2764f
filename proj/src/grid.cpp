#include "wfsynth/grid.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace wfsynth {

std::vector<std::vector<std::size_t>> ordered_subsets(std::size_t items) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k <= items; ++k) {
    // Lexicographic k-combinations of 0..items-1.
    std::vector<std::size_t> combo(k);
    for (std::size_t i = 0; i < k; ++i) combo[i] = i;
    while (true) {
      out.push_back(combo);
      std::size_t i = k;
      while (i > 0 && combo[i - 1] == items - k + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return out;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string GridReport::to_csv() const {
  std::ostringstream out;
  out << "constraints,visited_nodes,solutions\n";
  for (const auto& row : rows) out << csv_field(row.label) << ',' << row.visited_nodes << ',' << row.solutions.size() << '\n';
  return out.str();
}

GridReport run_constraint_grid(const SynthesisProblem& base, const std::vector<NamedConstraintSet>& sets,
                               const SearchLimits& limits) {
  GridReport report;
  for (const auto& set : sets) {
    auto problem = base;
    problem.constraint = set.formula;
    auto result = synthesize(problem, limits);
    report.rows.push_back(GridRow{set.label, set.names, result.stats.visited_nodes, std::move(result.solutions), result.truncated});
  }

  auto sorted_names = [](std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    return names;
  };
  for (const auto& sub : report.rows) {
    const auto sub_names = sorted_names(sub.names);
    const std::set<Solution> allowed(sub.solutions.begin(), sub.solutions.end());
    for (const auto& super : report.rows) {
      if (&sub == &super || super.names.size() <= sub.names.size()) continue;
      const auto super_names = sorted_names(super.names);
      if (!std::includes(super_names.begin(), super_names.end(), sub_names.begin(), sub_names.end())) continue;
      const auto extra = std::count_if(super.solutions.begin(), super.solutions.end(),
                                       [&](const Solution& s) { return !allowed.contains(s); });
      if (extra > 0) report.violations.push_back({sub.label, super.label, static_cast<std::size_t>(extra)});
    }
  }
  return report;
}

}  // namespace wfsynth
