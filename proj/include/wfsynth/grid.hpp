#pragma once

// Runs one synthesis problem under many constraint combinations.

#include <string>
#include <vector>

#include "wfsynth/synthesis.hpp"

namespace wfsynth {

struct NamedConstraintSet {
  std::string label;               // e.g. "1,4'" or "none"
  std::vector<std::string> names;  // member constraint names, used for inclusion tests
  Formula formula;
};

struct GridRow {
  std::string label;
  std::vector<std::string> names;
  std::uint64_t visited_nodes = 0;
  std::vector<Solution> solutions;
  bool truncated = false;
};

/// Constraint set `superset` (a strict superset of `subset`) admits
/// `extra` solutions that `subset` rejects.
struct MonotonicityViolation {
  std::string subset;
  std::string superset;
  std::size_t extra = 0;
};

struct GridReport {
  std::vector<GridRow> rows;
  std::vector<MonotonicityViolation> violations;

  /// Header `constraints,visited_nodes,solutions`, one row per set.
  std::string to_csv() const;
};

/// Every subset of `items`, ordered by size and then by position of the
/// members (the empty subset first).
std::vector<std::vector<std::size_t>> ordered_subsets(std::size_t items);

/// Runs `base` once per constraint set (replacing its constraint) and checks
/// solution-set monotonicity across every pair related by inclusion.
GridReport run_constraint_grid(const SynthesisProblem& base, const std::vector<NamedConstraintSet>& sets,
                               const SearchLimits& limits = {});

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& value);

}  // namespace wfsynth
