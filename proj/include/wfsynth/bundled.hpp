#pragma once

// The bundled example domain, its constraint library and the harness that
// reruns the published constraint-combination experiment.

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wfsynth/grid.hpp"

namespace wfsynth::bundled {

/// `$WFSYNTH_DATA`, or the data directory of the source tree.
std::filesystem::path data_dir();
/// `$WFSYNTH_DOMAIN`, or `example.domain.json` in data_dir().
std::filesystem::path default_domain_path();

inline constexpr std::string_view kDomainFile = "example.domain.json";
inline constexpr std::string_view kLibraryFile = "constraints.sltl";
inline constexpr std::string_view kOboFile = "edam_subset.obo";
inline constexpr std::string_view kSourceService = "ReadDNASequence";
inline constexpr std::string_view kSinkService = "Viewer";

/// Library names of the five experiment constraints, in table order.
inline constexpr std::string_view kConstraintNames[] = {"c1", "c2", "c3", "c4", "c4'"};

struct Experiment {
  std::shared_ptr<const DomainModel> domain;
  ConstraintSet library;
};

/// Loads domain and constraint library from `dir`. Throws on missing files.
Experiment load(const std::filesystem::path& dir = data_dir());

/// Loose branch ReadDNASequence -> Viewer with the given constraint.
SynthesisProblem base_problem(const Experiment& experiment, Formula constraint, std::size_t max_depth = 5,
                              UniverseMode mode = UniverseMode::Pipelining);

/// Conjunction of the named library constraints. Throws LookupError.
Formula constraints_named(const ConstraintSet& library, std::span<const std::string> names);

/// The 32 subsets of c1..c4' in table order, labelled like the table
/// ("none", "1", ..., "1,2,3,4,4'").
std::vector<NamedConstraintSet> table_constraint_sets(const ConstraintSet& library);

struct PublishedRow {
  std::string_view label;
  std::uint64_t visited_nodes;
  std::uint64_t solutions;
};

/// Published visited-node and solution counts at search depth 5.
std::span<const PublishedRow> published_table();
std::optional<PublishedRow> published_row(std::string_view label);

/// Published unconstrained accumulating-mode counts before and after the
/// permutation filter.
inline constexpr std::uint64_t kPublishedAccumulatingSolutions = 264'118;
inline constexpr std::uint64_t kPublishedAccumulatingFiltered = 5'325;

/// Pairs of published rows where adding constraints increased the count.
struct PublishedViolation {
  std::string subset;
  std::string superset;
  std::uint64_t subset_solutions;
  std::uint64_t superset_solutions;
};
std::vector<PublishedViolation> published_monotonicity_violations();

struct ReproReport {
  GridReport grid;
  std::vector<PublishedViolation> published_violations;

  /// `constraints,visited_nodes,solutions,published_visited_nodes,published_solutions,solutions_delta`.
  std::string to_csv() const;
  /// Human-readable monotonicity findings for both tables.
  std::string monotonicity_report() const;
};

ReproReport repro_table(const Experiment& experiment, const SearchLimits& limits = {});

}  // namespace wfsynth::bundled
