#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wfsynth/domain.hpp"
#include "wfsynth/sltl.hpp"

namespace wfsynth {

/// One synthesis query against a domain model.
struct SynthesisProblem {
  std::shared_ptr<const DomainModel> domain;
  TypeState start;
  std::vector<TermRef> goal;  // conjunction of required types; empty = always satisfied
  Formula constraint;
  std::size_t max_depth = 5;
  UniverseMode mode = UniverseMode::Pipelining;
  bool filter_permutations = false;
  bool allow_empty_solution = false;

  Vocabulary vocabulary() const { return Vocabulary::of(*domain); }
  bool goal_holds(const TypeState& state) const { return domain->satisfies_all(state, goal); }
};

struct ProblemFlags {
  bool filter_permutations = false;
  bool allow_empty_solution = false;
};

/// Problem for a loose branch between `source` and `sink`: start types are
/// the source's outputs, the goal is the conjunction of the sink's inputs.
/// Throws LookupError for unknown services.
SynthesisProblem derive_problem(std::shared_ptr<const DomainModel> domain, std::string_view source_service,
                                std::string_view sink_service, Formula constraint, std::size_t max_depth,
                                UniverseMode mode, ProblemFlags flags = {});

/// Replays `services` (domain indices) from the problem's start. Throws
/// std::invalid_argument if some step is not applicable.
Trace replay(const SynthesisProblem& problem, std::span<const std::uint32_t> services);

}  // namespace wfsynth
