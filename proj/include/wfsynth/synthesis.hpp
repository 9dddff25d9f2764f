#pragma once

// Solution enumeration by iterative-deepening depth-first search over the
// product of the configuration universe and the residual constraint formula.

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wfsynth/problem.hpp"

namespace wfsynth {

/// A concrete service sequence (domain service indices, in order).
struct Solution {
  std::vector<std::uint32_t> services;

  friend bool operator==(const Solution&, const Solution&) = default;
  friend auto operator<=>(const Solution&, const Solution&) = default;
};

struct DepthStats {
  std::size_t depth = 0;
  std::uint64_t visited = 0;
  std::uint64_t found = 0;
};

struct SearchStats {
  std::uint64_t visited_nodes = 0;  // summed over all deepening rounds
  std::uint64_t solutions_found = 0;  // before any solution filter
  std::vector<DepthStats> per_depth;
  std::chrono::nanoseconds wall_time{0};
};

struct SynthesisResult {
  std::vector<Solution> solutions;  // canonical order
  SearchStats stats;
  bool truncated = false;
};

struct SearchLimits {
  std::uint64_t max_solutions = 1'000'000;
  std::uint64_t max_visited = 10'000'000;
  /// Worker threads for subtrees below the root; 1 searches sequentially,
  /// 0 uses the hardware concurrency. Results do not depend on it unless a
  /// limit is hit.
  unsigned threads = 1;
};

/// Length first, then lexicographic on service names.
class CanonicalOrder {
 public:
  explicit CanonicalOrder(const DomainModel& domain) : rank_(&domain.name_rank()) {}
  bool operator()(const Solution& a, const Solution& b) const;

 private:
  const std::vector<std::uint32_t>* rank_;
};

/// Every sequence w with 1 <= |w| <= max_depth (0 allowed when
/// allow_empty_solution) that is executable from the start, ends in a state
/// satisfying the goal and whose trace satisfies the constraint.
SynthesisResult synthesize(const SynthesisProblem& problem, const SearchLimits& limits = {});

/// Same solution set for the unconstrained problem, by plain exhaustive DFS
/// without formula progression. The problem's constraint is ignored.
SynthesisResult enumerate_universe(const SynthesisProblem& problem, const SearchLimits& limits = {});

/// One representative (the canonically least) per multiset of services,
/// returned in canonical order.
std::vector<Solution> filter_permutations(std::vector<Solution> solutions, const DomainModel& domain);

void sort_canonical(std::vector<Solution>& solutions, const DomainModel& domain);

std::vector<std::string> service_names(const Solution& solution, const DomainModel& domain);

/// Result document: problem echo, solutions with traces, stats, truncated.
nlohmann::ordered_json to_json(const SynthesisProblem& problem, const SynthesisResult& result);

/// Replays each solution and re-checks executability, the goal and the
/// constraint. Returns a description of the first failure, empty if valid.
std::string revalidate(const SynthesisProblem& problem, const Solution& solution);

/// Reads the `services` lists back out of a result document.
std::vector<Solution> solutions_from_json(const nlohmann::json& doc, const DomainModel& domain);

}  // namespace wfsynth
