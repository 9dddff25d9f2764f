#include "wfsynth/problem.hpp"

namespace wfsynth {

SynthesisProblem derive_problem(std::shared_ptr<const DomainModel> domain, std::string_view source_service,
                                std::string_view sink_service, Formula constraint, std::size_t max_depth,
                                UniverseMode mode, ProblemFlags flags) {
  const auto& source = domain->service(source_service);
  const auto& sink = domain->service(sink_service);
  SynthesisProblem problem;
  problem.start = TypeState(source.outputs);
  problem.goal = sink.inputs;
  problem.domain = std::move(domain);
  problem.constraint = std::move(constraint);
  problem.max_depth = max_depth;
  problem.mode = mode;
  problem.filter_permutations = flags.filter_permutations;
  problem.allow_empty_solution = flags.allow_empty_solution;
  return problem;
}

Trace replay(const SynthesisProblem& problem, std::span<const std::uint32_t> services) {
  Trace trace;
  trace.states.push_back(problem.start);
  for (const auto s : services) {
    trace.states.push_back(problem.domain->successor(trace.states.back(), s, problem.mode));
    trace.actions.push_back(problem.domain->service(s).instance);
  }
  return trace;
}

}  // namespace wfsynth
