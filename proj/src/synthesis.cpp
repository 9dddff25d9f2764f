#include "wfsynth/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>
#include <thread>

namespace wfsynth {

bool CanonicalOrder::operator()(const Solution& a, const Solution& b) const {
  if (a.services.size() != b.services.size()) return a.services.size() < b.services.size();
  const auto& rank = *rank_;
  return std::lexicographical_compare(a.services.begin(), a.services.end(), b.services.begin(), b.services.end(),
                                      [&](std::uint32_t x, std::uint32_t y) { return rank[x] < rank[y]; });
}

void sort_canonical(std::vector<Solution>& solutions, const DomainModel& domain) {
  std::sort(solutions.begin(), solutions.end(), CanonicalOrder(domain));
}

namespace {

using Clock = std::chrono::steady_clock;

// Counters shared by all workers of one search.
struct Budget {
  std::uint64_t max_visited;
  std::uint64_t max_solutions;
  std::atomic<std::uint64_t> visited{0};
  std::atomic<std::uint64_t> solutions{0};
  std::atomic<bool> exhausted{false};

  bool enter_node() {
    if (exhausted.load(std::memory_order_relaxed)) return false;
    if (visited.fetch_add(1, std::memory_order_relaxed) >= max_visited) {
      visited.fetch_sub(1, std::memory_order_relaxed);
      exhausted = true;
      return false;
    }
    return true;
  }

  bool take_solution() {
    if (solutions.fetch_add(1, std::memory_order_relaxed) >= max_solutions) {
      solutions.fetch_sub(1, std::memory_order_relaxed);
      exhausted = true;
      return false;
    }
    return true;
  }
};

struct Partial {
  std::vector<Solution> solutions;
  std::uint64_t visited = 0;
};

unsigned worker_count(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `work(i, partial)` for i in [0, n) on up to `threads` workers and
// returns the partials in index order.
template <typename Work>
std::vector<Partial> run_tasks(std::size_t n, unsigned threads, Work work) {
  std::vector<Partial> partials(n);
  const auto workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i, partials[i]);
    return partials;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) work(i, partials[i]);
    });
  }
  pool.clear();
  return partials;
}

class ProductSearch {
 public:
  ProductSearch(const SynthesisProblem& problem, Budget& budget)
      : problem_(problem), domain_(*problem.domain), vocab_(problem.vocabulary()), budget_(budget) {}

  // Depth-first below a node at `depth`, emitting sequences of exactly `limit` services.
  void dfs(const TypeState& state, const Formula& residual, std::size_t depth, std::size_t limit,
           std::vector<std::uint32_t>& path, Partial& out) const {
    if (!budget_.enter_node()) return;
    ++out.visited;
    if (residual.is_false()) return;
    if (depth == limit) {
      if (problem_.goal_holds(state) && accepts_end(residual, state, vocab_) && budget_.take_solution())
        out.solutions.push_back(Solution{path});
      return;
    }
    for (std::uint32_t s = 0; s < domain_.size(); ++s) {
      if (!domain_.applicable(state, s)) continue;
      expand(state, residual, s, depth, limit, path, out);
      if (budget_.exhausted) return;
    }
  }

  void expand(const TypeState& state, const Formula& residual, std::uint32_t s, std::size_t depth, std::size_t limit,
              std::vector<std::uint32_t>& path, Partial& out) const {
    const auto next_residual = progress(residual, state, domain_.service(s).instance, vocab_);
    const auto next_state = domain_.successor(state, s, problem_.mode);
    path.push_back(s);
    dfs(next_state, next_residual, depth + 1, limit, path, out);
    path.pop_back();
  }

 private:
  const SynthesisProblem& problem_;
  const DomainModel& domain_;
  Vocabulary vocab_;
  Budget& budget_;
};

}  // namespace

SynthesisResult synthesize(const SynthesisProblem& problem, const SearchLimits& limits) {
  const auto started = Clock::now();
  const auto& domain = *problem.domain;
  Budget budget{limits.max_visited, limits.max_solutions};
  ProductSearch search(problem, budget);
  const unsigned threads = worker_count(limits.threads);

  SynthesisResult result;
  const std::size_t first_round = problem.allow_empty_solution ? 0 : 1;
  for (std::size_t limit = first_round; limit <= problem.max_depth && !budget.exhausted; ++limit) {
    DepthStats round{limit, 0, 0};
    std::vector<Partial> partials;

    if (limit == 0 || threads == 1) {
      std::vector<std::uint32_t> path;
      partials.emplace_back();
      search.dfs(problem.start, problem.constraint, 0, limit, path, partials.back());
    } else if (budget.enter_node()) {
      // Root handled here; its subtrees are independent tasks.
      round.visited = 1;
      if (!problem.constraint.is_false()) {
        std::vector<std::uint32_t> children;
        for (std::uint32_t s = 0; s < domain.size(); ++s)
          if (domain.applicable(problem.start, s)) children.push_back(s);
        partials = run_tasks(children.size(), threads, [&](std::size_t i, Partial& out) {
          std::vector<std::uint32_t> path;
          search.expand(problem.start, problem.constraint, children[i], 0, limit, path, out);
        });
      }
    }

    for (auto& part : partials) {
      round.visited += part.visited;
      round.found += part.solutions.size();
      std::move(part.solutions.begin(), part.solutions.end(), std::back_inserter(result.solutions));
    }
    result.stats.visited_nodes += round.visited;
    result.stats.solutions_found += round.found;
    result.stats.per_depth.push_back(round);
  }

  result.truncated = budget.exhausted;
  sort_canonical(result.solutions, domain);
  if (problem.filter_permutations) result.solutions = filter_permutations(std::move(result.solutions), domain);
  result.stats.wall_time = Clock::now() - started;
  return result;
}

SynthesisResult enumerate_universe(const SynthesisProblem& problem, const SearchLimits& limits) {
  const auto started = Clock::now();
  const auto& domain = *problem.domain;
  const std::size_t min_length = problem.allow_empty_solution ? 0 : 1;

  SynthesisResult result;
  result.stats.per_depth.resize(problem.max_depth + 1);
  for (std::size_t d = 0; d <= problem.max_depth; ++d) result.stats.per_depth[d].depth = d;

  std::uint64_t visited = 0;
  bool truncated = false;
  std::vector<std::uint32_t> path;

  auto walk = [&](auto&& self, const TypeState& state) -> void {
    if (truncated) return;
    if (visited >= limits.max_visited) {
      truncated = true;
      return;
    }
    ++visited;
    auto& round = result.stats.per_depth[path.size()];
    ++round.visited;
    if (path.size() >= min_length && problem.goal_holds(state)) {
      if (result.solutions.size() >= limits.max_solutions) {
        truncated = true;
        return;
      }
      result.solutions.push_back(Solution{path});
      ++round.found;
    }
    if (path.size() == problem.max_depth) return;
    for (std::uint32_t s = 0; s < domain.size() && !truncated; ++s) {
      if (!domain.applicable(state, s)) continue;
      path.push_back(s);
      self(self, domain.successor(state, s, problem.mode));
      path.pop_back();
    }
  };
  walk(walk, problem.start);

  result.stats.visited_nodes = visited;
  result.stats.solutions_found = result.solutions.size();
  result.truncated = truncated;
  sort_canonical(result.solutions, domain);
  if (problem.filter_permutations) result.solutions = filter_permutations(std::move(result.solutions), domain);
  result.stats.wall_time = Clock::now() - started;
  return result;
}

std::vector<Solution> filter_permutations(std::vector<Solution> solutions, const DomainModel& domain) {
  sort_canonical(solutions, domain);
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<Solution> kept;
  for (auto& sol : solutions) {
    auto key = sol.services;
    std::sort(key.begin(), key.end());
    if (seen.insert(std::move(key)).second) kept.push_back(std::move(sol));
  }
  return kept;
}

std::vector<std::string> service_names(const Solution& solution, const DomainModel& domain) {
  std::vector<std::string> names;
  for (const auto s : solution.services) names.push_back(domain.service(s).name);
  return names;
}

nlohmann::ordered_json to_json(const SynthesisProblem& problem, const SynthesisResult& result) {
  const auto& domain = *problem.domain;
  const auto& types = domain.type_taxonomy();
  auto state_json = [&](const TypeState& state) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto ref : state) arr.push_back(types.id(ref));
    return arr;
  };

  nlohmann::ordered_json doc;
  auto& echo = doc["problem"];
  echo["start"] = state_json(problem.start);
  echo["goal"] = nlohmann::ordered_json::array();
  for (const auto ref : problem.goal) echo["goal"].push_back(types.id(ref));
  echo["constraint"] = to_string(problem.constraint, problem.vocabulary());
  echo["max_depth"] = problem.max_depth;
  echo["mode"] = std::string(to_string(problem.mode));
  echo["filter_permutations"] = problem.filter_permutations;
  echo["allow_empty_solution"] = problem.allow_empty_solution;

  auto solutions = nlohmann::ordered_json::array();
  for (const auto& sol : result.solutions) {
    nlohmann::ordered_json entry;
    entry["services"] = service_names(sol, domain);
    auto trace = nlohmann::ordered_json::array();
    for (const auto& state : replay(problem, sol.services).states) trace.push_back(state_json(state));
    entry["trace"] = std::move(trace);
    solutions.push_back(std::move(entry));
  }
  doc["solutions"] = std::move(solutions);

  auto& stats = doc["stats"];
  stats["visited_nodes"] = result.stats.visited_nodes;
  stats["solutions_found"] = result.stats.solutions_found;
  stats["solutions_reported"] = result.solutions.size();
  stats["per_depth"] = nlohmann::ordered_json::array();
  for (const auto& d : result.stats.per_depth) {
    stats["per_depth"].push_back({{"depth", d.depth}, {"visited", d.visited}, {"found", d.found}});
  }
  stats["wall_time_ms"] = std::chrono::duration<double, std::milli>(result.stats.wall_time).count();
  doc["truncated"] = result.truncated;
  return doc;
}

std::string revalidate(const SynthesisProblem& problem, const Solution& solution) {
  const auto n = solution.services.size();
  if (n > problem.max_depth) return "longer than the depth bound";
  if (n == 0 && !problem.allow_empty_solution) return "empty solution";
  Trace trace;
  try {
    trace = replay(problem, solution.services);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  if (!problem.goal_holds(trace.states.back())) return "final state does not satisfy the goal";
  if (!eval_trace(problem.constraint, trace, 0, problem.vocabulary())) return "trace violates the constraint";
  return {};
}

std::vector<Solution> solutions_from_json(const nlohmann::json& doc, const DomainModel& domain) {
  std::vector<Solution> out;
  for (const auto& entry : doc.at("solutions")) {
    Solution sol;
    for (const auto& name : entry.at("services"))
      sol.services.push_back(static_cast<std::uint32_t>(domain.service_index(name.get<std::string>())));
    out.push_back(std::move(sol));
  }
  return out;
}

}  // namespace wfsynth
