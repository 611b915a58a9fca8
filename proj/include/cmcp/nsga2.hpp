#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <random>
#include <stdexcept>
#include <vector>

#include "cmcp/domain.hpp"
#include "cmcp/evaluation.hpp"
#include "cmcp/front.hpp"
#include "cmcp/pdga.hpp"
#include "cmcp/ranking.hpp"
#include "cmcp/variation.hpp"

namespace cmcp {

struct Nsga2Params {
  int iterations = 200;
  int pop_size = 50;
  VariationParams variation;
  std::uint64_t seed = 1;

  bool operator==(const Nsga2Params&) const = default;

  void validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (pop_size < 2) throw std::invalid_argument("pop_size must be >= 2");
    variation.validate();
  }
};

inline Nsga2Params to_nsga2_params(const PdgaParams& p) {
  return {p.iterations, p.pop_size, p.variation, p.seed};
}

// All sub-task allocations concatenated into one chromosome.
struct MonolithicIndividual {
  CompositeSolution genome;
  ObjectiveVector objectives;
};

namespace detail {

inline constexpr std::uint64_t kNsga2Stream = 0x4e534741'32000000ULL;

inline void evaluate_all(std::vector<MonolithicIndividual>& pop, std::size_t from, const TaskSpec& task,
                         const RunOptions& options) {
  auto eval_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) pop[k].objectives = total_objectives(pop[k].genome, task);
  };
  const std::size_t n = pop.size() - from;
  if (options.threads > 1 && n > 1) {
    const std::size_t workers = std::min<std::size_t>(options.threads, n);
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::future<void>> jobs;
    for (std::size_t lo = from; lo < pop.size(); lo += chunk) {
      jobs.push_back(std::async(std::launch::async, eval_range, lo, std::min(pop.size(), lo + chunk)));
    }
    for (auto& j : jobs) j.get();
  } else {
    eval_range(from, pop.size());
  }
}

}  // namespace detail

// Random initial population; consumes `rng` exactly as run_nsga2 does.
inline std::vector<MonolithicIndividual> nsga2_initial_population(const TaskSpec& task, const Order& order,
                                                                  std::size_t size, Rng& rng) {
  std::vector<MonolithicIndividual> pop(size);
  for (auto& ind : pop) {
    ind.genome.allocations.reserve(task.size());
    for (const auto& st : task.subtasks) ind.genome.allocations.push_back(random_allocation(st, order, rng));
  }
  return pop;
}

inline Rng nsga2_stream(std::uint64_t seed) { return make_stream(seed, detail::kNsga2Stream); }

// Canonical NSGA-II over the monolithic encoding: binary tournament on (rank,
// crowding), per-segment SBX, mutation and repair, elitist truncation.
inline std::vector<Solution> run_nsga2(const TaskSpec& task, const Order& order, const Nsga2Params& params,
                                       const RunOptions& options = {}) {
  validate_instance(task, order);
  params.validate();
  require_feasible(task, order);

  Rng rng = nsga2_stream(params.seed);
  const auto size = static_cast<std::size_t>(params.pop_size);

  auto pop = nsga2_initial_population(task, order, size, rng);
  detail::evaluate_all(pop, 0, task, options);

  auto fitness_of = [](const std::vector<MonolithicIndividual>& p) {
    std::vector<FitnessVector> f;
    f.reserve(p.size());
    for (const auto& ind : p) f.push_back(objective_fitness(ind.objectives));
    return f;
  };

  auto ranked = rank_population(fitness_of(pop));
  std::uniform_int_distribution<std::size_t> pick(0, size - 1);
  auto tournament = [&]() -> const MonolithicIndividual& {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (ranked.rank[b] < ranked.rank[a] ||
        (ranked.rank[b] == ranked.rank[a] && ranked.crowding[b] > ranked.crowding[a])) {
      return pop[b];
    }
    return pop[a];
  };

  for (int g = 0; g < params.iterations; ++g) {
    std::vector<MonolithicIndividual> merged = pop;
    merged.reserve(2 * size);
    while (merged.size() < 2 * size) {
      const auto& p1 = tournament();
      const auto& p2 = tournament();
      MonolithicIndividual c1, c2;
      c1.genome.allocations.reserve(task.size());
      c2.genome.allocations.reserve(task.size());
      for (std::size_t i = 0; i < task.size(); ++i) {
        auto [a, b] = vary_pair(p1.genome.allocations[i], p2.genome.allocations[i], task.subtasks[i], order,
                                params.variation, rng);
        c1.genome.allocations.push_back(std::move(a));
        c2.genome.allocations.push_back(std::move(b));
      }
      merged.push_back(std::move(c1));
      if (merged.size() < 2 * size) merged.push_back(std::move(c2));
    }
    detail::evaluate_all(merged, size, task, options);

    std::vector<MonolithicIndividual> next;
    next.reserve(size);
    for (std::size_t k : select_survivors(fitness_of(merged), size)) next.push_back(std::move(merged[k]));
    pop = std::move(next);
    ranked = rank_population(fitness_of(pop));
  }

  std::vector<Solution> last;
  last.reserve(pop.size());
  for (auto& ind : pop) last.push_back({std::move(ind.genome), ind.objectives});
  return select_optimal(last);
}

}  // namespace cmcp
