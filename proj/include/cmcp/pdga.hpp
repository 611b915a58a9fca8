#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "cmcp/domain.hpp"
#include "cmcp/evaluation.hpp"
#include "cmcp/front.hpp"
#include "cmcp/ranking.hpp"
#include "cmcp/variation.hpp"

namespace cmcp {

struct PdgaParams {
  int iterations = 100;  // G
  int pop_size = 50;     // Size
  double limit = 0.0;    // search limit on completion time
  VariationParams variation;
  std::uint64_t seed = 1;

  bool operator==(const PdgaParams&) const = default;

  void validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (pop_size < 2) throw std::invalid_argument("pop_size must be >= 2");
    if (!(limit >= 0.0) || !std::isfinite(limit)) throw std::invalid_argument("limit must be a finite value >= 0");
    variation.validate();
  }
};

struct RunOptions {
  unsigned threads = 1;  // > 1 iterates sub-populations (or evaluates offspring) concurrently
};

struct Member {
  Allocation allocation;
  SubTaskEval eval;
};

struct SubPopulation {
  std::size_t subtask_index = 0;
  std::vector<Member> members;
};

inline Member make_member(Allocation a, const SubTask& st) {
  auto e = eval_subtask(a, st);
  return {std::move(a), e};
}

// Fitness used for survivor selection: (lt, cost, num) for the population that
// produced the slowest pick, (cost, num) for every other one.
inline FitnessVector member_fitness(const Member& m, bool with_time) {
  if (with_time) return {m.eval.lt, m.eval.cost, static_cast<double>(m.eval.num)};
  return {m.eval.cost, static_cast<double>(m.eval.num)};
}

struct BootstrapPick {
  std::size_t member = 0;
  double time = 0.0;
};

// Search bootstrap. Once every member meets the limit the fastest is taken;
// otherwise the fastest member at or above the limit, or failing that the
// slowest member overall. Ties resolve to the earliest member.
inline BootstrapPick search_bootstrap(const SubPopulation& pop, double limit) {
  if (pop.members.empty()) throw std::invalid_argument("search_bootstrap on an empty population");
  const auto& ms = pop.members;
  auto first_with = [&](double t) {
    for (std::size_t k = 0; k < ms.size(); ++k) {
      if (ms[k].eval.lt == t) return BootstrapPick{k, t};
    }
    return BootstrapPick{0, ms[0].eval.lt};
  };
  double min_time = ms[0].eval.lt;
  double max_time = ms[0].eval.lt;
  for (const auto& m : ms) {
    min_time = std::min(min_time, m.eval.lt);
    max_time = std::max(max_time, m.eval.lt);
  }
  if (min_time >= limit) return first_with(min_time);
  constexpr double inf = std::numeric_limits<double>::infinity();
  double best = inf;
  for (const auto& m : ms) {
    if (m.eval.lt >= limit && m.eval.lt <= best) best = m.eval.lt;
  }
  if (best != inf) return first_with(best);
  return first_with(max_time);
}

struct GeneratedSolution {
  CompositeSolution solution;
  std::size_t index = 0;            // population that supplied the slowest pick
  std::vector<std::size_t> picks;   // chosen member per population
  double max_time = 0.0;
};

// Complete solution generation. The slowest bootstrap pick is kept; every other
// population contributes its cheapest member (then fewest services, then
// earliest) among those strictly faster than it. When no member is faster, the
// fastest member (then cheapest) is used instead.
inline GeneratedSolution generate_complete_solution(std::span<const SubPopulation> pops, double limit) {
  if (pops.empty()) throw std::invalid_argument("no populations");
  GeneratedSolution out;
  out.picks.resize(pops.size());
  double max_time = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pops.size(); ++j) {
    const auto pick = search_bootstrap(pops[j], limit);
    out.picks[j] = pick.member;
    if (pick.time > max_time) {
      max_time = pick.time;
      out.index = j;
    }
  }
  out.max_time = max_time;
  for (std::size_t m = 0; m < pops.size(); ++m) {
    if (m == out.index) continue;
    const auto& ms = pops[m].members;
    std::size_t best = ms.size();
    for (std::size_t k = 0; k < ms.size(); ++k) {
      if (!(ms[k].eval.lt < max_time)) continue;
      if (best == ms.size() || ms[k].eval.cost < ms[best].eval.cost ||
          (ms[k].eval.cost == ms[best].eval.cost && ms[k].eval.num < ms[best].eval.num)) {
        best = k;
      }
    }
    if (best == ms.size()) {
      best = 0;
      for (std::size_t k = 1; k < ms.size(); ++k) {
        if (ms[k].eval.lt < ms[best].eval.lt ||
            (ms[k].eval.lt == ms[best].eval.lt && ms[k].eval.cost < ms[best].eval.cost)) {
          best = k;
        }
      }
    }
    out.picks[m] = best;
  }
  out.solution.allocations.reserve(pops.size());
  for (std::size_t m = 0; m < pops.size(); ++m) {
    out.solution.allocations.push_back(pops[m].members[out.picks[m]].allocation);
  }
  return out;
}

// Objectives of a generated solution from the cached per-member evaluations.
inline ObjectiveVector generated_objectives(std::span<const SubPopulation> pops, const GeneratedSolution& g) {
  std::vector<SubTaskEval> evals;
  evals.reserve(pops.size());
  for (std::size_t m = 0; m < pops.size(); ++m) evals.push_back(pops[m].members[g.picks[m]].eval);
  return total_objectives(evals);
}

// One generation of one population: offspring, union with parents, ranking and
// truncation back to the population size.
inline SubPopulation iterate_population(const SubPopulation& pop, bool with_time, const SubTask& st,
                                        const Order& o, const PdgaParams& params, Rng& rng) {
  std::vector<Allocation> parents;
  parents.reserve(pop.members.size());
  for (const auto& m : pop.members) parents.push_back(m.allocation);
  auto children = make_offspring(parents, st, o, params.variation, rng);

  std::vector<Member> merged = pop.members;
  merged.reserve(pop.members.size() + children.size());
  for (auto& c : children) merged.push_back(make_member(std::move(c), st));

  SubPopulation next{pop.subtask_index, {}};
  next.members = truncate(std::move(merged), static_cast<std::size_t>(params.pop_size),
                          [&](const Member& m) { return member_fitness(m, with_time); });
  return next;
}

inline std::vector<SubPopulation> iterate(const std::vector<SubPopulation>& pops, std::size_t index,
                                          const TaskSpec& task, const Order& o, const PdgaParams& params,
                                          std::span<Rng> rngs, const RunOptions& options = {}) {
  if (rngs.size() != pops.size()) throw std::invalid_argument("one random stream per population is required");
  std::vector<SubPopulation> next(pops.size());
  auto step = [&](std::size_t i) {
    const auto& st = task.subtasks[pops[i].subtask_index];
    next[i] = iterate_population(pops[i], i == index, st, o, params, rngs[i]);
  };
  if (options.threads > 1 && pops.size() > 1) {
    std::vector<std::future<void>> jobs;
    jobs.reserve(pops.size());
    for (std::size_t i = 0; i < pops.size(); ++i) jobs.push_back(std::async(std::launch::async, step, i));
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < pops.size(); ++i) step(i);
  }
  return next;
}

inline std::vector<SubPopulation> initial_populations(const TaskSpec& task, const Order& o, const PdgaParams& params,
                                                      std::span<Rng> rngs) {
  std::vector<SubPopulation> pops(task.size());
  for (std::size_t i = 0; i < task.size(); ++i) {
    pops[i].subtask_index = i;
    pops[i].members.reserve(static_cast<std::size_t>(params.pop_size));
    for (int k = 0; k < params.pop_size; ++k) {
      pops[i].members.push_back(make_member(random_allocation(task.subtasks[i], o, rngs[i]), task.subtasks[i]));
    }
  }
  return pops;
}

// Called once per generation with the populations the solution was drawn from
// and the populations after iteration.
using PdgaObserver = std::function<void(std::size_t generation, const std::vector<SubPopulation>& before,
                                        const GeneratedSolution& generated,
                                        const std::vector<SubPopulation>& after)>;

// Problem-decomposition GA: one population per sub-task, one complete solution
// per generation, non-dominated filtering of the collected solutions at the end.
inline std::vector<Solution> run_pdga(const TaskSpec& task, const Order& order, const PdgaParams& params,
                                      const RunOptions& options = {}, const PdgaObserver& observer = {}) {
  validate_instance(task, order);
  params.validate();
  require_feasible(task, order);

  std::vector<Rng> rngs;
  rngs.reserve(task.size());
  for (std::size_t i = 0; i < task.size(); ++i) rngs.push_back(make_stream(params.seed, i));

  auto pops = initial_populations(task, order, params, rngs);
  std::vector<Solution> collected;
  collected.reserve(static_cast<std::size_t>(params.iterations));
  for (int g = 0; g < params.iterations; ++g) {
    auto generated = generate_complete_solution(pops, params.limit);
    collected.push_back({generated.solution, generated_objectives(pops, generated)});
    auto next = iterate(pops, generated.index, task, order, params, rngs, options);
    if (observer) observer(static_cast<std::size_t>(g), pops, generated, next);
    pops = std::move(next);
  }
  return select_optimal(collected);
}

}  // namespace cmcp
