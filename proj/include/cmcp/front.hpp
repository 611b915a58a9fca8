#pragma once

#include <algorithm>
#include <vector>

#include "cmcp/domain.hpp"
#include "cmcp/ranking.hpp"

namespace cmcp {

inline FitnessVector objective_fitness(const ObjectiveVector& v) {
  return {v.time_total, v.cost_total, static_cast<double>(v.num_total)};
}

inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return dominates(objective_fitness(a), objective_fitness(b));
}

// Final selection over a collection of complete solutions: merge solutions with
// identical objective vectors (first one wins), keep the first non-dominated
// front, and order it lexicographically by (time, cost, num).
inline std::vector<Solution> select_optimal(const std::vector<Solution>& collected) {
  std::vector<Solution> unique;
  for (const auto& s : collected) {
    const bool seen = std::any_of(unique.begin(), unique.end(),
                                  [&](const Solution& u) { return u.objectives == s.objectives; });
    if (!seen) unique.push_back(s);
  }
  std::vector<FitnessVector> fitness;
  fitness.reserve(unique.size());
  for (const auto& s : unique) fitness.push_back(objective_fitness(s.objectives));
  std::vector<Solution> front;
  const auto fronts = fast_non_dominated_sort(fitness);
  if (fronts.empty()) return front;
  for (std::size_t i : fronts.front()) front.push_back(unique[i]);
  std::stable_sort(front.begin(), front.end(),
                   [](const Solution& a, const Solution& b) { return a.objectives < b.objectives; });
  return front;
}

}  // namespace cmcp
