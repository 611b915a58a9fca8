#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmcp/domain.hpp"
#include "cmcp/evaluation.hpp"
#include "cmcp/front.hpp"

namespace cmcp {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000;

// Raised instead of enumerating more than the configured number of candidates.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t count, std::uint64_t budget)
      : std::runtime_error("enumeration needs " + std::to_string(count) + " candidates, budget is " +
                           std::to_string(budget)),
        count_(count) {}

  std::uint64_t count() const noexcept { return count_; }

 private:
  std::uint64_t count_;
};

// C(quantity + parts - 1, parts - 1), saturating at UINT64_MAX.
inline std::uint64_t composition_count(std::uint64_t quantity, std::uint64_t parts) {
  if (parts == 0) return quantity == 0 ? 1 : 0;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // C(q + k, k) = C(q + k - 1, k - 1) * (q + k) / k stays integral at every step.
  unsigned __int128 c = 1;
  for (std::uint64_t k = 1; k < parts; ++k) {
    c = c * (quantity + k) / k;
    if (c > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(c);
}

// Every valid allocation of the order over one sub-task's services, with the
// first service's count descending.
inline std::vector<Allocation> enumerate_allocations(const SubTask& st, const Order& o,
                                                     std::uint64_t budget = kDefaultEnumerationBudget) {
  const std::uint64_t total = composition_count(static_cast<std::uint64_t>(o.quantity), st.size());
  if (total > budget) throw BudgetExceeded(total, budget);
  std::vector<Allocation> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> counts(st.size(), 0);
  auto cap_of = [&](std::size_t j) { return gene_upper_bound(st.services[j], o.quantity); };

  auto fill = [&](auto&& self, std::size_t j, int remaining) -> void {
    if (j + 1 == counts.size()) {
      if (remaining <= cap_of(j)) {
        counts[j] = remaining;
        out.push_back({counts});
      }
      return;
    }
    for (int c = std::min(remaining, cap_of(j)); c >= 0; --c) {
      counts[j] = c;
      self(self, j + 1, remaining - c);
    }
  };
  if (!counts.empty()) fill(fill, 0, o.quantity);
  return out;
}

// Exact Pareto front by exhaustive evaluation of every combination of
// per-sub-task allocations, sorted lexicographically by objective vector.
inline std::vector<Solution> exact_pareto_front(const TaskSpec& task, const Order& o,
                                                std::uint64_t budget = kDefaultEnumerationBudget) {
  validate_instance(task, o);
  std::vector<std::vector<Allocation>> choices;
  std::vector<std::vector<SubTaskEval>> evals;
  unsigned __int128 product = 1;
  for (const auto& st : task.subtasks) {
    choices.push_back(enumerate_allocations(st, o, budget));
    product *= choices.back().size();
    if (product > budget) throw BudgetExceeded(product > std::numeric_limits<std::uint64_t>::max()
                                                   ? std::numeric_limits<std::uint64_t>::max()
                                                   : static_cast<std::uint64_t>(product),
                                               budget);
    std::vector<SubTaskEval> e;
    e.reserve(choices.back().size());
    for (const auto& a : choices.back()) e.push_back(eval_subtask(a, st));
    evals.push_back(std::move(e));
  }
  if (product == 0) throw InfeasibleInstance(task.subtasks.front().id, 0, o.quantity);

  std::vector<Solution> archive;
  std::vector<std::size_t> digit(task.size(), 0);
  std::vector<SubTaskEval> current(task.size());
  for (;;) {
    for (std::size_t i = 0; i < task.size(); ++i) current[i] = evals[i][digit[i]];
    const auto v = total_objectives(current);
    const bool covered = std::any_of(archive.begin(), archive.end(), [&](const Solution& s) {
      return s.objectives == v || dominates(s.objectives, v);
    });
    if (!covered) {
      std::erase_if(archive, [&](const Solution& s) { return dominates(v, s.objectives); });
      Solution s;
      s.objectives = v;
      for (std::size_t i = 0; i < task.size(); ++i) s.solution.allocations.push_back(choices[i][digit[i]]);
      archive.push_back(std::move(s));
    }
    std::size_t i = 0;
    while (i < task.size() && ++digit[i] == choices[i].size()) digit[i++] = 0;
    if (i == task.size()) break;
  }
  std::sort(archive.begin(), archive.end(),
            [](const Solution& a, const Solution& b) { return a.objectives < b.objectives; });
  return archive;
}

}  // namespace cmcp
