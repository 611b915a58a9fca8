#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmcp/domain.hpp"

namespace cmcp {

// Bottleneck figures of one sub-task under a given allocation.
struct SubTaskEval {
  double lt = 0.0;    // cumulative usage time of the bottleneck service
  double ut = 0.0;    // single-use time of that service
  double cost = 0.0;
  int num = 0;        // number of selected services

  bool operator==(const SubTaskEval&) const = default;
};

// Per-use time is constant for each service, so the cumulative time is a product.
inline double cumulative_usage_time(int count, double unit_time) noexcept {
  return static_cast<double>(count) * unit_time;
}

namespace detail {

inline bool nearly_equal(double a, double b) noexcept {
  return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace detail

// The bottleneck is the selected service with the longest cumulative time. Among
// (near) ties the one with the smaller unit time wins, then the earlier index.
inline SubTaskEval eval_subtask(const Allocation& a, const SubTask& st) {
  if (a.size() != st.size()) {
    throw std::invalid_argument("allocation size does not match sub-task '" + st.id + "'");
  }
  SubTaskEval out;
  bool found = false;
  for (std::size_t j = 0; j < st.size(); ++j) {
    const int c = a.counts[j];
    const auto& s = st.services[j];
    if (c < 0 || (s.max_uses && c > *s.max_uses)) {
      throw std::invalid_argument("invalid allocation for sub-task '" + st.id + "'");
    }
    if (c == 0) continue;
    out.cost += static_cast<double>(c) * s.unit_cost;
    ++out.num;
    const double t = cumulative_usage_time(c, s.unit_time);
    if (!found || (t > out.lt && !detail::nearly_equal(t, out.lt)) ||
        (detail::nearly_equal(t, out.lt) && s.unit_time < out.ut)) {
      out.lt = t;
      out.ut = s.unit_time;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("zero allocation for sub-task '" + st.id + "'");
  return out;
}

inline std::vector<SubTaskEval> eval_subtasks(const CompositeSolution& s, const TaskSpec& t) {
  if (s.allocations.size() != t.size()) {
    throw std::invalid_argument("solution has " + std::to_string(s.allocations.size()) +
                                " allocations for " + std::to_string(t.size()) + " sub-tasks");
  }
  std::vector<SubTaskEval> out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out.push_back(eval_subtask(s.allocations[i], t.subtasks[i]));
  return out;
}

// Pipeline recursion: Time_1 = LT_1, Time_i = max(LT_i, Time_{i-1} - UT_{i-1} + UT_i).
inline std::vector<double> completion_times(const std::vector<SubTaskEval>& evals) {
  std::vector<double> times;
  times.reserve(evals.size());
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (i == 0) {
      times.push_back(evals[0].lt);
    } else {
      times.push_back(std::max(evals[i].lt, times[i - 1] - evals[i - 1].ut + evals[i].ut));
    }
  }
  return times;
}

inline std::vector<double> completion_times(const CompositeSolution& s, const TaskSpec& t) {
  return completion_times(eval_subtasks(s, t));
}

inline ObjectiveVector total_objectives(const std::vector<SubTaskEval>& evals) {
  ObjectiveVector v;
  if (evals.empty()) return v;
  const auto times = completion_times(evals);
  v.time_total = times.back();
  for (std::size_t i = 0; i + 1 < evals.size(); ++i) v.time_total += evals[i].ut;
  for (const auto& e : evals) {
    v.cost_total += e.cost;
    v.num_total += e.num;
  }
  return v;
}

inline ObjectiveVector total_objectives(const CompositeSolution& s, const TaskSpec& t) {
  return total_objectives(eval_subtasks(s, t));
}

}  // namespace cmcp
