#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace cmcp {

// Thrown when no allocation can satisfy the usage caps of some sub-task.
class InfeasibleInstance : public std::runtime_error {
 public:
  InfeasibleInstance(std::string subtask_id, std::int64_t capacity, std::int64_t quantity)
      : std::runtime_error("sub-task '" + subtask_id + "' can absorb at most " +
                           std::to_string(capacity) + " uses but the order needs " +
                           std::to_string(quantity)),
        subtask_id_(std::move(subtask_id)) {}

  const std::string& subtask_id() const noexcept { return subtask_id_; }

 private:
  std::string subtask_id_;
};

// One purchasable unit of work offered for a sub-task.
struct CandidateService {
  std::string id;
  double unit_time = 1.0;  // time of a single use
  double unit_cost = 0.0;  // cost of a single use
  std::optional<int> max_uses;

  bool operator==(const CandidateService&) const = default;
};

struct SubTask {
  std::string id;
  std::vector<CandidateService> services;

  std::size_t size() const noexcept { return services.size(); }
  bool operator==(const SubTask&) const = default;
};

// Sub-tasks in execution order.
struct TaskSpec {
  std::vector<SubTask> subtasks;

  std::size_t size() const noexcept { return subtasks.size(); }
  bool operator==(const TaskSpec&) const = default;
};

// Definition 1 lists id, type and quantity. product_type is carried but never read.
struct Order {
  std::string id;
  std::string product_type;
  int quantity = 1;

  bool operator==(const Order&) const = default;
};

// Usage counts over the candidate services of one sub-task (one chromosome).
struct Allocation {
  std::vector<int> counts;

  std::size_t size() const noexcept { return counts.size(); }
  bool operator==(const Allocation&) const = default;
  auto operator<=>(const Allocation&) const = default;
};

// One allocation per sub-task, in task order.
struct CompositeSolution {
  std::vector<Allocation> allocations;

  bool operator==(const CompositeSolution&) const = default;
};

struct ObjectiveVector {
  double time_total = 0.0;
  double cost_total = 0.0;
  int num_total = 0;

  bool operator==(const ObjectiveVector&) const = default;
  auto operator<=>(const ObjectiveVector&) const = default;
};

struct Solution {
  CompositeSolution solution;
  ObjectiveVector objectives;
};

// Outcome of checking an allocation against the four encoding conditions.
enum class AllocationVerdict {
  ok,
  negative_component,  // condition 2
  zero_vector,         // condition 1
  quantity_mismatch,   // condition 3
  cap_exceeded,        // condition 4
};

inline const char* to_string(AllocationVerdict v) noexcept {
  switch (v) {
    case AllocationVerdict::ok: return "ok";
    case AllocationVerdict::negative_component: return "negative_component";
    case AllocationVerdict::zero_vector: return "zero_vector";
    case AllocationVerdict::quantity_mismatch: return "quantity_mismatch";
    case AllocationVerdict::cap_exceeded: return "cap_exceeded";
  }
  return "unknown";
}

// Largest count service `s` may take for an order of `quantity` units.
inline int gene_upper_bound(const CandidateService& s, int quantity) noexcept {
  return s.max_uses ? std::min(*s.max_uses, quantity) : quantity;
}

// Checks the shape of `a` against `st`; violated conditions are reported through
// the verdict, a length mismatch is a structural error and throws.
inline AllocationVerdict validate_allocation(const Allocation& a, const SubTask& st, const Order& o) {
  if (a.size() != st.size()) {
    throw std::invalid_argument("allocation has " + std::to_string(a.size()) +
                                " entries but sub-task '" + st.id + "' has " +
                                std::to_string(st.size()) + " candidate services");
  }
  std::int64_t sum = 0;
  bool any_positive = false;
  for (int c : a.counts) {
    if (c < 0) return AllocationVerdict::negative_component;
    any_positive = any_positive || c > 0;
    sum += c;
  }
  if (!any_positive) return AllocationVerdict::zero_vector;
  if (sum != o.quantity) return AllocationVerdict::quantity_mismatch;
  for (std::size_t j = 0; j < st.size(); ++j) {
    const auto& cap = st.services[j].max_uses;
    if (cap && a.counts[j] > *cap) return AllocationVerdict::cap_exceeded;
  }
  return AllocationVerdict::ok;
}

inline bool is_valid(const CompositeSolution& s, const TaskSpec& t, const Order& o) {
  if (s.allocations.size() != t.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (s.allocations[i].size() != t.subtasks[i].size()) return false;
    if (validate_allocation(s.allocations[i], t.subtasks[i], o) != AllocationVerdict::ok) return false;
  }
  return true;
}

// Indices of the selected services (the selected service set).
inline std::vector<std::size_t> support(const Allocation& a) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a.counts[j] > 0) out.push_back(j);
  }
  return out;
}

// Structural checks on a problem instance. Throws std::invalid_argument naming
// the offending element.
inline void validate_instance(const TaskSpec& t, const Order& o) {
  if (o.quantity < 1) throw std::invalid_argument("order.quantity must be >= 1");
  if (t.subtasks.empty()) throw std::invalid_argument("task has no sub-tasks");
  std::unordered_set<std::string> subtask_ids;
  for (const auto& st : t.subtasks) {
    if (!subtask_ids.insert(st.id).second) {
      throw std::invalid_argument("duplicate sub-task id '" + st.id + "'");
    }
    if (st.services.empty()) {
      throw std::invalid_argument("sub-task '" + st.id + "' has no candidate services");
    }
    std::unordered_set<std::string> service_ids;
    for (const auto& s : st.services) {
      const std::string where = "service '" + s.id + "' of sub-task '" + st.id + "'";
      if (!service_ids.insert(s.id).second) throw std::invalid_argument("duplicate " + where);
      if (!(s.unit_time > 0.0) || s.unit_time == std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument(where + ": unit_time must be a positive finite number");
      }
      if (!(s.unit_cost >= 0.0) || s.unit_cost == std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument(where + ": unit_cost must be a non-negative finite number");
      }
      if (s.max_uses && *s.max_uses < 1) throw std::invalid_argument(where + ": max_uses must be >= 1");
    }
  }
}

// Throws InfeasibleInstance when the caps of some sub-task cannot absorb the order.
inline void require_feasible(const TaskSpec& t, const Order& o) {
  for (const auto& st : t.subtasks) {
    std::int64_t capacity = 0;
    for (const auto& s : st.services) {
      capacity += s.max_uses ? *s.max_uses : o.quantity;
      if (capacity >= o.quantity) break;
    }
    if (capacity < o.quantity) throw InfeasibleInstance(st.id, capacity, o.quantity);
  }
}

}  // namespace cmcp
