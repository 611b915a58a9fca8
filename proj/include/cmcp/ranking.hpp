#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cmcp {

// Two or three minimized objective values.
class FitnessVector {
 public:
  static constexpr std::size_t kMaxObjectives = 3;

  FitnessVector() = default;

  FitnessVector(std::initializer_list<double> values) : n_(values.size()) {
    if (n_ < 2 || n_ > kMaxObjectives) throw std::invalid_argument("fitness needs 2 or 3 objectives");
    std::copy(values.begin(), values.end(), v_.begin());
    check_finite();
  }

  explicit FitnessVector(std::span<const double> values) : n_(values.size()) {
    if (n_ < 2 || n_ > kMaxObjectives) throw std::invalid_argument("fitness needs 2 or 3 objectives");
    std::copy(values.begin(), values.end(), v_.begin());
    check_finite();
  }

  std::size_t size() const noexcept { return n_; }
  double operator[](std::size_t k) const noexcept { return v_[k]; }
  std::span<const double> values() const noexcept { return {v_.data(), n_}; }

  friend bool operator==(const FitnessVector& a, const FitnessVector& b) noexcept {
    return a.n_ == b.n_ && std::equal(a.v_.begin(), a.v_.begin() + a.n_, b.v_.begin());
  }

 private:
  void check_finite() const {
    for (std::size_t k = 0; k < n_; ++k) {
      if (!std::isfinite(v_[k])) throw std::invalid_argument("fitness values must be finite");
    }
  }

  std::array<double, kMaxObjectives> v_{};
  std::size_t n_ = 0;
};

using Front = std::vector<std::size_t>;
using Fronts = std::vector<Front>;

// Pareto dominance under minimization.
inline bool dominates(const FitnessVector& a, const FitnessVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cannot compare fitness vectors of different lengths");
  bool strictly_better = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    strictly_better = strictly_better || a[k] < b[k];
  }
  return strictly_better;
}

namespace detail {

// +1 if a dominates b, -1 if b dominates a, 0 otherwise. Sizes must match.
inline int compare_dominance(const FitnessVector& a, const FitnessVector& b) noexcept {
  bool a_better = false, b_better = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    a_better = a_better || a[k] < b[k];
    b_better = b_better || b[k] < a[k];
  }
  return a_better == b_better ? 0 : (a_better ? 1 : -1);
}

}  // namespace detail

// Fronts of indices into `pop`, best first. Indices within a front are ascending.
inline Fronts fast_non_dominated_sort(std::span<const FitnessVector> pop) {
  const std::size_t n = pop.size();
  Fronts fronts;
  if (n == 0) return fronts;
  for (const auto& f : pop) {
    if (f.size() != pop[0].size()) throw std::invalid_argument("cannot compare fitness vectors of different lengths");
  }
  // dominated[p * n + q] set when p dominates q
  std::vector<unsigned char> dominated(n * n, 0);
  std::vector<std::size_t> domination_count(n, 0);
  Front current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const int c = detail::compare_dominance(pop[p], pop[q]);
      if (c > 0) {
        dominated[p * n + q] = 1;
        ++domination_count[q];
      } else if (c < 0) {
        dominated[q * n + p] = 1;
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    Front next;
    for (std::size_t p : current) {
      const unsigned char* row = dominated.data() + p * n;
      for (std::size_t q = 0; q < n; ++q) {
        if (row[q] && --domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

// Crowding distance of each member of one front. Extremes of every objective
// get +inf; a zero-range objective adds nothing to interior members.
inline std::vector<double> crowding_distance(std::span<const FitnessVector> front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < front[0].size(); ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double range = front[order.back()][k] - front[order.front()][k];
    if (!(range > 0.0)) continue;
    for (std::size_t r = 1; r + 1 < n; ++r) {
      dist[order[r]] += (front[order[r + 1]][k] - front[order[r - 1]][k]) / range;
    }
  }
  return dist;
}

// Non-domination rank and in-front crowding distance of every member.
struct RankedPopulation {
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
  Fronts fronts;
};

inline RankedPopulation rank_population(std::span<const FitnessVector> pop) {
  RankedPopulation out;
  out.fronts = fast_non_dominated_sort(pop);
  out.rank.assign(pop.size(), 0);
  out.crowding.assign(pop.size(), 0.0);
  std::vector<FitnessVector> members;
  for (std::size_t f = 0; f < out.fronts.size(); ++f) {
    members.clear();
    for (std::size_t i : out.fronts[f]) members.push_back(pop[i]);
    const auto d = crowding_distance(members);
    for (std::size_t m = 0; m < out.fronts[f].size(); ++m) {
      out.rank[out.fronts[f][m]] = f;
      out.crowding[out.fronts[f][m]] = d[m];
    }
  }
  return out;
}

// Indices of the `size` survivors: whole fronts while they fit, then the
// straddling front by descending crowding distance (ties by index).
inline std::vector<std::size_t> select_survivors(std::span<const FitnessVector> pop, std::size_t size) {
  if (size > pop.size()) throw std::invalid_argument("cannot select more survivors than members");
  std::vector<std::size_t> kept;
  kept.reserve(size);
  if (size == 0) return kept;
  for (const auto& front : fast_non_dominated_sort(pop)) {
    if (kept.size() + front.size() <= size) {
      kept.insert(kept.end(), front.begin(), front.end());
      if (kept.size() == size) break;
      continue;
    }
    std::vector<FitnessVector> members;
    members.reserve(front.size());
    for (std::size_t i : front) members.push_back(pop[i]);
    const auto dist = crowding_distance(members);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
    const std::size_t room = size - kept.size();
    for (std::size_t r = 0; r < room; ++r) kept.push_back(front[order[r]]);
    break;
  }
  return kept;
}

// Environmental truncation of a population whose fitness is read through `fitness_of`.
template <class T, class FitnessOf>
std::vector<T> truncate(std::vector<T> pop, std::size_t size, FitnessOf fitness_of) {
  std::vector<FitnessVector> fitness;
  fitness.reserve(pop.size());
  for (const auto& member : pop) fitness.push_back(fitness_of(member));
  std::vector<T> out;
  out.reserve(size);
  for (std::size_t i : select_survivors(fitness, size)) out.push_back(std::move(pop[i]));
  return out;
}

}  // namespace cmcp
