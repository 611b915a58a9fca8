#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "cmcp/domain.hpp"

namespace cmcp {

using Rng = std::mt19937_64;

// Largest double strictly below one; r is never allowed to reach 1.
inline constexpr double kMaxUnitDraw = 1.0 - 0x1.0p-53;

// Uniform draw on [0, 1 - 2^-53] using the top 53 bits of the generator.
inline double unit_draw(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Independent stream for `stream` (a sub-task index, say) under a run seed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

struct VariationParams {
  double eta_c = 0.1;  // spread factor distribution index
  double eta_m = 0.01; // perturbation factor distribution index
  double pr_c = 1.0;
  double pr_m = 1.0;

  bool operator==(const VariationParams&) const = default;

  void validate() const {
    if (!(eta_c >= 0.0) || !std::isfinite(eta_c)) throw std::invalid_argument("eta_c must be >= 0");
    if (!(eta_m >= 0.0) || !std::isfinite(eta_m)) throw std::invalid_argument("eta_m must be >= 0");
    if (!(pr_c >= 0.0 && pr_c <= 1.0)) throw std::invalid_argument("pr_c must lie in [0, 1]");
    if (!(pr_m >= 0.0 && pr_m <= 1.0)) throw std::invalid_argument("pr_m must lie in [0, 1]");
  }
};

// Simulated binary crossover of one gene pair.
inline std::pair<double, double> sbx_pair(double x1, double x2, double eta_c, double r) {
  r = std::clamp(r, 0.0, kMaxUnitDraw);
  const double exponent = 1.0 / (1.0 + eta_c);
  const double beta = r <= 0.5 ? std::pow(2.0 * r, exponent) : std::pow(1.0 / (2.0 - 2.0 * r), exponent);
  const double mid = 0.5 * (x1 + x2);
  const double half_spread = 0.5 * beta * (x1 - x2);
  return {mid - half_spread, mid + half_spread};
}

// Polynomial mutation of a gene x in [l, u]. The first branch is read as
// bracket^(1/(1+eta_m)) - 1, which makes delta continuous (and zero) at r = 0.5.
inline double polynomial_mutate(double x, double l, double u, double eta_m, double r) {
  if (!(u > l)) return x;
  r = std::clamp(r, 0.0, kMaxUnitDraw);
  const double range = u - l;
  const double power = eta_m + 1.0;
  double delta;
  if (r <= 0.5) {
    const double d1 = (x - l) / range;
    const double bracket = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, power);
    delta = std::pow(bracket, 1.0 / power) - 1.0;
  } else {
    const double d2 = (u - x) / range;
    const double bracket = 2.0 - 2.0 * r + (2.0 * r - 1.0) * std::pow(1.0 - d2, power);
    delta = 1.0 - std::pow(bracket, 1.0 / power);
  }
  return std::clamp(x + delta * range, l, u);
}

namespace detail {

inline void require_capacity(const SubTask& st, const Order& o) {
  std::int64_t capacity = 0;
  for (const auto& s : st.services) capacity += gene_upper_bound(s, o.quantity);
  if (capacity < o.quantity) throw InfeasibleInstance(st.id, capacity, o.quantity);
}

}  // namespace detail

// Maps a real-valued chromosome onto a valid allocation: round half-to-even,
// clamp to [0, cap], then restore the quantity. Deficits are filled first on
// genes that were rounded down (largest remainder first), then on the cheapest
// services with slack; excesses are removed first from genes that were rounded
// up, then from the most expensive services.
inline Allocation repair(std::span<const double> raw, const SubTask& st, const Order& o) {
  if (raw.size() != st.size()) {
    throw std::invalid_argument("raw chromosome size does not match sub-task '" + st.id + "'");
  }
  detail::require_capacity(st, o);
  const std::size_t n = st.size();
  std::vector<int> ub(n);
  std::vector<double> value(n);
  Allocation a{std::vector<int>(n)};
  std::int64_t sum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    ub[j] = gene_upper_bound(st.services[j], o.quantity);
    value[j] = std::isnan(raw[j]) ? 0.0 : raw[j];
    const double rounded = std::nearbyint(std::clamp(value[j], 0.0, static_cast<double>(ub[j])));
    a.counts[j] = static_cast<int>(rounded);
    sum += a.counts[j];
  }

  std::vector<std::size_t> order(n);
  auto by = [&](auto key) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return key(x) > key(y); });
  };

  std::int64_t gap = o.quantity - sum;
  if (gap > 0) {
    by([&](std::size_t j) { return value[j] - a.counts[j]; });
    for (std::size_t j : order) {
      if (gap == 0) break;
      if (value[j] - a.counts[j] > 0.0 && a.counts[j] < ub[j]) {
        ++a.counts[j];
        --gap;
      }
    }
    by([&](std::size_t j) { return -st.services[j].unit_cost; });
    for (std::size_t j : order) {
      const auto add = std::min<std::int64_t>(gap, ub[j] - a.counts[j]);
      a.counts[j] += static_cast<int>(add);
      gap -= add;
    }
  } else if (gap < 0) {
    by([&](std::size_t j) { return a.counts[j] - value[j]; });
    for (std::size_t j : order) {
      if (gap == 0) break;
      if (a.counts[j] - value[j] > 0.0 && a.counts[j] > 0) {
        --a.counts[j];
        ++gap;
      }
    }
    by([&](std::size_t j) { return st.services[j].unit_cost; });
    for (std::size_t j : order) {
      const auto take = std::min<std::int64_t>(-gap, a.counts[j]);
      a.counts[j] -= static_cast<int>(take);
      gap += take;
    }
  }
  return a;
}

inline Allocation repair(const Allocation& a, const SubTask& st, const Order& o) {
  std::vector<double> raw(a.counts.begin(), a.counts.end());
  return repair(raw, st, o);
}

// Uniform composition of the quantity into J non-negative parts (stars and
// bars), repaired afterwards if it breaks a usage cap.
inline Allocation random_allocation(const SubTask& st, const Order& o, Rng& rng) {
  detail::require_capacity(st, o);
  const std::int64_t parts = static_cast<std::int64_t>(st.size());
  const std::int64_t slots = o.quantity + parts - 1;
  const std::int64_t bars = parts - 1;

  // Floyd's sampling of `bars` distinct positions out of `slots`.
  std::vector<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(bars));
  for (std::int64_t j = slots - bars; j < slots; ++j) {
    std::uniform_int_distribution<std::int64_t> pick(0, j);
    const std::int64_t t = pick(rng);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<double> raw(st.size());
  std::int64_t prev = -1;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    raw[k] = static_cast<double>(chosen[k] - prev - 1);
    prev = chosen[k];
  }
  raw.back() = static_cast<double>(slots - prev - 1);
  return repair(raw, st, o);
}

// SBX on every gene of a parent pair with probability pr_c, otherwise copies.
inline std::pair<std::vector<double>, std::vector<double>> crossover(const Allocation& p1, const Allocation& p2,
                                                                     const VariationParams& vp, Rng& rng) {
  std::vector<double> c1(p1.counts.begin(), p1.counts.end());
  std::vector<double> c2(p2.counts.begin(), p2.counts.end());
  if (unit_draw(rng) < vp.pr_c) {
    for (std::size_t j = 0; j < c1.size(); ++j) {
      std::tie(c1[j], c2[j]) = sbx_pair(c1[j], c2[j], vp.eta_c, unit_draw(rng));
    }
  }
  return {std::move(c1), std::move(c2)};
}

// With probability pr_m, mutates each gene with probability 1/J (at least one).
inline void mutate(std::vector<double>& genes, const SubTask& st, const Order& o, const VariationParams& vp,
                   Rng& rng) {
  if (genes.empty() || !(unit_draw(rng) < vp.pr_m)) return;
  const std::size_t n = genes.size();
  const double per_gene = 1.0 / static_cast<double>(n);
  std::vector<bool> hit(n);
  bool any = false;
  for (std::size_t j = 0; j < n; ++j) {
    hit[j] = unit_draw(rng) < per_gene;
    any = any || hit[j];
  }
  if (!any) hit[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = true;
  for (std::size_t j = 0; j < n; ++j) {
    if (!hit[j]) continue;
    const double upper = gene_upper_bound(st.services[j], o.quantity);
    const double x = std::clamp(genes[j], 0.0, upper);
    genes[j] = polynomial_mutate(x, 0.0, upper, vp.eta_m, unit_draw(rng));
  }
}

// Crossover, mutation and repair of one parent pair.
inline std::pair<Allocation, Allocation> vary_pair(const Allocation& p1, const Allocation& p2, const SubTask& st,
                                                   const Order& o, const VariationParams& vp, Rng& rng) {
  auto [c1, c2] = crossover(p1, p2, vp, rng);
  mutate(c1, st, o, vp, rng);
  mutate(c2, st, o, vp, rng);
  return {repair(c1, st, o), repair(c2, st, o)};
}

// Offspring of the same size as `parents`, from uniform random pairing without
// replacement. With an odd count the leftover parent mates with a random other
// one and only the first child is kept.
inline std::vector<Allocation> make_offspring(std::span<const Allocation> parents, const SubTask& st,
                                              const Order& o, const VariationParams& vp, Rng& rng) {
  std::vector<Allocation> out;
  const std::size_t n = parents.size();
  if (n == 0) return out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(vary_pair(parents[0], parents[0], st, o, vp, rng).first);
    return out;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    auto [a, b] = vary_pair(parents[perm[k]], parents[perm[k + 1]], st, o, vp, rng);
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  if (n % 2 == 1) {
    const std::size_t mate = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
    out.push_back(vary_pair(parents[perm[n - 1]], parents[perm[mate]], st, o, vp, rng).first);
  }
  return out;
}

}  // namespace cmcp
