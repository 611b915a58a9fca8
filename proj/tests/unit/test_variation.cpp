#include <catch2/catch.hpp>

#include <map>
#include <random>
#include <set>

#include "cmcp/variation.hpp"
#include "../support/instances.hpp"

using namespace cmcp;
using Catch::Matchers::WithinAbs;
using cmcp::testing::service;

namespace {

SubTask uncapped(int services) {
  SubTask st{"ST", {}};
  for (int j = 0; j < services; ++j) st.services.push_back(service("s" + std::to_string(j), 1 + j, 1 + j));
  return st;
}

// All compositions of q into n non-negative parts.
void compositions(int q, int n, std::vector<int>& cur, std::set<std::vector<int>>& out) {
  if (n == 1) {
    cur.push_back(q);
    out.insert(cur);
    cur.pop_back();
    return;
  }
  for (int c = 0; c <= q; ++c) {
    cur.push_back(c);
    compositions(q - c, n - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("sbx_pair examples", "[variation]") {
  for (double r : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const auto [c1, c2] = sbx_pair(10, 10, 0.1, r);
    CHECK(c1 == 10);
    CHECK(c2 == 10);
  }
  const auto [s1, s2] = sbx_pair(3, 7, 2.0, 0.5);
  CHECK_THAT(s1, WithinAbs(7, 1e-12));
  CHECK_THAT(s2, WithinAbs(3, 1e-12));

  const auto [d1, d2] = sbx_pair(0, 8, 0.0, 0.125);
  CHECK_THAT(d1, WithinAbs(5, 1e-12));
  CHECK_THAT(d2, WithinAbs(3, 1e-12));
}

TEST_CASE("sbx_pair stays finite at r = 1", "[variation]") {
  const auto [c1, c2] = sbx_pair(0, 8, 0.1, 1.0);
  CHECK(std::isfinite(c1));
  CHECK(std::isfinite(c2));
}

TEST_CASE("sbx preserves the mean and is symmetric", "[variation]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(-100, 1000), eta(0, 20);
  for (int k = 0; k < 20000; ++k) {
    const double x1 = x(rng), x2 = x(rng), e = eta(rng);
    const double r = unit_draw(rng);
    const auto [c1, c2] = sbx_pair(x1, x2, e, r);
    CHECK(std::fabs((c1 + c2) - (x1 + x2)) <= 1e-9 * std::max(1.0, std::fabs(x1) + std::fabs(x2)));
    const auto [d1, d2] = sbx_pair(x2, x1, e, r);
    CHECK(d1 == c2);
    CHECK(d2 == c1);
  }
}

TEST_CASE("polynomial_mutate examples", "[variation]") {
  CHECK(polynomial_mutate(4, 0, 10, 0.01, 0.5) == 4);
  CHECK(polynomial_mutate(0, 0, 10, 0.01, 0.0) == 0);
  CHECK_THAT(polynomial_mutate(5, 0, 10, 0.0, 0.25), WithinAbs(2.5, 1e-12));
  CHECK(polynomial_mutate(7, 3, 3, 0.5, 0.9) == 7);
}

TEST_CASE("polynomial mutation stays within bounds", "[variation]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> eta(0, 30);
  for (int k = 0; k < 20000; ++k) {
    const double l = std::uniform_real_distribution<double>(-50, 50)(rng);
    const double u = l + std::uniform_real_distribution<double>(1e-3, 100)(rng);
    const double xv = std::uniform_real_distribution<double>(l, u)(rng);
    const double m = polynomial_mutate(xv, l, u, eta(rng), unit_draw(rng));
    CHECK(m >= l);
    CHECK(m <= u);
  }
}

TEST_CASE("unit_draw never reaches one", "[variation]") {
  Rng rng(1);
  for (int k = 0; k < 100000; ++k) {
    const double r = unit_draw(rng);
    REQUIRE(r >= 0.0);
    REQUIRE(r <= kMaxUnitDraw);
  }
}

TEST_CASE("repair examples", "[variation]") {
  const auto st = uncapped(3);
  const std::vector<double> raw{3.4, 2.6, 4.2};
  CHECK(repair(raw, st, testing::order_of(10)).counts == std::vector<int>{3, 3, 4});

  const std::vector<double> feasible{2, 0, 8};
  CHECK(repair(feasible, st, testing::order_of(10)).counts == std::vector<int>{2, 0, 8});

  const SubTask capped{"ST", {service("a", 1, 1, 10), service("b", 1, 1)}};
  const std::vector<double> over{12, 0};
  CHECK(repair(over, capped, testing::order_of(10)).counts == std::vector<int>{10, 0});
}

TEST_CASE("repair rounds half to even and fills by remainder then cost", "[variation]") {
  const auto st = uncapped(3);  // unit costs 1, 2, 3
  const std::vector<double> halves{2.5, 3.5, 0.0};
  // 2.5 -> 2, 3.5 -> 4: already sums to 6.
  CHECK(repair(halves, st, testing::order_of(6)).counts == std::vector<int>{2, 4, 0});
  // Deficit of 4 after rounding 1.2, 1.4, 0.4 -> 1, 1, 0: one unit per rounded-down gene
  // by remainder (0.4, 0.4, 0.2), then the rest to the cheapest service.
  const std::vector<double> low{1.2, 1.4, 0.4};
  CHECK(repair(low, st, testing::order_of(6)).counts == std::vector<int>{3, 2, 1});
  // Excess removed from the most expensive services.
  const std::vector<double> high{5, 5, 5};
  CHECK(repair(high, st, testing::order_of(6)).counts == std::vector<int>{5, 1, 0});
}

TEST_CASE("repair reports infeasible caps", "[variation]") {
  const SubTask st{"ST", {service("a", 1, 1, 3), service("b", 1, 1, 4)}};
  const std::vector<double> raw{1, 1};
  CHECK_THROWS_AS(repair(raw, st, testing::order_of(8)), InfeasibleInstance);
}

TEST_CASE("repair output is valid and a fixed point", "[variation]") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 3000; ++trial) {
    const int q = std::uniform_int_distribution<int>(1, 60)(rng);
    const auto t = testing::random_task(rng, 1, 5, true, q);
    const auto& st = t.subtasks[0];
    const auto o = testing::order_of(q);
    std::vector<double> raw(st.size());
    std::uniform_real_distribution<double> value(-20, 2.0 * q);
    for (auto& v : raw) v = value(rng);
    const auto a = repair(raw, st, o);
    REQUIRE(validate_allocation(a, st, o) == AllocationVerdict::ok);
    CHECK(repair(a, st, o) == a);
  }
}

TEST_CASE("random_allocation covers every composition", "[variation]") {
  Rng rng(17);
  {
    const auto st = uncapped(2);
    std::set<std::vector<int>> seen;
    for (int k = 0; k < 200; ++k) seen.insert(random_allocation(st, testing::order_of(2), rng).counts);
    CHECK(seen == std::set<std::vector<int>>{{2, 0}, {1, 1}, {0, 2}});
  }
  CHECK(random_allocation(uncapped(1), testing::order_of(1), rng).counts == std::vector<int>{1});
  {
    const auto st = uncapped(3);
    std::set<std::vector<int>> all;
    std::vector<int> cur;
    compositions(5, 3, cur, all);
    REQUIRE(all.size() == 21);
    std::map<std::vector<int>, int> hits;
    for (int k = 0; k < 10000; ++k) ++hits[random_allocation(st, testing::order_of(5), rng).counts];
    CHECK(hits.size() == 21);
    // Uniform: each composition expected ~476 times.
    for (const auto& [c, n] : hits) {
      CHECK(all.count(c) == 1);
      CHECK(n > 330);
      CHECK(n < 630);
    }
  }
}

TEST_CASE("random_allocation respects caps", "[variation]") {
  Rng rng(23);
  const SubTask st{"ST", {service("a", 1, 1, 2), service("b", 1, 1, 3), service("c", 1, 1)}};
  for (int k = 0; k < 1000; ++k) {
    CHECK(validate_allocation(random_allocation(st, testing::order_of(9), rng), st, testing::order_of(9)) ==
          AllocationVerdict::ok);
  }
}

TEST_CASE("offspring equal parents when both operators are disabled", "[variation]") {
  Rng rng(29);
  const auto st = uncapped(4);
  const auto o = testing::order_of(20);
  const VariationParams off{0.1, 0.01, 0.0, 0.0};
  for (std::size_t n : {2u, 5u, 8u}) {
    std::vector<Allocation> parents;
    for (std::size_t k = 0; k < n; ++k) parents.push_back(random_allocation(st, o, rng));
    auto kids = make_offspring(parents, st, o, off, rng);
    REQUIRE(kids.size() == n);
    auto sorted_parents = parents;
    std::sort(sorted_parents.begin(), sorted_parents.end());
    std::sort(kids.begin(), kids.end());
    if (n % 2 == 0) {
      CHECK(kids == sorted_parents);
    } else {
      for (const auto& k : kids) CHECK(std::find(parents.begin(), parents.end(), k) != parents.end());
    }
  }
}

TEST_CASE("offspring are always valid allocations", "[variation]") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int q = std::uniform_int_distribution<int>(1, 200)(rng);
    const auto t = testing::random_task(rng, 1, 5, true, q);
    const auto& st = t.subtasks[0];
    const auto o = testing::order_of(q);
    std::vector<Allocation> parents;
    for (int k = 0; k < 7; ++k) parents.push_back(random_allocation(st, o, rng));
    for (const auto& kid : make_offspring(parents, st, o, VariationParams{}, rng)) {
      CHECK(validate_allocation(kid, st, o) == AllocationVerdict::ok);
    }
  }
}
