#include <catch2/catch.hpp>

#include <filesystem>
#include <random>

#include "cmcp/config.hpp"
#include "cmcp/experiment.hpp"
#include "../support/instances.hpp"

using namespace cmcp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cmcp_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Json clothing_json() { return parse_json_text(read_text_file(CMCP_CONFIG_DIR "/clothing.json"), "clothing.json"); }

std::string field_of(const Json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.task = testing::clothing_task();
  cfg.order = testing::order_of(1000);
  cfg.iterations = 10;
  cfg.pop_size = 10;
  cfg.seeds = {1, 2};
  cfg.output_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("bundled clothing config", "[config]") {
  const auto cfg = load_config(CMCP_CONFIG_DIR "/clothing.json");
  CHECK(cfg.task.size() == 6);
  std::size_t services = 0;
  for (const auto& st : cfg.task.subtasks) services += st.size();
  CHECK(services == 14);
  CHECK(cfg.order.quantity == 1000);
  CHECK(cfg.task == testing::clothing_task());
  CHECK(cfg.algorithm == Algorithm::pdga);
  CHECK(cfg.effective_iterations() == 100);
  CHECK(cfg.variation == VariationParams{0.1, 0.01, 1.0, 1.0});
}

TEST_CASE("config errors name the offending field", "[config]") {
  auto j = clothing_json();
  j["subtasks"][2].erase("services");
  try {
    config_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "subtasks[2].services");
    CHECK(std::string(e.what()).find("ST3") != std::string::npos);
  }

  j = clothing_json();
  j["order"]["quantity"] = 0;
  CHECK(field_of(j) == "order.quantity");

  j = clothing_json();
  j["params"]["pop_sise"] = 3;
  CHECK(field_of(j) == "params.pop_sise");

  j = clothing_json();
  j["subtasks"][0]["services"][1]["unit_time"] = "fast";
  CHECK(field_of(j) == "subtasks[0].services[1].unit_time");

  j = clothing_json();
  j["algorithm"] = "sga";
  CHECK(field_of(j) == "algorithm");

  j = clothing_json();
  j["subtasks"][1]["services"][1]["id"] = "CS_2_1";
  CHECK(field_of(j) == "subtasks");
}

TEST_CASE("malformed json is a parse error", "[config]") {
  CHECK_THROWS_AS(parse_json_text("{\"order\": ", "x.json"), ParseError);
  const auto dir = scratch("parse");
  write_text_file(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ParseError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
}

TEST_CASE("capacity short of the order is infeasible", "[config]") {
  auto j = clothing_json();
  j["subtasks"][1]["services"][0]["max_uses"] = 400;
  j["subtasks"][1]["services"][1]["max_uses"] = 500;
  CHECK_THROWS_AS(config_from_json(j), InfeasibleInstance);
}

TEST_CASE("configs round-trip through json", "[config]") {
  std::mt19937_64 rng(89);
  const auto dir = scratch("roundtrip");
  for (int trial = 0; trial < 100; ++trial) {
    const int q = std::uniform_int_distribution<int>(1, 5000)(rng);
    ExperimentConfig cfg;
    cfg.task = testing::random_task(rng, 6, 4, true, q);
    cfg.order = testing::order_of(q);
    cfg.algorithm = trial % 2 ? Algorithm::nsga2 : Algorithm::pdga;
    if (trial % 3) cfg.iterations = std::uniform_int_distribution<int>(1, 500)(rng);
    cfg.pop_size = std::uniform_int_distribution<int>(2, 200)(rng);
    cfg.limit = std::uniform_real_distribution<double>(0, 1e5)(rng);
    cfg.variation = {std::uniform_real_distribution<double>(0, 20)(rng),
                     std::uniform_real_distribution<double>(0, 20)(rng),
                     std::uniform_real_distribution<double>(0, 1)(rng),
                     std::uniform_real_distribution<double>(0, 1)(rng)};
    cfg.seeds = {rng(), rng() % 100};
    cfg.output_dir = "out/" + std::to_string(trial);
    CHECK(config_from_json(config_to_json(cfg)) == cfg);
    write_config(cfg, dir / "cfg.json");
    CHECK(load_config(dir / "cfg.json") == cfg);
  }
}

TEST_CASE("run parameters are validated", "[config]") {
  auto cfg = small_config("unused");
  cfg.pop_size = 1;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = small_config("unused");
  cfg.variation.pr_m = 2;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = small_config("unused");
  cfg.seeds.clear();
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("experiment files hold the re-evaluated front", "[config]") {
  const auto dir = scratch("experiment");
  const auto cfg = small_config(dir);
  const auto records = run_experiment(cfg);
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    CHECK(fs::exists(r.front_json));
    CHECK(fs::exists(r.front_csv));
    CHECK(fs::exists(r.summary_json));
    const auto file = read_front(r.front_json);
    CHECK(file.task == cfg.task);
    CHECK(file.seed == r.seed);
    REQUIRE(file.solutions.size() == r.front.size());
    CHECK_NOTHROW(check_front(file.task, file.order, file.solutions));
    for (std::size_t k = 0; k < r.front.size(); ++k) {
      CHECK(file.solutions[k].objectives == r.front[k].objectives);
      CHECK(file.solutions[k].solution == r.front[k].solution);
    }
    const auto csv = read_text_file(r.front_csv);
    CHECK(csv.rfind("time_total,cost_total,num_total,allocations\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.front.size() + 1);
  }
  CHECK(fs::exists(dir / "summary.csv"));
}

TEST_CASE("reruns write identical front files", "[config]") {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  auto cfg = small_config(a);
  run_experiment(cfg);
  cfg.output_dir = b.string();
  run_experiment(cfg, {4});
  for (const char* name : {"pdga_seed1.front.json", "pdga_seed1.front.csv", "pdga_seed2.front.json"}) {
    CHECK(read_text_file(a / name) == read_text_file(b / name));
  }
}

TEST_CASE("sweep covers the fourteen executions", "[config]") {
  const auto ex = case_study_executions();
  REQUIRE(ex.size() == 14);
  CHECK(ex[0].algorithm == Algorithm::nsga2);
  CHECK(ex[0].iterations == 200);
  CHECK(ex[1].algorithm == Algorithm::pdga);
  CHECK(ex[1].limit == 0);
  for (std::size_t k = 2; k < 14; ++k) {
    CHECK(ex[k].algorithm == Algorithm::pdga);
    CHECK(ex[k].limit == 24000 + 2000 * static_cast<double>(k - 2));
  }

  const auto dir = scratch("sweep");
  auto cfg = small_config(dir);
  cfg.seeds = {1};
  cfg.pop_size = 4;
  const auto rows = run_sweep(cfg);
  CHECK(rows.size() == 14);
  const auto csv = read_text_file(dir / "sweep_summary.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 15);
  CHECK(fs::exists(dir / "exec_01" / "nsga2_seed1.front.json"));
  CHECK(fs::exists(dir / "exec_14" / "pdga_seed1.front.json"));
}

TEST_CASE("front comparison", "[config]") {
  const auto dir = scratch("compare");
  const auto cfg = small_config(dir);
  const auto records = run_experiment(cfg);
  const auto a = read_front(records[0].front_json);

  const auto self = compare_fronts(a, a);
  CHECK(self.a_dominated_by_b == 0);
  CHECK(self.b_dominated_by_a == 0);
  CHECK(self.a.size == a.solutions.size());

  auto worse = a;
  for (auto& s : worse.solutions) s.objectives.cost_total += 1;
  const auto r = compare_fronts(a, worse);
  CHECK(r.b_dominated_by_a == worse.solutions.size());
  CHECK(r.a_dominated_by_b == 0);

  auto other = a;
  other.order.quantity = 999;
  CHECK_THROWS_AS(compare_fronts(a, other), InstanceMismatch);
}
