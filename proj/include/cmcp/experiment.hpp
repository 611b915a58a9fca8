#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "cmcp/config.hpp"
#include "cmcp/domain.hpp"
#include "cmcp/evaluation.hpp"
#include "cmcp/front.hpp"
#include "cmcp/nsga2.hpp"
#include "cmcp/pdga.hpp"

namespace cmcp {

// Two front files describe different problem instances.
class InstanceMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form of a double.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// "a b c;d e" - counts separated by spaces, sub-tasks by semicolons.
inline std::string format_allocations(const CompositeSolution& s) {
  std::string out;
  for (std::size_t i = 0; i < s.allocations.size(); ++i) {
    if (i) out += ';';
    for (std::size_t j = 0; j < s.allocations[i].counts.size(); ++j) {
      if (j) out += ' ';
      out += std::to_string(s.allocations[i].counts[j]);
    }
  }
  return out;
}

struct FrontFile {
  Algorithm algorithm = Algorithm::pdga;
  std::uint64_t seed = 0;
  TaskSpec task;
  Order order;
  std::vector<Solution> solutions;
};

// Confirms every row is feasible, re-evaluates to its recorded objectives, and
// is not dominated by another row. Throws std::logic_error otherwise.
inline void check_front(const TaskSpec& task, const Order& order, const std::vector<Solution>& front) {
  for (std::size_t a = 0; a < front.size(); ++a) {
    if (!is_valid(front[a].solution, task, order)) {
      throw std::logic_error("front row " + std::to_string(a) + " is not a feasible solution");
    }
    if (total_objectives(front[a].solution, task) != front[a].objectives) {
      throw std::logic_error("front row " + std::to_string(a) + " does not re-evaluate to its objectives");
    }
    for (std::size_t b = 0; b < front.size(); ++b) {
      if (a != b && dominates(front[b].objectives, front[a].objectives)) {
        throw std::logic_error("front row " + std::to_string(a) + " is dominated by row " + std::to_string(b));
      }
    }
  }
}

inline Json front_to_json(const FrontFile& f) {
  Json j;
  j["algorithm"] = to_string(f.algorithm);
  j["seed"] = f.seed;
  j["instance"] = instance_to_json(f.task, f.order);
  Json rows = Json::array();
  for (const auto& s : f.solutions) {
    Json allocations = Json::array();
    for (const auto& a : s.solution.allocations) allocations.push_back(a.counts);
    rows.push_back({{"time_total", s.objectives.time_total},
                    {"cost_total", s.objectives.cost_total},
                    {"num_total", s.objectives.num_total},
                    {"allocations", std::move(allocations)}});
  }
  j["solutions"] = std::move(rows);
  return j;
}

inline std::string front_to_csv(const std::vector<Solution>& front) {
  std::string out = "time_total,cost_total,num_total,allocations\n";
  for (const auto& s : front) {
    out += format_number(s.objectives.time_total) + ',' + format_number(s.objectives.cost_total) + ',' +
           std::to_string(s.objectives.num_total) + ',' + format_allocations(s.solution) + '\n';
  }
  return out;
}

inline FrontFile front_from_json(const Json& j, const std::string& origin) {
  FrontFile f;
  try {
    detail::Reader root(j, "");
    const auto algo = parse_algorithm(root.string("algorithm"));
    if (!algo) throw ConfigError("algorithm", "unknown algorithm");
    f.algorithm = *algo;
    if (!root.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected an unsigned integer");
    f.seed = root.at("seed").get<std::uint64_t>();
    std::tie(f.task, f.order) = instance_from_json(root.at("instance"), "instance");
    const auto& rows = root.at("solutions");
    if (!rows.is_array()) throw ConfigError("solutions", "expected an array");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string path = detail::indexed("solutions", r);
      detail::Reader row(rows[r], path);
      Solution s;
      s.objectives.time_total = row.number("time_total");
      s.objectives.cost_total = row.number("cost_total");
      s.objectives.num_total = row.integer("num_total");
      const auto& allocations = row.at("allocations");
      if (!allocations.is_array() || allocations.size() != f.task.size()) {
        throw ConfigError(row.child("allocations"), "expected one allocation per sub-task");
      }
      for (const auto& a : allocations) {
        if (!a.is_array()) throw ConfigError(row.child("allocations"), "expected arrays of counts");
        Allocation alloc;
        for (const auto& c : a) {
          if (!c.is_number_integer()) throw ConfigError(row.child("allocations"), "counts must be integers");
          alloc.counts.push_back(c.get<int>());
        }
        s.solution.allocations.push_back(std::move(alloc));
      }
      if (!is_valid(s.solution, f.task, f.order)) throw ConfigError(path, "infeasible allocation");
      f.solutions.push_back(std::move(s));
    }
  } catch (const ConfigError& e) {
    throw ConfigError(e.field(), origin + ": " + e.what());
  }
  return f;
}

inline FrontFile read_front(const std::filesystem::path& path) {
  return front_from_json(parse_json_text(read_text_file(path), path.string()), path.string());
}

struct RunRecord {
  Algorithm algorithm = Algorithm::pdga;
  std::uint64_t seed = 0;
  int iterations = 0;
  double limit = 0.0;
  std::vector<Solution> front;
  double solver_ms = 0.0;
  std::filesystem::path front_json;
  std::filesystem::path front_csv;
  std::filesystem::path summary_json;

  double mean_num_total() const {
    if (front.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : front) sum += s.objectives.num_total;
    return sum / static_cast<double>(front.size());
  }
};

// Runs the configured solver once for `seed`. Only the solver call is timed.
inline RunRecord solve_once(const ExperimentConfig& cfg, std::uint64_t seed, const RunOptions& options) {
  RunRecord rec;
  rec.algorithm = cfg.algorithm;
  rec.seed = seed;
  rec.iterations = cfg.effective_iterations();
  rec.limit = cfg.limit;
  const auto start = std::chrono::steady_clock::now();
  if (cfg.algorithm == Algorithm::pdga) {
    rec.front = run_pdga(cfg.task, cfg.order, cfg.pdga_params(seed), options);
  } else {
    rec.front = run_nsga2(cfg.task, cfg.order, cfg.nsga2_params(seed), options);
  }
  rec.solver_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

inline Json summary_to_json(const ExperimentConfig& cfg, const RunRecord& rec) {
  Json j;
  j["algorithm"] = to_string(rec.algorithm);
  j["seed"] = rec.seed;
  j["front_size"] = rec.front.size();
  j["mean_num_total"] = rec.mean_num_total();
  double min_time = std::numeric_limits<double>::infinity();
  double min_cost = std::numeric_limits<double>::infinity();
  for (const auto& s : rec.front) {
    min_time = std::min(min_time, s.objectives.time_total);
    min_cost = std::min(min_cost, s.objectives.cost_total);
  }
  j["min_time_total"] = min_time;
  j["min_cost_total"] = min_cost;
  j["solver_ms"] = rec.solver_ms;
  Json params;
  params["iterations"] = rec.iterations;
  params["pop_size"] = cfg.pop_size;
  if (rec.algorithm == Algorithm::pdga) params["limit"] = rec.limit;
  params["eta_c"] = cfg.variation.eta_c;
  params["eta_m"] = cfg.variation.eta_m;
  params["pr_c"] = cfg.variation.pr_c;
  params["pr_m"] = cfg.variation.pr_m;
  j["params"] = std::move(params);
  return j;
}

// Writes <dir>/<algorithm>_seed<seed>.front.json, .front.csv and .summary.json.
inline void write_run(const ExperimentConfig& cfg, RunRecord& rec, const std::filesystem::path& dir) {
  check_front(cfg.task, cfg.order, rec.front);
  const std::string stem = std::string(to_string(rec.algorithm)) + "_seed" + std::to_string(rec.seed);
  rec.front_json = dir / (stem + ".front.json");
  rec.front_csv = dir / (stem + ".front.csv");
  rec.summary_json = dir / (stem + ".summary.json");
  const FrontFile file{rec.algorithm, rec.seed, cfg.task, cfg.order, rec.front};
  write_text_file(rec.front_json, front_to_json(file).dump(2) + "\n");
  write_text_file(rec.front_csv, front_to_csv(rec.front));
  write_text_file(rec.summary_json, summary_to_json(cfg, rec).dump(2) + "\n");
}

inline std::string summary_csv(const std::vector<RunRecord>& records) {
  std::string out = "algorithm,seed,iterations,limit,front_size,mean_num_total,solver_ms\n";
  for (const auto& r : records) {
    out += std::string(to_string(r.algorithm)) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.iterations) +
           ',' + (r.algorithm == Algorithm::pdga ? format_number(r.limit) : "-") + ',' +
           std::to_string(r.front.size()) + ',' + format_number(r.mean_num_total()) + ',' +
           format_number(r.solver_ms) + '\n';
  }
  return out;
}

// One solver run per configured seed; files land in cfg.output_dir.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {}) {
  validate_config(cfg);
  std::vector<RunRecord> records;
  for (std::uint64_t seed : cfg.seeds) records.push_back(solve_once(cfg, seed, options));
  for (auto& r : records) write_run(cfg, r, cfg.output_dir);
  write_text_file(std::filesystem::path(cfg.output_dir) / "summary.csv", summary_csv(records));
  return records;
}

struct SweepExecution {
  int number = 0;
  Algorithm algorithm = Algorithm::pdga;
  int iterations = 0;
  double limit = 0.0;
};

// The fourteen executions of the case-study protocol: one NSGA-II baseline and
// PDGA at thirteen search limits.
inline std::vector<SweepExecution> case_study_executions() {
  std::vector<SweepExecution> out{{1, Algorithm::nsga2, 200, 0.0}, {2, Algorithm::pdga, 100, 0.0}};
  for (int k = 0; k < 12; ++k) out.push_back({3 + k, Algorithm::pdga, 100, 24000.0 + 2000.0 * k});
  return out;
}

struct SweepRow {
  SweepExecution execution;
  std::vector<RunRecord> runs;

  double mean(double (*f)(const RunRecord&)) const {
    double s = 0.0;
    for (const auto& r : runs) s += f(r);
    return runs.empty() ? 0.0 : s / static_cast<double>(runs.size());
  }
};

// Runs every execution for every configured seed; each execution writes into
// <output_dir>/exec_NN and the table goes to <output_dir>/sweep_summary.csv.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const RunOptions& options = {}) {
  validate_config(base);
  std::vector<SweepRow> rows;
  for (const auto& ex : case_study_executions()) {
    ExperimentConfig cfg = base;
    cfg.algorithm = ex.algorithm;
    cfg.iterations = ex.iterations;
    cfg.limit = ex.limit;
    char dir[16];
    std::snprintf(dir, sizeof dir, "exec_%02d", ex.number);
    cfg.output_dir = (std::filesystem::path(base.output_dir) / dir).string();
    rows.push_back({ex, run_experiment(cfg, options)});
  }
  std::string csv = "execution,algorithm,iterations,limit,seeds,mean_front_size,mean_num_total,mean_solver_ms\n";
  for (const auto& row : rows) {
    const auto& ex = row.execution;
    csv += std::to_string(ex.number) + ',' + to_string(ex.algorithm) + ',' + std::to_string(ex.iterations) + ',' +
           (ex.algorithm == Algorithm::pdga ? format_number(ex.limit) : "-") + ',' +
           std::to_string(row.runs.size()) + ',' +
           format_number(row.mean([](const RunRecord& r) { return static_cast<double>(r.front.size()); })) + ',' +
           format_number(row.mean([](const RunRecord& r) { return r.mean_num_total(); })) + ',' +
           format_number(row.mean([](const RunRecord& r) { return r.solver_ms; })) + '\n';
  }
  write_text_file(std::filesystem::path(base.output_dir) / "sweep_summary.csv", csv);
  return rows;
}

struct FrontStats {
  std::size_t size = 0;
  std::array<double, 3> min{};
  std::array<double, 3> mean{};
};

struct CompareReport {
  FrontStats a;
  FrontStats b;
  std::size_t a_dominated_by_b = 0;  // rows of A dominated by some row of B
  std::size_t b_dominated_by_a = 0;
};

inline FrontStats front_stats(const std::vector<Solution>& front) {
  FrontStats s;
  s.size = front.size();
  if (front.empty()) return s;
  s.min.fill(std::numeric_limits<double>::infinity());
  for (const auto& row : front) {
    const std::array<double, 3> v{row.objectives.time_total, row.objectives.cost_total,
                                  static_cast<double>(row.objectives.num_total)};
    for (std::size_t k = 0; k < 3; ++k) {
      s.min[k] = std::min(s.min[k], v[k]);
      s.mean[k] += v[k];
    }
  }
  for (auto& m : s.mean) m /= static_cast<double>(front.size());
  return s;
}

inline std::size_t count_dominated(const std::vector<Solution>& rows, const std::vector<Solution>& by) {
  std::size_t n = 0;
  for (const auto& r : rows) {
    const bool hit = std::any_of(by.begin(), by.end(),
                                 [&](const Solution& o) { return dominates(o.objectives, r.objectives); });
    n += hit ? 1 : 0;
  }
  return n;
}

inline CompareReport compare_fronts(const FrontFile& a, const FrontFile& b) {
  if (a.task != b.task || a.order.quantity != b.order.quantity) {
    throw InstanceMismatch("front files describe different problem instances");
  }
  return {front_stats(a.solutions), front_stats(b.solutions), count_dominated(a.solutions, b.solutions),
          count_dominated(b.solutions, a.solutions)};
}

inline Json report_to_json(const CompareReport& r) {
  auto stats = [](const FrontStats& s) {
    Json j;
    j["size"] = s.size;
    j["min"] = {{"time_total", s.min[0]}, {"cost_total", s.min[1]}, {"num_total", s.min[2]}};
    j["mean"] = {{"time_total", s.mean[0]}, {"cost_total", s.mean[1]}, {"num_total", s.mean[2]}};
    return j;
  };
  Json j;
  j["a"] = stats(r.a);
  j["b"] = stats(r.b);
  j["a_dominated_by_b"] = r.a_dominated_by_b;
  j["b_dominated_by_a"] = r.b_dominated_by_a;
  return j;
}

}  // namespace cmcp
