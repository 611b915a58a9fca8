// Command-line runner for the service composition solvers.
//
//   cmcp run --config clothing.json [--algorithm pdga|nsga2] [--limit L] [--seed S]... [--out DIR]
//   cmcp sweep --config clothing.json [--seed S]... [--out DIR]
//   cmcp compare A.front.json B.front.json [--out report.json]
//
// Exit codes: 0 success, 2 config error, 3 infeasible instance, 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmcp/cmcp.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct Overrides {
  std::string config;
  std::optional<std::string> algorithm;
  std::optional<double> limit;
  std::optional<int> iterations;
  std::optional<int> pop_size;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> out;
  unsigned threads = 1;
};

void add_run_flags(CLI::App& cmd, Overrides& o, bool solver_flags) {
  cmd.add_option("--config", o.config, "Experiment config (JSON)")->required();
  if (solver_flags) {
    cmd.add_option("--algorithm", o.algorithm, "pdga or nsga2")->check(CLI::IsMember({"pdga", "nsga2"}));
    cmd.add_option("--limit", o.limit, "Search limit on completion time (PDGA)");
    cmd.add_option("--iterations", o.iterations, "Number of generations");
  }
  cmd.add_option("--pop-size", o.pop_size, "Population size");
  cmd.add_option("--seed", o.seeds, "Random seed; repeat for several runs");
  cmd.add_option("--out", o.out, "Output directory");
  cmd.add_option("--threads", o.threads, "Worker threads inside one solver run")->check(CLI::Range(1u, 256u));
}

cmcp::ExperimentConfig resolve(const Overrides& o) {
  auto cfg = cmcp::load_config(o.config);
  if (o.algorithm) cfg.algorithm = *cmcp::parse_algorithm(*o.algorithm);
  if (o.limit) cfg.limit = *o.limit;
  if (o.iterations) cfg.iterations = *o.iterations;
  if (o.pop_size) cfg.pop_size = *o.pop_size;
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (o.out) cfg.output_dir = *o.out;
  cmcp::validate_config(cfg);
  return cfg;
}

int cmd_run(const Overrides& o) {
  const auto cfg = resolve(o);
  const auto records = cmcp::run_experiment(cfg, {o.threads});
  for (const auto& r : records) {
    std::cout << cmcp::to_string(r.algorithm) << " seed " << r.seed << ": " << r.front.size()
              << " solutions, mean services " << r.mean_num_total() << ", " << r.solver_ms << " ms -> "
              << r.front_json.string() << "\n";
  }
  return 0;
}

int cmd_sweep(const Overrides& o) {
  const auto cfg = resolve(o);
  const auto rows = cmcp::run_sweep(cfg, {o.threads});
  for (const auto& row : rows) {
    std::cout << "execution " << row.execution.number << " (" << cmcp::to_string(row.execution.algorithm)
              << ", limit " << row.execution.limit << "): mean front size "
              << row.mean([](const cmcp::RunRecord& r) { return static_cast<double>(r.front.size()); }) << "\n";
  }
  std::cout << "summary: " << (std::filesystem::path(cfg.output_dir) / "sweep_summary.csv").string() << "\n";
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const std::optional<std::string>& out) {
  const auto report = cmcp::compare_fronts(cmcp::read_front(a), cmcp::read_front(b));
  const auto text = cmcp::report_to_json(report).dump(2) + "\n";
  if (out) {
    cmcp::write_text_file(*out, text);
  } else {
    std::cout << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Service composition and usage scheme optimizer"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "Run one solver for each seed and write front files");
  add_run_flags(*run, run_opts, true);

  Overrides sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Run the fourteen-execution case-study protocol");
  add_run_flags(*sweep, sweep_opts, false);

  std::string front_a, front_b;
  std::optional<std::string> report_out;
  auto* compare = app.add_subcommand("compare", "Compare two front files of the same instance");
  compare->add_option("front_a", front_a, "First front file (.front.json)")->required();
  compare->add_option("front_b", front_b, "Second front file (.front.json)")->required();
  compare->add_option("--out", report_out, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    return cmd_compare(front_a, front_b, report_out);
  } catch (const cmcp::InfeasibleInstance& e) {
    std::cerr << "infeasible instance: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const cmcp::ParseError& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cmcp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cmcp::InstanceMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cmcp::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
