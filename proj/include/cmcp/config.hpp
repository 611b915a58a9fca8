#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "cmcp/domain.hpp"
#include "cmcp/nsga2.hpp"
#include "cmcp/pdga.hpp"
#include "cmcp/variation.hpp"

namespace cmcp {

using Json = nlohmann::ordered_json;

// Malformed or inconsistent experiment input. `field` names the offending
// element as a path such as "subtasks[2].services".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// The file is not valid JSON at all.
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { pdga, nsga2 };

inline const char* to_string(Algorithm a) noexcept { return a == Algorithm::pdga ? "pdga" : "nsga2"; }

inline std::optional<Algorithm> parse_algorithm(const std::string& s) {
  if (s == "pdga") return Algorithm::pdga;
  if (s == "nsga2") return Algorithm::nsga2;
  return std::nullopt;
}

inline int default_iterations(Algorithm a) noexcept { return a == Algorithm::pdga ? 100 : 200; }

struct ExperimentConfig {
  TaskSpec task;
  Order order;
  Algorithm algorithm = Algorithm::pdga;
  std::optional<int> iterations;  // unset: 100 for pdga, 200 for nsga2
  int pop_size = 50;
  double limit = 0.0;
  VariationParams variation;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "results";

  bool operator==(const ExperimentConfig&) const = default;

  int effective_iterations() const { return iterations.value_or(default_iterations(algorithm)); }

  PdgaParams pdga_params(std::uint64_t seed) const {
    return {effective_iterations(), pop_size, limit, variation, seed};
  }

  Nsga2Params nsga2_params(std::uint64_t seed) const {
    return {effective_iterations(), pop_size, variation, seed};
  }
};

namespace detail {

class Reader {
 public:
  Reader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& [key, _] : node_.items()) {
      if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) == keys.end()) {
        throw ConfigError(child(key), "unknown field");
      }
    }
  }

  bool has(const char* key) const { return node_.contains(key); }
  const Json& at(const char* key) const {
    if (!node_.contains(key)) throw ConfigError(child(key), "required field is missing");
    return node_.at(key);
  }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  std::string string(const char* key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(child(key), "expected a string");
    return v.get<std::string>();
  }

  double number(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(child(key), "expected a number");
    return v.get<double>();
  }

  int integer(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key), "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      throw ConfigError(child(key), "integer out of range");
    }
    return static_cast<int>(x);
  }

 private:
  const Json& node_;
  std::string path_;
};

inline std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

}  // namespace detail

inline Json instance_to_json(const TaskSpec& task, const Order& order) {
  Json j;
  j["order"] = {{"id", order.id}, {"product_type", order.product_type}, {"quantity", order.quantity}};
  Json subtasks = Json::array();
  for (const auto& st : task.subtasks) {
    Json services = Json::array();
    for (const auto& s : st.services) {
      Json sj{{"id", s.id}, {"unit_time", s.unit_time}, {"unit_cost", s.unit_cost}};
      if (s.max_uses) sj["max_uses"] = *s.max_uses;
      services.push_back(std::move(sj));
    }
    subtasks.push_back({{"id", st.id}, {"services", std::move(services)}});
  }
  j["subtasks"] = std::move(subtasks);
  return j;
}

// Reads the "order" and "subtasks" members of `j` and checks the instance.
// Structural problems raise ConfigError; an infeasible instance raises
// InfeasibleInstance.
inline std::pair<TaskSpec, Order> instance_from_json(const Json& j, const std::string& path = "") {
  detail::Reader root(j, path);
  Order order;
  {
    detail::Reader o(root.at("order"), root.child("order"));
    o.allow_only({"id", "product_type", "quantity"});
    order.id = o.has("id") ? o.string("id") : "order";
    order.product_type = o.has("product_type") ? o.string("product_type") : "";
    order.quantity = o.integer("quantity");
    if (order.quantity < 1) throw ConfigError(o.child("quantity"), "must be >= 1");
  }
  TaskSpec task;
  const auto& subtasks = root.at("subtasks");
  const std::string subtasks_path = root.child("subtasks");
  if (!subtasks.is_array() || subtasks.empty()) throw ConfigError(subtasks_path, "expected a non-empty array");
  for (std::size_t i = 0; i < subtasks.size(); ++i) {
    detail::Reader st(subtasks[i], detail::indexed(subtasks_path, i));
    st.allow_only({"id", "services"});
    SubTask sub;
    sub.id = st.string("id");
    const std::string where = "sub-task '" + sub.id + "'";
    if (!st.has("services")) throw ConfigError(st.child("services"), where + " has no services");
    const auto& services = st.at("services");
    if (!services.is_array() || services.empty()) {
      throw ConfigError(st.child("services"), where + " needs a non-empty services array");
    }
    for (std::size_t k = 0; k < services.size(); ++k) {
      detail::Reader s(services[k], detail::indexed(st.child("services"), k));
      s.allow_only({"id", "unit_time", "unit_cost", "max_uses"});
      CandidateService cs;
      cs.id = s.string("id");
      cs.unit_time = s.number("unit_time");
      cs.unit_cost = s.number("unit_cost");
      if (!(cs.unit_time > 0.0)) throw ConfigError(s.child("unit_time"), "must be > 0");
      if (!(cs.unit_cost >= 0.0)) throw ConfigError(s.child("unit_cost"), "must be >= 0");
      if (s.has("max_uses")) {
        cs.max_uses = s.integer("max_uses");
        if (*cs.max_uses < 1) throw ConfigError(s.child("max_uses"), "must be >= 1");
      }
      sub.services.push_back(std::move(cs));
    }
    task.subtasks.push_back(std::move(sub));
  }
  try {
    validate_instance(task, order);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(subtasks_path, e.what());
  }
  require_feasible(task, order);
  return {std::move(task), std::move(order)};
}

inline Json config_to_json(const ExperimentConfig& cfg) {
  Json j = instance_to_json(cfg.task, cfg.order);
  j["algorithm"] = to_string(cfg.algorithm);
  Json params;
  if (cfg.iterations) params["iterations"] = *cfg.iterations;
  params["pop_size"] = cfg.pop_size;
  params["limit"] = cfg.limit;
  params["eta_c"] = cfg.variation.eta_c;
  params["eta_m"] = cfg.variation.eta_m;
  params["pr_c"] = cfg.variation.pr_c;
  params["pr_m"] = cfg.variation.pr_m;
  j["params"] = std::move(params);
  j["seeds"] = cfg.seeds;
  j["output_dir"] = cfg.output_dir;
  return j;
}

inline ExperimentConfig config_from_json(const Json& j) {
  detail::Reader root(j, "");
  root.allow_only({"order", "subtasks", "algorithm", "params", "seeds", "output_dir"});
  ExperimentConfig cfg;
  std::tie(cfg.task, cfg.order) = instance_from_json(j);
  if (root.has("algorithm")) {
    const auto name = root.string("algorithm");
    const auto algo = parse_algorithm(name);
    if (!algo) throw ConfigError("algorithm", "expected \"pdga\" or \"nsga2\", got \"" + name + "\"");
    cfg.algorithm = *algo;
  }
  if (root.has("params")) {
    detail::Reader p(root.at("params"), "params");
    p.allow_only({"iterations", "pop_size", "limit", "eta_c", "eta_m", "pr_c", "pr_m"});
    if (p.has("iterations")) cfg.iterations = p.integer("iterations");
    if (p.has("pop_size")) cfg.pop_size = p.integer("pop_size");
    if (p.has("limit")) cfg.limit = p.number("limit");
    if (p.has("eta_c")) cfg.variation.eta_c = p.number("eta_c");
    if (p.has("eta_m")) cfg.variation.eta_m = p.number("eta_m");
    if (p.has("pr_c")) cfg.variation.pr_c = p.number("pr_c");
    if (p.has("pr_m")) cfg.variation.pr_m = p.number("pr_m");
  }
  if (root.has("seeds")) {
    const auto& seeds = root.at("seeds");
    if (!seeds.is_array() || seeds.empty()) throw ConfigError("seeds", "expected a non-empty array");
    cfg.seeds.clear();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (!seeds[i].is_number_unsigned()) throw ConfigError(detail::indexed("seeds", i), "expected an unsigned integer");
      cfg.seeds.push_back(seeds[i].get<std::uint64_t>());
    }
  }
  if (root.has("output_dir")) cfg.output_dir = root.string("output_dir");
  return cfg;
}

// Checks the run parameters of a config, reporting the offending field.
inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.iterations && *cfg.iterations < 1) throw ConfigError("params.iterations", "must be >= 1");
  if (cfg.pop_size < 2) throw ConfigError("params.pop_size", "must be >= 2");
  if (!(cfg.limit >= 0.0) || !std::isfinite(cfg.limit)) throw ConfigError("params.limit", "must be a finite value >= 0");
  auto check = [](double v, double hi, const char* field) {
    if (!(v >= 0.0 && v <= hi)) throw ConfigError(std::string("params.") + field, "out of range");
  };
  constexpr double kUnbounded = std::numeric_limits<double>::max();
  check(cfg.variation.eta_c, kUnbounded, "eta_c");
  check(cfg.variation.eta_m, kUnbounded, "eta_m");
  check(cfg.variation.pr_c, 1.0, "pr_c");
  check(cfg.variation.pr_m, 1.0, "pr_m");
  if (cfg.seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed while reading '" + path.string() + "'");
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("", origin + ": " + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  auto cfg = config_from_json(parse_json_text(read_text_file(path), path.string()));
  validate_config(cfg);
  return cfg;
}

inline void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  write_text_file(path, config_to_json(cfg).dump(2) + "\n");
}

}  // namespace cmcp
