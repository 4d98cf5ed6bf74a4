// Copyright 2026 The EUQ Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "euq/pipeline/config.hpp"

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "euq/errors.hpp"

namespace euq::pipeline {

using nlohmann::json;

std::string to_string(Task t) {
  switch (t) {
    case Task::kForecast: return "forecast";
    case Task::kReconstruct: return "reconstruct";
    case Task::kSynthetic: return "synthetic";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  if (s == "forecast") return Task::kForecast;
  if (s == "reconstruct") return Task::kReconstruct;
  if (s == "synthetic") return Task::kSynthetic;
  throw ConfigError("unknown task: " + s);
}

std::filesystem::path RunConfig::resolved_run_dir() const {
  std::filesystem::path dir(run_dir);
  if (dir.is_relative()) {
    if (const char* root = std::getenv(kRunRootEnv)) {
      return std::filesystem::path(root) / dir;
    }
  }
  return dir;
}

void validate(const RunConfig& cfg) {
  if (cfg.run_dir.empty()) throw ConfigError("run_dir is required");
  search::validate(cfg.search);
  hpo::validate(cfg.hyper);
  if (cfg.task != Task::kSynthetic) {
    if (cfg.snapshots_path.empty() || cfg.mask_path.empty()) {
      throw ConfigError("snapshots and mask paths are required for data tasks");
    }
  }
  if (cfg.arch_nodes < 1) throw ConfigError("arch.nodes must be positive");
  if (cfg.arch_widths.empty()) throw ConfigError("arch.widths must not be empty");
  if (cfg.arch_activations.empty()) throw ConfigError("arch.activations must not be empty");
  if (cfg.max_epochs < 1 || cfg.plateau_patience < 1 || cfg.early_stop_patience < 1) {
    throw ConfigError("training patience values and max epochs must be positive");
  }
  if (!(cfg.lr_factor > 0.0) || cfg.lr_factor >= 1.0) throw ConfigError("train.lr_factor in (0,1)");
  if (!(cfg.valid_fraction > 0.0) || cfg.valid_fraction >= 1.0) {
    throw ConfigError("train.valid_fraction in (0,1)");
  }
  if (cfg.ensemble_k < 1) throw ConfigError("ensemble.k must be positive");
  if (cfg.pod_modes < 0) throw ConfigError("pod.modes must be nonnegative");
  if (cfg.pod_modes == 0 && (!(cfg.pod_energy > 0.0) || cfg.pod_energy > 1.0)) {
    throw ConfigError("pod.energy must lie in (0,1]");
  }
  if (cfg.pod_max_modes < 1) throw ConfigError("pod.max_modes must be positive");
  if (cfg.tau < 1) throw ConfigError("window.tau must be positive");
  if (cfg.sensor_count < 1) throw ConfigError("sensors.count must be positive");
  if (cfg.sensor_lat_min >= cfg.sensor_lat_max) throw ConfigError("sensor band is empty");
  if (cfg.synth_train < 2) throw ConfigError("synthetic.train_size must be at least 2");
  if (cfg.synth_x_min >= cfg.synth_x_max) throw ConfigError("synthetic x range is empty");
  if (cfg.train_snapshots < 0) throw ConfigError("data.train_snapshots must be nonnegative");
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

std::vector<nn::Activation> parse_activations(const json& j) {
  std::vector<nn::Activation> out;
  for (const auto& s : j) out.push_back(nn::activation_from_string(s.get<std::string>()));
  return out;
}

std::vector<nn::OptimizerKind> parse_optimizers(const json& j) {
  std::vector<nn::OptimizerKind> out;
  for (const auto& s : j) out.push_back(nn::optimizer_from_string(s.get<std::string>()));
  return out;
}

}  // namespace

RunConfig run_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    RunConfig cfg;
    cfg.task = task_from_string(j.at("task").get<std::string>());
    cfg.run_dir = j.at("run_dir").get<std::string>();
    if (j.contains("data")) {
      const json& d = j.at("data");
      cfg.snapshots_path = get_or<std::string>(d, "snapshots", "");
      cfg.mask_path = get_or<std::string>(d, "mask", "");
      cfg.train_snapshots = get_or<int>(d, "train_snapshots", 0);
    }
    if (j.contains("search")) {
      const json& s = j.at("search");
      cfg.search.population_size = get_or<int>(s, "population", 32);
      cfg.search.tournament_size = get_or<int>(s, "sample", 8);
      cfg.search.workers = get_or<int>(s, "workers", 1);
      cfg.search.max_evaluations = get_or<std::uint64_t>(s, "max_evals", 0);
      cfg.search.max_seconds = get_or<double>(s, "max_seconds", 0.0);
      cfg.search.seed = get_or<std::uint64_t>(s, "seed", 0);
    }
    if (j.contains("bo")) {
      const json& b = j.at("bo");
      cfg.search.bo.kappa = get_or<double>(b, "kappa", 1.96);
      cfg.search.bo.liar = hpo::liar_mode_from_string(get_or<std::string>(b, "liar", "mean"));
      cfg.search.bo.candidate_pool = get_or<int>(b, "pool", 512);
    }
    if (j.contains("hyper")) {
      const json& h = j.at("hyper");
      cfg.hyper.lr_min = get_or<double>(h, "lr_min", 1e-4);
      cfg.hyper.lr_max = get_or<double>(h, "lr_max", 1e-1);
      cfg.hyper.batch_min = get_or<int>(h, "batch_min", 32);
      cfg.hyper.batch_max = get_or<int>(h, "batch_max", 256);
      if (h.contains("optimizers")) cfg.hyper.optimizers = parse_optimizers(h.at("optimizers"));
    }
    if (j.contains("arch")) {
      const json& a = j.at("arch");
      cfg.arch_nodes = get_or<int>(a, "nodes", 5);
      if (a.contains("widths")) cfg.arch_widths = a.at("widths").get<std::vector<int>>();
      if (a.contains("activations")) cfg.arch_activations = parse_activations(a.at("activations"));
    }
    if (j.contains("train")) {
      const json& t = j.at("train");
      cfg.max_epochs = get_or<int>(t, "max_epochs", 200);
      cfg.plateau_patience = get_or<int>(t, "plateau_patience", 15);
      cfg.lr_factor = get_or<double>(t, "lr_factor", 0.5);
      cfg.early_stop_patience = get_or<int>(t, "early_stop_patience", 20);
      cfg.valid_fraction = get_or<double>(t, "valid_fraction", 0.1);
    }
    if (j.contains("ensemble")) cfg.ensemble_k = get_or<int>(j.at("ensemble"), "k", 10);
    if (j.contains("pod")) {
      const json& p = j.at("pod");
      cfg.pod_modes = get_or<int>(p, "modes", 0);
      cfg.pod_energy = get_or<double>(p, "energy", 0.9);
      cfg.pod_max_modes = get_or<int>(p, "max_modes", 50);
    }
    if (j.contains("window")) cfg.tau = get_or<int>(j.at("window"), "tau", 8);
    if (j.contains("sensors")) {
      const json& s = j.at("sensors");
      cfg.sensor_count = get_or<int>(s, "count", 50);
      cfg.sensor_lat_min = get_or<double>(s, "lat_min", -50.0);
      cfg.sensor_lat_max = get_or<double>(s, "lat_max", 50.0);
    }
    if (j.contains("synthetic")) {
      const json& s = j.at("synthetic");
      cfg.synth_train = get_or<int>(s, "train_size", 512);
      cfg.synth_noise = get_or<double>(s, "noise", 0.3);
      cfg.synth_x_min = get_or<double>(s, "x_min", -2.0);
      cfg.synth_x_max = get_or<double>(s, "x_max", 2.0);
      cfg.synth_seed = get_or<std::uint64_t>(s, "seed", 7);
    }
    validate(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return run_config_from_json_text(buf.str());
}

std::string to_json_text(const RunConfig& cfg) {
  json j;
  j["task"] = to_string(cfg.task);
  j["run_dir"] = cfg.run_dir;
  j["data"] = {{"snapshots", cfg.snapshots_path},
               {"mask", cfg.mask_path},
               {"train_snapshots", cfg.train_snapshots}};
  j["search"] = {{"population", cfg.search.population_size},
                 {"sample", cfg.search.tournament_size},
                 {"workers", cfg.search.workers},
                 {"max_evals", cfg.search.max_evaluations},
                 {"max_seconds", cfg.search.max_seconds},
                 {"seed", cfg.search.seed}};
  j["bo"] = {{"kappa", cfg.search.bo.kappa},
             {"liar", hpo::to_string(cfg.search.bo.liar)},
             {"pool", cfg.search.bo.candidate_pool}};
  j["hyper"] = {{"lr_min", cfg.hyper.lr_min},
                {"lr_max", cfg.hyper.lr_max},
                {"batch_min", cfg.hyper.batch_min},
                {"batch_max", cfg.hyper.batch_max}};
  std::vector<std::string> optimizers;
  for (auto o : cfg.hyper.optimizers) optimizers.push_back(nn::to_string(o));
  j["hyper"]["optimizers"] = optimizers;
  std::vector<std::string> activations;
  for (auto a : cfg.arch_activations) activations.push_back(nn::to_string(a));
  j["arch"] = {{"nodes", cfg.arch_nodes}, {"widths", cfg.arch_widths}, {"activations", activations}};
  j["train"] = {{"max_epochs", cfg.max_epochs},
                {"plateau_patience", cfg.plateau_patience},
                {"lr_factor", cfg.lr_factor},
                {"early_stop_patience", cfg.early_stop_patience},
                {"valid_fraction", cfg.valid_fraction}};
  j["ensemble"] = {{"k", cfg.ensemble_k}};
  j["pod"] = {{"modes", cfg.pod_modes}, {"energy", cfg.pod_energy}, {"max_modes", cfg.pod_max_modes}};
  j["window"] = {{"tau", cfg.tau}};
  j["sensors"] = {{"count", cfg.sensor_count},
                  {"lat_min", cfg.sensor_lat_min},
                  {"lat_max", cfg.sensor_lat_max}};
  j["synthetic"] = {{"train_size", cfg.synth_train},
                    {"noise", cfg.synth_noise},
                    {"x_min", cfg.synth_x_min},
                    {"x_max", cfg.synth_x_max},
                    {"seed", cfg.synth_seed}};
  return j.dump(2) + "\n";
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write config snapshot: " + path.string());
  os << to_json_text(cfg);
}

}  // namespace euq::pipeline
