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

#include <fstream>
#include <nlohmann/json.hpp>

#include "euq/errors.hpp"
#include "euq/search/types.hpp"

namespace euq::search {

namespace {

nlohmann::json to_json(const CatalogRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["arch"] = r.arch.choices;
  j["lr"] = r.hyper.learning_rate;
  j["batch"] = r.hyper.batch_size;
  j["optimizer"] = nn::to_string(r.hyper.optimizer);
  j["checkpoint"] = r.checkpoint;
  j["valid_nll"] = r.valid_nll;
  j["train_seconds"] = r.train_seconds;
  j["completed_at"] = r.completed_at;
  j["train_seed"] = r.train_seed;
  j["diverged"] = r.diverged;
  j["failed"] = r.failed;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

CatalogRecord from_json(const nlohmann::json& j) {
  CatalogRecord r;
  r.id = j.at("id").get<std::uint64_t>();
  r.arch.choices = j.at("arch").get<std::vector<int>>();
  r.hyper.learning_rate = j.at("lr").get<double>();
  r.hyper.batch_size = j.at("batch").get<int>();
  r.hyper.optimizer = nn::optimizer_from_string(j.at("optimizer").get<std::string>());
  r.checkpoint = j.at("checkpoint").get<std::string>();
  r.valid_nll = j.at("valid_nll").get<double>();
  r.train_seconds = j.at("train_seconds").get<double>();
  r.completed_at = j.at("completed_at").get<double>();
  r.train_seed = j.at("train_seed").get<std::uint64_t>();
  r.diverged = j.at("diverged").get<bool>();
  r.failed = j.at("failed").get<bool>();
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  return r;
}

}  // namespace

void save_catalog(const std::filesystem::path& path, const Catalog& catalog) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open catalog for writing: " + path.string());
  for (const CatalogRecord& r : catalog) os << to_json(r).dump() << "\n";
  if (!os) throw DataError("short write to catalog: " + path.string());
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open catalog: " + path.string());
  Catalog catalog;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      catalog.push_back(from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("catalog " + path.string() + " line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return catalog;
}

}  // namespace euq::search
