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

#include "euq/pipeline/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "euq/ensemble/uq.hpp"
#include "euq/errors.hpp"
#include "euq/report/report.hpp"
#include "euq/sst/metrics.hpp"

namespace euq::pipeline {

namespace {

using nlohmann::json;
using report::CsvWriter;

std::string member_label(const search::CatalogRecord& r) { return std::to_string(r.id); }

void write_manifest(const std::filesystem::path& path,
                    const std::vector<search::CatalogRecord>& records) {
  json j;
  j["k"] = records.size();
  j["members"] = json::array();
  for (const auto& r : records) {
    j["members"].push_back({{"id", r.id},
                            {"arch", r.arch.choices},
                            {"lr", r.hyper.learning_rate},
                            {"batch", r.hyper.batch_size},
                            {"optimizer", nn::to_string(r.hyper.optimizer)},
                            {"checkpoint", r.checkpoint},
                            {"valid_nll", r.valid_nll}});
  }
  std::ofstream os(path);
  if (!os) throw DataError("cannot write ensemble manifest: " + path.string());
  os << j.dump(2) << "\n";
}

// Per-week RMSE tables: one pooled over windows and cells, one averaging
// per-window RMSE values (both are reported since either reading of the
// aggregation is defensible).
struct WeeklyTable {
  std::vector<std::string> labels;                 // members then "ensemble"
  std::vector<std::vector<double>> pooled;         // [week][column]
  std::vector<std::vector<double>> window_mean;    // [week][column]
};

void write_weekly_csv(const std::filesystem::path& path, const WeeklyTable& table,
                      const std::vector<std::vector<double>>& values) {
  CsvWriter csv(path, {"week", "member", "rmse"});
  for (std::size_t w = 0; w < values.size(); ++w) {
    for (std::size_t c = 0; c < table.labels.size(); ++c) {
      csv.row({std::to_string(w + 1), table.labels[c], CsvWriter::num(values[w][c])});
    }
  }
}

void write_histograms(const std::filesystem::path& dir, const std::string& stem,
                      const std::vector<std::string>& labels,
                      const std::vector<Eigen::VectorXd>& per_point_rmse, int n_bins,
                      long* low_quartile_net) {
  double max_value = 0.0;
  for (const auto& v : per_point_rmse) max_value = std::max(max_value, v.maxCoeff());
  if (max_value <= 0.0) max_value = 1.0;

  std::vector<sst::Histogram> hists;
  hists.reserve(per_point_rmse.size());
  for (const auto& v : per_point_rmse) hists.push_back(sst::rmse_histogram(v, n_bins, max_value));
  const sst::Histogram& ens = hists.back();  // ensemble is the last column

  {
    std::vector<std::string> header = {"bin_lo", "bin_hi"};
    header.insert(header.end(), labels.begin(), labels.end());
    CsvWriter csv(dir / (stem + ".csv"), header);
    for (int b = 0; b < n_bins; ++b) {
      std::vector<std::string> row = {CsvWriter::num(ens.edges[static_cast<std::size_t>(b)]),
                                      CsvWriter::num(ens.edges[static_cast<std::size_t>(b) + 1])};
      for (const auto& h : hists) row.push_back(std::to_string(h.counts[static_cast<std::size_t>(b)]));
      csv.row(row);
    }
  }
  {
    std::vector<std::string> header = {"bin_lo", "bin_hi"};
    header.insert(header.end(), labels.begin(), labels.end() - 1);
    CsvWriter csv(dir / (stem + "_diff.csv"), header);
    for (int b = 0; b < n_bins; ++b) {
      std::vector<std::string> row = {CsvWriter::num(ens.edges[static_cast<std::size_t>(b)]),
                                      CsvWriter::num(ens.edges[static_cast<std::size_t>(b) + 1])};
      for (std::size_t m = 0; m + 1 < hists.size(); ++m) {
        row.push_back(std::to_string(ens.counts[static_cast<std::size_t>(b)] -
                                     hists[m].counts[static_cast<std::size_t>(b)]));
      }
      csv.row(row);
    }
  }
  if (low_quartile_net) {
    long net = 0;
    for (std::size_t m = 0; m + 1 < hists.size(); ++m) {
      const auto diff = sst::histogram_diff(ens, hists[m]);
      for (int b = 0; b < n_bins / 4; ++b) net += diff[static_cast<std::size_t>(b)];
    }
    *low_quartile_net = net;
  }
}

void write_field_pgm(const std::filesystem::path& path, const Eigen::VectorXd& flat,
                     const sst::LandMask& mask) {
  report::write_pgm16(path, sst::unflatten_ocean(flat, mask));
}

// Flat per-cell table of the decomposition fields. The epistemic column comes
// in both the 1/(K-1) (default) and 1/K weightings.
void write_uncertainty_csv(const std::filesystem::path& path, const Eigen::VectorXd& epistemic_sd,
                           const Eigen::VectorXd& aleatoric_sd, const Eigen::VectorXd& mae,
                           std::size_t k) {
  const double pop_scale =
      k > 1 ? std::sqrt(static_cast<double>(k - 1) / static_cast<double>(k)) : 0.0;
  CsvWriter csv(path, {"flat_index", "epistemic_sd", "epistemic_sd_population", "aleatoric_sd",
                       "mae"});
  for (Eigen::Index i = 0; i < epistemic_sd.size(); ++i) {
    csv.row({std::to_string(i), CsvWriter::num(epistemic_sd(i)),
             CsvWriter::num(epistemic_sd(i) * pop_scale), CsvWriter::num(aleatoric_sd(i)),
             CsvWriter::num(mae(i))});
  }
}

EvaluateOutcome evaluate_forecast(const RunConfig& cfg, const TaskData& data,
                                  const std::vector<search::CatalogRecord>& records,
                                  const std::vector<nn::Network>& members,
                                  const std::filesystem::path& reports) {
  const auto& basis = *data.basis;
  const auto& scaler = *data.scaler;
  const auto& mask = *data.mask;
  const int tau = cfg.tau;
  const int m_modes = basis.n_modes();
  const Eigen::Index n_points = data.test_ocean.rows();
  const Eigen::Index q = data.test_coeffs_std.cols();
  const std::size_t k = members.size();
  if (q < 2 * tau + 1) throw DataError("test series too short for the configured window");

  std::vector<sst::PointwiseErrors> member_errors(
      k, sst::PointwiseErrors(n_points, tau));
  sst::PointwiseErrors ensemble_errors(n_points, tau);

  // Small test grids fall outside the Eastern Pacific box; the region table
  // then degenerates to the full ocean.
  std::vector<int> region_cells =
      sst::region_flat_indices(mask, sst::LatLonRegion::eastern_pacific());
  if (region_cells.empty()) {
    region_cells.resize(static_cast<std::size_t>(n_points));
    for (Eigen::Index c = 0; c < n_points; ++c) region_cells[static_cast<std::size_t>(c)] = static_cast<int>(c);
  }
  // Per-window RMSE sums for the window-mean variant of the tables.
  std::vector<std::vector<double>> window_sum(static_cast<std::size_t>(tau),
                                              std::vector<double>(k + 1, 0.0));
  std::vector<std::vector<double>> window_sum_region = window_sum;

  Eigen::VectorXd epi_sum = Eigen::VectorXd::Zero(n_points);
  Eigen::VectorXd mae_sum = Eigen::VectorXd::Zero(n_points);
  Eigen::VectorXd modal_var_sum = Eigen::VectorXd::Zero(m_modes);
  long n_windows = 0;

  std::vector<Eigen::MatrixXd> member_mean(k);   // M x tau, raw units
  std::vector<Eigen::MatrixXd> member_var(k);
  Eigen::MatrixXd fields(n_points, k + 1);

  const auto region_rmse_of = [&](const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
    double s = 0.0;
    for (int c : region_cells) s += (pred(c) - truth(c)) * (pred(c) - truth(c));
    return std::sqrt(s / static_cast<double>(region_cells.size()));
  };

  // Non-autoregressive evaluation: every window's input is the true
  // standardized coefficient history, never a model output.
  for (Eigen::Index anchor = tau; anchor + tau < q; ++anchor) {
    ++n_windows;
    const nn::Sequence input = data.test_coeffs_std.middleCols(anchor - tau, tau + 1);
    Eigen::MatrixXd ens_mean = Eigen::MatrixXd::Zero(m_modes, tau);
    Eigen::MatrixXd ens_alea = Eigen::MatrixXd::Zero(m_modes, tau);
    for (std::size_t m = 0; m < k; ++m) {
      const nn::GaussianPrediction pred = nn::forward_gaussian(members[m], input);
      const Eigen::Map<const Eigen::MatrixXd> mean_std(pred.mean.data(), m_modes, tau);
      const Eigen::Map<const Eigen::MatrixXd> var_std(pred.variance.data(), m_modes, tau);
      member_mean[m] = scaler.inverse_mean(mean_std);
      member_var[m] = scaler.inverse_variance(var_std);
      ens_mean += member_mean[m];
      ens_alea += member_var[m];
    }
    ens_mean /= static_cast<double>(k);
    ens_alea /= static_cast<double>(k);
    modal_var_sum += ens_alea.col(tau - 1);

    for (int w = 0; w < tau; ++w) {
      const Eigen::VectorXd truth = data.test_ocean.col(anchor + 1 + w);
      Eigen::MatrixXd coeffs(m_modes, k + 1);
      for (std::size_t m = 0; m < k; ++m) coeffs.col(static_cast<Eigen::Index>(m)) = member_mean[m].col(w);
      coeffs.col(static_cast<Eigen::Index>(k)) = ens_mean.col(w);
      fields.noalias() = basis.vectors * coeffs;
      fields.colwise() += basis.mean;

      for (std::size_t m = 0; m < k; ++m) {
        member_errors[m].add(w, fields.col(static_cast<Eigen::Index>(m)), truth);
        window_sum[static_cast<std::size_t>(w)][m] += std::sqrt(
            (fields.col(static_cast<Eigen::Index>(m)) - truth).squaredNorm() /
            static_cast<double>(n_points));
        window_sum_region[static_cast<std::size_t>(w)][m] +=
            region_rmse_of(fields.col(static_cast<Eigen::Index>(m)), truth);
      }
      const Eigen::VectorXd ens_field = fields.col(static_cast<Eigen::Index>(k));
      ensemble_errors.add(w, ens_field, truth);
      window_sum[static_cast<std::size_t>(w)][k] +=
          std::sqrt((ens_field - truth).squaredNorm() / static_cast<double>(n_points));
      window_sum_region[static_cast<std::size_t>(w)][k] += region_rmse_of(ens_field, truth);

      if (w == tau - 1) {
        // Spread of member mean reconstructions, 1/(K-1) weighting; a
        // single-member ensemble has no epistemic spread.
        Eigen::VectorXd var = Eigen::VectorXd::Zero(n_points);
        for (std::size_t m = 0; m < k; ++m) {
          var += (fields.col(static_cast<Eigen::Index>(m)) - ens_field).array().square().matrix();
        }
        epi_sum += var / static_cast<double>(k > 1 ? k - 1 : 1);
        mae_sum += (ens_field - truth).array().abs().matrix();
      }
    }
  }

  WeeklyTable table;
  for (const auto& r : records) table.labels.push_back(member_label(r));
  table.labels.push_back("ensemble");
  table.pooled.resize(static_cast<std::size_t>(tau));
  table.window_mean.resize(static_cast<std::size_t>(tau));
  WeeklyTable region_table = table;

  EvaluateOutcome out;
  out.task = Task::kForecast;
  for (int w = 0; w < tau; ++w) {
    auto& pooled = table.pooled[static_cast<std::size_t>(w)];
    auto& region_pooled = region_table.pooled[static_cast<std::size_t>(w)];
    for (std::size_t m = 0; m < k; ++m) {
      pooled.push_back(member_errors[m].rmse(w));
      region_pooled.push_back(member_errors[m].rmse(w, region_cells));
    }
    pooled.push_back(ensemble_errors.rmse(w));
    region_pooled.push_back(ensemble_errors.rmse(w, region_cells));
    out.weekly_rmse.push_back(pooled.back());
    out.weekly_rmse_region.push_back(region_pooled.back());
    if (pooled.back() > *std::max_element(pooled.begin(), pooled.end() - 1)) {
      out.ensemble_not_worse_than_worst_member = false;
    }

    for (std::size_t c = 0; c <= k; ++c) {
      table.window_mean[static_cast<std::size_t>(w)].push_back(
          window_sum[static_cast<std::size_t>(w)][c] / static_cast<double>(n_windows));
      region_table.window_mean[static_cast<std::size_t>(w)].push_back(
          window_sum_region[static_cast<std::size_t>(w)][c] / static_cast<double>(n_windows));
    }
  }

  write_weekly_csv(reports / "weekly_rmse.csv", table, table.pooled);
  write_weekly_csv(reports / "weekly_rmse_windowed.csv", table, table.window_mean);
  write_weekly_csv(reports / "region_rmse.csv", region_table, region_table.pooled);
  write_weekly_csv(reports / "region_rmse_windowed.csv", region_table, region_table.window_mean);

  for (int w = 0; w < tau; ++w) {
    std::vector<Eigen::VectorXd> per_point;
    for (std::size_t m = 0; m < k; ++m) per_point.push_back(member_errors[m].per_point_rmse(w));
    per_point.push_back(ensemble_errors.per_point_rmse(w));
    write_histograms(reports, "rmse_histogram_week" + std::to_string(w + 1), table.labels,
                     per_point, 50, nullptr);
  }

  const Eigen::VectorXd epistemic_sd =
      (epi_sum / static_cast<double>(n_windows)).array().sqrt();
  const Eigen::VectorXd aleatoric_sd = ensemble::project_uncertainty_physical(
      modal_var_sum / static_cast<double>(n_windows), basis);
  const Eigen::VectorXd mae = mae_sum / static_cast<double>(n_windows);
  const std::string suffix = "_week" + std::to_string(tau);
  write_field_pgm(reports / ("epistemic" + suffix + ".pgm"), epistemic_sd, mask);
  write_field_pgm(reports / ("aleatoric" + suffix + ".pgm"), aleatoric_sd, mask);
  write_field_pgm(reports / ("mae" + suffix + ".pgm"), mae, mask);
  write_uncertainty_csv(reports / ("uncertainty" + suffix + ".csv"), epistemic_sd, aleatoric_sd,
                        mae, k);

  out.mae_aleatoric_correlation = sst::pearson(mae, aleatoric_sd);
  CsvWriter corr(reports / "correlation.csv", {"pair", "pearson_r"});
  corr.row({"mae_vs_aleatoric", CsvWriter::num(out.mae_aleatoric_correlation)});
  return out;
}

EvaluateOutcome evaluate_reconstruct(const RunConfig& cfg, const TaskData& data,
                                     const std::vector<search::CatalogRecord>& records,
                                     const std::vector<nn::Network>& members,
                                     const std::filesystem::path& reports) {
  (void)cfg;
  const auto& mask = *data.mask;
  const auto& sensors = *data.sensors;
  const Eigen::Index n_points = data.test_ocean.rows();
  const Eigen::Index q = data.test_ocean.cols();
  const std::size_t k = members.size();

  std::vector<sst::PointwiseErrors> member_errors(k, sst::PointwiseErrors(n_points, 1));
  sst::PointwiseErrors ensemble_errors(n_points, 1);
  std::vector<double> member_l2_sum(k, 0.0);
  double ensemble_l2_sum = 0.0;
  Eigen::VectorXd epi_sum = Eigen::VectorXd::Zero(n_points);
  Eigen::VectorXd alea_sum = Eigen::VectorXd::Zero(n_points);
  Eigen::VectorXd mae_sum = Eigen::VectorXd::Zero(n_points);

  Eigen::MatrixXd means(n_points, k);
  for (Eigen::Index t = 0; t < q; ++t) {
    const Eigen::VectorXd truth = data.test_ocean.col(t);
    nn::Sequence input(sensors.count(), 1);
    input.col(0) = sst::observe_flat(sensors, truth);

    Eigen::VectorXd ens_mean = Eigen::VectorXd::Zero(n_points);
    Eigen::VectorXd alea = Eigen::VectorXd::Zero(n_points);
    for (std::size_t m = 0; m < k; ++m) {
      const nn::GaussianPrediction pred = nn::forward_gaussian(members[m], input);
      means.col(static_cast<Eigen::Index>(m)) = pred.mean;
      ens_mean += pred.mean;
      alea += pred.variance;
      member_errors[m].add(0, pred.mean, truth);
      member_l2_sum[m] += sst::relative_l2(pred.mean, truth);
    }
    ens_mean /= static_cast<double>(k);
    alea /= static_cast<double>(k);
    ensemble_errors.add(0, ens_mean, truth);
    ensemble_l2_sum += sst::relative_l2(ens_mean, truth);

    Eigen::VectorXd var = Eigen::VectorXd::Zero(n_points);
    for (std::size_t m = 0; m < k; ++m) {
      var += (means.col(static_cast<Eigen::Index>(m)) - ens_mean).array().square().matrix();
    }
    epi_sum += var / static_cast<double>(k > 1 ? k - 1 : 1);
    alea_sum += alea;
    mae_sum += (ens_mean - truth).array().abs().matrix();
  }

  EvaluateOutcome out;
  out.task = Task::kReconstruct;
  out.ensemble_relative_l2 = ensemble_l2_sum / static_cast<double>(q);
  for (std::size_t m = 0; m < k; ++m) {
    out.member_relative_l2.push_back(member_l2_sum[m] / static_cast<double>(q));
  }
  out.ensemble_not_worse_than_worst_member =
      out.ensemble_relative_l2 <=
      *std::max_element(out.member_relative_l2.begin(), out.member_relative_l2.end());

  std::vector<std::string> labels;
  for (const auto& r : records) labels.push_back(member_label(r));
  labels.push_back("ensemble");
  CsvWriter l2(reports / "relative_l2.csv", {"member", "relative_l2"});
  for (std::size_t m = 0; m < k; ++m) l2.row({labels[m], CsvWriter::num(out.member_relative_l2[m])});
  l2.row({"ensemble", CsvWriter::num(out.ensemble_relative_l2)});

  std::vector<Eigen::VectorXd> per_point;
  for (std::size_t m = 0; m < k; ++m) per_point.push_back(member_errors[m].per_point_rmse(0));
  per_point.push_back(ensemble_errors.per_point_rmse(0));
  write_histograms(reports, "rmse_histogram", labels, per_point, 50,
                   &out.histogram_diff_low_quartile);

  const Eigen::VectorXd epistemic_sd = (epi_sum / static_cast<double>(q)).array().sqrt();
  const Eigen::VectorXd aleatoric_sd = (alea_sum / static_cast<double>(q)).array().sqrt();
  const Eigen::VectorXd mae = mae_sum / static_cast<double>(q);
  write_field_pgm(reports / "epistemic.pgm", epistemic_sd, mask);
  write_field_pgm(reports / "aleatoric.pgm", aleatoric_sd, mask);
  write_field_pgm(reports / "mae.pgm", mae, mask);
  write_uncertainty_csv(reports / "uncertainty.csv", epistemic_sd, aleatoric_sd, mae, k);

  out.mae_aleatoric_correlation = sst::pearson(mae, aleatoric_sd);
  CsvWriter corr(reports / "correlation.csv", {"pair", "pearson_r"});
  corr.row({"mae_vs_aleatoric", CsvWriter::num(out.mae_aleatoric_correlation)});
  return out;
}

EvaluateOutcome evaluate_synthetic(const RunConfig& cfg, const TaskData& data,
                                   const std::vector<nn::Network>& members,
                                   const std::filesystem::path& reports) {
  const double span = cfg.synth_x_max - cfg.synth_x_min;
  const double margin = 0.5 * span;
  const int n_inside = 201;
  const int n_outside_side = 50;

  std::vector<double> xs;
  std::vector<bool> inside;
  for (int i = 0; i < n_outside_side; ++i) {
    xs.push_back(cfg.synth_x_min - margin + margin * i / n_outside_side);
    inside.push_back(false);
  }
  for (int i = 0; i < n_inside; ++i) {
    xs.push_back(cfg.synth_x_min + span * i / (n_inside - 1));
    inside.push_back(true);
  }
  for (int i = 1; i <= n_outside_side; ++i) {
    xs.push_back(cfg.synth_x_max + margin * i / n_outside_side);
    inside.push_back(false);
  }

  Eigen::VectorXd sd_pred_in(n_inside), sd_true_in(n_inside);
  double epi_in_sum = 0.0, epi_out_sum = 0.0;
  int n_in = 0, n_out = 0;

  CsvWriter alea_csv(reports / "aleatoric_profile.csv", {"x", "sd_pred", "sd_true"});
  CsvWriter epi_csv(reports / "epistemic_profile.csv",
                    {"x", "epistemic_var", "epistemic_var_population", "inside_support"});

  for (std::size_t i = 0; i < xs.size(); ++i) {
    nn::Sequence input(1, 1);
    input(0, 0) = xs[i];
    std::vector<nn::GaussianPrediction> preds;
    preds.reserve(members.size());
    for (const auto& net : members) preds.push_back(nn::forward_gaussian(net, input));
    // A single-member manifest degenerates to the population form (zero
    // epistemic spread).
    const auto dec = preds.size() > 1 ? ensemble::decompose_sample(preds)
                                      : ensemble::decompose_population(preds);
    const auto dec_pop = ensemble::decompose_population(preds);
    const double sd_pred = std::sqrt(dec.aleatoric(0));
    const double epi = dec.epistemic(0);

    if (inside[i]) {
      sd_pred_in(n_in) = sd_pred;
      sd_true_in(n_in) = data.synth->true_sd(xs[i]);
      epi_in_sum += epi;
      ++n_in;
      alea_csv.row({CsvWriter::num(xs[i]), CsvWriter::num(sd_pred),
                    CsvWriter::num(data.synth->true_sd(xs[i]))});
    } else {
      epi_out_sum += epi;
      ++n_out;
    }
    epi_csv.row({CsvWriter::num(xs[i]), CsvWriter::num(epi),
                 CsvWriter::num(dec_pop.epistemic(0)), inside[i] ? "1" : "0"});
  }

  EvaluateOutcome out;
  out.task = Task::kSynthetic;
  out.aleatoric_profile_correlation = sst::pearson(sd_pred_in, sd_true_in);
  out.epistemic_inside = epi_in_sum / n_in;
  out.epistemic_outside = epi_out_sum / n_out;

  CsvWriter summary(reports / "uq_summary.csv",
                    {"aleatoric_profile_r", "epistemic_inside", "epistemic_outside"});
  summary.row({CsvWriter::num(out.aleatoric_profile_correlation),
               CsvWriter::num(out.epistemic_inside), CsvWriter::num(out.epistemic_outside)});
  return out;
}

}  // namespace

RunConfig load_run_dir_config(const std::filesystem::path& run_dir) {
  return load_run_config(run_dir / kConfigFile);
}

std::vector<search::CatalogRecord> load_manifest(const std::filesystem::path& run_dir) {
  const std::filesystem::path path = run_dir / kManifestFile;
  if (!std::filesystem::exists(path)) return {};
  std::ifstream is(path);
  if (!is) throw DataError("cannot open ensemble manifest: " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError("bad ensemble manifest: " + std::string(e.what()));
  }
  std::vector<search::CatalogRecord> records;
  for (const auto& m : j.at("members")) {
    search::CatalogRecord r;
    r.id = m.at("id").get<std::uint64_t>();
    r.arch.choices = m.at("arch").get<std::vector<int>>();
    r.hyper.learning_rate = m.at("lr").get<double>();
    r.hyper.batch_size = m.at("batch").get<int>();
    r.hyper.optimizer = nn::optimizer_from_string(m.at("optimizer").get<std::string>());
    r.checkpoint = m.at("checkpoint").get<std::string>();
    r.valid_nll = m.at("valid_nll").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

search::Catalog cmd_search(const RunConfig& cfg, bool force) {
  validate(cfg);
  const std::filesystem::path run_dir = cfg.resolved_run_dir();
  const std::filesystem::path catalog_path = run_dir / kCatalogFile;
  if (std::filesystem::exists(catalog_path) && !force) {
    return search::load_catalog(catalog_path);
  }
  std::filesystem::create_directories(run_dir);
  std::filesystem::create_directories(run_dir / kCheckpointsDir);
  save_run_config(run_dir / kConfigFile, cfg);

  const TaskData data = prepare_task(cfg, run_dir);
  auto space = std::make_shared<const arch::SearchSpace>(build_search_space(cfg, data));
  const search::Evaluator evaluator =
      make_training_evaluator(cfg, space, data.train, data.valid, run_dir);

  const search::Catalog catalog = search::run_search(*space, cfg.hyper, evaluator, cfg.search);
  search::save_catalog(catalog_path, catalog);
  return catalog;
}

std::vector<search::CatalogRecord> cmd_ensemble(const std::filesystem::path& run_dir, int k,
                                                bool force) {
  const std::filesystem::path manifest_path = run_dir / kManifestFile;
  if (std::filesystem::exists(manifest_path) && !force) {
    const auto existing = load_manifest(run_dir);
    if (k > 0 && static_cast<int>(existing.size()) != k) {
      throw ConfigError("ensemble manifest already exists with K = " +
                        std::to_string(existing.size()) + "; use --force to rebuild");
    }
    return existing;
  }
  const search::Catalog catalog = search::load_catalog(run_dir / kCatalogFile);
  const auto records = ensemble::select_top_k(catalog, k);
  write_manifest(manifest_path, records);
  return records;
}

EvaluateOutcome cmd_evaluate(const std::filesystem::path& run_dir, bool force) {
  (void)force;  // evaluation is deterministic; rewriting is idempotent
  const RunConfig cfg = load_run_dir_config(run_dir);
  const auto records = load_manifest(run_dir);
  if (records.empty()) {
    throw ConfigError("no ensemble manifest in " + run_dir.string() + "; run the ensemble step");
  }
  const TaskData data = reload_task(cfg, run_dir);
  const arch::SearchSpace space = build_search_space(cfg, data);
  const std::vector<nn::Network> members = load_members(space, records, run_dir);

  const std::filesystem::path reports = run_dir / kReportsDir;
  std::filesystem::create_directories(reports);

  switch (cfg.task) {
    case Task::kForecast: return evaluate_forecast(cfg, data, records, members, reports);
    case Task::kReconstruct: return evaluate_reconstruct(cfg, data, records, members, reports);
    case Task::kSynthetic: return evaluate_synthetic(cfg, data, members, reports);
  }
  throw ConfigError("unreachable task kind");
}

void cmd_report(const std::filesystem::path& run_dir, bool force, int moving_average_window) {
  (void)force;
  const RunConfig cfg = load_run_dir_config(run_dir);
  const search::Catalog catalog = search::load_catalog(run_dir / kCatalogFile);
  const std::filesystem::path reports = run_dir / kReportsDir;
  std::filesystem::create_directories(reports);

  const auto series = report::convergence_series(catalog, moving_average_window);
  CsvWriter conv(reports / "convergence.csv", {"index", "id", "objective", "moving_average"});
  for (const auto& p : series) {
    conv.row({std::to_string(p.index), std::to_string(p.id), CsvWriter::num(p.objective),
              CsvWriter::num(p.moving_average)});
  }

  const auto spectrum = report::model_spectrum(catalog);
  CsvWriter spec(reports / "spectrum.csv", {"rank", "id", "valid_nll"});
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    spec.row({std::to_string(i + 1), std::to_string(spectrum[i].id),
              CsvWriter::num(spectrum[i].valid_nll)});
  }

  long failed = 0, diverged = 0;
  for (const auto& r : catalog) {
    failed += r.failed;
    diverged += r.diverged;
  }
  CsvWriter summary(reports / "search_summary.csv",
                    {"records", "usable", "failed", "diverged", "population_fill_index",
                     "best_id", "best_valid_nll"});
  const std::uint64_t best_id = spectrum.empty() ? 0 : spectrum.front().id;
  const double best_nll = spectrum.empty() ? 0.0 : spectrum.front().valid_nll;
  summary.row({std::to_string(catalog.size()), std::to_string(series.size()),
               std::to_string(failed), std::to_string(diverged),
               std::to_string(report::population_fill_index(catalog, cfg.search.population_size)),
               std::to_string(best_id), CsvWriter::num(best_nll)});
}

}  // namespace euq::pipeline
