#ifndef TWRI_HARNESS_HPP_
#define TWRI_HARNESS_HPP_

#include <string>
#include <vector>

#include "twri/channel.hpp"
#include "twri/dae.hpp"
#include "twri/dataset.hpp"
#include "twri/experiment_config.hpp"

namespace twri {

struct MetricRow {
  int pair_id = 0;
  std::string wall;
  std::string condition;  // BD | AD
  double nmse = 0.0;
  double ssim = 0.0;
};

struct ExperimentReport {
  std::string scenario;
  int n_test_pairs = 0;
  double bd_nmse = 0.0, bd_ssim = 0.0;
  double ad_nmse = 0.0, ad_ssim = 0.0;
  double train_seconds = 0.0;
  double denoise_ms_per_image = 0.0;
  std::vector<MetricRow> rows;
};

void write_metric_csv(const std::string& path, const std::vector<MetricRow>& rows);
void write_report_json(const std::string& path, const ExperimentReport& rep);

/// Runs one sFDTD simulation per array column and persists the merged
/// WallTransfer under out_dir/channels/<wall>. Parallel map over sources.
std::string cmd_channel(const ExperimentConfig& cfg, const std::string& wall,
                        const std::string& out_dir, int threads = 0);

struct McOracleReport {
  double correlation = 0.0;
  double ratio_min = 0.0, ratio_max = 0.0;
};
/// Monte-Carlo validation ensemble against the sFDTD std pattern.
McOracleReport cmd_channel_oracle(const ExperimentConfig& cfg,
                                  const std::string& wall, int n_runs);

/// Synthesizes a paired clean/corrupt dataset for a scenario into
/// out_dir/data/<scenario-tag>; returns the dataset directory.
/// Scenarios: same-wall (uses `wall`), mixed-wall, aspect-pooled, wideband.
std::string cmd_synth(const ExperimentConfig& cfg, const std::string& scenario,
                      const std::string& wall, const std::string& channel_dir,
                      const std::string& out_dir);

/// Trains on the 80% split of the manifest under data_dir; saves the model.
std::string cmd_train(const ExperimentConfig& cfg, const std::string& data_dir,
                      const std::string& out_dir);

/// BD/AD metrics on the test split; writes CSV + JSON report.
ExperimentReport cmd_eval(const ExperimentConfig& cfg, const std::string& data_dir,
                          const std::string& model_dir, const std::string& out_dir,
                          bool normalize = true);

void cmd_denoise(const std::string& model_dir, const std::string& in_path,
                 const std::string& out_path);

struct SweepPoint {
  int r = 0;
  std::string mapping;
  double ad_ssim = 0.0, ad_nmse = 0.0;
  double train_seconds = 0.0, denoise_ms = 0.0;
};
/// Grid over r x mapping; emits SSIM-vs-nodes and timing CSVs.
std::vector<SweepPoint> cmd_sweep(const ExperimentConfig& cfg,
                                  const std::string& data_dir,
                                  const std::string& out_dir,
                                  const std::vector<int>& r_list,
                                  const std::vector<std::string>& mappings);

/// Aggregates metric CSVs under a directory into summary.csv / summary.txt.
void cmd_report(const std::string& in_dir, const std::string& out_dir);

/// Images -> N x M matrix, column j = row-major vectorized image j.
Eigen::MatrixXd images_to_matrix(const std::vector<FrontalImage>& images);
FrontalImage matrix_column_to_image(const Eigen::MatrixXd& m, int col, int rows,
                                    int cols);

}  // namespace twri

#endif  // TWRI_HARNESS_HPP_
