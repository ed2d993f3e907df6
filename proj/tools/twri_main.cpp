#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twri/harness.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  int frames = 0;
  std::vector<double> aspects;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config, "JSON experiment config")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "master RNG seed")
      ->each([&c](const std::string&) { c.seed_set = true; });
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--frames", c.frames, "frames (CPIs) per realization");
  cmd->add_option("--aspect", c.aspects, "walking aspect angles in degrees");
}

twri::ExperimentConfig resolve_config(const CommonOpts& c) {
  twri::ExperimentConfig cfg;
  if (!c.config.empty()) cfg = twri::load_config(c.config);
  if (c.seed_set) cfg.seed = c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.frames > 0) cfg.dataset.frames = c.frames;
  if (!c.aspects.empty()) cfg.dataset.aspects = c.aspects;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Through-wall radar imaging with denoising autoencoders"};
  app.require_subcommand(1);

  CommonOpts c_chan, c_synth, c_train, c_eval, c_sweep;
  std::string wall = "dielectric";
  std::string scenario = "same-wall";
  std::string channel_dir, data_dir, model_dir, in_path, out_path, report_in,
      report_out;
  int threads = 0, oracle_runs = 0;
  bool no_normalize = false;
  std::vector<int> r_list;
  std::vector<std::string> mappings;

  CLI::App* chan = app.add_subcommand(
      "channel", "simulate the through-wall channel for one wall type");
  add_common(chan, c_chan);
  chan->add_option("--wall", wall, "wall type")
      ->check(CLI::IsMember(
          {"dielectric", "reinforced", "airgap", "glass", "wood", "none"}));
  chan->add_option("--threads", threads, "worker threads (0 = hardware)");
  chan->add_option("--oracle-runs", oracle_runs,
                   "run the Monte-Carlo validation ensemble instead");

  CLI::App* synth = app.add_subcommand(
      "synth", "synthesize a paired clean/corrupt image dataset");
  add_common(synth, c_synth);
  synth->add_option("--scenario", scenario, "dataset scenario")
      ->check(CLI::IsMember(
          {"same-wall", "mixed-wall", "aspect-pooled", "wideband"}));
  synth->add_option("--wall", wall, "wall type")
      ->check(CLI::IsMember(
          {"dielectric", "reinforced", "airgap", "glass", "wood", "none"}));
  synth->add_option("--channels", channel_dir,
                    "channel directory (from `channel`)");

  CLI::App* train = app.add_subcommand("train", "train the DAE on a dataset");
  add_common(train, c_train);
  train->add_option("--data", data_dir, "dataset directory")->required();

  CLI::App* eval = app.add_subcommand("eval", "evaluate BD/AD metrics");
  add_common(eval, c_eval);
  eval->add_option("--data", data_dir, "dataset directory")->required();
  eval->add_option("--model", model_dir, "model directory")->required();
  eval->add_flag("--no-normalize", no_normalize,
                 "skip peak renormalization of denoised images");

  CLI::App* denoise = app.add_subcommand("denoise", "denoise one image file");
  denoise->add_option("--model", model_dir, "model directory")->required();
  denoise->add_option("--in", in_path, "input .arr image")->required();
  denoise->add_option("--out-file", out_path, "output .arr image")->required();

  CLI::App* sweep =
      app.add_subcommand("sweep", "hidden-node / mapping performance sweep");
  add_common(sweep, c_sweep);
  sweep->add_option("--data", data_dir, "dataset directory")->required();
  sweep->add_option("--r", r_list, "hidden-node counts");
  sweep->add_option("--mapping", mappings, "mappings to sweep");

  CLI::App* report =
      app.add_subcommand("report", "aggregate metric CSVs into a summary");
  report->add_option("--in", report_in, "directory tree with metrics.csv files")
      ->required();
  report->add_option("--out", report_out, "summary output directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (chan->parsed()) {
      const twri::ExperimentConfig cfg = resolve_config(c_chan);
      if (oracle_runs > 0) {
        const twri::McOracleReport rep =
            twri::cmd_channel_oracle(cfg, wall, oracle_runs);
        std::cout << "correlation=" << rep.correlation
                  << " ratio_min=" << rep.ratio_min
                  << " ratio_max=" << rep.ratio_max << "\n";
      } else {
        std::cout << twri::cmd_channel(cfg, wall, cfg.out_dir, threads) << "\n";
      }
    } else if (synth->parsed()) {
      const twri::ExperimentConfig cfg = resolve_config(c_synth);
      std::string chans = channel_dir;
      if (chans.empty())
        chans = scenario == "mixed-wall" ? cfg.out_dir + "/channels"
                                         : cfg.out_dir + "/channels/" + wall;
      std::cout << twri::cmd_synth(cfg, scenario, wall, chans, cfg.out_dir)
                << "\n";
    } else if (train->parsed()) {
      const twri::ExperimentConfig cfg = resolve_config(c_train);
      std::cout << twri::cmd_train(cfg, data_dir, cfg.out_dir) << "\n";
    } else if (eval->parsed()) {
      const twri::ExperimentConfig cfg = resolve_config(c_eval);
      const twri::ExperimentReport rep = twri::cmd_eval(
          cfg, data_dir, model_dir, cfg.out_dir + "/eval", !no_normalize);
      std::cout << "scenario=" << rep.scenario << " n=" << rep.n_test_pairs
                << " bd_ssim=" << rep.bd_ssim << " ad_ssim=" << rep.ad_ssim
                << " bd_nmse=" << rep.bd_nmse << " ad_nmse=" << rep.ad_nmse
                << "\n";
    } else if (denoise->parsed()) {
      twri::cmd_denoise(model_dir, in_path, out_path);
      std::cout << out_path << "\n";
    } else if (sweep->parsed()) {
      const twri::ExperimentConfig cfg = resolve_config(c_sweep);
      if (r_list.empty()) r_list = {50, 100, 250, 500, 1000, 1500};
      if (mappings.empty()) mappings = {"linear"};
      const auto points = twri::cmd_sweep(cfg, data_dir, cfg.out_dir + "/sweep",
                                          r_list, mappings);
      for (const twri::SweepPoint& p : points)
        std::cout << "r=" << p.r << " mapping=" << p.mapping
                  << " ad_ssim=" << p.ad_ssim << " ad_nmse=" << p.ad_nmse
                  << " train_s=" << p.train_seconds
                  << " denoise_ms=" << p.denoise_ms << "\n";
    } else if (report->parsed()) {
      twri::cmd_report(report_in, report_out);
      std::cout << report_out << "/summary.csv\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
