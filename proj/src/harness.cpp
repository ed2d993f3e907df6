#include "twri/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "twri/metrics.hpp"
#include "twri/radarsim.hpp"
#include "twri/rng.hpp"
#include "twri/sfdtd.hpp"
#include "twri/target.hpp"
#include "json.hpp"

namespace twri {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, n) on a small worker pool; rethrows the first
/// worker exception.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::min(std::max(threads, 1), std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t wall_stream(const std::string& wall) {
  if (wall == "dielectric") return 0;
  if (wall == "reinforced") return 1;
  if (wall == "airgap") return 2;
  if (wall == "none") return 3;
  if (wall == "glass") return 4;
  if (wall == "wood") return 5;
  throw std::invalid_argument("unknown wall: " + wall);
}

Grid2D walled_grid(const ExperimentConfig& cfg, const std::string& wall) {
  Grid2D grid = make_grid(cfg.grid);
  if (wall == "none") return grid;
  WallConfig wc = cfg.wall;
  wc.kind = wall;
  return build_wall(grid, wall_spec_from_config(wc));
}

std::vector<Vec2> column_sources(const ExperimentConfig& cfg) {
  std::vector<Vec2> out;
  const int nx = cfg.radar.elements_x;
  for (int m = 0; m < nx; ++m)
    out.push_back({(m - 0.5 * (nx - 1)) * cfg.radar.spacing, cfg.source.z});
  return out;
}

SfdtdOptions sfdtd_options(const ExperimentConfig& cfg, bool with_sigma) {
  SfdtdOptions opt;
  opt.n_periods = cfg.source.n_periods;
  opt.settle_periods = cfg.source.settle_periods;
  opt.record_periods = cfg.source.record_periods;
  opt.rho_corr = cfg.source.rho_corr;
  opt.with_sigma = with_sigma;
  return opt;
}

PlanarArray narrowband_array(const ExperimentConfig& cfg) {
  PlanarArray a;
  a.nx = cfg.radar.elements_x;
  a.ny = cfg.radar.elements_y;
  a.spacing = cfg.radar.spacing;
  a.center = {0.0, 0.0, cfg.source.z};
  return a;
}

DopplerImagingParams doppler_params(const ExperimentConfig& cfg) {
  DopplerImagingParams p;
  p.cpi = cfg.radar.cpi;
  p.raster_az = cfg.radar.raster_az;
  p.raster_el = cfg.radar.raster_el;
  p.threshold_db = cfg.radar.threshold_db;
  p.f_c = cfg.source.f_c;
  p.spacing = cfg.radar.spacing;
  return p;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::vector<MetricRow> read_metric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<MetricRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    MetricRow r;
    std::getline(ls, field, ',');
    r.pair_id = std::stoi(field);
    std::getline(ls, r.wall, ',');
    std::getline(ls, r.condition, ',');
    std::getline(ls, field, ',');
    r.nmse = std::stod(field);
    std::getline(ls, field, ',');
    r.ssim = std::stod(field);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

Eigen::MatrixXd images_to_matrix(const std::vector<FrontalImage>& images) {
  if (images.empty()) throw std::invalid_argument("no images to vectorize");
  const int rows = images[0].rows, cols = images[0].cols;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows) * cols, images.size());
  for (std::size_t j = 0; j < images.size(); ++j) {
    if (images[j].rows != rows || images[j].cols != cols)
      throw std::invalid_argument("mixed rasters in image set");
    for (std::size_t i = 0; i < images[j].px.size(); ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          images[j].px[i];
  }
  return m;
}

FrontalImage matrix_column_to_image(const Eigen::MatrixXd& m, int col, int rows,
                                    int cols) {
  if (m.rows() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("matrix rows != raster size");
  if (col < 0 || col >= m.cols()) throw std::out_of_range("column index");
  FrontalImage img = make_image(rows, cols);
  for (std::size_t i = 0; i < img.px.size(); ++i)
    img.px[i] = m(static_cast<Eigen::Index>(i), col);
  return img;
}

void write_metric_csv(const std::string& path,
                      const std::vector<MetricRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << "pair_id,wall,condition,nmse,ssim\n";
  for (const MetricRow& r : rows)
    out << r.pair_id << ',' << r.wall << ',' << r.condition << ','
        << format_double(r.nmse) << ',' << format_double(r.ssim) << '\n';
}

void write_report_json(const std::string& path, const ExperimentReport& rep) {
  json j;
  j["scenario"] = rep.scenario;
  j["n_test_pairs"] = rep.n_test_pairs;
  j["bd_nmse"] = rep.bd_nmse;
  j["bd_ssim"] = rep.bd_ssim;
  j["ad_nmse"] = rep.ad_nmse;
  j["ad_ssim"] = rep.ad_ssim;
  j["train_seconds"] = rep.train_seconds;
  j["denoise_ms_per_image"] = rep.denoise_ms_per_image;
  json rows = json::array();
  for (const MetricRow& r : rep.rows)
    rows.push_back({{"pair_id", r.pair_id},
                    {"wall", r.wall},
                    {"condition", r.condition},
                    {"nmse", r.nmse},
                    {"ssim", r.ssim}});
  j["rows"] = rows;
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << j.dump(2) << "\n";
}

std::string cmd_channel(const ExperimentConfig& cfg, const std::string& wall,
                        const std::string& out_dir, int threads) {
  cfg.validate();
  const Grid2D grid = walled_grid(cfg, wall);
  const TransferGrid tg;
  const std::vector<Vec2> probes = tg.points();
  const std::vector<Vec2> sources = column_sources(cfg);
  const SfdtdOptions opt = sfdtd_options(cfg, true);

  std::vector<WallTransfer> parts(sources.size());
  parallel_for(static_cast<int>(sources.size()),
               resolve_threads(threads > 0 ? threads : cfg.threads), [&](int m) {
                 SourceSpec src;
                 src.position = sources[m];
                 src.f_c = cfg.source.f_c;
                 src.amplitude = cfg.source.amplitude;
                 src.ramp_periods = cfg.source.ramp_periods;
                 const FieldStats stats =
                     run_sfdtd(grid, src, cfg.source.n_periods, probes, opt);
                 parts[m] = extract_transfer(stats, cfg.source.f_c, tg);
               });

  const WallTransfer merged = merge_transfers(parts);
  const std::string dir = out_dir + "/channels/" + wall;
  fs::create_directories(dir);
  save_wall_transfer(dir, merged);
  return dir;
}

McOracleReport cmd_channel_oracle(const ExperimentConfig& cfg,
                                  const std::string& wall, int n_runs) {
  cfg.validate();
  const Grid2D grid = walled_grid(cfg, wall);
  const TransferGrid tg;
  // Decimated transfer lattice, clipped to the configured domain so reduced
  // grids work too; only beyond-wall probes enter the comparison.
  const double margin = cfg.grid.pml_cells * cfg.grid.cell + 0.1;
  const double z_lo =
      std::max(tg.z0, cfg.wall.z0 + cfg.wall.thickness + 0.1);
  std::vector<Vec2> probes;
  for (int iz = 0; iz < tg.nz; iz += 10)
    for (int ix = 0; ix < tg.nx; ix += 10) {
      const Vec2 pt = tg.point(ix, iz);
      if (pt.x < cfg.grid.x_min + margin || pt.x > cfg.grid.x_max - margin)
        continue;
      if (pt.z < z_lo || pt.z > cfg.grid.z_max - margin) continue;
      probes.push_back(pt);
    }
  if (probes.size() < 3)
    throw std::runtime_error("domain too small for the Monte-Carlo oracle");

  SourceSpec src;
  src.position = {0.0, cfg.source.z};
  src.f_c = cfg.source.f_c;
  src.amplitude = cfg.source.amplitude;
  src.ramp_periods = cfg.source.ramp_periods;

  const FieldStats pred =
      run_sfdtd(grid, src, cfg.source.n_periods, probes, sfdtd_options(cfg, true));
  const FieldStats mc =
      run_monte_carlo(grid, src, n_runs, cfg.seed, probes, McMode::per_wall,
                      sfdtd_options(cfg, false));

  const std::vector<double> sp = pred.sigma_rms();
  const std::vector<double> sm = mc.sigma_rms();
  double peak = 0.0;
  for (double v : sm) peak = std::max(peak, v);
  if (peak <= 0.0) throw std::runtime_error("Monte-Carlo std is all zero");

  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  int n = 0;
  McOracleReport rep;
  rep.ratio_min = 1e300;
  rep.ratio_max = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (sm[i] < 1e-3 * peak) continue;
    const double x = sp[i], y = sm[i];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    ++n;
    rep.ratio_min = std::min(rep.ratio_min, x / y);
    rep.ratio_max = std::max(rep.ratio_max, x / y);
  }
  if (n < 3) throw std::runtime_error("too few usable probes for the oracle");
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  if (vx <= 0.0 || vy <= 0.0)
    throw std::runtime_error("degenerate std pattern");
  rep.correlation = cov / std::sqrt(vx * vy);
  return rep;
}

namespace {

struct SynthScene {
  ScattererTrack track;
  PairLabel label;
};

void synth_walking_pairs(const ExperimentConfig& cfg, const std::string& wall,
                         const std::string& channel_dir,
                         const std::vector<double>& aspects, int realizations,
                         Dataset& ds) {
  const WallTransfer wt = load_wall_transfer(channel_dir);
  const PlanarArray array = narrowband_array(cfg);
  const DopplerImagingParams dp = doppler_params(cfg);
  const NarrowbandChannel clean_chan =
      NarrowbandChannel::free_space(cfg.source.f_c);
  const SampleMode mode = cfg.dataset.channel_mode == "iid"
                              ? SampleMode::iid
                              : SampleMode::coherent;

  for (int e = 0; e < realizations; ++e) {
    std::mt19937_64 crng = make_rng(cfg.seed, 0xc4aULL, wall_stream(wall), e);
    ChannelRealization real = sample_realization(wt, crng, mode);
    real.eta = e;
    const NarrowbandChannel wall_chan =
        NarrowbandChannel::from_realization(std::move(real));

    for (std::size_t ai = 0; ai < aspects.size(); ++ai) {
      WalkParams wp;
      wp.height = cfg.target.height;
      wp.stride_hz = cfg.target.stride_hz;
      wp.fs = cfg.radar.fs;
      wp.standoff = cfg.target.standoff;
      wp.array_height = cfg.target.array_height;
      std::mt19937_64 prng = make_rng(cfg.seed, 0x9a17ULL, e, ai);
      std::uniform_real_distribution<double> uphase(0.0, 2.0 * kPi);
      wp.phase = uphase(prng);
      ScattererTrack track =
          walk_frames(wp, cfg.dataset.frames, cfg.radar.cpi,
                      cfg.target.freq_jitter, make_rng(cfg.seed, 0x57ULL, e, ai)());
      if (aspects[ai] != 0.0) track = apply_aspect(track, aspects[ai]);

      const RawCube clean_cube = synth_narrowband(track, array, clean_chan);
      const RawCube wall_cube = synth_narrowband(track, array, wall_chan);
      std::vector<FrontalImage> clean_imgs = doppler_frontal_image(clean_cube, dp);
      std::vector<FrontalImage> wall_imgs = doppler_frontal_image(wall_cube, dp);
      if (clean_imgs.size() != wall_imgs.size())
        throw std::logic_error("clean/corrupt frame count mismatch");
      for (std::size_t f = 0; f < clean_imgs.size(); ++f) {
        PairLabel lb;
        lb.wall = wall;
        lb.aspect_deg = aspects[ai];
        lb.frame = static_cast<int>(f);
        lb.realization = e;
        ds.push(std::move(clean_imgs[f]), std::move(wall_imgs[f]), lb);
      }
    }
  }
}

SlabSpec make_slab(const WidebandConfig& wb, const std::string& kind,
                   double eps_scale) {
  SlabSpec s;
  if (kind == "glass")
    s.layers.push_back(
        {wb.glass_thickness, std::max(1.05, wb.glass_eps * eps_scale),
         wb.glass_sigma});
  else if (kind == "wood")
    s.layers.push_back(
        {wb.wood_thickness, std::max(1.05, wb.wood_eps * eps_scale),
         wb.wood_sigma});
  else
    throw std::invalid_argument("unknown wideband wall: " + kind);
  return s;
}

void synth_wideband_pairs(const ExperimentConfig& cfg, Dataset& ds) {
  const WidebandConfig& wb = cfg.wideband;
  PlanarArray array;
  array.nx = wb.elements_x;
  array.ny = wb.elements_y;
  array.spacing = wb.spacing;
  array.center = {0.0, 0.0, 0.0};

  std::vector<double> freqs(wb.n_freq);
  const double df = (wb.f_hi - wb.f_lo) / (wb.n_freq - 1);
  for (int i = 0; i < wb.n_freq; ++i) freqs[i] = wb.f_lo + i * df;

  WidebandImagingParams ip;
  ip.raster_az = wb.raster_az;
  ip.raster_el = wb.raster_el;
  ip.az_span_deg = wb.az_span_deg;
  ip.el_span_deg = wb.el_span_deg;
  ip.spatial_pad = wb.spatial_pad;
  ip.threshold_db = wb.threshold_db;
  ip.spacing = wb.spacing;

  const std::vector<double> heights = {1.55, 1.65, 1.75, 1.85};
  const std::vector<double> orients = {-60.0, -30.0, 0.0, 30.0, 60.0};
  const int n_jit = std::max(
      1, cfg.dataset.realizations / static_cast<int>(orients.size()));

  for (std::size_t si = 0; si < heights.size(); ++si)
    for (std::size_t oi = 0; oi < orients.size(); ++oi) {
      SubjectParams sp;
      sp.height = heights[si];
      sp.standoff = wb.standoff;
      sp.array_height = cfg.target.array_height;
      const StaticPose pose = static_pose(sp, orients[oi]);
      const RawCube clean_cube =
          synth_wideband(pose, array, freqs, std::nullopt);
      const FrontalImage clean_img = range_frontal_image(clean_cube, ip);

      for (int jit = 0; jit < n_jit; ++jit) {
        std::string kind = wb.wall;
        if (kind == "mixed") kind = jit % 2 == 0 ? "glass" : "wood";
        std::mt19937_64 rng = make_rng(cfg.seed, 0x51abULL, si, oi, jit);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double eps_scale = 1.0 + wb.eps_jitter * normal(rng);
        const SlabSpec slab = make_slab(wb, kind, eps_scale);
        const RawCube wall_cube = synth_wideband(pose, array, freqs, slab);
        FrontalImage wall_img = range_frontal_image(wall_cube, ip);

        PairLabel lb;
        lb.wall = kind;
        lb.aspect_deg = orients[oi];
        lb.frame = static_cast<int>(oi);
        lb.realization = jit;
        lb.subject = static_cast<int>(si);
        ds.push(clean_img, std::move(wall_img), lb);
      }
    }
}

}  // namespace

std::string cmd_synth(const ExperimentConfig& cfg, const std::string& scenario,
                      const std::string& wall, const std::string& channel_dir,
                      const std::string& out_dir) {
  cfg.validate();
  Dataset ds;
  std::string tag = scenario;

  if (scenario == "same-wall") {
    tag += "-" + wall;
    synth_walking_pairs(cfg, wall, channel_dir, cfg.dataset.aspects,
                        cfg.dataset.realizations, ds);
  } else if (scenario == "mixed-wall") {
    const std::vector<std::string> walls = {"dielectric", "reinforced",
                                            "airgap"};
    const int per_wall =
        (cfg.dataset.realizations + static_cast<int>(walls.size()) - 1) /
        static_cast<int>(walls.size());
    for (const std::string& w : walls)
      synth_walking_pairs(cfg, w, channel_dir + "/" + w, cfg.dataset.aspects,
                          per_wall, ds);
  } else if (scenario == "aspect-pooled") {
    tag += "-" + wall;
    std::vector<double> aspects = cfg.dataset.aspects;
    if (aspects.size() < 2) aspects = {0.0, 30.0, 60.0, 150.0, 180.0};
    synth_walking_pairs(cfg, wall, channel_dir, aspects,
                        cfg.dataset.realizations, ds);
  } else if (scenario == "wideband") {
    synth_wideband_pairs(cfg, ds);
  } else {
    throw std::invalid_argument("unknown scenario: " + scenario);
  }

  ds.validate();
  const std::string dir = out_dir + "/data/" + tag;
  fs::create_directories(dir);
  save_dataset(dir, ds);
  return dir;
}

std::string cmd_train(const ExperimentConfig& cfg, const std::string& data_dir,
                      const std::string& out_dir) {
  cfg.validate();
  const Dataset ds = load_dataset(data_dir);
  const auto [train_ds, test_ds] =
      split_dataset(ds, cfg.dataset.split, cfg.seed);
  (void)test_ds;

  TrainConfig tc;
  tc.r = cfg.dae.r;
  tc.lambda = cfg.dae.lambda;
  tc.mapping = mapping_from_string(cfg.dae.mapping);
  tc.max_sweeps = cfg.dae.max_sweeps;
  tc.tol = cfg.dae.tol;
  tc.ridge_scale = cfg.dae.ridge_scale;
  tc.init_seed = cfg.dae.init_seed;

  const Eigen::MatrixXd y = images_to_matrix(train_ds.clean);
  const Eigen::MatrixXd yhat = images_to_matrix(train_ds.corrupt);
  const DaeModel model = train(y, yhat, tc);

  const std::string dir = out_dir + "/model";
  fs::create_directories(dir);
  save_model(dir, model);
  return dir;
}

ExperimentReport cmd_eval(const ExperimentConfig& cfg,
                          const std::string& data_dir,
                          const std::string& model_dir,
                          const std::string& out_dir, bool normalize) {
  cfg.validate();
  const Dataset ds = load_dataset(data_dir);
  const auto [train_ds, test_ds] =
      split_dataset(ds, cfg.dataset.split, cfg.seed);
  (void)train_ds;
  const DaeModel model = load_model(model_dir);

  const Eigen::MatrixXd yhat = images_to_matrix(test_ds.corrupt);
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::MatrixXd yd = denoise(model, yhat, normalize);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  ExperimentReport rep;
  rep.scenario = fs::path(data_dir).filename().string();
  rep.n_test_pairs = static_cast<int>(test_ds.size());
  rep.train_seconds = model.train_seconds;
  rep.denoise_ms_per_image = 1e3 * elapsed / std::max<int>(1, rep.n_test_pairs);

  std::vector<double> bd_n, bd_s, ad_n, ad_s;
  for (std::size_t i = 0; i < test_ds.size(); ++i) {
    const FrontalImage& ref = test_ds.clean[i];
    const FrontalImage denoised = matrix_column_to_image(
        yd, static_cast<int>(i), ref.rows, ref.cols);
    MetricRow bd;
    bd.pair_id = static_cast<int>(i);
    bd.wall = test_ds.labels[i].wall;
    bd.condition = "BD";
    bd.nmse = nmse(ref, test_ds.corrupt[i]);
    bd.ssim = ssim(ref, test_ds.corrupt[i]);
    MetricRow ad = bd;
    ad.condition = "AD";
    ad.nmse = nmse(ref, denoised);
    ad.ssim = ssim(ref, denoised);
    bd_n.push_back(bd.nmse);
    bd_s.push_back(bd.ssim);
    ad_n.push_back(ad.nmse);
    ad_s.push_back(ad.ssim);
    rep.rows.push_back(std::move(bd));
    rep.rows.push_back(std::move(ad));
  }
  rep.bd_nmse = mean_of(bd_n);
  rep.bd_ssim = mean_of(bd_s);
  rep.ad_nmse = mean_of(ad_n);
  rep.ad_ssim = mean_of(ad_s);

  fs::create_directories(out_dir);
  write_metric_csv(out_dir + "/metrics.csv", rep.rows);
  write_report_json(out_dir + "/report.json", rep);
  return rep;
}

void cmd_denoise(const std::string& model_dir, const std::string& in_path,
                 const std::string& out_path) {
  const DaeModel model = load_model(model_dir);
  const FrontalImage img = load_image(in_path);
  if (static_cast<int>(img.size()) != model.n())
    throw std::invalid_argument("image size does not match the model");
  Eigen::MatrixXd yhat(model.n(), 1);
  for (std::size_t i = 0; i < img.px.size(); ++i)
    yhat(static_cast<Eigen::Index>(i), 0) = img.px[i];
  const Eigen::MatrixXd yd = denoise(model, yhat, true);
  FrontalImage out = matrix_column_to_image(yd, 0, img.rows, img.cols);
  out.az_deg = img.az_deg;
  out.el_deg = img.el_deg;
  save_image(out_path, out, "denoised");
}

std::vector<SweepPoint> cmd_sweep(const ExperimentConfig& cfg,
                                  const std::string& data_dir,
                                  const std::string& out_dir,
                                  const std::vector<int>& r_list,
                                  const std::vector<std::string>& mappings) {
  cfg.validate();
  if (r_list.empty() || mappings.empty())
    throw std::invalid_argument("empty sweep grid");
  const Dataset ds = load_dataset(data_dir);
  const auto [train_ds, test_ds] =
      split_dataset(ds, cfg.dataset.split, cfg.seed);
  const Eigen::MatrixXd y = images_to_matrix(train_ds.clean);
  const Eigen::MatrixXd yhat = images_to_matrix(train_ds.corrupt);
  const Eigen::MatrixXd yhat_test = images_to_matrix(test_ds.corrupt);

  std::vector<SweepPoint> points;
  for (const std::string& mapping : mappings)
    for (int r : r_list) {
      TrainConfig tc;
      tc.r = r;
      tc.lambda = cfg.dae.lambda;
      tc.mapping = mapping_from_string(mapping);
      tc.max_sweeps = cfg.dae.max_sweeps;
      tc.tol = cfg.dae.tol;
      tc.ridge_scale = cfg.dae.ridge_scale;
      tc.init_seed = cfg.dae.init_seed;
      const DaeModel model = train(y, yhat, tc);

      const auto t0 = std::chrono::steady_clock::now();
      const Eigen::MatrixXd yd = denoise(model, yhat_test, true);
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();

      SweepPoint pt;
      pt.r = r;
      pt.mapping = mapping;
      pt.train_seconds = model.train_seconds;
      pt.denoise_ms = 1e3 * elapsed / std::max<std::size_t>(1, test_ds.size());
      std::vector<double> nm, sm;
      for (std::size_t i = 0; i < test_ds.size(); ++i) {
        const FrontalImage& ref = test_ds.clean[i];
        const FrontalImage denoised = matrix_column_to_image(
            yd, static_cast<int>(i), ref.rows, ref.cols);
        nm.push_back(nmse(ref, denoised));
        sm.push_back(ssim(ref, denoised));
      }
      pt.ad_nmse = mean_of(nm);
      pt.ad_ssim = mean_of(sm);
      points.push_back(pt);
    }

  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir + "/sweep_ssim.csv");
    if (!out) throw std::runtime_error("cannot write sweep_ssim.csv");
    out << "r,mapping,ad_ssim,ad_nmse\n";
    for (const SweepPoint& p : points)
      out << p.r << ',' << p.mapping << ',' << format_double(p.ad_ssim) << ','
          << format_double(p.ad_nmse) << '\n';
  }
  {
    std::ofstream out(out_dir + "/sweep_timing.csv");
    if (!out) throw std::runtime_error("cannot write sweep_timing.csv");
    out << "r,mapping,train_seconds,denoise_ms_per_image\n";
    for (const SweepPoint& p : points)
      out << p.r << ',' << p.mapping << ',' << format_double(p.train_seconds)
          << ',' << format_double(p.denoise_ms) << '\n';
  }
  return points;
}

void cmd_report(const std::string& in_dir, const std::string& out_dir) {
  struct Agg {
    int n = 0;
    double nmse = 0.0, ssim = 0.0;
  };
  std::map<std::pair<std::string, std::string>, Agg> groups;
  for (const auto& entry : fs::recursive_directory_iterator(in_dir)) {
    if (!entry.is_regular_file() || entry.path().filename() != "metrics.csv")
      continue;
    const std::string scenario =
        fs::relative(entry.path().parent_path(), in_dir).string();
    for (const MetricRow& r : read_metric_csv(entry.path().string())) {
      Agg& a = groups[{scenario, r.condition}];
      ++a.n;
      a.nmse += r.nmse;
      a.ssim += r.ssim;
    }
  }
  if (groups.empty())
    throw std::runtime_error("no metrics.csv found under " + in_dir);

  fs::create_directories(out_dir);
  std::ofstream csv(out_dir + "/summary.csv");
  std::ofstream txt(out_dir + "/summary.txt");
  if (!csv || !txt) throw std::runtime_error("cannot write summary outputs");
  csv << "scenario,condition,n,nmse_mean,ssim_mean\n";
  for (const auto& [key, a] : groups) {
    const double nm = a.nmse / a.n, sm = a.ssim / a.n;
    csv << key.first << ',' << key.second << ',' << a.n << ','
        << format_double(nm) << ',' << format_double(sm) << '\n';
    txt << key.first << " [" << key.second << "] n=" << a.n
        << " nmse=" << format_double(nm) << " ssim=" << format_double(sm)
        << "\n";
  }
}

}  // namespace twri
