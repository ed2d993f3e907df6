#ifndef TWRI_EXPERIMENT_CONFIG_HPP_
#define TWRI_EXPERIMENT_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace twri {

struct GridConfig {
  double x_min = -1.0, x_max = 1.0;
  double z_min = 0.0, z_max = 4.0;
  double cell = 0.004;  // lambda/10 at 7.5 GHz
  int pml_cells = 10;
};

struct WallConfig {
  std::string kind = "dielectric";  // dielectric | reinforced | airgap | none
  double x0 = -1.0, width = 2.0;
  double z0 = 1.0, thickness = 0.3;
  double eps_r = 6.0;
  double sigma_c = 0.005;     // calibrated for ~12 dB two-way wall loss
  double rel_std_eps = 0.1;
  double rel_std_sigma = 0.1;
  double rod_radius = 0.01, rod_pitch = 0.2;   // reinforced
  double gap_width = 0.1, gap_pitch = 0.3;     // airgap
};

struct SourceConfig {
  double f_c = 7.5e9;
  double z = 0.1;             // source line below the wall
  double amplitude = 1.0;
  int ramp_periods = 5;
  int n_periods = 0;          // <= 0: derived from probe distances
  int settle_periods = 60;
  int record_periods = 16;
  double rho_corr = 1.0;
};

struct RadarConfig {
  int elements_x = 10, elements_y = 10;
  double spacing = 0.02;      // lambda/2, snapped to the FDTD grid
  double fs = 1000.0;
  double duration = 0.8;
  double cpi = 0.1;
  int raster_az = 92, raster_el = 92;
  double threshold_db = 6.0;  // per-Doppler-bin peak threshold
};

struct WidebandConfig {
  double f_lo = 3.3e9, f_hi = 10.3e9;
  int n_freq = 256;
  int elements_x = 4, elements_y = 4;
  double spacing = 0.022;     // lambda/2 at band center 6.8 GHz
  int raster_az = 91, raster_el = 37;
  double az_span_deg = 45.0, el_span_deg = 22.5;
  int spatial_pad = 64;
  double threshold_db = 6.0;
  double standoff = 2.0;
  std::string wall = "glass";  // glass | wood | mixed | none
  double glass_thickness = 0.02, glass_eps = 6.0, glass_sigma = 0.005;
  double wood_thickness = 0.03, wood_eps = 2.5, wood_sigma = 0.01;
  double eps_jitter = 0.1;     // per-realization relative jitter on slab eps_r
};

struct TargetConfig {
  double height = 1.75;
  double stride_hz = 1.25;
  double array_height = 1.0;   // height of the array center above ground
  double standoff = 2.5;       // torso range for the walking scenes
  double freq_jitter = 0.02;   // per-stride relative stride-rate jitter
};

struct DaeConfig {
  int r = 500;
  double lambda = 1.0;
  std::string mapping = "linear";
  int max_sweeps = 200;
  double tol = 1e-6;
  double ridge_scale = 1e-8;
  std::uint64_t init_seed = 7;
};

struct DatasetConfig {
  int frames = 10;
  int realizations = 20;
  double split = 0.8;
  std::vector<double> aspects = {0.0};
  std::string channel_mode = "coherent";  // coherent | iid
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 0;  // 0: hardware concurrency
  GridConfig grid;
  WallConfig wall;
  SourceConfig source;
  RadarConfig radar;
  WidebandConfig wideband;
  TargetConfig target;
  DaeConfig dae;
  DatasetConfig dataset;

  void validate() const;  // throws on out-of-range fields
};

ExperimentConfig load_config(const std::string& path);
void save_config(const std::string& path, const ExperimentConfig& cfg);

}  // namespace twri

#endif  // TWRI_EXPERIMENT_CONFIG_HPP_
