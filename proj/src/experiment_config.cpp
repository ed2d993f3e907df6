#include "twri/experiment_config.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace twri {

using nlohmann::json;

namespace {

// Overlays only the keys present in j, so partial configs inherit defaults.
template <typename T>
void get(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void load_section(const json& j, const char* name, GridConfig& g) {
  if (!j.contains(name)) return;
  const json& s = j.at(name);
  get(s, "x_min", g.x_min);
  get(s, "x_max", g.x_max);
  get(s, "z_min", g.z_min);
  get(s, "z_max", g.z_max);
  get(s, "cell", g.cell);
  get(s, "pml_cells", g.pml_cells);
}

void load_section(const json& j, const char* name, WallConfig& w) {
  if (!j.contains(name)) return;
  const json& s = j.at(name);
  get(s, "kind", w.kind);
  get(s, "x0", w.x0);
  get(s, "width", w.width);
  get(s, "z0", w.z0);
  get(s, "thickness", w.thickness);
  get(s, "eps_r", w.eps_r);
  get(s, "sigma_c", w.sigma_c);
  get(s, "rel_std_eps", w.rel_std_eps);
  get(s, "rel_std_sigma", w.rel_std_sigma);
  get(s, "rod_radius", w.rod_radius);
  get(s, "rod_pitch", w.rod_pitch);
  get(s, "gap_width", w.gap_width);
  get(s, "gap_pitch", w.gap_pitch);
}

void load_section(const json& j, const char* name, SourceConfig& s) {
  if (!j.contains(name)) return;
  const json& v = j.at(name);
  get(v, "f_c", s.f_c);
  get(v, "z", s.z);
  get(v, "amplitude", s.amplitude);
  get(v, "ramp_periods", s.ramp_periods);
  get(v, "n_periods", s.n_periods);
  get(v, "settle_periods", s.settle_periods);
  get(v, "record_periods", s.record_periods);
  get(v, "rho_corr", s.rho_corr);
}

void load_section(const json& j, const char* name, RadarConfig& r) {
  if (!j.contains(name)) return;
  const json& s = j.at(name);
  get(s, "elements_x", r.elements_x);
  get(s, "elements_y", r.elements_y);
  get(s, "spacing", r.spacing);
  get(s, "fs", r.fs);
  get(s, "duration", r.duration);
  get(s, "cpi", r.cpi);
  get(s, "raster_az", r.raster_az);
  get(s, "raster_el", r.raster_el);
  get(s, "threshold_db", r.threshold_db);
}

void load_section(const json& j, const char* name, WidebandConfig& w) {
  if (!j.contains(name)) return;
  const json& s = j.at(name);
  get(s, "f_lo", w.f_lo);
  get(s, "f_hi", w.f_hi);
  get(s, "n_freq", w.n_freq);
  get(s, "elements_x", w.elements_x);
  get(s, "elements_y", w.elements_y);
  get(s, "spacing", w.spacing);
  get(s, "raster_az", w.raster_az);
  get(s, "raster_el", w.raster_el);
  get(s, "az_span_deg", w.az_span_deg);
  get(s, "el_span_deg", w.el_span_deg);
  get(s, "spatial_pad", w.spatial_pad);
  get(s, "threshold_db", w.threshold_db);
  get(s, "standoff", w.standoff);
  get(s, "wall", w.wall);
  get(s, "glass_thickness", w.glass_thickness);
  get(s, "glass_eps", w.glass_eps);
  get(s, "glass_sigma", w.glass_sigma);
  get(s, "wood_thickness", w.wood_thickness);
  get(s, "wood_eps", w.wood_eps);
  get(s, "wood_sigma", w.wood_sigma);
  get(s, "eps_jitter", w.eps_jitter);
}

void load_section(const json& j, const char* name, TargetConfig& t) {
  if (!j.contains(name)) return;
  const json& s = j.at(name);
  get(s, "height", t.height);
  get(s, "stride_hz", t.stride_hz);
  get(s, "array_height", t.array_height);
  get(s, "standoff", t.standoff);
  get(s, "freq_jitter", t.freq_jitter);
}

void load_section(const json& j, const char* name, DaeConfig& d) {
  if (!j.contains(name)) return;
  const json& s = j.at(name);
  get(s, "r", d.r);
  get(s, "lambda", d.lambda);
  get(s, "mapping", d.mapping);
  get(s, "max_sweeps", d.max_sweeps);
  get(s, "tol", d.tol);
  get(s, "ridge_scale", d.ridge_scale);
  get(s, "init_seed", d.init_seed);
}

void load_section(const json& j, const char* name, DatasetConfig& d) {
  if (!j.contains(name)) return;
  const json& s = j.at(name);
  get(s, "frames", d.frames);
  get(s, "realizations", d.realizations);
  get(s, "split", d.split);
  get(s, "aspects", d.aspects);
  get(s, "channel_mode", d.channel_mode);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dataset.split <= 0.0 || dataset.split >= 1.0)
    throw std::invalid_argument("dataset.split must lie in (0,1)");
  if (grid.cell <= 0.0 || grid.x_max <= grid.x_min || grid.z_max <= grid.z_min)
    throw std::invalid_argument("grid extents malformed");
  if (source.f_c <= 0.0) throw std::invalid_argument("source.f_c must be positive");
  if (dae.r < 1 || dae.lambda <= 0.0)
    throw std::invalid_argument("dae.r >= 1 and dae.lambda > 0 required");
  if (wall.thickness <= 0.0 || wall.width <= 0.0)
    throw std::invalid_argument("wall dimensions must be positive");
  if (radar.cpi * radar.fs < 8.0)
    throw std::invalid_argument("cpi * fs must be >= 8 samples");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j = json::parse(in);
  ExperimentConfig cfg;
  get(j, "seed", cfg.seed);
  get(j, "out_dir", cfg.out_dir);
  get(j, "threads", cfg.threads);
  load_section(j, "grid", cfg.grid);
  load_section(j, "wall", cfg.wall);
  load_section(j, "source", cfg.source);
  load_section(j, "radar", cfg.radar);
  load_section(j, "wideband", cfg.wideband);
  load_section(j, "target", cfg.target);
  load_section(j, "dae", cfg.dae);
  load_section(j, "dataset", cfg.dataset);
  cfg.validate();
  return cfg;
}

void save_config(const std::string& path, const ExperimentConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["threads"] = cfg.threads;
  j["grid"] = {{"x_min", cfg.grid.x_min},   {"x_max", cfg.grid.x_max},
               {"z_min", cfg.grid.z_min},   {"z_max", cfg.grid.z_max},
               {"cell", cfg.grid.cell},     {"pml_cells", cfg.grid.pml_cells}};
  j["wall"] = {{"kind", cfg.wall.kind},
               {"x0", cfg.wall.x0},
               {"width", cfg.wall.width},
               {"z0", cfg.wall.z0},
               {"thickness", cfg.wall.thickness},
               {"eps_r", cfg.wall.eps_r},
               {"sigma_c", cfg.wall.sigma_c},
               {"rel_std_eps", cfg.wall.rel_std_eps},
               {"rel_std_sigma", cfg.wall.rel_std_sigma},
               {"rod_radius", cfg.wall.rod_radius},
               {"rod_pitch", cfg.wall.rod_pitch},
               {"gap_width", cfg.wall.gap_width},
               {"gap_pitch", cfg.wall.gap_pitch}};
  j["source"] = {{"f_c", cfg.source.f_c},
                 {"z", cfg.source.z},
                 {"amplitude", cfg.source.amplitude},
                 {"ramp_periods", cfg.source.ramp_periods},
                 {"n_periods", cfg.source.n_periods},
                 {"settle_periods", cfg.source.settle_periods},
                 {"record_periods", cfg.source.record_periods},
                 {"rho_corr", cfg.source.rho_corr}};
  j["radar"] = {{"elements_x", cfg.radar.elements_x},
                {"elements_y", cfg.radar.elements_y},
                {"spacing", cfg.radar.spacing},
                {"fs", cfg.radar.fs},
                {"duration", cfg.radar.duration},
                {"cpi", cfg.radar.cpi},
                {"raster_az", cfg.radar.raster_az},
                {"raster_el", cfg.radar.raster_el},
                {"threshold_db", cfg.radar.threshold_db}};
  j["wideband"] = {{"f_lo", cfg.wideband.f_lo},
                   {"f_hi", cfg.wideband.f_hi},
                   {"n_freq", cfg.wideband.n_freq},
                   {"elements_x", cfg.wideband.elements_x},
                   {"elements_y", cfg.wideband.elements_y},
                   {"spacing", cfg.wideband.spacing},
                   {"raster_az", cfg.wideband.raster_az},
                   {"raster_el", cfg.wideband.raster_el},
                   {"az_span_deg", cfg.wideband.az_span_deg},
                   {"el_span_deg", cfg.wideband.el_span_deg},
                   {"spatial_pad", cfg.wideband.spatial_pad},
                   {"threshold_db", cfg.wideband.threshold_db},
                   {"standoff", cfg.wideband.standoff},
                   {"wall", cfg.wideband.wall},
                   {"glass_thickness", cfg.wideband.glass_thickness},
                   {"glass_eps", cfg.wideband.glass_eps},
                   {"glass_sigma", cfg.wideband.glass_sigma},
                   {"wood_thickness", cfg.wideband.wood_thickness},
                   {"wood_eps", cfg.wideband.wood_eps},
                   {"wood_sigma", cfg.wideband.wood_sigma},
                   {"eps_jitter", cfg.wideband.eps_jitter}};
  j["target"] = {{"height", cfg.target.height},
                 {"stride_hz", cfg.target.stride_hz},
                 {"array_height", cfg.target.array_height},
                 {"standoff", cfg.target.standoff},
                 {"freq_jitter", cfg.target.freq_jitter}};
  j["dae"] = {{"r", cfg.dae.r},           {"lambda", cfg.dae.lambda},
              {"mapping", cfg.dae.mapping}, {"max_sweeps", cfg.dae.max_sweeps},
              {"tol", cfg.dae.tol},       {"ridge_scale", cfg.dae.ridge_scale},
              {"init_seed", cfg.dae.init_seed}};
  j["dataset"] = {{"frames", cfg.dataset.frames},
                  {"realizations", cfg.dataset.realizations},
                  {"split", cfg.dataset.split},
                  {"aspects", cfg.dataset.aspects},
                  {"channel_mode", cfg.dataset.channel_mode}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config " + path);
  out << j.dump(1) << "\n";
}

}  // namespace twri
