#ifndef TWRI_SFDTD_HPP_
#define TWRI_SFDTD_HPP_

#include <cstdint>
#include <vector>

#include "twri/grid2d.hpp"

namespace twri {

struct SourceSpec {
  Vec2 position{0.0, 0.1};
  double f_c = 7.5e9;
  double amplitude = 1.0;  // scales the calibrated Green's-function drive
  int ramp_periods = 5;
};

struct SfdtdOptions {
  int n_periods = 0;        // <= 0: derived from probe travel distances
  int settle_periods = 60;
  int record_periods = 16;
  double rho_corr = 1.0;
  bool with_sigma = true;   // propagate the std field
  bool track_energy = false;  // keep previous-step H for energy diagnostics
  double instability_limit = 1e6;
  // Auto-extension of the settle phase (only when n_periods <= 0): the
  // record window is re-taken in whole-period chunks until the half-window
  // amplitude drift falls under the tolerance or the budget runs out.
  double drift_tolerance = 0.01;
  int extend_chunk_periods = 60;
  int max_extra_periods = 600;
};

/// Mean and perturbation field time series at the probe nodes over the
/// recorded steady-state window. `mu` and `d_signed` are probe-major
/// [probe][sample]; sigma_E(t) = |d_signed(t)|.
struct FieldStats {
  std::vector<Vec2> probes;   // snapped to grid nodes
  Vec2 source{0.0, 0.0};      // snapped source position
  double dt = 0.0;
  double t0 = 0.0;            // absolute time of the first recorded sample
  double f_c = 0.0;
  double cell = 0.0;          // FDTD cell, needed for dispersion handling
  int extended_periods = 0;   // extra settle granted by the drift gate
  std::vector<std::vector<double>> mu;
  std::vector<std::vector<double>> d_signed;

  int n_samples() const { return mu.empty() ? 0 : static_cast<int>(mu[0].size()); }
  double sigma(int probe, int sample) const;
  /// RMS of sigma_E over the recorded window, one value per probe.
  std::vector<double> sigma_rms() const;
};

/// Steppable TMz engine (out-of-plane E; in-plane Hx, Hz) with CPML
/// absorbing strips and delta-method propagation of the material-std field.
class SfdtdEngine {
 public:
  SfdtdEngine(const Grid2D& grid, const SourceSpec& src, const SfdtdOptions& opt);

  void step();
  int steps_done() const { return n_; }
  double dt() const { return dt_; }
  int steps_per_period() const { return steps_per_period_; }

  const Grid2D& grid() const { return grid_; }
  const std::vector<double>& e() const { return e_; }
  const std::vector<double>& hx() const { return hx_; }
  const std::vector<double>& hz() const { return hz_; }
  const std::vector<double>& de() const { return de_; }
  std::vector<double>& mutable_e() { return e_; }

  /// Discrete EM energy using the time-staggered magnetic product; exact
  /// invariant for a lossless PEC-bounded grid.
  double energy_with_previous_h() const;

 private:
  void update_h(std::vector<double>& hx, std::vector<double>& hz,
                const std::vector<double>& e, std::vector<double>& psi_hx,
                std::vector<double>& psi_hz);
  void update_e(std::vector<double>& e, const std::vector<double>& hx,
                const std::vector<double>& hz, std::vector<double>& psi_ex,
                std::vector<double>& psi_ez, bool sigma_branch);

  Grid2D grid_;
  SourceSpec src_;
  SfdtdOptions opt_;
  double dt_;
  int steps_per_period_;
  int n_ = 0;
  int src_i_, src_k_;
  double drive_;  // source amplitude calibrated to the 2D Green's function

  std::vector<double> e_, hx_, hz_;
  std::vector<double> de_, dhx_, dhz_;
  std::vector<double> ca_, cb_, dca_, dcb_;
  std::vector<double> hx_prev_, hz_prev_;
  // CPML profiles (per index along each axis) and memory fields
  std::vector<double> be_x_, ae_x_, be_z_, ae_z_;
  std::vector<double> bh_x_, ah_x_, bh_z_, ah_z_;
  std::vector<double> psi_exL_, psi_ezL_;  // for mean fields
  std::vector<double> psi_hxL_, psi_hzL_;
  std::vector<double> psi_dexL_, psi_dezL_;  // for the std branch
  std::vector<double> psi_dhxL_, psi_dhzL_;
};

FieldStats run_sfdtd(const Grid2D& grid, const SourceSpec& src, int n_periods,
                     const std::vector<Vec2>& probes, const SfdtdOptions& opt = {});

enum class McMode { per_wall, per_cell };

/// Brute-force ensemble oracle: samples material maps per run (clamped
/// eps_r >= 1, sigma_c >= 0), runs deterministic FDTD, returns ensemble
/// mean/std packed into FieldStats (d_signed holds the unsigned std).
FieldStats run_monte_carlo(const Grid2D& grid, const SourceSpec& src, int n_runs,
                           std::uint64_t seed, const std::vector<Vec2>& probes,
                           McMode mode = McMode::per_wall,
                           const SfdtdOptions& opt = {});

}  // namespace twri

#endif  // TWRI_SFDTD_HPP_
