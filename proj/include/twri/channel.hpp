#ifndef TWRI_CHANNEL_HPP_
#define TWRI_CHANNEL_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "twri/geometry.hpp"
#include "twri/sfdtd.hpp"

namespace twri {

/// Regular field-point lattice covering the target zone.
struct TransferGrid {
  double x0 = -0.8, z0 = 1.5;
  double dx = 0.02, dz = 0.02;
  int nx = 81, nz = 101;

  std::size_t n_points() const { return static_cast<std::size_t>(nx) * nz; }
  Vec2 point(int ix, int iz) const { return {x0 + ix * dx, z0 + iz * dz}; }
  std::size_t idx(int ix, int iz) const {
    return static_cast<std::size_t>(iz) * nx + ix;
  }
  std::vector<Vec2> points() const;  // iz-major, matching idx()
  bool contains(double x, double z) const;
};

/// Complex transfer-function statistics at the carrier per (source, point).
/// `structured` marks that points follow the TransferGrid lattice (required
/// for interpolation during synthesis).
struct WallTransfer {
  double f_c = 7.5e9;
  bool structured = false;
  TransferGrid grid;
  std::vector<Vec2> points;
  std::vector<Vec2> sources;               // in-plane source positions
  std::vector<std::vector<cd>> mean;       // [source][point]
  std::vector<std::vector<double>> stdev;  // [source][point], >= 0
};

struct ChannelRealization {
  int eta = 0;
  std::string mode;  // coherent | iid
  double f_c = 7.5e9;
  bool structured = false;
  TransferGrid grid;
  std::vector<Vec2> sources;
  std::vector<std::vector<cd>> h;  // [source][point]
};

struct ExtractOptions {
  bool compensate_dispersion = true;
  double drift_tolerance = 0.01;  // relative amplitude drift across halves
};

/// Single-frequency DFT of the recorded window (integer source periods) for
/// one source run; mean phasor from mu, std magnitude from the signed
/// perturbation series. Throws if the window does not span an integer number
/// of periods or the amplitude drift between window halves exceeds the
/// tolerance. The grid overload additionally checks the probe lattice and
/// marks the result structured.
WallTransfer extract_transfer(const FieldStats& fs, double f_c,
                              const ExtractOptions& opt = {});
WallTransfer extract_transfer(const FieldStats& fs, double f_c,
                              const TransferGrid& grid,
                              const ExtractOptions& opt = {});

/// Concatenates single-source transfers sharing carrier and point layout.
WallTransfer merge_transfers(const std::vector<WallTransfer>& parts);

enum class SampleMode { coherent, iid };

ChannelRealization sample_realization(const WallTransfer& wt, std::mt19937_64& rng,
                                      SampleMode mode = SampleMode::coherent);

/// 2D: (-j/4) H0^(2)(k d); 3D: e^{-jkd}/(4 pi d). Throws if src == pt.
cd free_space_transfer(Vec2 src, Vec2 pt, double k, int dims);
cd free_space_transfer(Vec3 src, Vec3 pt, double k, int dims);

/// Multiplies a 2D propagation factor by C(d2, d3, k) so an asymptotic 2D
/// Green's function maps onto e^{-jk d3}/(4 pi d3).
cd scale_2d_to_3d(cd h2d, Vec3 src, Vec3 pt, double k);
cd scale_factor_2d_to_3d(double d2, double d3, double k);

/// Numerical wavenumber of the Yee grid at propagation angle (dirx, dirz),
/// from the discrete dispersion relation (Newton iteration).
double numeric_wavenumber(double omega, double dt, double cell, double dirx,
                          double dirz);

void save_wall_transfer(const std::string& dir, const WallTransfer& wt);
WallTransfer load_wall_transfer(const std::string& dir);

}  // namespace twri

#endif  // TWRI_CHANNEL_HPP_
