#ifndef TWRI_GRID2D_HPP_
#define TWRI_GRID2D_HPP_

#include <string>
#include <vector>

#include "twri/experiment_config.hpp"
#include "twri/geometry.hpp"

namespace twri {

enum class WallKind { none, dielectric, reinforced, airgap };
WallKind wall_kind_from_string(const std::string& s);
std::string to_string(WallKind k);

struct WallSpec {
  WallKind kind = WallKind::dielectric;
  double x0 = -1.0, width = 2.0;
  double z0 = 1.0, thickness = 0.3;
  double eps_r = 6.0;
  double sigma_c = 0.005;
  double rel_std_eps = 0.1;
  double rel_std_sigma = 0.1;
  double rod_radius = 0.01, rod_pitch = 0.2;
  double gap_width = 0.1, gap_pitch = 0.3;
};
WallSpec wall_spec_from_config(const WallConfig& wc);

/// Node-sampled material maps over the FDTD domain. The E field lives on an
/// (nx x nz) lattice of nodes at (x_min + i*cell, z_min + k*cell); material
/// arrays are indexed node-major as k*nx + i.
struct Grid2D {
  double x_min = -1.0, z_min = 0.0;
  double cell = 0.004;
  int nx = 0, nz = 0;
  int pml_cells = 10;
  std::vector<double> eps_r;      // relative permittivity, >= 1
  std::vector<double> sigma_c;    // conductivity S/m, >= 0
  std::vector<double> std_eps;    // per-node std of eps_r
  std::vector<double> std_sigma;  // per-node std of sigma_c
  std::vector<char> pec;          // 1 where E is forced to 0

  std::size_t idx(int i, int k) const {
    return static_cast<std::size_t>(k) * nx + i;
  }
  double x_at(int i) const { return x_min + i * cell; }
  double z_at(int k) const { return z_min + k * cell; }
  int i_at(double x) const;  // nearest node index, throws if outside
  int k_at(double z) const;
  bool inside(double x, double z) const;
};

Grid2D make_grid(const GridConfig& gc);

/// Stamps wall material (mean and std maps) onto a copy of the grid.
/// Reinforced adds periodic PEC rods; airgap carves eps_r = 1 cavities.
Grid2D build_wall(const Grid2D& grid, const WallSpec& spec);

}  // namespace twri

#endif  // TWRI_GRID2D_HPP_
