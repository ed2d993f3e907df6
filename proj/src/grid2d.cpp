#include "twri/grid2d.hpp"

#include <cmath>
#include <stdexcept>

namespace twri {

WallKind wall_kind_from_string(const std::string& s) {
  if (s == "none") return WallKind::none;
  if (s == "dielectric") return WallKind::dielectric;
  if (s == "reinforced") return WallKind::reinforced;
  if (s == "airgap") return WallKind::airgap;
  throw std::invalid_argument("unknown wall kind: " + s);
}

std::string to_string(WallKind k) {
  switch (k) {
    case WallKind::none: return "none";
    case WallKind::dielectric: return "dielectric";
    case WallKind::reinforced: return "reinforced";
    case WallKind::airgap: return "airgap";
  }
  return "?";
}

WallSpec wall_spec_from_config(const WallConfig& wc) {
  WallSpec s;
  s.kind = wall_kind_from_string(wc.kind);
  s.x0 = wc.x0;
  s.width = wc.width;
  s.z0 = wc.z0;
  s.thickness = wc.thickness;
  s.eps_r = wc.eps_r;
  s.sigma_c = wc.sigma_c;
  s.rel_std_eps = wc.rel_std_eps;
  s.rel_std_sigma = wc.rel_std_sigma;
  s.rod_radius = wc.rod_radius;
  s.rod_pitch = wc.rod_pitch;
  s.gap_width = wc.gap_width;
  s.gap_pitch = wc.gap_pitch;
  return s;
}

int Grid2D::i_at(double x) const {
  const int i = static_cast<int>(std::lround((x - x_min) / cell));
  if (i < 0 || i >= nx) throw std::out_of_range("x position outside grid");
  return i;
}

int Grid2D::k_at(double z) const {
  const int k = static_cast<int>(std::lround((z - z_min) / cell));
  if (k < 0 || k >= nz) throw std::out_of_range("z position outside grid");
  return k;
}

bool Grid2D::inside(double x, double z) const {
  return x >= x_min && x <= x_min + (nx - 1) * cell && z >= z_min &&
         z <= z_min + (nz - 1) * cell;
}

Grid2D make_grid(const GridConfig& gc) {
  if (gc.cell <= 0.0) throw std::invalid_argument("cell size must be positive");
  Grid2D g;
  g.x_min = gc.x_min;
  g.z_min = gc.z_min;
  g.cell = gc.cell;
  g.nx = static_cast<int>(std::lround((gc.x_max - gc.x_min) / gc.cell)) + 1;
  g.nz = static_cast<int>(std::lround((gc.z_max - gc.z_min) / gc.cell)) + 1;
  if (g.nx < 3 || g.nz < 3) throw std::invalid_argument("grid too small");
  g.pml_cells = gc.pml_cells;
  const std::size_t n = static_cast<std::size_t>(g.nx) * g.nz;
  g.eps_r.assign(n, 1.0);
  g.sigma_c.assign(n, 0.0);
  g.std_eps.assign(n, 0.0);
  g.std_sigma.assign(n, 0.0);
  g.pec.assign(n, 0);
  return g;
}

Grid2D build_wall(const Grid2D& grid, const WallSpec& spec) {
  Grid2D g = grid;
  if (spec.kind == WallKind::none) return g;
  if (spec.eps_r < 1.0) throw std::invalid_argument("wall eps_r must be >= 1");
  if (spec.kind == WallKind::reinforced && spec.rod_pitch < 2.0 * g.cell)
    throw std::invalid_argument("rod spacing below 2 cells");

  const double x1 = spec.x0 + spec.width;
  const double z1 = spec.z0 + spec.thickness;
  const double x_max = g.x_min + (g.nx - 1) * g.cell;
  const double z_max = g.z_min + (g.nz - 1) * g.cell;
  if (spec.x0 < g.x_min - 0.5 * g.cell || x1 > x_max + g.cell ||
      spec.z0 < g.z_min || z1 > z_max)
    throw std::invalid_argument("wall extent outside grid");

  // Half-open [x0, x1) x [z0, z1) so a 2 m x 0.3 m wall at 4 mm cells
  // occupies exactly 500 x 75 nodes.
  const double eps = 1e-9;
  for (int k = 0; k < g.nz; ++k) {
    const double z = g.z_at(k);
    if (z < spec.z0 - eps || z >= z1 - eps) continue;
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x_at(i);
      if (x < spec.x0 - eps || x >= x1 - eps) continue;
      const std::size_t id = g.idx(i, k);
      g.eps_r[id] = spec.eps_r;
      g.sigma_c[id] = spec.sigma_c;
      g.std_eps[id] = spec.rel_std_eps * spec.eps_r;
      g.std_sigma[id] = spec.rel_std_sigma * spec.sigma_c;
    }
  }

  if (spec.kind == WallKind::reinforced) {
    const double zc = spec.z0 + 0.5 * spec.thickness;
    for (double xc = spec.x0 + 0.5 * spec.rod_pitch; xc < x1 - eps;
         xc += spec.rod_pitch) {
      const int i0 = std::max(0, static_cast<int>((xc - spec.rod_radius - g.x_min) / g.cell));
      const int i1 = std::min(g.nx - 1, static_cast<int>((xc + spec.rod_radius - g.x_min) / g.cell) + 1);
      const int k0 = std::max(0, static_cast<int>((zc - spec.rod_radius - g.z_min) / g.cell));
      const int k1 = std::min(g.nz - 1, static_cast<int>((zc + spec.rod_radius - g.z_min) / g.cell) + 1);
      for (int k = k0; k <= k1; ++k)
        for (int i = i0; i <= i1; ++i) {
          const double dx = g.x_at(i) - xc;
          const double dz = g.z_at(k) - zc;
          if (dx * dx + dz * dz <= spec.rod_radius * spec.rod_radius)
            g.pec[g.idx(i, k)] = 1;
        }
    }
  }

  if (spec.kind == WallKind::airgap) {
    // Air cavities pierce the full wall depth, centered within each pitch.
    const double lead = 0.5 * (spec.gap_pitch - spec.gap_width);
    for (double gx = spec.x0 + lead; gx + spec.gap_width <= x1 + eps;
         gx += spec.gap_pitch) {
      for (int k = 0; k < g.nz; ++k) {
        const double z = g.z_at(k);
        if (z < spec.z0 - eps || z >= z1 - eps) continue;
        for (int i = 0; i < g.nx; ++i) {
          const double x = g.x_at(i);
          if (x < gx - eps || x >= gx + spec.gap_width - eps) continue;
          const std::size_t id = g.idx(i, k);
          g.eps_r[id] = 1.0;
          g.sigma_c[id] = 0.0;
          g.std_eps[id] = 0.0;
          g.std_sigma[id] = 0.0;
        }
      }
    }
  }
  return g;
}

}  // namespace twri
