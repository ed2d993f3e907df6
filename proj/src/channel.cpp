#include "twri/channel.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "twri/array_file.hpp"

namespace twri {

namespace fs_ns = std::filesystem;
using nlohmann::json;

std::vector<Vec2> TransferGrid::points() const {
  std::vector<Vec2> out;
  out.reserve(n_points());
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix) out.push_back(point(ix, iz));
  return out;
}

bool TransferGrid::contains(double x, double z) const {
  return x >= x0 && x <= x0 + (nx - 1) * dx && z >= z0 && z <= z0 + (nz - 1) * dz;
}

namespace {

cd window_dft(const std::vector<double>& series, std::size_t begin,
              std::size_t count, double t0, double dt, double f_c) {
  const double omega = 2.0 * kPi * f_c;
  cd acc = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    const double t = t0 + static_cast<double>(begin + s) * dt;
    acc += series[begin + s] * std::polar(1.0, -omega * t);
  }
  return acc * (2.0 / static_cast<double>(count));
}

}  // namespace

double numeric_wavenumber(double omega, double dt, double cell, double dirx,
                          double dirz) {
  const double norm = std::sqrt(dirx * dirx + dirz * dirz);
  if (norm <= 0.0) throw std::invalid_argument("zero direction vector");
  const double a1 = cell * dirx / norm / 2.0;
  const double a2 = cell * dirz / norm / 2.0;
  const double rhs = std::pow(cell / (kSpeedOfLight * dt), 2) *
                     std::pow(std::sin(0.5 * omega * dt), 2);
  double k = omega / kSpeedOfLight;
  for (int it = 0; it < 50; ++it) {
    const double s1 = std::sin(a1 * k), s2 = std::sin(a2 * k);
    const double f = s1 * s1 + s2 * s2 - rhs;
    const double fp = a1 * std::sin(2.0 * a1 * k) + a2 * std::sin(2.0 * a2 * k);
    if (std::abs(fp) < 1e-30) break;
    const double next = k - f / fp;
    if (std::abs(next - k) < 1e-12 * k) return next;
    k = next;
  }
  return k;
}

WallTransfer extract_transfer(const FieldStats& fs, double f_c,
                              const ExtractOptions& opt) {
  if (fs.mu.empty() || fs.mu[0].empty())
    throw std::invalid_argument("empty field statistics");
  const std::size_t n = fs.mu[0].size();
  const double periods = static_cast<double>(n) * fs.dt * f_c;
  if (std::abs(periods - std::round(periods)) > 1e-6)
    throw std::invalid_argument("record window is not an integer period count");
  const int whole = static_cast<int>(std::round(periods));
  if (whole < 2) throw std::invalid_argument("record window under 2 periods");

  const auto spp = static_cast<std::size_t>(std::round(n / periods));
  const std::size_t half = static_cast<std::size_t>(whole / 2) * spp;

  WallTransfer wt;
  wt.f_c = f_c;
  wt.points = fs.probes;
  wt.sources = {fs.source};
  wt.mean.resize(1);
  wt.stdev.resize(1);
  wt.mean[0].resize(fs.probes.size());
  wt.stdev[0].resize(fs.probes.size());

  // Settledness gate: the phasor from the first and last half windows must
  // agree in amplitude. Probes far below the grid-wide peak are exempt.
  std::vector<double> amp(fs.probes.size());
  double peak = 0.0;
  for (std::size_t p = 0; p < fs.probes.size(); ++p) {
    amp[p] = std::abs(window_dft(fs.mu[p], 0, n, fs.t0, fs.dt, f_c));
    peak = std::max(peak, amp[p]);
  }
  for (std::size_t p = 0; p < fs.probes.size(); ++p) {
    const double a1 = std::abs(window_dft(fs.mu[p], 0, half, fs.t0, fs.dt, f_c));
    const double a2 = std::abs(
        window_dft(fs.mu[p], n - half, half, fs.t0, fs.dt, f_c));
    const double ref = std::max(a1, a2);
    if (ref > 1e-6 * peak && std::abs(a1 - a2) > opt.drift_tolerance * ref)
      throw std::runtime_error(
          "transient not settled at probe " + std::to_string(p) +
          ": window-half amplitudes " + std::to_string(a1) + " / " +
          std::to_string(a2));
  }

  const double omega = 2.0 * kPi * f_c;
  const double k0 = omega / kSpeedOfLight;
  for (std::size_t p = 0; p < fs.probes.size(); ++p) {
    cd h = window_dft(fs.mu[p], 0, n, fs.t0, fs.dt, f_c);
    double s = std::abs(window_dft(fs.d_signed[p], 0, n, fs.t0, fs.dt, f_c));
    if (opt.compensate_dispersion && fs.cell > 0.0) {
      const Vec2 d = fs.probes[p] - fs.source;
      const double dist = d.norm();
      if (dist > 0.0) {
        const double kn =
            numeric_wavenumber(omega, fs.dt, fs.cell, d.x, d.z);
        h *= std::polar(1.0, (kn - k0) * dist);
      }
    }
    wt.mean[0][p] = h;
    wt.stdev[0][p] = s;
  }
  return wt;
}

WallTransfer extract_transfer(const FieldStats& fs, double f_c,
                              const TransferGrid& grid,
                              const ExtractOptions& opt) {
  WallTransfer wt = extract_transfer(fs, f_c, opt);
  if (wt.points.size() != grid.n_points())
    throw std::invalid_argument("probe count does not match transfer grid");
  for (int iz = 0; iz < grid.nz; ++iz)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Vec2 want = grid.point(ix, iz);
      const Vec2 got = wt.points[grid.idx(ix, iz)];
      if (std::abs(want.x - got.x) > 1e-9 || std::abs(want.z - got.z) > 1e-9)
        throw std::invalid_argument("probes are not on the transfer lattice");
    }
  wt.structured = true;
  wt.grid = grid;
  return wt;
}

WallTransfer merge_transfers(const std::vector<WallTransfer>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  WallTransfer out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const WallTransfer& p = parts[i];
    if (p.f_c != out.f_c || p.points.size() != out.points.size())
      throw std::invalid_argument("transfer parts disagree in layout");
    out.sources.insert(out.sources.end(), p.sources.begin(), p.sources.end());
    out.mean.insert(out.mean.end(), p.mean.begin(), p.mean.end());
    out.stdev.insert(out.stdev.end(), p.stdev.begin(), p.stdev.end());
  }
  return out;
}

ChannelRealization sample_realization(const WallTransfer& wt, std::mt19937_64& rng,
                                      SampleMode mode) {
  ChannelRealization cr;
  cr.mode = mode == SampleMode::coherent ? "coherent" : "iid";
  cr.f_c = wt.f_c;
  cr.structured = wt.structured;
  cr.grid = wt.grid;
  cr.sources = wt.sources;
  cr.h.resize(wt.mean.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < wt.mean.size(); ++s) {
    cr.h[s].resize(wt.mean[s].size());
    for (std::size_t p = 0; p < wt.mean[s].size(); ++p) {
      const cd m = wt.mean[s][p];
      const double sd = wt.stdev[s][p];
      if (mode == SampleMode::iid) {
        const double g1 = normal(rng), g2 = normal(rng);
        cr.h[s][p] = m + cd(g1, g2) * (sd / std::sqrt(2.0));
      } else {
        const double g = normal(rng);
        if (std::abs(m) > 0.0) {
          cr.h[s][p] = m * (1.0 + g * sd / std::abs(m));
        } else {
          const double g2 = normal(rng);
          cr.h[s][p] = cd(g, g2) * (sd / std::sqrt(2.0));
        }
      }
    }
  }
  return cr;
}

cd free_space_transfer(Vec2 src, Vec2 pt, double k, int dims) {
  const double d = (pt - src).norm();
  if (d <= 0.0) throw std::invalid_argument("coincident source and point");
  if (dims == 2) {
    const double x = k * d;
    return cd(0.0, -0.25) * cd(std::cyl_bessel_j(0, x), -std::cyl_neumann(0, x));
  }
  if (dims == 3) return std::polar(1.0 / (4.0 * kPi * d), -k * d);
  throw std::invalid_argument("dims must be 2 or 3");
}

cd free_space_transfer(Vec3 src, Vec3 pt, double k, int dims) {
  if (dims == 2) return free_space_transfer(project2d(src), project2d(pt), k, 2);
  const double d = (pt - src).norm();
  if (d <= 0.0) throw std::invalid_argument("coincident source and point");
  return std::polar(1.0 / (4.0 * kPi * d), -k * d);
}

cd scale_factor_2d_to_3d(double d2, double d3, double k) {
  if (d2 <= 0.0) throw std::invalid_argument("in-plane distance must be > 0");
  const double mag = std::sqrt(d2) / d3 * std::sqrt(k / (2.0 * kPi));
  return std::polar(mag, kPi / 4.0 - k * (d3 - d2));
}

cd scale_2d_to_3d(cd h2d, Vec3 src, Vec3 pt, double k) {
  const double d2 = (project2d(pt) - project2d(src)).norm();
  const double d3 = (pt - src).norm();
  return h2d * scale_factor_2d_to_3d(d2, d3, k);
}

void save_wall_transfer(const std::string& dir, const WallTransfer& wt) {
  fs_ns::create_directories(dir);
  const auto n_src = static_cast<std::int64_t>(wt.sources.size());
  const auto n_pts = static_cast<std::int64_t>(wt.points.size());
  std::vector<cd> mean_flat;
  std::vector<double> std_flat;
  mean_flat.reserve(wt.mean.size() * wt.points.size());
  for (const auto& row : wt.mean) mean_flat.insert(mean_flat.end(), row.begin(), row.end());
  for (const auto& row : wt.stdev) std_flat.insert(std_flat.end(), row.begin(), row.end());
  write_array(dir + "/mean.arr", {n_src, n_pts}, mean_flat, "H_wall mean");
  write_array(dir + "/std.arr", {n_src, n_pts}, std_flat, "H_wall std");
  std::vector<double> pts_flat;
  for (const Vec2& p : wt.points) {
    pts_flat.push_back(p.x);
    pts_flat.push_back(p.z);
  }
  write_array(dir + "/points.arr", {n_pts, 2}, pts_flat, "field points");

  json meta;
  meta["f_c"] = wt.f_c;
  meta["structured"] = wt.structured;
  meta["grid"] = {{"x0", wt.grid.x0}, {"z0", wt.grid.z0}, {"dx", wt.grid.dx},
                  {"dz", wt.grid.dz}, {"nx", wt.grid.nx}, {"nz", wt.grid.nz}};
  json src = json::array();
  for (const Vec2& s : wt.sources) src.push_back({s.x, s.z});
  meta["sources"] = src;
  std::ofstream out(dir + "/meta.json");
  if (!out) throw std::runtime_error("cannot write " + dir + "/meta.json");
  out << meta.dump(1) << "\n";
}

WallTransfer load_wall_transfer(const std::string& dir) {
  std::ifstream in(dir + "/meta.json");
  if (!in) throw std::runtime_error("no wall transfer under " + dir);
  json meta = json::parse(in);
  WallTransfer wt;
  wt.f_c = meta.at("f_c").get<double>();
  wt.structured = meta.value("structured", false);
  const json& g = meta.at("grid");
  wt.grid.x0 = g.at("x0");
  wt.grid.z0 = g.at("z0");
  wt.grid.dx = g.at("dx");
  wt.grid.dz = g.at("dz");
  wt.grid.nx = g.at("nx");
  wt.grid.nz = g.at("nz");
  for (const auto& s : meta.at("sources"))
    wt.sources.push_back({s.at(0).get<double>(), s.at(1).get<double>()});

  const ArrayData mean = read_array(dir + "/mean.arr");
  const ArrayData stdev = read_array(dir + "/std.arr");
  const ArrayData pts = read_array(dir + "/points.arr");
  if (mean.shape.size() != 2 || mean.dtype != Dtype::c128 ||
      stdev.shape != mean.shape || stdev.dtype != Dtype::f64)
    throw std::runtime_error(dir + ": malformed transfer arrays");
  const auto n_src = static_cast<std::size_t>(mean.shape[0]);
  const auto n_pts = static_cast<std::size_t>(mean.shape[1]);
  if (n_src != wt.sources.size())
    throw std::runtime_error(dir + ": source count mismatch");
  for (std::size_t p = 0; p < n_pts; ++p)
    wt.points.push_back({pts.reals[2 * p], pts.reals[2 * p + 1]});
  wt.mean.resize(n_src);
  wt.stdev.resize(n_src);
  for (std::size_t s = 0; s < n_src; ++s) {
    wt.mean[s].assign(mean.cplx.begin() + s * n_pts,
                      mean.cplx.begin() + (s + 1) * n_pts);
    wt.stdev[s].assign(stdev.reals.begin() + s * n_pts,
                       stdev.reals.begin() + (s + 1) * n_pts);
  }
  return wt;
}

}  // namespace twri
