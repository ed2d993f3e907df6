#include "twri/radarsim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "twri/fft.hpp"

namespace twri {

namespace {

double wavenumber(double f) { return 2.0 * kPi * f / kSpeedOfLight; }

cd bilinear(const std::vector<cd>& v, const TransferGrid& g, double fx,
            double fz) {
  int ix = static_cast<int>(std::floor(fx));
  int iz = static_cast<int>(std::floor(fz));
  ix = std::clamp(ix, 0, g.nx - 2);
  iz = std::clamp(iz, 0, g.nz - 2);
  const double wx = fx - ix, wz = fz - iz;
  return (1.0 - wx) * (1.0 - wz) * v[g.idx(ix, iz)] +
         wx * (1.0 - wz) * v[g.idx(ix + 1, iz)] +
         (1.0 - wx) * wz * v[g.idx(ix, iz + 1)] +
         wx * wz * v[g.idx(ix + 1, iz + 1)];
}

void label_sine_axis(std::vector<double>& deg, int n, double u_step) {
  deg.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = (i - n / 2) * u_step;
    deg[i] = rad2deg(std::asin(std::clamp(u, -1.0, 1.0)));
  }
}

}  // namespace

Vec3 PlanarArray::element(int m, int n) const {
  if (m < 0 || m >= nx || n < 0 || n >= ny)
    throw std::out_of_range("array element index");
  return {center.x + (m - 0.5 * (nx - 1)) * spacing,
          center.y + (n - 0.5 * (ny - 1)) * spacing, center.z};
}

NarrowbandChannel NarrowbandChannel::free_space(double f_c) {
  NarrowbandChannel c;
  c.analytic_ = true;
  c.f_c_ = f_c;
  return c;
}

NarrowbandChannel NarrowbandChannel::from_realization(ChannelRealization real) {
  if (!real.structured)
    throw std::invalid_argument("channel realization lacks a structured grid");
  NarrowbandChannel c;
  c.analytic_ = false;
  c.f_c_ = real.f_c;
  c.source_positions = real.sources;
  const double k = wavenumber(real.f_c);
  c.demod_.resize(real.sources.size());
  const std::size_t np = real.grid.n_points();
  for (std::size_t s = 0; s < real.sources.size(); ++s) {
    c.demod_[s].resize(np);
    for (int iz = 0; iz < real.grid.nz; ++iz)
      for (int ix = 0; ix < real.grid.nx; ++ix) {
        const std::size_t p = real.grid.idx(ix, iz);
        const Vec2 pt = real.grid.point(ix, iz);
        const double d2 =
            std::hypot(pt.x - real.sources[s].x, pt.z - real.sources[s].z);
        c.demod_[s][p] = real.h[s][p] * std::polar(1.0, k * d2);
      }
  }
  c.real_ = std::move(real);
  return c;
}

cd NarrowbandChannel::h2d(int m, double x, double z) const {
  const Vec2 src = source_positions.at(m);
  const double k = wavenumber(f_c_);
  if (analytic_) return free_space_transfer(src, Vec2{x, z}, k, 2);
  const TransferGrid& g = real_.grid;
  if (!g.contains(x, z))
    throw std::out_of_range("synthesis point outside sampled channel grid");
  const cd hc = bilinear(demod_[m], g, (x - g.x0) / g.dx, (z - g.z0) / g.dz);
  const double d2 = std::hypot(x - src.x, z - src.z);
  return hc * std::polar(1.0, -k * d2);
}

RawCube synth_narrowband(const ScattererTrack& track, const PlanarArray& array,
                         const NarrowbandChannel& chan) {
  std::vector<Vec2> cols = chan.source_positions;
  if (cols.empty() && chan.analytic())
    for (int m = 0; m < array.nx; ++m)
      cols.push_back({array.column_x(m), array.center.z});
  if (static_cast<int>(cols.size()) != array.nx)
    throw std::invalid_argument("channel source count != array columns");

  NarrowbandChannel local = chan;
  local.source_positions = cols;
  const double k = wavenumber(chan.f_c());

  RawCube cube;
  cube.nx = array.nx;
  cube.ny = array.ny;
  cube.ns = static_cast<int>(track.n_samples());
  cube.fs = track.fs;
  cube.v.assign(static_cast<std::size_t>(cube.nx) * cube.ny * cube.ns, cd{});

  for (int t = 0; t < cube.ns; ++t)
    for (std::size_t b = 0; b < track.n_scatterers(); ++b) {
      const Vec3& p = track.positions[b][t];
      const double amp = std::sqrt(track.reflectivity[b][t]);
      for (int m = 0; m < cube.nx; ++m) {
        const cd h = local.h2d(m, p.x, p.z);
        for (int n = 0; n < cube.ny; ++n) {
          const Vec3 elem{cols[m].x, array.element(m, n).y, cols[m].z};
          const cd one_way = scale_2d_to_3d(h, elem, p, k);
          cube.at(m, n, t) += amp * one_way * one_way;
        }
      }
    }
  return cube;
}

std::vector<FrontalImage> doppler_frontal_image(const RawCube& cube,
                                                const DopplerImagingParams& p) {
  if (cube.fs <= 0.0) throw std::invalid_argument("cube has no sample rate");
  const int n_per = static_cast<int>(std::lround(p.cpi * cube.fs));
  if (n_per < 2 || cube.ns < n_per)
    throw std::invalid_argument("CPI does not fit the recorded samples");
  if (cube.nx > p.raster_az || cube.ny > p.raster_el)
    throw std::invalid_argument("raster smaller than the aperture");
  const int n_cpi = cube.ns / n_per;
  const int na = p.raster_az, ne = p.raster_el;
  const double lambda = kSpeedOfLight / p.f_c;

  std::vector<FrontalImage> out;
  std::vector<cd> buf;
  const std::vector<int> shape{na, ne, n_per};
  for (int ci = 0; ci < n_cpi; ++ci) {
    buf.assign(static_cast<std::size_t>(na) * ne * n_per, cd{});
    for (int m = 0; m < cube.nx; ++m)
      for (int n = 0; n < cube.ny; ++n)
        for (int t = 0; t < n_per; ++t)
          buf[(static_cast<std::size_t>(m) * ne + n) * n_per + t] =
              cube.at(m, n, ci * n_per + t);
    fft::transform(buf, shape, fft::kForward);

    FrontalImage img = make_image(ne, na);
    label_sine_axis(img.az_deg, na, lambda / (2.0 * na * p.spacing));
    label_sine_axis(img.el_deg, ne, lambda / (2.0 * ne * p.spacing));
    for (int q = 0; q < n_per; ++q) {
      if (p.notch_dc && q == 0) continue;
      double peak = 0.0;
      for (int a = 0; a < na; ++a)
        for (int e = 0; e < ne; ++e)
          peak = std::max(
              peak,
              std::abs(buf[(static_cast<std::size_t>(a) * ne + e) * n_per + q]));
      if (peak <= 0.0) continue;
      const double thr = peak * std::pow(10.0, -p.threshold_db / 20.0);
      for (int a = 0; a < na; ++a)
        for (int e = 0; e < ne; ++e) {
          const double mag =
              std::abs(buf[(static_cast<std::size_t>(a) * ne + e) * n_per + q]);
          if (mag >= thr)
            img.at(fft::shift_index(e, ne), fft::shift_index(a, na)) += mag;
        }
    }
    img.normalize_peak();
    out.push_back(std::move(img));
  }
  return out;
}

cd slab_transmission(double f, const SlabSpec& slab, double incidence_rad) {
  if (f <= 0.0) throw std::invalid_argument("frequency must be positive");
  const double omega = 2.0 * kPi * f;
  const double k0 = omega / kSpeedOfLight;
  const double kx = k0 * std::sin(incidence_rad);
  const double kz0 = std::sqrt(std::max(k0 * k0 - kx * kx, 0.0));
  if (kz0 <= 0.0) throw std::invalid_argument("grazing incidence");
  const cd y0{kz0 / (omega * kMu0), 0.0};

  // Characteristic matrix of the stack, TE polarization, e^{+jwt} fields.
  cd m11{1.0, 0.0}, m12{0.0, 0.0}, m21{0.0, 0.0}, m22{1.0, 0.0};
  for (const SlabLayer& l : slab.layers) {
    if (l.thickness < 0.0 || l.eps_r < 1.0 || l.sigma_c < 0.0)
      throw std::invalid_argument("non-physical slab layer");
    const cd eps = cd{l.eps_r, -l.sigma_c / (omega * kEps0)};
    const cd kz = std::sqrt(k0 * k0 * eps - kx * kx);
    const cd y = kz / (omega * kMu0);
    const cd delta = kz * l.thickness;
    const cd c = std::cos(delta);
    const cd s = std::sin(delta);
    const cd a12 = cd{0.0, 1.0} * s / y;
    const cd a21 = cd{0.0, 1.0} * y * s;
    const cd n11 = m11 * c + m12 * a21;
    const cd n12 = m11 * a12 + m12 * c;
    const cd n21 = m21 * c + m22 * a21;
    const cd n22 = m21 * a12 + m22 * c;
    m11 = n11;
    m12 = n12;
    m21 = n21;
    m22 = n22;
  }
  return 2.0 * y0 / (y0 * m11 + y0 * y0 * m12 + m21 + y0 * m22);
}

RawCube synth_wideband(const StaticPose& pose, const PlanarArray& array,
                       const std::vector<double>& freqs,
                       const std::optional<SlabSpec>& slab) {
  if (freqs.size() < 2) throw std::invalid_argument("need a frequency sweep");
  RawCube cube;
  cube.nx = array.nx;
  cube.ny = array.ny;
  cube.ns = static_cast<int>(freqs.size());
  cube.freqs = freqs;
  cube.v.assign(static_cast<std::size_t>(cube.nx) * cube.ny * cube.ns, cd{});

  double slab_depth = 0.0;
  if (slab)
    for (const SlabLayer& l : slab->layers) slab_depth += l.thickness;

  for (std::size_t b = 0; b < pose.positions.size(); ++b) {
    const Vec3& pt = pose.positions[b];
    const double amp = std::sqrt(pose.reflectivity[b]);
    for (int m = 0; m < cube.nx; ++m)
      for (int n = 0; n < cube.ny; ++n) {
        const Vec3 elem = array.element(m, n);
        const Vec3 dvec = pt - elem;
        const double d = dvec.norm();
        if (d <= 0.0) throw std::invalid_argument("scatterer on the array");
        const double incidence =
            std::acos(std::clamp(std::abs(dvec.z) / d, 0.0, 1.0));
        for (int i = 0; i < cube.ns; ++i) {
          const double k = wavenumber(freqs[i]);
          cd tins{1.0, 0.0};
          if (slab) {
            // Insertion coefficient: the slab replaces an equal air path.
            tins = slab_transmission(freqs[i], *slab, incidence) *
                   std::polar(1.0, k * slab_depth);
          }
          const cd g = std::polar(1.0 / (4.0 * kPi * d), -k * d);
          cube.at(m, n, i) += amp * tins * tins * g * g;
        }
      }
  }
  return cube;
}

FrontalImage range_frontal_image(const RawCube& cube,
                                 const WidebandImagingParams& p) {
  if (cube.freqs.size() != static_cast<std::size_t>(cube.ns) || cube.ns < 2)
    throw std::invalid_argument("cube has no frequency axis");
  if (cube.nx > p.spatial_pad || cube.ny > p.spatial_pad)
    throw std::invalid_argument("spatial pad smaller than the aperture");
  const int nf = cube.ns;
  const int np = p.spatial_pad;
  const double f_center = 0.5 * (cube.freqs.front() + cube.freqs.back());
  const double lambda_c = kSpeedOfLight / f_center;
  const double du = lambda_c / (2.0 * np * p.spacing);

  // Range compression per element.
  std::vector<std::vector<cd>> gates(
      nf, std::vector<cd>(static_cast<std::size_t>(cube.nx) * cube.ny));
  {
    std::vector<cd> line(nf);
    for (int m = 0; m < cube.nx; ++m)
      for (int n = 0; n < cube.ny; ++n) {
        for (int i = 0; i < nf; ++i) line[i] = cube.at(m, n, i);
        fft::transform(line, {nf}, fft::kBackward);
        for (int q = 0; q < nf; ++q)
          gates[q][static_cast<std::size_t>(m) * cube.ny + n] = line[q];
      }
  }

  // Angular spectra of every gate on the padded grid; plane is stored
  // [azimuth][elevation]. Thresholding is against the peak across all
  // gates, so only gates that actually hold a scatterer contribute to the
  // coherent sum (a per-gate relative threshold would telescope the sum
  // back to the response at the first sweep frequency).
  std::vector<std::vector<cd>> planes(
      nf, std::vector<cd>(static_cast<std::size_t>(np) * np, cd{}));
  double peak = 0.0;
  for (int q = 0; q < nf; ++q) {
    std::vector<cd>& plane = planes[q];
    for (int m = 0; m < cube.nx; ++m)
      for (int n = 0; n < cube.ny; ++n)
        plane[static_cast<std::size_t>(m) * np + n] =
            gates[q][static_cast<std::size_t>(m) * cube.ny + n];
    fft::transform(plane, {np, np}, fft::kForward);
    fft::fftshift(plane, {np, np});
    for (const cd& v : plane) peak = std::max(peak, std::abs(v));
  }
  std::vector<cd> acc(static_cast<std::size_t>(np) * np, cd{});
  if (peak > 0.0) {
    const double thr = peak * std::pow(10.0, -p.threshold_db / 20.0);
    for (int q = 0; q < nf; ++q)
      for (std::size_t i = 0; i < acc.size(); ++i)
        if (std::abs(planes[q][i]) >= thr) acc[i] += planes[q][i];
  }

  // Shifted axis index a maps to direction sine (a - np/2) * du; resample to
  // the degree raster, blanking pixels outside the unambiguous sine region.
  FrontalImage img = make_image(p.raster_el, p.raster_az);
  const double az0 = -p.az_span_deg;
  const double el0 = -p.el_span_deg;
  const double daz = 2.0 * p.az_span_deg / (p.raster_az - 1);
  const double del = 2.0 * p.el_span_deg / (p.raster_el - 1);
  const double u_lo = (0 - np / 2) * du;
  const double u_hi = (np - 1 - np / 2) * du;
  for (int r = 0; r < p.raster_el; ++r) {
    const double el = el0 + r * del;
    img.el_deg[r] = el;
    const double v = std::sin(deg2rad(el));
    for (int c = 0; c < p.raster_az; ++c) {
      const double az = az0 + c * daz;
      img.az_deg[c] = az;
      const double u = std::sin(deg2rad(az));
      if (u < u_lo || u > u_hi || v < u_lo || v > u_hi) continue;
      const double fa = u / du + np / 2;
      const double fe = v / du + np / 2;
      const int ia = std::clamp(static_cast<int>(std::floor(fa)), 0, np - 2);
      const int ie = std::clamp(static_cast<int>(std::floor(fe)), 0, np - 2);
      const double wa = fa - ia, we = fe - ie;
      const double v00 = std::abs(acc[static_cast<std::size_t>(ia) * np + ie]);
      const double v10 =
          std::abs(acc[static_cast<std::size_t>(ia + 1) * np + ie]);
      const double v01 =
          std::abs(acc[static_cast<std::size_t>(ia) * np + ie + 1]);
      const double v11 =
          std::abs(acc[static_cast<std::size_t>(ia + 1) * np + ie + 1]);
      img.at(r, c) = (1.0 - wa) * (1.0 - we) * v00 + wa * (1.0 - we) * v10 +
                     (1.0 - wa) * we * v01 + wa * we * v11;
    }
  }
  img.normalize_peak();
  return img;
}

}  // namespace twri
