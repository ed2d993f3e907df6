#ifndef TWRI_RADARSIM_HPP_
#define TWRI_RADARSIM_HPP_

#include <optional>
#include <vector>

#include "twri/channel.hpp"
#include "twri/geometry.hpp"
#include "twri/image.hpp"
#include "twri/target.hpp"

namespace twri {

/// Regular N x N element grid centered on `center`, lying in the z = center.z
/// plane with columns along x and rows along y.
struct PlanarArray {
  int nx = 10, ny = 10;
  double spacing = 0.02;
  Vec3 center{0.0, 0.0, 0.1};

  Vec3 element(int m, int n) const;  // m: azimuth column, n: elevation row
  double column_x(int m) const { return element(m, 0).x; }
};

/// Raw monostatic data cube: narrowband x(m, n, t) or wideband x(m, n, f),
/// stored row-major as [m][n][slow axis].
struct RawCube {
  int nx = 0, ny = 0, ns = 0;
  std::vector<cd> v;
  double fs = 0.0;                 // narrowband sample rate
  std::vector<double> freqs;       // wideband frequency axis

  cd& at(int m, int n, int s) {
    return v[(static_cast<std::size_t>(m) * ny + n) * ns + s];
  }
  cd at(int m, int n, int s) const {
    return v[(static_cast<std::size_t>(m) * ny + n) * ns + s];
  }
};

/// Narrowband element-to-scatterer channel: the analytic free-space Green's
/// function or a sampled through-wall realization (demodulated bilinear
/// interpolation over the transfer grid).
class NarrowbandChannel {
 public:
  static NarrowbandChannel free_space(double f_c);
  static NarrowbandChannel from_realization(ChannelRealization real);

  /// One-way 2D propagation factor from the source column of element m to
  /// the in-plane point; throws for points outside the sampled grid.
  cd h2d(int m, double x, double z) const;
  bool analytic() const { return analytic_; }
  double f_c() const { return f_c_; }

  std::vector<Vec2> source_positions;  // per azimuth column m

 private:
  bool analytic_ = true;
  double f_c_ = 7.5e9;
  ChannelRealization real_;
  std::vector<std::vector<cd>> demod_;  // [source][point] h * e^{+jk d2}
};

struct DopplerImagingParams {
  double cpi = 0.1;
  int raster_az = 92, raster_el = 92;
  double threshold_db = 6.0;
  bool notch_dc = true;
  double f_c = 7.5e9;     // carrier for the direction-sine axes
  double spacing = 0.02;  // element pitch behind the zero-padded FFT
};

/// Eq.-16 style synthesis: x(m,n,t) = sum_b sqrt(sigma_b(t)) *
/// [scale_2d_to_3d(h2d(m, rho_b(t)))]^2 (the square is two-way propagation).
RawCube synth_narrowband(const ScattererTrack& track, const PlanarArray& array,
                         const NarrowbandChannel& chan);

/// Per CPI: 3D FFT (aperture zero-padded to the raster), DC Doppler notch,
/// per-bin -6 dB peak threshold, non-coherent sum over Doppler, peak
/// normalization. One image per CPI.
std::vector<FrontalImage> doppler_frontal_image(const RawCube& cube,
                                                const DopplerImagingParams& p);

struct SlabLayer {
  double thickness = 0.0;
  double eps_r = 1.0;
  double sigma_c = 0.0;
};
struct SlabSpec {
  std::vector<SlabLayer> layers;
};

/// TE transmission coefficient of a layered slab via the transfer-matrix
/// method (e^{jwt} convention, phase referenced to the slab thickness).
cd slab_transmission(double f, const SlabSpec& slab, double incidence_rad = 0.0);

struct WidebandImagingParams {
  int raster_az = 91, raster_el = 37;
  double az_span_deg = 45.0, el_span_deg = 22.5;
  int spatial_pad = 64;
  double threshold_db = 6.0;
  double spacing = 0.022;  // element pitch behind the zero-padded FFT
};

/// x(m,n,f) = sum_b sqrt(sigma_b) T(f)^2 e^{-j2k(f)d} / (4 pi d)^2.
RawCube synth_wideband(const StaticPose& pose, const PlanarArray& array,
                       const std::vector<double>& freqs,
                       const std::optional<SlabSpec>& slab);

/// Range compression (backward FFT over f), per-gate -6 dB threshold,
/// coherent sum over gates, resample to the degree raster (pixels outside
/// the unambiguous sine region blanked), peak normalization.
FrontalImage range_frontal_image(const RawCube& cube,
                                 const WidebandImagingParams& p);

}  // namespace twri

#endif  // TWRI_RADARSIM_HPP_
