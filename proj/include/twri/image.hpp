#ifndef TWRI_IMAGE_HPP_
#define TWRI_IMAGE_HPP_

#include <string>
#include <vector>

namespace twri {

/// Rasterized non-negative magnitude image (Doppler- or range-enhanced).
/// Pixels are stored row-major with rows indexing elevation and columns
/// indexing azimuth.
struct FrontalImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> px;       // rows*cols, row-major
  std::vector<double> az_deg;   // per-column azimuth label
  std::vector<double> el_deg;   // per-row elevation label

  double& at(int r, int c) { return px[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return px[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t size() const { return px.size(); }

  double peak() const;
  /// Scales so the peak pixel equals 1; a no-op on an all-zero image.
  void normalize_peak();
};

FrontalImage make_image(int rows, int cols);

void save_image(const std::string& path, const FrontalImage& img,
                const std::string& label = "");
FrontalImage load_image(const std::string& path);

}  // namespace twri

#endif  // TWRI_IMAGE_HPP_
