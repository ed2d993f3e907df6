#include "twri/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace twri {

namespace {

void check_dims(const FrontalImage& a, const FrontalImage& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("image dimension mismatch");
  if (a.rows <= 0 || a.cols <= 0) throw std::invalid_argument("empty image");
}

// Reflect (symmetric) index into [0, n).
int mirror(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

// Separable Gaussian blur with symmetric boundary handling.
std::vector<double> gauss_filter(const std::vector<double>& src, int rows,
                                 int cols, const std::vector<double>& kernel) {
  const int half = static_cast<int>(kernel.size()) / 2;
  std::vector<double> tmp(src.size()), dst(src.size());
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int t = -half; t <= half; ++t)
        acc += kernel[t + half] * src[static_cast<std::size_t>(r) * cols + mirror(c + t, cols)];
      tmp[static_cast<std::size_t>(r) * cols + c] = acc;
    }
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int t = -half; t <= half; ++t)
        acc += kernel[t + half] * tmp[static_cast<std::size_t>(mirror(r + t, rows)) * cols + c];
      dst[static_cast<std::size_t>(r) * cols + c] = acc;
    }
  return dst;
}

std::vector<double> gauss_kernel(int window, double sigma) {
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument("SSIM window must be odd and positive");
  const int half = window / 2;
  std::vector<double> k(window);
  double sum = 0.0;
  for (int t = -half; t <= half; ++t) {
    k[t + half] = std::exp(-0.5 * t * t / (sigma * sigma));
    sum += k[t + half];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

double nmse(const FrontalImage& ref, const FrontalImage& test) {
  check_dims(ref, test);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.px.size(); ++i) {
    const double d = ref.px[i] - test.px[i];
    num += d * d;
    den += ref.px[i] * ref.px[i];
  }
  if (den <= 0.0) throw std::invalid_argument("nmse: zero reference image");
  return num / den;
}

double ssim(const FrontalImage& ref, const FrontalImage& test,
            const SsimParams& params) {
  check_dims(ref, test);
  const int rows = ref.rows, cols = ref.cols;
  const auto kernel = gauss_kernel(params.window, params.sigma);

  std::vector<double> xx(ref.px.size()), yy(ref.px.size()), xy(ref.px.size());
  for (std::size_t i = 0; i < ref.px.size(); ++i) {
    xx[i] = ref.px[i] * ref.px[i];
    yy[i] = test.px[i] * test.px[i];
    xy[i] = ref.px[i] * test.px[i];
  }
  const auto mu_x = gauss_filter(ref.px, rows, cols, kernel);
  const auto mu_y = gauss_filter(test.px, rows, cols, kernel);
  const auto m_xx = gauss_filter(xx, rows, cols, kernel);
  const auto m_yy = gauss_filter(yy, rows, cols, kernel);
  const auto m_xy = gauss_filter(xy, rows, cols, kernel);

  double acc = 0.0;
  for (std::size_t i = 0; i < ref.px.size(); ++i) {
    const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
    const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
    const double cov = m_xy[i] - mu_x[i] * mu_y[i];
    const double num =
        (2.0 * mu_x[i] * mu_y[i] + params.c1) * (2.0 * cov + params.c2);
    const double den = (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + params.c1) *
                       (var_x + var_y + params.c2);
    acc += num / den;
  }
  return acc / static_cast<double>(ref.px.size());
}

double group_correlation(const std::vector<FrontalImage>& frames) {
  if (frames.size() < 2)
    throw std::invalid_argument("group_correlation needs >= 2 frames");
  const std::size_t n = frames[0].px.size();
  std::vector<double> means(frames.size()), norms(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    check_dims(frames[0], frames[f]);
    double mean = 0.0;
    for (double v : frames[f].px) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : frames[f].px) ss += (v - mean) * (v - mean);
    if (ss <= 0.0)
      throw std::invalid_argument("group_correlation: constant frame");
    means[f] = mean;
    norms[f] = std::sqrt(ss);
  }
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < frames.size(); ++a)
    for (std::size_t b = a + 1; b < frames.size(); ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        dot += (frames[a].px[i] - means[a]) * (frames[b].px[i] - means[b]);
      acc += dot / (norms[a] * norms[b]);
      ++pairs;
    }
  return acc / static_cast<double>(pairs);
}

}  // namespace twri
