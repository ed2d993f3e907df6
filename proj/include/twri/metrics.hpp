#ifndef TWRI_METRICS_HPP_
#define TWRI_METRICS_HPP_

#include <vector>

#include "twri/image.hpp"

namespace twri {

struct SsimParams {
  // Exponents alpha = beta = gamma = 1 are baked into the simplified index.
  double c1 = 0.01 * 0.01;  // (0.01 L)^2 with L = 1
  double c2 = 0.03 * 0.03;  // (0.03 L)^2
  int window = 11;
  double sigma = 1.5;
};

/// ||ref - test||^2 / ||ref||^2. Throws on dim mismatch or zero reference.
double nmse(const FrontalImage& ref, const FrontalImage& test);

/// Mean local SSIM over Gaussian-windowed statistics (symmetric padding).
double ssim(const FrontalImage& ref, const FrontalImage& test,
            const SsimParams& params = {});

/// Mean pairwise Pearson correlation of vectorized frames.
/// Throws if fewer than 2 frames or any frame has zero variance.
double group_correlation(const std::vector<FrontalImage>& frames);

}  // namespace twri

#endif  // TWRI_METRICS_HPP_
