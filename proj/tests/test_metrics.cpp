#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "twri/image.hpp"
#include "twri/metrics.hpp"

using namespace twri;

namespace {

FrontalImage image_from(int rows, int cols, const std::vector<double>& px) {
  FrontalImage img = make_image(rows, cols);
  img.px = px;
  return img;
}

FrontalImage random_image(int rows, int cols, unsigned seed, double lo = 0.0,
                          double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  FrontalImage img = make_image(rows, cols);
  for (double& v : img.px) v = u(rng);
  return img;
}

int mirror(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

// Windowed SSIM computed directly per pixel (no separable pass); the
// per-axis mirrored tensor-product window equals the library's two-pass
// filter exactly.
double ssim_oracle(const FrontalImage& x, const FrontalImage& y,
                   const SsimParams& p = {}) {
  const int half = p.window / 2;
  std::vector<double> k(p.window);
  double ksum = 0.0;
  for (int t = -half; t <= half; ++t) {
    k[t + half] = std::exp(-0.5 * t * t / (p.sigma * p.sigma));
    ksum += k[t + half];
  }
  for (double& v : k) v /= ksum;

  double acc = 0.0;
  for (int r = 0; r < x.rows; ++r)
    for (int c = 0; c < x.cols; ++c) {
      double mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
      for (int s = -half; s <= half; ++s)
        for (int t = -half; t <= half; ++t) {
          const double w = k[s + half] * k[t + half];
          const double a = x.at(mirror(r + s, x.rows), mirror(c + t, x.cols));
          const double b = y.at(mirror(r + s, y.rows), mirror(c + t, y.cols));
          mx += w * a;
          my += w * b;
          mxx += w * a * a;
          myy += w * b * b;
          mxy += w * a * b;
        }
      const double vx = mxx - mx * mx, vy = myy - my * my;
      const double cov = mxy - mx * my;
      acc += (2.0 * mx * my + p.c1) * (2.0 * cov + p.c2) /
             ((mx * mx + my * my + p.c1) * (vx + vy + p.c2));
    }
  return acc / (double(x.rows) * x.cols);
}

}  // namespace

TEST_CASE("nmse of identical images is zero") {
  const FrontalImage a = random_image(9, 7, 1);
  CHECK(nmse(a, a) == 0.0);
}

TEST_CASE("nmse against a zero test image is one") {
  const FrontalImage ref = random_image(6, 6, 2, 0.1, 1.0);
  const FrontalImage zero = make_image(6, 6);
  CHECK(nmse(ref, zero) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("nmse of orthogonal unit pixels is two") {
  const FrontalImage ref = image_from(1, 2, {1.0, 0.0});
  const FrontalImage test = image_from(1, 2, {0.0, 1.0});
  CHECK(nmse(ref, test) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("nmse scale law (1 - alpha)^2 holds to 1e-12") {
  const FrontalImage ref = random_image(12, 10, 3, 0.05, 1.0);
  for (double alpha : {0.0, 0.3, 0.5, 0.99, 1.7}) {
    FrontalImage scaled = ref;
    for (double& v : scaled.px) v *= alpha;
    CHECK(std::abs(nmse(ref, scaled) - (1.0 - alpha) * (1.0 - alpha)) < 1e-12);
  }
}

TEST_CASE("nmse rejects mismatched dims and zero references") {
  const FrontalImage a = random_image(4, 4, 4);
  const FrontalImage b = random_image(4, 5, 5);
  CHECK_THROWS(nmse(a, b));
  CHECK_THROWS(nmse(make_image(4, 4), a));
}

TEST_CASE("ssim of identical images is one to 1e-12") {
  const FrontalImage a = random_image(20, 20, 6);
  CHECK(std::abs(ssim(a, a) - 1.0) < 1e-12);
}

TEST_CASE("ssim of matching constants is one despite zero variance") {
  FrontalImage a = make_image(15, 15);
  for (double& v : a.px) v = 0.5;
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverting a checkerboard drives ssim negative") {
  FrontalImage board = make_image(16, 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) board.at(r, c) = (r + c) % 2 ? 1.0 : 0.0;
  FrontalImage inv = board;
  for (double& v : inv.px) v = 1.0 - v;
  CHECK(ssim(board, inv) < 0.0);
}

TEST_CASE("ssim is symmetric to 1e-12") {
  const FrontalImage a = random_image(18, 14, 7);
  const FrontalImage b = random_image(18, 14, 8);
  CHECK(std::abs(ssim(a, b) - ssim(b, a)) < 1e-12);
}

TEST_CASE("ssim never exceeds one") {
  for (unsigned seed = 10; seed < 16; ++seed) {
    const FrontalImage a = random_image(13, 17, seed);
    const FrontalImage b = random_image(13, 17, seed + 100);
    CHECK(ssim(a, b) <= 1.0 + 1e-12);
  }
}

TEST_CASE("ssim matches a direct windowed oracle to 1e-12") {
  const FrontalImage a = random_image(20, 17, 21);
  const FrontalImage b = random_image(20, 17, 22);
  CHECK(std::abs(ssim(a, b) - ssim_oracle(a, b)) < 1e-12);
  // Small rasters exercise the mirrored boundary on every pixel.
  const FrontalImage c = random_image(5, 4, 23);
  const FrontalImage d = random_image(5, 4, 24);
  CHECK(std::abs(ssim(c, d) - ssim_oracle(c, d)) < 1e-12);
}

TEST_CASE("ssim rejects mismatched dims") {
  CHECK_THROWS(ssim(random_image(4, 4, 1), random_image(5, 4, 1)));
}

TEST_CASE("group correlation of identical frames is one") {
  const FrontalImage a = random_image(8, 8, 30);
  CHECK(group_correlation({a, a, a, a}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("group correlation of orthogonal zero-mean frames is zero") {
  const FrontalImage a = image_from(2, 2, {1.0, -1.0, -1.0, 1.0});
  const FrontalImage b = image_from(2, 2, {1.0, 1.0, -1.0, -1.0});
  CHECK(group_correlation({a, b}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("group correlation is invariant to affine rescaling") {
  const FrontalImage a = random_image(10, 10, 31);
  FrontalImage b = a;
  for (double& v : b.px) v = 3.5 * v + 0.75;
  CHECK(group_correlation({a, b}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("group correlation preconditions") {
  const FrontalImage a = random_image(6, 6, 32);
  CHECK_THROWS(group_correlation({a}));
  FrontalImage flat = make_image(6, 6);
  for (double& v : flat.px) v = 0.25;
  CHECK_THROWS(group_correlation({a, flat}));
}
