#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <vector>

#include "doctest.h"
#include "twri/channel.hpp"

using namespace twri;
namespace fs = std::filesystem;

namespace {

// Published values: J0(1)=0.76519768655796655, Y0(1)=0.08825696421567700,
// J0(2.5)=-0.04838377646819806, Y0(2.5)=0.49807035961523188.
constexpr double kJ0_1 = 0.76519768655796655;
constexpr double kY0_1 = 0.08825696421567700;
constexpr double kJ0_25 = -0.04838377646819806;
constexpr double kY0_25 = 0.49807035961523188;

FieldStats phasor_stats(const std::vector<double>& amp,
                        const std::vector<double>& phase,
                        const std::vector<double>& sd, int periods,
                        double t0_periods = 0.0) {
  const double f_c = 7.5e9;
  const int spp = 15;
  const double dt = 1.0 / (f_c * spp);
  FieldStats fsx;
  fsx.dt = dt;
  fsx.t0 = t0_periods / f_c;
  fsx.f_c = f_c;
  fsx.cell = 0.0;  // no dispersion handling for synthetic series
  fsx.source = {0.0, 0.0};
  const int n = periods * spp;
  for (std::size_t p = 0; p < amp.size(); ++p) {
    fsx.probes.push_back({0.0, 1.0 + 0.1 * double(p)});
    std::vector<double> mu(n), d(n);
    for (int s = 0; s < n; ++s) {
      const double t = fsx.t0 + s * dt;
      mu[s] = amp[p] * std::cos(2.0 * kPi * f_c * t + phase[p]);
      d[s] = sd[p] * std::cos(2.0 * kPi * f_c * t);
    }
    fsx.mu.push_back(std::move(mu));
    fsx.d_signed.push_back(std::move(d));
  }
  return fsx;
}

WallTransfer single_point_transfer(cd mean, double sd) {
  WallTransfer wt;
  wt.points = {{0.0, 2.0}};
  wt.sources = {{0.0, 0.0}};
  wt.mean = {{mean}};
  wt.stdev = {{sd}};
  return wt;
}

}  // namespace

TEST_CASE("2D free-space propagation matches the Hankel function") {
  const cd h1 = free_space_transfer(Vec2{0.0, 0.0}, Vec2{0.0, 0.5}, 2.0, 2);
  CHECK(h1.real() == doctest::Approx(-kY0_1 / 4.0).epsilon(1e-9));
  CHECK(h1.imag() == doctest::Approx(-kJ0_1 / 4.0).epsilon(1e-9));

  const cd h25 = free_space_transfer(Vec2{0.0, 0.0}, Vec2{0.6, 0.8}, 2.5, 2);
  CHECK(h25.real() == doctest::Approx(-kY0_25 / 4.0).epsilon(1e-9));
  CHECK(h25.imag() == doctest::Approx(-kJ0_25 / 4.0).epsilon(1e-9));
}

TEST_CASE("2D magnitude follows the 1/sqrt(d) asymptote at large kd") {
  const double k = 50.0;
  const double d1 = 1.0, d2 = 4.0;
  const double m1 = std::abs(free_space_transfer(Vec2{0, 0}, Vec2{0, d1}, k, 2));
  const double m2 = std::abs(free_space_transfer(Vec2{0, 0}, Vec2{0, d2}, k, 2));
  CHECK(m1 / m2 == doctest::Approx(std::sqrt(d2 / d1)).epsilon(0.01));
}

TEST_CASE("3D free-space propagation is the spherical Green's function") {
  const double k = 100.0;
  const cd h = free_space_transfer(Vec3{0, 0, 0}, Vec3{0, 0, 1}, k, 3);
  CHECK(std::abs(h) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
  CHECK(std::arg(h) ==
        doctest::Approx(std::arg(std::polar(1.0, -k))).epsilon(1e-12));

  const double lambda = 2.0 * kPi / k;
  const cd h2 =
      free_space_transfer(Vec3{0, 0, 0}, Vec3{0, 0, 1 + lambda / 2}, k, 3);
  double dphi = std::arg(h2 / h);
  CHECK(std::abs(std::abs(dphi) - kPi) < 1e-9);
}

TEST_CASE("free-space propagation rejects degenerate arguments") {
  CHECK_THROWS(free_space_transfer(Vec2{1, 1}, Vec2{1, 1}, 10.0, 2));
  CHECK_THROWS(free_space_transfer(Vec3{1, 2, 3}, Vec3{1, 2, 3}, 10.0, 3));
  CHECK_THROWS(free_space_transfer(Vec2{0, 0}, Vec2{0, 1}, 10.0, 4));
}

TEST_CASE("2D-to-3D scaling reaches the spherical Green's function") {
  const double k = 2.0 * kPi * 7.5e9 / kSpeedOfLight;
  const Vec3 src{0.0, 0.0, 0.0};
  for (const Vec3 pt : {Vec3{0.0, 0.0, 2.0}, Vec3{0.3, 0.5, 2.0}}) {
    const cd h2d = free_space_transfer(src, pt, k, 2);
    const cd got = scale_2d_to_3d(h2d, src, pt, k);
    const cd want = free_space_transfer(src, pt, k, 3);
    CHECK(std::abs(got) / std::abs(want) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(std::arg(got / want)) < deg2rad(0.5));
  }
}

TEST_CASE("elevation displacement adds exactly -k (d3 - d2) of phase") {
  const double k = 157.0, d2 = 2.0;
  const cd c0 = scale_factor_2d_to_3d(d2, 2.0, k);
  const cd c1 = scale_factor_2d_to_3d(d2, 2.06, k);
  double want = -k * 0.06;
  while (want <= -kPi) want += 2.0 * kPi;
  CHECK(std::arg(c1 / c0) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("the scale factor depends only on the distances and k") {
  const cd a = scale_factor_2d_to_3d(1.7, 2.1, 80.0);
  const cd b = scale_factor_2d_to_3d(1.7, 2.1, 80.0);
  CHECK(a == b);
  CHECK_THROWS(scale_factor_2d_to_3d(0.0, 2.1, 80.0));
}

TEST_CASE("phasor extraction recovers amplitude and phase exactly") {
  ExtractOptions opt;
  opt.compensate_dispersion = false;
  // A sin(wt) = A cos(wt - pi/2); the documented answer is phase -90 deg.
  const FieldStats fsx =
      phasor_stats({2.5, 1.0}, {-kPi / 2.0, 0.7}, {0.0, 0.3}, 16);
  const WallTransfer wt = extract_transfer(fsx, fsx.f_c, opt);
  CHECK(std::abs(wt.mean[0][0]) == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(std::arg(wt.mean[0][0]) == doctest::Approx(-kPi / 2.0).epsilon(1e-10));
  CHECK(std::abs(wt.mean[0][1]) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::arg(wt.mean[0][1]) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(wt.stdev[0][0] == doctest::Approx(0.0));
  CHECK(wt.stdev[0][1] == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("extraction references phase to absolute time") {
  ExtractOptions opt;
  opt.compensate_dispersion = false;
  // Same waveform, window starting mid-stream: identical phasor.
  const WallTransfer a =
      extract_transfer(phasor_stats({1.0}, {0.35}, {0.0}, 16), 7.5e9, opt);
  const WallTransfer b =
      extract_transfer(phasor_stats({1.0}, {0.35}, {0.0}, 16, 7.4), 7.5e9, opt);
  CHECK(std::abs(a.mean[0][0] - b.mean[0][0]) < 1e-10);
}

TEST_CASE("extraction gates on settledness and window shape") {
  ExtractOptions opt;
  opt.compensate_dispersion = false;

  FieldStats drifting = phasor_stats({1.0}, {0.0}, {0.0}, 16);
  const int n = int(drifting.mu[0].size());
  for (int s = 0; s < n; ++s)
    drifting.mu[0][s] *= 1.0 + 0.1 * double(s) / double(n);
  CHECK_THROWS(extract_transfer(drifting, 7.5e9, opt));

  FieldStats ragged = phasor_stats({1.0}, {0.0}, {0.0}, 16);
  ragged.mu[0].resize(ragged.mu[0].size() - 7);
  ragged.d_signed[0].resize(ragged.mu[0].size());
  CHECK_THROWS(extract_transfer(ragged, 7.5e9, opt));

  CHECK_THROWS(extract_transfer(phasor_stats({1.0}, {0.0}, {0.0}, 1), 7.5e9, opt));
  CHECK_THROWS(extract_transfer(FieldStats{}, 7.5e9, opt));
}

TEST_CASE("probes far below the loudest one are exempt from the gate") {
  ExtractOptions opt;
  opt.compensate_dispersion = false;
  FieldStats fsx = phasor_stats({1.0, 1e-8}, {0.0, 0.0}, {0.0, 0.0}, 16);
  const int n = int(fsx.mu[1].size());
  for (int s = 0; s < n; ++s)
    fsx.mu[1][s] *= 1.0 + 0.5 * double(s) / double(n);
  CHECK_NOTHROW(extract_transfer(fsx, 7.5e9, opt));
}

TEST_CASE("grid overload demands the probe lattice") {
  ExtractOptions opt;
  opt.compensate_dispersion = false;
  TransferGrid tg;
  tg.nx = 2;
  tg.nz = 1;
  const FieldStats fsx = phasor_stats({1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, 16);
  // Probe positions do not match the lattice points.
  CHECK_THROWS(extract_transfer(fsx, 7.5e9, tg, opt));
  TransferGrid wrong = tg;
  wrong.nx = 3;
  CHECK_THROWS(extract_transfer(fsx, 7.5e9, wrong, opt));
}

TEST_CASE("numeric wavenumber satisfies the discrete dispersion relation") {
  const double f_c = 7.5e9;
  const double omega = 2.0 * kPi * f_c;
  const double dt = 1.0 / (15.0 * f_c);
  const double cell = 0.004;
  const double k0 = omega / kSpeedOfLight;
  for (const auto [dx, dz] :
       {std::pair{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.3, 0.9}}) {
    const double kn = numeric_wavenumber(omega, dt, cell, dx, dz);
    const double nn = std::hypot(dx, dz);
    const double a1 = cell * dx / nn / 2.0, a2 = cell * dz / nn / 2.0;
    const double lhs = std::pow(std::sin(a1 * kn), 2) +
                       std::pow(std::sin(a2 * kn), 2);
    const double rhs = std::pow(cell / (kSpeedOfLight * dt), 2) *
                       std::pow(std::sin(0.5 * omega * dt), 2);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    CHECK(kn >= k0);
    CHECK(kn / k0 == doctest::Approx(1.0).epsilon(0.01));
    // Direction vectors may come unnormalized.
    CHECK(numeric_wavenumber(omega, dt, cell, 7.0 * dx, 7.0 * dz) ==
          doctest::Approx(kn).epsilon(1e-12));
  }
  CHECK_THROWS(numeric_wavenumber(omega, dt, cell, 0.0, 0.0));
}

TEST_CASE("zero stdev realizations equal the mean for any seed") {
  const WallTransfer wt = single_point_transfer(cd{0.5, 0.3}, 0.0);
  for (std::uint64_t seed : {1ULL, 99ULL}) {
    std::mt19937_64 rng(seed);
    for (SampleMode mode : {SampleMode::coherent, SampleMode::iid}) {
      const ChannelRealization cr = sample_realization(wt, rng, mode);
      CHECK(cr.h[0][0] == cd{0.5, 0.3});
    }
  }
}

TEST_CASE("realizations are deterministic in the generator state") {
  const WallTransfer wt = single_point_transfer(cd{0.5, 0.3}, 0.05);
  std::mt19937_64 a(7), b(7);
  const ChannelRealization ra = sample_realization(wt, a);
  const ChannelRealization rb = sample_realization(wt, b);
  CHECK(ra.h[0][0] == rb.h[0][0]);
  const ChannelRealization rc = sample_realization(wt, a);
  CHECK(ra.h[0][0] != rc.h[0][0]);
}

TEST_CASE("coherent sampling reproduces the requested magnitude spread") {
  const cd mean{0.5, 0.3};
  const double sd = 0.02;
  const WallTransfer wt = single_point_transfer(mean, sd);
  std::mt19937_64 rng(123);
  const int n = 2000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(sample_realization(wt, rng).h[0][0]);
    s1 += m;
    s2 += m * m;
  }
  const double mu = s1 / n;
  const double std_hat = std::sqrt((s2 - n * mu * mu) / (n - 1));
  CHECK(mu == doctest::Approx(std::abs(mean)).epsilon(0.01));
  CHECK(std_hat == doctest::Approx(sd).epsilon(0.05));
}

TEST_CASE("iid sampling reproduces the requested complex variance") {
  const cd mean{0.5, 0.3};
  const double sd = 0.07;
  const WallTransfer wt = single_point_transfer(mean, sd);
  std::mt19937_64 rng(321);
  const int n = 2000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += std::norm(sample_realization(wt, rng, SampleMode::iid).h[0][0] - mean);
  CHECK(std::sqrt(acc / n) == doctest::Approx(sd).epsilon(0.05));
}

TEST_CASE("a zero-mean point still spreads coherently") {
  const WallTransfer wt = single_point_transfer(cd{0.0, 0.0}, 0.1);
  std::mt19937_64 rng(5);
  double acc = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i)
    acc += std::norm(sample_realization(wt, rng).h[0][0]);
  CHECK(std::sqrt(acc / n) == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("merging transfers concatenates sources") {
  const WallTransfer a = single_point_transfer(cd{1.0, 0.0}, 0.1);
  WallTransfer b = single_point_transfer(cd{0.0, 2.0}, 0.2);
  b.sources = {{0.1, 0.0}};
  const WallTransfer m = merge_transfers({a, b});
  CHECK(m.sources.size() == 2);
  CHECK(m.mean[0][0] == cd{1.0, 0.0});
  CHECK(m.mean[1][0] == cd{0.0, 2.0});
  CHECK(m.stdev[1][0] == 0.2);

  WallTransfer off = b;
  off.f_c = 1e9;
  CHECK_THROWS(merge_transfers({a, off}));
  WallTransfer short_pts = b;
  short_pts.points.push_back({0.5, 2.0});
  short_pts.mean[0].push_back(cd{});
  short_pts.stdev[0].push_back(0.0);
  CHECK_THROWS(merge_transfers({a, short_pts}));
  CHECK_THROWS(merge_transfers({}));
}

TEST_CASE("wall transfer files round trip bit-exactly") {
  WallTransfer wt;
  wt.f_c = 7.5e9;
  wt.structured = true;
  wt.grid.x0 = -0.1;
  wt.grid.z0 = 1.5;
  wt.grid.dx = 0.1;
  wt.grid.dz = 0.1;
  wt.grid.nx = 2;
  wt.grid.nz = 2;
  wt.points = wt.grid.points();
  wt.sources = {{-0.09, 0.1}, {0.09, 0.1}};
  wt.mean = {{cd{1, 2}, cd{3, 4}, cd{5, 6}, cd{7, 8}},
             {cd{-1, 0}, cd{0, -1}, cd{2, 2}, cd{3, -3}}};
  wt.stdev = {{0.1, 0.2, 0.3, 0.4}, {0.5, 0.6, 0.7, 0.8}};

  const std::string dir = (fs::temp_directory_path() / "wt_rt").string();
  fs::remove_all(dir);
  save_wall_transfer(dir, wt);
  const WallTransfer back = load_wall_transfer(dir);
  CHECK(back.f_c == wt.f_c);
  CHECK(back.structured);
  CHECK(back.grid.nx == 2);
  CHECK(back.sources.size() == 2);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t p = 0; p < 4; ++p) {
      CHECK(back.mean[s][p] == wt.mean[s][p]);
      CHECK(back.stdev[s][p] == wt.stdev[s][p]);
      CHECK(back.points[p].x == wt.points[p].x);
    }
  fs::remove_all(dir);
  CHECK_THROWS(load_wall_transfer(dir));
}
