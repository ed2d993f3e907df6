#ifndef TWRI_TARGET_HPP_
#define TWRI_TARGET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "twri/geometry.hpp"

namespace twri {

/// Point-scatterer time series: positions[b][n] in 3D at sample n,
/// reflectivity[b][n] >= 0. y is height relative to the array center.
struct ScattererTrack {
  std::vector<std::string> names;
  std::vector<std::vector<Vec3>> positions;     // [B][n_samples]
  std::vector<std::vector<double>> reflectivity;
  double fs = 1000.0;

  int n_scatterers() const { return static_cast<int>(positions.size()); }
  int n_samples() const {
    return positions.empty() ? 0 : static_cast<int>(positions[0].size());
  }
  Vec2 torso_centroid_2d() const;  // in-plane centroid of the torso point
};

struct WalkParams {
  double height = 1.75;
  double stride_hz = 1.25;
  double phase = 0.0;
  double fs = 1000.0;
  double duration = 0.8;
  double standoff = 2.5;      // torso range from the array, m
  double array_height = 1.0;  // array center height above ground, m
};

/// One exact stride cycle of the 10-scatterer parametric gait
/// (head, torso, upper arms, forearms, thighs, shins). Torso is static.
/// Throws unless stride_hz * duration == 1 within 1e-9.
ScattererTrack synth_walk(const WalkParams& p);

/// n_frames successive CPI windows over repeated strides with smooth
/// per-stride stride-rate jitter (relative std `freq_jitter`).
ScattererTrack walk_frames(const WalkParams& p, int n_frames, double cpi,
                           double freq_jitter, std::uint64_t seed);

/// Rigid rotation about the vertical axis through the torso centroid.
ScattererTrack apply_aspect(const ScattererTrack& track, double angle_deg);

struct StaticPose {
  std::vector<std::string> names;
  std::vector<Vec3> positions;
  std::vector<double> reflectivity;
  double orientation_deg = 0.0;
};

struct SubjectParams {
  double height = 1.75;
  double standoff = 2.0;
  double array_height = 1.0;
};

/// Standing subject with two hand-held corner reflectors (reflectivity 5x
/// torso). Orientation in [-90, 90] degrees rotates the pose about the
/// torso vertical axis.
StaticPose static_pose(const SubjectParams& subject, double orientation_deg);

}  // namespace twri

#endif  // TWRI_TARGET_HPP_
