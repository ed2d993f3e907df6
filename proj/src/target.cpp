#include "twri/target.hpp"

#include <cmath>
#include <stdexcept>

#include "twri/rng.hpp"

namespace twri {

namespace {

// Segment lengths and pivot heights as fractions of body height.
constexpr double kHipY = 0.53, kShoulderY = 0.82, kHeadY = 0.93, kChestY = 0.65;
constexpr double kThighLen = 0.245, kShinLen = 0.246;
constexpr double kUpperArmLen = 0.188, kForearmLen = 0.146;
constexpr double kHipHalfWidth = 0.05, kShoulderHalfWidth = 0.115;

// Swing amplitudes (radians) of the sinusoidal-pendulum gait.
const double kThighAmp = deg2rad(30.0);
const double kShinAmp = deg2rad(25.0);
const double kArmAmp = deg2rad(25.0);
const double kShinLag = 0.45 * kPi;
const double kElbowBend = deg2rad(20.0);
constexpr double kShinScatterPos = 0.85;  // fraction along the shin

struct Body {
  double h, yg, standoff;
};

Vec3 pend(const Vec3& pivot, double len, double angle) {
  // Swing in the sagittal plane; forward is -z (toward the array).
  return {pivot.x, pivot.y - len * std::cos(angle),
          pivot.z - len * std::sin(angle)};
}

// Scatterer positions for one phase sample; order fixed:
// head, torso, upper arms L/R, forearms L/R, thighs L/R, shins L/R.
void sample_pose(const Body& b, double phi, std::vector<Vec3>& out) {
  out.clear();
  out.push_back({0.0, kHeadY * b.h + b.yg, b.standoff});
  out.push_back({0.0, kChestY * b.h + b.yg, b.standoff});
  Vec3 upper[2], fore[2], thigh[2], shin[2];
  for (int side = 0; side < 2; ++side) {
    const double sp = side == 0 ? 0.0 : kPi;  // left/right antiphase
    const double arm = kArmAmp * std::sin(phi + sp + kPi);
    const Vec3 shoulder{(side == 0 ? 1.0 : -1.0) * kShoulderHalfWidth * b.h,
                        kShoulderY * b.h + b.yg, b.standoff};
    const Vec3 elbow = pend(shoulder, kUpperArmLen * b.h, arm);
    upper[side] = pend(shoulder, 0.5 * kUpperArmLen * b.h, arm);
    fore[side] = pend(elbow, 0.5 * kForearmLen * b.h, arm + kElbowBend);

    const double th = kThighAmp * std::sin(phi + sp);
    const double sh = th + kShinAmp * std::sin(phi + sp - kShinLag);
    const Vec3 hip{(side == 0 ? 1.0 : -1.0) * kHipHalfWidth * b.h,
                   kHipY * b.h + b.yg, b.standoff};
    const Vec3 knee = pend(hip, kThighLen * b.h, th);
    thigh[side] = pend(hip, 0.5 * kThighLen * b.h, th);
    shin[side] = pend(knee, kShinScatterPos * kShinLen * b.h, sh);
  }
  out.push_back(upper[0]);
  out.push_back(upper[1]);
  out.push_back(fore[0]);
  out.push_back(fore[1]);
  out.push_back(thigh[0]);
  out.push_back(thigh[1]);
  out.push_back(shin[0]);
  out.push_back(shin[1]);
}

ScattererTrack track_from_phases(const WalkParams& p,
                                 const std::vector<double>& phases) {
  if (p.height <= 0.0) throw std::invalid_argument("non-physical height");
  ScattererTrack tr;
  tr.fs = p.fs;
  tr.names = {"head",    "torso",   "upper_arm_l", "upper_arm_r", "forearm_l",
              "forearm_r", "thigh_l", "thigh_r",     "shin_l",      "shin_r"};
  const int nb = static_cast<int>(tr.names.size());
  const int ns = static_cast<int>(phases.size());
  tr.positions.assign(nb, std::vector<Vec3>(ns));
  const Body b{p.height, -p.array_height, p.standoff};
  std::vector<Vec3> pose;
  for (int n = 0; n < ns; ++n) {
    sample_pose(b, phases[n], pose);
    for (int i = 0; i < nb; ++i) tr.positions[i][n] = pose[i];
  }
  tr.reflectivity.assign(nb, std::vector<double>(ns, 0.2));
  tr.reflectivity[0].assign(ns, 0.3);  // head
  tr.reflectivity[1].assign(ns, 1.0);  // torso
  return tr;
}

}  // namespace

Vec2 ScattererTrack::torso_centroid_2d() const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == "torso") {
      Vec2 acc{0.0, 0.0};
      for (const Vec3& p : positions[i]) {
        acc.x += p.x;
        acc.z += p.z;
      }
      const double inv = 1.0 / static_cast<double>(positions[i].size());
      return {acc.x * inv, acc.z * inv};
    }
  throw std::logic_error("track has no torso scatterer");
}

ScattererTrack synth_walk(const WalkParams& p) {
  if (p.height <= 0.0) throw std::invalid_argument("non-physical height");
  if (std::abs(p.stride_hz * p.duration - 1.0) > 1e-9)
    throw std::invalid_argument("duration must cover exactly one stride cycle");
  const int ns = static_cast<int>(std::lround(p.fs * p.duration));
  std::vector<double> phases(ns);
  for (int n = 0; n < ns; ++n)
    phases[n] = p.phase + 2.0 * kPi * p.stride_hz * (n / p.fs);
  return track_from_phases(p, phases);
}

ScattererTrack walk_frames(const WalkParams& p, int n_frames, double cpi,
                           double freq_jitter, std::uint64_t seed) {
  if (n_frames < 1) throw std::invalid_argument("n_frames must be >= 1");
  const int per_frame = static_cast<int>(std::lround(cpi * p.fs));
  const int ns = n_frames * per_frame;
  std::vector<double> phases(ns);
  double phi = p.phase;
  int stride = -1;
  double rate = p.stride_hz;
  for (int n = 0; n < ns; ++n) {
    phases[n] = phi;
    const int cur = static_cast<int>(std::floor((phi - p.phase) / (2.0 * kPi)));
    if (cur != stride) {
      stride = cur;
      std::mt19937_64 rng = make_rng(seed, 0x77ULL, stride);
      std::normal_distribution<double> normal(0.0, 1.0);
      rate = p.stride_hz * (1.0 + freq_jitter * normal(rng));
    }
    phi += 2.0 * kPi * rate / p.fs;
  }
  return track_from_phases(p, phases);
}

ScattererTrack apply_aspect(const ScattererTrack& track, double angle_deg) {
  const Vec2 c = track.torso_centroid_2d();
  const double a = deg2rad(angle_deg);
  const double ca = std::cos(a), sa = std::sin(a);
  ScattererTrack out = track;
  for (auto& series : out.positions)
    for (Vec3& p : series) {
      const double dx = p.x - c.x, dz = p.z - c.z;
      p.x = c.x + ca * dx + sa * dz;
      p.z = c.z - sa * dx + ca * dz;
    }
  return out;
}

StaticPose static_pose(const SubjectParams& subject, double orientation_deg) {
  if (orientation_deg < -90.0 || orientation_deg > 90.0)
    throw std::invalid_argument("orientation outside [-90, 90] degrees");
  const double h = subject.height;
  if (h <= 0.0) throw std::invalid_argument("non-physical height");
  const double yg = -subject.array_height;
  const double z = subject.standoff;

  StaticPose pose;
  pose.orientation_deg = orientation_deg;
  pose.names = {"head", "torso", "leg_l", "leg_r", "reflector_l", "reflector_r"};
  const double hand_x = 0.25 * h / 1.75;
  pose.positions = {
      {0.0, kHeadY * h + yg, z},
      {0.0, 0.58 * h + yg, z},
      {-kHipHalfWidth * h, 0.28 * h + yg, z},
      {kHipHalfWidth * h, 0.28 * h + yg, z},
      {-hand_x, 0.60 * h + yg, z},
      {hand_x, 0.60 * h + yg, z},
  };
  pose.reflectivity = {0.3, 1.0, 0.2, 0.2, 5.0, 5.0};

  const double a = deg2rad(orientation_deg);
  const double ca = std::cos(a), sa = std::sin(a);
  const Vec3 c = pose.positions[1];
  for (Vec3& p : pose.positions) {
    const double dx = p.x - c.x, dz = p.z - c.z;
    p.x = c.x + ca * dx + sa * dz;
    p.z = c.z - sa * dx + ca * dz;
  }
  return pose;
}

}  // namespace twri
