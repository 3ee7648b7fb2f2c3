// Flat-Earth land-vehicle truth generator and sensor synthesizer.
#pragma once

#include "vpa/ahrs.hpp"

#include <cstdint>
#include <vector>

namespace vpa {

struct Segment {
  enum class Kind { Straight, Turn };
  Kind kind = Kind::Straight;
  double duration = 0;  // s
  double speed = 0;     // m/s
  double yaw_rate = 0;  // rad/s, Turn only
};

struct TrajectorySpec {
  std::vector<Segment> segments;
  double initial_heading = 0;  // rad
  double imu_rate = 100.0;     // Hz
  double aid_rate = 10.0;      // Hz
};

struct SensorErrorSpec {
  Vec3 b_g = Vec3::Zero();           // rad/s
  Vec3 b_a = Vec3::Zero();           // m/s^2
  double gyro_noise_density = 0;     // rad/s/sqrt(Hz)
  double accel_noise_density = 0;    // m/s^2/sqrt(Hz)
  Vec3 misalignment = Vec3::Zero();  // rad (roll, pitch, heading)
  double aid_vel_noise = 0;          // m/s per axis
  std::uint64_t seed = 1;
};

struct TruthSample {
  double t = 0;
  Vec3 position = Vec3::Zero();  // m, NED
  Vec3 velocity = Vec3::Zero();  // m/s, NED (D component zero)
  Mat3 attitude = Mat3::Identity();  // body -> NED
  Vec3 omega_b = Vec3::Zero();   // rad/s
  Vec3 f_b = Vec3::Zero();       // m/s^2
};

struct VelSample {
  double t = 0;
  Vec3 v = Vec3::Zero();  // m/s, NED
};

/// Sensor-to-body installation DCM from (roll, pitch, heading) angles.
inline Mat3 misalignment_dcm(const Vec3& mis) {
  return dcm_from_euler(mis.x(), mis.y(), mis.z());
}

/// Level straight/turn kinematics at the IMU rate. Speed and yaw rate are
/// blended linearly over 1 s at segment joints so the velocity stays C^1 and
/// the aid differentiation stays bounded.
std::vector<TruthSample> build_trajectory(const TrajectorySpec& spec,
                                          double g = 9.81);

/// Rotate truth rates/forces into the (possibly misaligned) sensor frame,
/// add constant biases and white noise. Deterministic per seed.
std::vector<ImuSample> synth_imu(const std::vector<TruthSample>& truth,
                                 const SensorErrorSpec& err, double imu_rate);

/// Decimated truth velocity with per-axis white noise. Deterministic per seed.
std::vector<VelSample> synth_aid(const std::vector<TruthSample>& truth,
                                 const SensorErrorSpec& err, double aid_rate,
                                 double imu_rate);

/// Differentiate an aid velocity stream into navigation-frame specific force:
/// central differences at interior samples, minus (0, 0, g), optionally
/// smoothed by a first-order filter. End samples are dropped.
std::vector<AidSample> differentiate_velocity(const std::vector<VelSample>& vel,
                                              double g,
                                              double smooth_tau = 0.05);

/// Exact navigation-frame specific force recovered from truth; used when a
/// lag-free aid is needed.
std::vector<AidSample> exact_aid(const std::vector<TruthSample>& truth);

}  // namespace vpa
