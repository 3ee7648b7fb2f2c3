// End-to-end pipeline: simulate -> synthesize sensors -> run the AHRS and
// bias estimator -> metrics.
#pragma once

#include "vpa/config.hpp"
#include "vpa/csv.hpp"

#include <array>
#include <string>
#include <vector>

namespace vpa {

struct ChannelMetric {
  double rms = 0;        // over the steady window
  double conv_time = 0;  // s from stream start
  bool converged = false;
};

struct RunMetrics {
  std::array<ChannelMetric, 3> gyro;   // rad/s
  std::array<ChannelMetric, 3> accel;  // m/s^2
  double max_tilt = 0;                 // rad
  Vec3 u_measured = Vec3::Zero();      // mean torque over the steady window
  Vec3 u_predicted = Vec3::Zero();     // steady-state prediction for residuals
};

/// Run the AHRS + estimator over an IMU stream and an aid velocity stream.
/// The aid is differentiated to navigation-frame specific force and
/// sample-and-held across IMU steps (stale after 0.5 s). Heading is slaved to
/// the aid course while the vehicle moves faster than 1 m/s.
std::vector<EstRow> run_estimation(const std::vector<ImuSample>& imu,
                                   const std::vector<VelSample>& vel,
                                   const RunConfig& cfg);

/// Bias estimation metrics against the true (injected) biases.
RunMetrics compute_metrics(const std::vector<EstRow>& est, const Vec3& bg_true,
                           const Vec3& ba_true, double window);

struct PipelineResult {
  std::vector<TruthSample> truth;
  std::vector<ImuSample> imu;
  std::vector<VelSample> vel;
  std::vector<EstRow> est;
  RunMetrics metrics;
};

/// simulate -> synthesize -> estimate -> metrics. Deterministic per seed.
PipelineResult run_pipeline(const RunConfig& cfg);

/// Human-readable metrics report, including the steady-state torque
/// prediction alongside the measured value.
std::string metrics_report(const RunMetrics& m);

/// Steady-state predictions (tilt, torque, accel-bias forward map) for the
/// configured biases on straights and on each configured turn rate.
std::string oracle_report(const RunConfig& cfg);

}  // namespace vpa
