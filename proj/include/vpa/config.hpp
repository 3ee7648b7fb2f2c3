// Flat key-value run configuration with unit suffixes.
#pragma once

#include "vpa/ahrs.hpp"
#include "vpa/estimator.hpp"
#include "vpa/sim.hpp"

#include <string>

namespace vpa {

enum class RunMode { Feedback, BlackBox };

struct RunConfig {
  AhrsConfig ahrs;
  EstimatorConfig est;
  TrajectorySpec traj;
  SensorErrorSpec err;
  double aid_smooth_tau = 0.05;  // s, aid differentiation smoother
  RunMode mode = RunMode::Feedback;
  double metrics_window = 60.0;  // s, steady window for RMS metrics
};

/// Parse `section.key = value` text. Unknown keys and out-of-range values are
/// hard errors; unset keys take the defaults above. The traj section with a
/// segments key is required. Recognized unit suffixes: s, ms, Hz, m, m/s,
/// m/s2, rad, deg, rad/s, deg/s (angles are converted to radians).
///
/// Segment list grammar (SI units implied):
///   traj.segments = straight:<dur>:<speed> turn:<dur>:<speed>:<yaw_rate> ...
RunConfig parse_config(const std::string& text);

RunConfig parse_config_file(const std::string& path);

/// Render a config back to text with every value explicit.
std::string config_to_text(const RunConfig& cfg);

}  // namespace vpa
