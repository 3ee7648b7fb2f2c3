// Virtual-platform mechanization: DCM integration under measured body rate
// minus platform torquing, specific-force projection, and the correction
// torque formed from the external-aid discrepancy.
#pragma once

#include "vpa/geom.hpp"

#include <optional>

namespace vpa {

struct ImuSample {
  double t = 0;       // s
  Vec3 omega_b = Vec3::Zero();  // rad/s, gyro triad
  Vec3 f_b = Vec3::Zero();      // m/s^2, accelerometer triad
};

struct AidSample {
  double t = 0;                 // s
  Vec3 f_ext = Vec3::Zero();    // m/s^2, navigation-frame specific force
};

/// Attitude-correction loop parameters. The gain is exposed as a time
/// constant: tau_att = 1/(k*g).
struct AhrsConfig {
  double tau_att = 4.0;       // s
  double g = 9.81;            // m/s^2
  double heading_gain = 1.0;  // 1/s, heading slaving loop

  double k() const { return 1.0 / (tau_att * g); }
  double kg() const { return 1.0 / tau_att; }
};

struct AhrsState {
  Mat3 C = Mat3::Identity();  // body -> platform DCM
  Vec3 u = Vec3::Zero();      // rad/s, body-frame torque measurement
  double t = 0;               // s
  bool u_fresh = false;       // false while the aid is absent/stale
  Vec3 omega_prev = Vec3::Zero();  // integrator memory for the rate trapezoid
  bool has_prev = false;
};

/// f_p = C * f_b: accelerometer output projected onto the platform frame.
inline Vec3 project_force(const Mat3& C, const Vec3& f_b) { return C * f_b; }

/// Platform correction rate from the aid discrepancy. The gain vector is
/// vertical, k_p = (0, 0, -k), so a vertical discrepancy produces no torque.
inline Vec3 correction_rate(const Vec3& f_ext, const Vec3& f_p,
                            const AhrsConfig& cfg) {
  const Vec3 k_p(0.0, 0.0, -cfg.k());
  return -k_p.cross(f_ext - f_p);
}

/// Vertical-axis torquing that slaves the platform heading to the aid course.
/// Only meaningful while the vehicle is in motion (caller gates on speed).
inline Vec3 heading_slave_rate(const Mat3& C, double course_aid,
                               const AhrsConfig& cfg) {
  if (cfg.heading_gain <= 0.0) return Vec3::Zero();
  return {0.0, 0.0, cfg.heading_gain * wrap_angle(heading_of(C) - course_aid)};
}

/// One mechanization step: midpoint integration of
///   Cdot = C * skew(omega_b) - skew(omega_p) * C
/// followed by orthonormalization. The body rate over the step is the
/// trapezoid of consecutive gyro samples, and the aid discrepancy is
/// evaluated against a gyro-only predictor DCM so both sides refer to the
/// sample time. The torque measurement u = C^T * omega_p keeps only the
/// acceleration-correction part of omega_p; the heading slaving rate is
/// excluded since it feeds no bias channel.
inline AhrsState step(const AhrsState& state, const ImuSample& imu,
                      const std::optional<AidSample>& aid,
                      std::optional<double> course, const AhrsConfig& cfg,
                      double dt) {
  if (!(dt > 0.0 && dt <= 0.1)) {
    throw Error("ahrs::step: dt out of range");
  }
  if (!(imu.t > state.t)) {
    throw Error("ahrs::step: non-monotonic timestamp");
  }

  const Vec3 w_avg =
      state.has_prev ? Vec3(0.5 * (state.omega_prev + imu.omega_b))
                     : imu.omega_b;
  const Mat3 Wb = skew(w_avg);
  // second-order gyro-only propagation to the sample time
  const Mat3 C_pred = orthonormalize(
      state.C * (Mat3::Identity() + dt * Wb + 0.5 * dt * dt * Wb * Wb));

  Vec3 w_corr = Vec3::Zero();
  Vec3 w_p = Vec3::Zero();
  if (aid) {
    const Vec3 f_p = project_force(C_pred, imu.f_b);
    w_corr = correction_rate(aid->f_ext, f_p, cfg);
    w_p = w_corr;
    if (course) w_p += heading_slave_rate(C_pred, *course, cfg);
  }

  const Mat3 Wp = skew(w_p);
  const auto deriv = [&](const Mat3& C) -> Mat3 { return C * Wb - Wp * C; };
  const Mat3 k1 = deriv(state.C);
  const Mat3 k2 = deriv(state.C + 0.5 * dt * k1);

  AhrsState out;
  out.C = orthonormalize(state.C + dt * k2);
  out.t = imu.t;
  out.omega_prev = imu.omega_b;
  out.has_prev = true;
  if (aid) {
    out.u = C_pred.transpose() * w_corr;
    out.u_fresh = true;
  } else {
    out.u = state.u;  // held; flagged stale
    out.u_fresh = false;
  }
  return out;
}

}  // namespace vpa
