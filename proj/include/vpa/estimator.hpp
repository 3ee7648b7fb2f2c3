// Two-stage separate-bias estimator: regime classification, closed-form
// bias observations from the platform torque measurement, first-order
// low-pass filtering, and sensor compensation.
#pragma once

#include "vpa/ahrs.hpp"
#include "vpa/error_model.hpp"

namespace vpa {

struct BiasEstimate {
  Vec3 b_g = Vec3::Zero();  // rad/s
  Vec3 b_a = Vec3::Zero();  // m/s^2, z pinned to zero (unobservable)
  double t = 0;             // s
  bool stale = false;       // set when the last update saw a stale torque
};

enum class RegimeKind { Straight, Turning, Excluded };

struct Regime {
  RegimeKind kind = RegimeKind::Excluded;
  double omega_zb = 0;  // rad/s, smoothed vertical rate (Turning only)
};

struct EstimatorConfig {
  double tau_g = 40.0;             // s, gyro-bias filter
  double tau_a = 40.0;             // s, accel-bias filter
  double tau_att = 4.0;            // s, attitude loop time constant
  double g = 9.81;                 // m/s^2
  double turn_threshold = 0.05;    // rad/s
  double straight_threshold = 0.02;  // rad/s
  double dwell = 2.0;              // s
  double omega_smooth_tau = 0.5;   // s, gyro smoother for classification
};

enum class UpdateMode { Feedback, OpenLoop };

constexpr double kGyroBiasBound = 0.1;   // rad/s
constexpr double kAccelBiasBound = 2.0;  // m/s^2

/// Exact-discretization first-order low-pass: y' = y + alpha (x - y) with
/// alpha = 1 - exp(-dt/tau_f).
template <typename T>
T lowpass_step(const T& y, const T& x, double tau_f, double dt) {
  if (!(tau_f > 0.0) || !(dt > 0.0)) {
    throw Error("lowpass_step: tau_f and dt must be positive");
  }
  const double alpha = 1.0 - std::exp(-dt / tau_f);
  return y + alpha * (x - y);
}

/// Threshold classification of the smoothed, bias-compensated gyro signal.
/// The gap between the thresholds is a hysteresis dead band.
inline Regime classify_instant(const Vec3& omega_b_smoothed,
                               const EstimatorConfig& cfg) {
  if (omega_b_smoothed.norm() < cfg.straight_threshold) {
    return {RegimeKind::Straight, 0.0};
  }
  if (std::abs(omega_b_smoothed.z()) >= cfg.turn_threshold) {
    return {RegimeKind::Turning, omega_b_smoothed.z()};
  }
  return {RegimeKind::Excluded, 0.0};
}

/// Stateful classifier: low-passes the gyro signal, requires the candidate
/// regime to be sustained for the dwell time before committing. Falling into
/// the dead band takes effect immediately.
class RegimeClassifier {
 public:
  Regime step(const Vec3& omega_b_compensated, double dt,
              const EstimatorConfig& cfg) {
    if (!init_) {
      w_ = omega_b_compensated;
      init_ = true;
    } else if (cfg.omega_smooth_tau > 0.0) {
      w_ = lowpass_step(w_, omega_b_compensated, cfg.omega_smooth_tau, dt);
    } else {
      w_ = omega_b_compensated;
    }
    const Regime inst = classify_instant(w_, cfg);
    if (inst.kind == candidate_) {
      hold_ += dt;
    } else {
      candidate_ = inst.kind;
      hold_ = 0.0;
    }
    if (inst.kind == RegimeKind::Excluded || inst.kind == current_.kind ||
        hold_ >= cfg.dwell) {
      current_ = inst;
    }
    return current_;
  }

  const Vec3& smoothed() const { return w_; }

 private:
  Vec3 w_ = Vec3::Zero();
  Regime current_{};
  RegimeKind candidate_ = RegimeKind::Excluded;
  double hold_ = 0.0;
  bool init_ = false;
};

/// Straight motion: the torque directly rebalances the gyro bias.
inline Vec3 gyro_bias_observation(const Vec3& u) { return u; }

/// Turning at vertical rate omega_zb with gyro bias compensated:
///   b_a = g [[1/w, -tau, 0], [tau, 1/w, 0], [0, 0, 0]] u.
/// The zero third row makes the vertical accelerometer bias unobservable.
inline Vec3 accel_bias_observation(const Vec3& u, double omega_zb,
                                   const EstimatorConfig& cfg) {
  if (std::abs(omega_zb) < cfg.turn_threshold) {
    throw Error("accel_bias_observation: |omega_zb| below turn threshold");
  }
  Mat3 T;
  T << 1.0 / omega_zb, -cfg.tau_att, 0.0,
       cfg.tau_att, 1.0 / omega_zb, 0.0,
       0.0, 0.0, 0.0;
  return cfg.g * (T * u);
}

inline Vec3 clamp_norm(const Vec3& v, double bound) {
  const double n = v.norm();
  return n > bound ? Vec3(v * (bound / n)) : v;
}

/// Advance the bias filters for one step. Straight updates the gyro channel
/// and freezes the accelerometer channel; Turning does the opposite;
/// Excluded freezes both. In Feedback mode the raw observation measures the
/// residual bias (inputs are compensated upstream), so the filter target is
/// the current estimate plus the observation. In OpenLoop mode the
/// observation is absolute; the predicted gyro-bias torque is removed before
/// the accelerometer inversion.
///
/// gyro_z_weight scales the vertical gyro-bias update. While the platform
/// heading is slaved to an external course the vertical torque channel
/// carries no bias information (and under installation misalignment feeding
/// it back leaks the unobservable nav-vertical combination into the
/// horizontal estimates), so callers pass 0 in that case.
inline BiasEstimate update(const BiasEstimate& est, const Vec3& u,
                           const Regime& regime, const EstimatorConfig& cfg,
                           double dt, UpdateMode mode = UpdateMode::Feedback,
                           bool u_fresh = true, double gyro_z_weight = 1.0) {
  BiasEstimate out = est;
  if (!u_fresh) {
    out.stale = true;
    return out;
  }
  out.stale = false;
  out.t = est.t + dt;
  switch (regime.kind) {
    case RegimeKind::Straight: {
      Vec3 target = gyro_bias_observation(u);
      if (mode == UpdateMode::Feedback) target += est.b_g;
      Vec3 b_g = lowpass_step(est.b_g, target, cfg.tau_g, dt);
      b_g.z() = est.b_g.z() + gyro_z_weight * (b_g.z() - est.b_g.z());
      out.b_g = clamp_norm(b_g, kGyroBiasBound);
      break;
    }
    case RegimeKind::Turning: {
      Vec3 u_eff = u;
      if (mode == UpdateMode::OpenLoop) {
        const AhrsConfig acfg{cfg.tau_att, cfg.g, 0.0};
        u_eff -= steady_state_torque(Vec3(0.0, 0.0, regime.omega_zb), est.b_g,
                                     Vec3::Zero(), acfg);
      }
      Vec3 target = accel_bias_observation(u_eff, regime.omega_zb, cfg);
      if (mode == UpdateMode::Feedback) target += est.b_a;
      Vec3 b_a = lowpass_step(est.b_a, target, cfg.tau_a, dt);
      b_a.z() = 0.0;
      out.b_a = clamp_norm(b_a, kAccelBiasBound);
      break;
    }
    case RegimeKind::Excluded:
      break;
  }
  return out;
}

/// Subtract the current bias estimates from a raw IMU sample.
inline ImuSample compensate(const ImuSample& imu, const BiasEstimate& est) {
  return {imu.t, imu.omega_b - est.b_g, imu.f_b - est.b_a};
}

}  // namespace vpa
