// Analytic oracles for the attitude correction loop: body-frame tilt error
// dynamics, its steady state, the steady-state torque, and the forward map
// from accelerometer bias to torque during a constant-rate turn.
#pragma once

#include "vpa/ahrs.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vpa {

struct ErrorState {
  Vec3 theta_b = Vec3::Zero();  // rad, body-frame tilt error
  double t = 0;                 // s
};

inline Vec3 correction_gain_vector(const AhrsConfig& cfg) {
  return {0.0, 0.0, -cfg.k()};
}

/// Midpoint integration of
///   thetadot + (skew(omega_b) + kg I) theta = b_g - skew(k_p) b_a.
/// Valid in the small-angle regime; throws when ||theta|| reaches 0.5 rad,
/// reporting the first offending time.
inline std::vector<ErrorState> integrate_error_ode(
    const ErrorState& theta0, const std::function<Vec3(double)>& omega_b,
    const Vec3& b_g, const Vec3& b_a, const AhrsConfig& cfg, double T,
    double dt) {
  const Vec3 k_p = correction_gain_vector(cfg);
  const Vec3 forcing = b_g - k_p.cross(b_a);
  const double kg = cfg.kg();
  const auto deriv = [&](double t, const Vec3& th) -> Vec3 {
    return forcing - (skew(omega_b(t)) + kg * Mat3::Identity()) * th;
  };

  std::vector<ErrorState> out;
  out.reserve(static_cast<std::size_t>(T / dt) + 2);
  ErrorState s = theta0;
  out.push_back(s);
  while (s.t < T - 0.5 * dt) {
    const Vec3 k1 = deriv(s.t, s.theta_b);
    const Vec3 k2 = deriv(s.t + 0.5 * dt, s.theta_b + 0.5 * dt * k1);
    s.theta_b += dt * k2;
    s.t += dt;
    if (s.theta_b.norm() >= 0.5) {
      throw Error("integrate_error_ode: small-angle regime violated at t = " +
                  std::to_string(s.t));
    }
    out.push_back(s);
  }
  return out;
}

/// Steady-state tilt: (skew(omega_b) + kg I)^-1 (b_g - skew(k_p) b_a).
inline Vec3 steady_state_tilt(const Vec3& omega_b, const Vec3& b_g,
                              const Vec3& b_a, const AhrsConfig& cfg) {
  const Vec3 k_p = correction_gain_vector(cfg);
  const Mat3 A = skew(omega_b) + cfg.kg() * Mat3::Identity();
  return solve3(A, b_g - k_p.cross(b_a));
}

/// Steady-state torque:
///   u = b_g - skew(omega_b) (skew(omega_b) + kg I)^-1 (b_g - skew(k_p) b_a).
/// With omega_b = 0 this reduces to u = b_g.
inline Vec3 steady_state_torque(const Vec3& omega_b, const Vec3& b_g,
                                const Vec3& b_a, const AhrsConfig& cfg) {
  return b_g - skew(omega_b) * steady_state_tilt(omega_b, b_g, b_a, cfg);
}

/// Torque produced by an accelerometer bias alone during a constant turn
/// about the vertical at rate omega_zb (gyro bias assumed compensated).
inline Vec3 accel_bias_torque(double omega_zb, const Vec3& b_a,
                         const AhrsConfig& cfg) {
  const Vec3 w(0.0, 0.0, omega_zb);
  const Vec3 k_p = correction_gain_vector(cfg);
  const Mat3 A = skew(w) + cfg.kg() * Mat3::Identity();
  return skew(w) * solve3(A, k_p.cross(b_a));
}

}  // namespace vpa
