#include "vpa/pipeline.hpp"

#include "vpa/error_model.hpp"

#include <cmath>
#include <sstream>

namespace vpa {
namespace {

constexpr double kAidStaleAfter = 0.5;   // s
constexpr double kCourseMinSpeed = 1.0;  // m/s

double horizontal_speed(const Vec3& v) { return std::hypot(v.x(), v.y()); }

Vec3 mean_over(const std::vector<EstRow>& est, double t_from,
               const Vec3 EstRow::* field) {
  Vec3 acc = Vec3::Zero();
  std::size_t n = 0;
  for (const auto& r : est) {
    if (r.t >= t_from) {
      acc += r.*field;
      ++n;
    }
  }
  return n ? Vec3(acc / static_cast<double>(n)) : Vec3::Zero();
}

ChannelMetric channel_metric(const std::vector<EstRow>& est, double t_from,
                             const Vec3 EstRow::* field, int axis,
                             double truth) {
  ChannelMetric m;
  double sq = 0;
  std::size_t n = 0;
  double mean = 0;
  std::size_t nm = 0;
  for (const auto& r : est) {
    if (r.t < t_from) continue;
    const double v = (r.*field)[axis];
    sq += (v - truth) * (v - truth);
    ++n;
    mean += v;
    ++nm;
  }
  m.rms = n ? std::sqrt(sq / static_cast<double>(n)) : 0.0;
  mean = nm ? mean / static_cast<double>(nm) : 0.0;

  const double initial = (est.front().*field)[axis];
  const double thresh = std::max(0.05 * std::abs(mean - initial), 1e-12);
  double conv = est.front().t;
  for (std::size_t i = est.size(); i-- > 0;) {
    if (std::abs((est[i].*field)[axis] - mean) > thresh) {
      conv = (i + 1 < est.size()) ? est[i + 1].t : est[i].t;
      break;
    }
  }
  m.conv_time = conv - est.front().t;
  m.converged = conv <= t_from;
  return m;
}

}  // namespace

std::vector<EstRow> run_estimation(const std::vector<ImuSample>& imu,
                                   const std::vector<VelSample>& vel,
                                   const RunConfig& cfg) {
  if (imu.size() < 2) throw Error("run_estimation: IMU stream too short");
  const auto aid = differentiate_velocity(vel, cfg.ahrs.g, cfg.aid_smooth_tau);

  double h0 = 0.0;
  for (const auto& v : vel) {
    if (horizontal_speed(v.v) >= kCourseMinSpeed) {
      h0 = std::atan2(v.v.y(), v.v.x());
      break;
    }
  }

  const double dt_nom = imu[1].t - imu[0].t;
  AhrsState state;
  state.C = dcm_from_euler(0.0, 0.0, h0);
  state.t = imu[0].t - dt_nom;
  BiasEstimate est;
  RegimeClassifier classifier;
  const UpdateMode mode = cfg.mode == RunMode::Feedback ? UpdateMode::Feedback
                                                        : UpdateMode::OpenLoop;

  // hold the bias filters until the attitude loop has settled, so the
  // initial-alignment transient does not get integrated into the estimates
  const double t_warm = imu.front().t + 3.0 * cfg.ahrs.tau_att;

  std::vector<EstRow> rows;
  rows.reserve(imu.size());
  std::size_t ai = 0, vi = 0;
  for (const auto& raw : imu) {
    const double t = raw.t;
    const double dt = t - state.t;
    while (ai + 1 < aid.size() && aid[ai + 1].t <= t) ++ai;
    while (vi + 1 < vel.size() && vel[vi + 1].t <= t) ++vi;

    std::optional<AidSample> aid_now;
    if (aid[ai].t <= t && t - aid[ai].t <= kAidStaleAfter) aid_now = aid[ai];
    std::optional<double> course;
    if (vel[vi].t <= t && t - vel[vi].t <= kAidStaleAfter &&
        horizontal_speed(vel[vi].v) >= kCourseMinSpeed) {
      course = std::atan2(vel[vi].v.y(), vel[vi].v.x());
    }

    const ImuSample comp =
        cfg.mode == RunMode::Feedback ? compensate(raw, est) : raw;
    state = step(state, comp, aid_now, course, cfg.ahrs, dt);
    const Regime regime =
        classifier.step(raw.omega_b - est.b_g, dt, cfg.est);
    if (t >= t_warm) {
      // while heading is slaved to the aid course the vertical torque channel
      // carries no gyro-bias information
      const double gyro_z_w = course ? 0.0 : 1.0;
      est = update(est, state.u, regime, cfg.est, dt, mode, state.u_fresh,
                   gyro_z_w);
    }

    EstRow row;
    row.t = t;
    row.regime = regime;
    row.u = state.u;
    row.b_g = est.b_g;
    row.b_a = est.b_a;
    const Vec3 rpy = euler_from_dcm(state.C);
    row.roll = rpy.x();
    row.pitch = rpy.y();
    row.heading = rpy.z();
    rows.push_back(row);
  }
  return rows;
}

RunMetrics compute_metrics(const std::vector<EstRow>& est, const Vec3& bg_true,
                           const Vec3& ba_true, double window) {
  if (est.empty() || est.back().t - est.front().t <= window) {
    throw Error("compute_metrics: series shorter than the steady window");
  }
  const double t_from = est.back().t - window;
  RunMetrics m;
  for (int a = 0; a < 3; ++a) {
    m.gyro[a] = channel_metric(est, t_from, &EstRow::b_g, a, bg_true[a]);
    m.accel[a] = channel_metric(est, t_from, &EstRow::b_a, a, ba_true[a]);
  }
  m.u_measured = mean_over(est, t_from, &EstRow::u);
  m.u_predicted = bg_true - mean_over(est, t_from, &EstRow::b_g);
  return m;
}

PipelineResult run_pipeline(const RunConfig& cfg) {
  PipelineResult r;
  r.truth = build_trajectory(cfg.traj, cfg.ahrs.g);
  r.imu = synth_imu(r.truth, cfg.err, cfg.traj.imu_rate);
  r.vel = synth_aid(r.truth, cfg.err, cfg.traj.aid_rate, cfg.traj.imu_rate);
  r.est = run_estimation(r.imu, r.vel, cfg);
  r.metrics =
      compute_metrics(r.est, cfg.err.b_g, cfg.err.b_a, cfg.metrics_window);

  // Tilt error against the truth attitude redefined by the installation DCM.
  const Mat3 R_mis = misalignment_dcm(cfg.err.misalignment);
  double max_tilt = 0.0;
  for (std::size_t i = 0; i < r.est.size() && i < r.truth.size(); ++i) {
    const Mat3 C_est =
        dcm_from_euler(r.est[i].roll, r.est[i].pitch, r.est[i].heading);
    const Mat3 E = C_est * (r.truth[i].attitude * R_mis).transpose();
    const Eigen::AngleAxisd aa(E);
    const Vec3 th = aa.angle() * aa.axis();
    max_tilt = std::max(max_tilt, std::hypot(th.x(), th.y()));
  }
  r.metrics.max_tilt = max_tilt;

  // Replace the flat-path torque prediction with the full steady-state one
  // at the sensor-frame mean angular rate over the steady window.
  const double t_from = r.est.back().t - cfg.metrics_window;
  Vec3 w_mean = Vec3::Zero();
  std::size_t n = 0;
  for (const auto& ts : r.truth) {
    if (ts.t >= t_from) {
      w_mean += R_mis.transpose() * ts.omega_b;
      ++n;
    }
  }
  if (n) w_mean /= static_cast<double>(n);
  const Vec3 bg_res = cfg.err.b_g - mean_over(r.est, t_from, &EstRow::b_g);
  const Vec3 ba_res = cfg.err.b_a - mean_over(r.est, t_from, &EstRow::b_a);
  r.metrics.u_predicted = steady_state_torque(w_mean, bg_res, ba_res, cfg.ahrs);
  return r;
}

std::string metrics_report(const RunMetrics& m) {
  std::ostringstream os;
  const char* ax = "xyz";
  for (int a = 0; a < 3; ++a) {
    os << "gyro_bias_rms_" << ax[a] << " = " << m.gyro[a].rms << " rad/s\n";
  }
  for (int a = 0; a < 3; ++a) {
    os << "gyro_conv_time_" << ax[a] << " = " << m.gyro[a].conv_time << " s"
       << (m.gyro[a].converged ? "" : " (not converged)") << "\n";
  }
  for (int a = 0; a < 3; ++a) {
    os << "accel_bias_rms_" << ax[a] << " = " << m.accel[a].rms << " m/s2\n";
  }
  for (int a = 0; a < 3; ++a) {
    os << "accel_conv_time_" << ax[a] << " = " << m.accel[a].conv_time << " s"
       << (m.accel[a].converged ? "" : " (not converged)") << "\n";
  }
  os << "max_tilt_error = " << m.max_tilt << " rad\n";
  os << "u_steady_measured = " << m.u_measured.x() << " " << m.u_measured.y()
     << " " << m.u_measured.z() << " rad/s\n";
  os << "u_steady_predicted = " << m.u_predicted.x() << " "
     << m.u_predicted.y() << " " << m.u_predicted.z() << " rad/s\n";
  return os.str();
}

std::string oracle_report(const RunConfig& cfg) {
  std::ostringstream os;
  const auto line = [&os](const std::string& name, const Vec3& v,
                          const std::string& unit) {
    os << name << " = " << v.x() << " " << v.y() << " " << v.z() << " " << unit
       << "\n";
  };
  const Vec3 bg = cfg.err.b_g, ba = cfg.err.b_a;
  line("straight.steady_tilt",
       steady_state_tilt(Vec3::Zero(), bg, ba, cfg.ahrs), "rad");
  line("straight.steady_torque",
       steady_state_torque(Vec3::Zero(), bg, ba, cfg.ahrs), "rad/s");
  for (const auto& seg : cfg.traj.segments) {
    if (seg.kind != Segment::Kind::Turn) continue;
    const Vec3 w(0.0, 0.0, seg.yaw_rate);
    std::ostringstream tag;
    tag << "turn[" << seg.yaw_rate << "]";
    line(tag.str() + ".steady_tilt", steady_state_tilt(w, bg, ba, cfg.ahrs),
         "rad");
    line(tag.str() + ".steady_torque",
         steady_state_torque(w, bg, ba, cfg.ahrs), "rad/s");
    line(tag.str() + ".accel_bias_torque",
         accel_bias_torque(seg.yaw_rate, ba, cfg.ahrs), "rad/s");
  }
  return os.str();
}

}  // namespace vpa
