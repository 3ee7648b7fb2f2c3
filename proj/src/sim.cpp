#include "vpa/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace vpa {
namespace {

// Piecewise-linear scalar profile with exact integrals at breakpoints.
class Profile {
 public:
  void add(double t, double v) {
    if (!t_.empty() && t <= t_.back()) return;  // skip degenerate points
    t_.push_back(t);
    v_.push_back(v);
  }

  void finalize() {
    I_.assign(t_.size(), 0.0);
    for (std::size_t i = 1; i < t_.size(); ++i) {
      const double dt = t_[i] - t_[i - 1];
      I_[i] = I_[i - 1] + 0.5 * (v_[i] + v_[i - 1]) * dt;
    }
  }

  double value(double t) const {
    const auto i = interval(t);
    const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
    return v_[i] + w * (v_[i + 1] - v_[i]);
  }

  double slope(double t) const {
    const auto i = interval(t);
    return (v_[i + 1] - v_[i]) / (t_[i + 1] - t_[i]);
  }

  double integral(double t) const {
    const auto i = interval(t);
    const double dt = t - t_[i];
    const double v0 = v_[i];
    const double s = (v_[i + 1] - v_[i]) / (t_[i + 1] - t_[i]);
    return I_[i] + v0 * dt + 0.5 * s * dt * dt;
  }

 private:
  std::size_t interval(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = (it == t_.begin()) ? 0 : (it - t_.begin() - 1);
    return std::min(i, t_.size() - 2);
  }

  std::vector<double> t_, v_, I_;
};

constexpr double kJointBlend = 1.0;  // s

void build_profiles(const TrajectorySpec& spec, Profile& speed, Profile& yaw,
                    double& total) {
  double t = 0.0;
  const auto rate = [](const Segment& s) {
    return s.kind == Segment::Kind::Turn ? s.yaw_rate : 0.0;
  };
  speed.add(0.0, spec.segments.front().speed);
  yaw.add(0.0, rate(spec.segments.front()));
  for (std::size_t i = 0; i + 1 < spec.segments.size(); ++i) {
    t += spec.segments[i].duration;
    const double blend = std::min(kJointBlend, spec.segments[i + 1].duration);
    speed.add(t, spec.segments[i].speed);
    speed.add(t + blend, spec.segments[i + 1].speed);
    yaw.add(t, rate(spec.segments[i]));
    yaw.add(t + blend, rate(spec.segments[i + 1]));
  }
  t += spec.segments.back().duration;
  speed.add(t, spec.segments.back().speed);
  yaw.add(t, rate(spec.segments.back()));
  speed.finalize();
  yaw.finalize();
  total = t;
}

}  // namespace

std::vector<TruthSample> build_trajectory(const TrajectorySpec& spec,
                                          double g) {
  if (spec.segments.empty()) {
    throw Error("build_trajectory: no segments");
  }
  for (const auto& s : spec.segments) {
    if (!(s.duration > 0.0) || s.speed < 0.0) {
      throw Error("build_trajectory: invalid segment");
    }
  }
  if (!(spec.imu_rate > 0.0) || spec.imu_rate < spec.aid_rate) {
    throw Error("build_trajectory: invalid rates");
  }

  Profile speed, yaw;
  double total = 0.0;
  build_profiles(spec, speed, yaw, total);

  const double dt = 1.0 / spec.imu_rate;
  const auto n = static_cast<std::size_t>(std::llround(total / dt));
  std::vector<TruthSample> out;
  out.reserve(n + 1);
  const Vec3 g_n(0.0, 0.0, g);
  Vec3 pos = Vec3::Zero();
  Vec3 prev_v = Vec3::Zero();
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i * dt;
    const double h = spec.initial_heading + yaw.integral(t);
    const double s = speed.value(t);
    const double sd = speed.slope(t);
    const double w = yaw.value(t);
    const double ch = std::cos(h), sh = std::sin(h);
    TruthSample ts;
    ts.t = t;
    ts.velocity = Vec3(s * ch, s * sh, 0.0);
    const Vec3 a(sd * ch - s * w * sh, sd * sh + s * w * ch, 0.0);
    ts.attitude = dcm_from_euler(0.0, 0.0, h);
    ts.omega_b = Vec3(0.0, 0.0, w);
    ts.f_b = ts.attitude.transpose() * (a - g_n);
    if (i > 0) pos += 0.5 * dt * (prev_v + ts.velocity);
    ts.position = pos;
    prev_v = ts.velocity;
    out.push_back(ts);
  }
  return out;
}

std::vector<ImuSample> synth_imu(const std::vector<TruthSample>& truth,
                                 const SensorErrorSpec& err, double imu_rate) {
  const Mat3 Csb = misalignment_dcm(err.misalignment);  // sensor -> body
  const Mat3 R = Csb.transpose();
  const double sg = err.gyro_noise_density * std::sqrt(imu_rate);
  const double sa = err.accel_noise_density * std::sqrt(imu_rate);
  std::mt19937_64 rng(err.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto noise = [&](double s) {
    return s > 0.0 ? Vec3(s * gauss(rng), s * gauss(rng), s * gauss(rng))
                   : Vec3::Zero();
  };
  std::vector<ImuSample> out;
  out.reserve(truth.size());
  for (const auto& ts : truth) {
    ImuSample m;
    m.t = ts.t;
    m.omega_b = R * ts.omega_b + err.b_g + noise(sg);
    m.f_b = R * ts.f_b + err.b_a + noise(sa);
    out.push_back(m);
  }
  return out;
}

std::vector<VelSample> synth_aid(const std::vector<TruthSample>& truth,
                                 const SensorErrorSpec& err, double aid_rate,
                                 double imu_rate) {
  if (!(aid_rate > 0.0) || aid_rate > imu_rate) {
    throw Error("synth_aid: aid_rate must be in (0, imu_rate]");
  }
  const auto stride =
      static_cast<std::size_t>(std::llround(imu_rate / aid_rate));
  std::mt19937_64 rng(err.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double s = err.aid_vel_noise;
  std::vector<VelSample> out;
  out.reserve(truth.size() / stride + 1);
  for (std::size_t i = 0; i < truth.size(); i += stride) {
    Vec3 n = s > 0.0 ? Vec3(s * gauss(rng), s * gauss(rng), s * gauss(rng))
                     : Vec3::Zero();
    out.push_back({truth[i].t, truth[i].velocity + n});
  }
  return out;
}

std::vector<AidSample> differentiate_velocity(const std::vector<VelSample>& vel,
                                              double g, double smooth_tau) {
  if (vel.size() < 2) {
    throw Error("differentiate_velocity: need at least two samples");
  }
  for (std::size_t i = 1; i < vel.size(); ++i) {
    if (!(vel[i].t > vel[i - 1].t)) {
      throw Error("differentiate_velocity: non-monotone timestamps");
    }
  }
  const Vec3 g_n(0.0, 0.0, g);
  std::vector<AidSample> out;
  if (vel.size() == 2) {
    const Vec3 a = (vel[1].v - vel[0].v) / (vel[1].t - vel[0].t);
    out.push_back({vel[1].t, a - g_n});
    return out;
  }
  out.reserve(vel.size() - 2);
  for (std::size_t i = 1; i + 1 < vel.size(); ++i) {
    const Vec3 a = (vel[i + 1].v - vel[i - 1].v) / (vel[i + 1].t - vel[i - 1].t);
    out.push_back({vel[i].t, a - g_n});
  }
  if (smooth_tau > 0.0) {
    Vec3 y = out.front().f_ext;
    for (std::size_t i = 1; i < out.size(); ++i) {
      const double dt = out[i].t - out[i - 1].t;
      const double alpha = 1.0 - std::exp(-dt / smooth_tau);
      y += alpha * (out[i].f_ext - y);
      out[i].f_ext = y;
    }
  }
  return out;
}

std::vector<AidSample> exact_aid(const std::vector<TruthSample>& truth) {
  std::vector<AidSample> out;
  out.reserve(truth.size());
  for (const auto& ts : truth) {
    out.push_back({ts.t, ts.attitude * ts.f_b});
  }
  return out;
}

}  // namespace vpa
