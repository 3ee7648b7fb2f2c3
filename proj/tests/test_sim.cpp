#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vpa/sim.hpp"
#include "vpa/ahrs.hpp"

using namespace vpa;

namespace {

TrajectorySpec straight_spec(double duration = 60.0, double speed = 5.0) {
  TrajectorySpec spec;
  spec.segments.push_back({Segment::Kind::Straight, duration, speed, 0.0});
  return spec;
}

TrajectorySpec straight_turn_spec() {
  TrajectorySpec spec;
  spec.segments.push_back({Segment::Kind::Straight, 60.0, 5.0, 0.0});
  spec.segments.push_back({Segment::Kind::Turn, 30.0, 5.0, 0.2});
  spec.segments.push_back({Segment::Kind::Straight, 60.0, 5.0, 0.0});
  return spec;
}

}  // namespace

TEST_CASE("straight segment has gravity-only specific force") {
  const auto truth = build_trajectory(straight_spec());
  for (const auto& ts : truth) {
    CHECK((ts.f_b - Vec3(0, 0, -9.81)).norm() < 1e-12);
    CHECK(ts.omega_b.norm() == 0.0);
    CHECK(ts.velocity.z() == 0.0);
  }
}

TEST_CASE("turn produces the centripetal specific force") {
  TrajectorySpec spec;
  spec.segments.push_back({Segment::Kind::Turn, 30.0, 5.0, 0.2});
  const auto truth = build_trajectory(spec);
  // mid-segment, past any blend
  const auto& ts = truth[truth.size() / 2];
  const double lateral = std::hypot(ts.f_b.x(), ts.f_b.y());
  CHECK(lateral == doctest::Approx(1.0).epsilon(1e-9));  // speed * yaw_rate
  CHECK(std::abs(ts.f_b.x()) < 1e-9);  // purely body-lateral
  CHECK(ts.omega_b.z() == doctest::Approx(0.2));
}

TEST_CASE("zero speed leaves only gravity") {
  const auto truth = build_trajectory(straight_spec(10.0, 0.0));
  for (const auto& ts : truth) {
    CHECK((ts.f_b - Vec3(0, 0, -9.81)).norm() < 1e-12);
  }
}

TEST_CASE("synth_imu with a zero error spec is exact") {
  const auto truth = build_trajectory(straight_turn_spec());
  const auto imu = synth_imu(truth, SensorErrorSpec{}, 100.0);
  REQUIRE(imu.size() == truth.size());
  for (std::size_t i = 0; i < imu.size(); ++i) {
    CHECK((imu[i].omega_b - truth[i].omega_b).norm() == 0.0);
    CHECK((imu[i].f_b - truth[i].f_b).norm() == 0.0);
  }
}

TEST_CASE("constant bias adds exactly") {
  const auto truth = build_trajectory(straight_spec(10.0));
  SensorErrorSpec err;
  err.b_g = Vec3(1.745e-3, 0, 0);
  const auto imu = synth_imu(truth, err, 100.0);
  for (std::size_t i = 0; i < imu.size(); ++i) {
    CHECK((imu[i].omega_b - truth[i].omega_b - err.b_g).norm() == 0.0);
  }
}

TEST_CASE("same seed gives identical streams") {
  const auto truth = build_trajectory(straight_spec(10.0));
  SensorErrorSpec err;
  err.gyro_noise_density = 0.005;
  err.accel_noise_density = 0.02;
  err.aid_vel_noise = 0.02;
  err.seed = 123;
  const auto a = synth_imu(truth, err, 100.0);
  const auto b = synth_imu(truth, err, 100.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].omega_b == b[i].omega_b);
    CHECK(a[i].f_b == b[i].f_b);
  }
  const auto va = synth_aid(truth, err, 10.0, 100.0);
  const auto vb = synth_aid(truth, err, 10.0, 100.0);
  for (std::size_t i = 0; i < va.size(); ++i) CHECK(va[i].v == vb[i].v);
}

TEST_CASE("synth_aid decimates the truth velocity") {
  const auto truth = build_trajectory(straight_spec(10.0));
  const auto vel = synth_aid(truth, SensorErrorSpec{}, 10.0, 100.0);
  CHECK(vel.size() == (truth.size() - 1) / 10 + 1);
  for (std::size_t i = 0; i < vel.size(); ++i) {
    CHECK((vel[i].v - truth[i * 10].velocity).norm() == 0.0);
    CHECK((vel[i].v - Vec3(5, 0, 0)).norm() < 1e-12);
  }
  // aid at the IMU rate: one sample per IMU sample
  const auto full = synth_aid(truth, SensorErrorSpec{}, 100.0, 100.0);
  CHECK(full.size() == truth.size());
}

TEST_CASE("differentiate_velocity") {
  std::vector<VelSample> vel;
  for (int i = 0; i <= 100; ++i) vel.push_back({0.1 * i, Vec3(5, 0, 0)});
  const auto aid = differentiate_velocity(vel, 9.81, 0.0);
  for (const auto& a : aid) CHECK((a.f_ext - Vec3(0, 0, -9.81)).norm() < 1e-12);

  // ramp 0 -> 1 m/s over 1 s
  std::vector<VelSample> ramp;
  for (int i = 0; i <= 30; ++i) {
    const double t = 0.1 * i;
    const double vn = std::clamp(t - 1.0, 0.0, 1.0);
    ramp.push_back({t, Vec3(vn, 0, 0)});
  }
  const auto fd = differentiate_velocity(ramp, 9.81, 0.0);
  bool saw_ramp = false;
  for (const auto& a : fd) {
    if (a.t > 1.15 && a.t < 1.85) {
      CHECK(a.f_ext.x() == doctest::Approx(1.0).epsilon(1e-9));
      saw_ramp = true;
    }
  }
  CHECK(saw_ramp);

  CHECK_THROWS_AS(differentiate_velocity({{0.0, Vec3::Zero()}}, 9.81, 0.0),
                  Error);
  CHECK_THROWS_AS(differentiate_velocity(
                      {{0.0, Vec3::Zero()}, {0.0, Vec3::Zero()}}, 9.81, 0.0),
                  Error);
}

TEST_CASE("integrated truth acceleration reproduces truth velocity") {
  auto spec = straight_turn_spec();
  spec.imu_rate = 1000.0;  // trapezoid consistency check, O(h^2) error
  const auto truth = build_trajectory(spec);
  const Vec3 g_n(0, 0, 9.81);
  Vec3 v = truth.front().velocity;
  Vec3 prev_a = truth.front().attitude * truth.front().f_b + g_n;
  double worst = 0.0;
  for (std::size_t i = 1; i < truth.size(); ++i) {
    const Vec3 a = truth[i].attitude * truth[i].f_b + g_n;
    const double dt = truth[i].t - truth[i - 1].t;
    v += 0.5 * dt * (prev_a + a);
    prev_a = a;
    worst = std::max(worst, (v - truth[i].velocity).norm());
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("noise-free mechanization torque stays at numerical noise") {
  auto spec = straight_turn_spec();
  spec.aid_rate = spec.imu_rate;  // lag-free aid
  const auto truth = build_trajectory(spec);
  const auto imu = synth_imu(truth, SensorErrorSpec{}, spec.imu_rate);
  const auto aid = exact_aid(truth);

  AhrsConfig cfg;
  AhrsState s;
  s.C = truth.front().attitude;
  s.t = -0.01;
  double worst = 0.0;
  for (std::size_t i = 0; i < imu.size(); ++i) {
    const double course =
        std::atan2(truth[i].velocity.y(), truth[i].velocity.x());
    s = step(s, imu[i], aid[i], course, cfg, 0.01);
    worst = std::max(worst, s.u.norm());
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("input validation") {
  TrajectorySpec bad;
  CHECK_THROWS_AS(build_trajectory(bad), Error);
  bad.segments.push_back({Segment::Kind::Straight, -1.0, 5.0, 0.0});
  CHECK_THROWS_AS(build_trajectory(bad), Error);

  const auto truth = build_trajectory(straight_spec(5.0));
  CHECK_THROWS_AS(synth_aid(truth, SensorErrorSpec{}, 200.0, 100.0), Error);
}
