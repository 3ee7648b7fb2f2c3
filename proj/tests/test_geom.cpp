#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vpa/geom.hpp"

#include <random>

using namespace vpa;

namespace {

std::mt19937_64 rng(42);

Vec3 random_vec(double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng), d(rng)};
}

}  // namespace

TEST_CASE("skew acts as a cross product") {
  const Vec3 v(1, 2, 3), w(4, 5, 6);
  CHECK((skew(v) * w - Vec3(-3, 6, -3)).norm() == doctest::Approx(0.0));
  CHECK(skew(Vec3::Zero()).norm() == 0.0);
  CHECK((skew(Vec3(0, 0, 1)) * Vec3(1, 0, 0) - Vec3(0, 1, 0)).norm() ==
        doctest::Approx(0.0));
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = random_vec(), b = random_vec();
    CHECK((skew(a) * b - a.cross(b)).norm() < 1e-14);
    CHECK((skew(a) * b + skew(b) * a).norm() < 1e-14);
    CHECK((skew(a).transpose() + skew(a)).norm() == 0.0);
  }
}

TEST_CASE("det(skew(w) + c I) = c (c^2 + |w|^2)") {
  std::uniform_real_distribution<double> cd(0.01, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 w = random_vec(2.0);
    const double c = cd(rng);
    const Mat3 A = skew(w) + c * Mat3::Identity();
    const double expected = c * (c * c + w.squaredNorm());
    CHECK(A.determinant() == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("orthonormalize") {
  CHECK((orthonormalize(Mat3::Identity()) - Mat3::Identity()).norm() == 0.0);

  Mat3 P = Mat3::Identity();
  P(0, 1) += 1e-4;
  P(1, 0) += 1e-4;
  const Mat3 R = orthonormalize(P);
  CHECK((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(R.determinant() == doctest::Approx(1.0));

  // idempotent
  CHECK((orthonormalize(R) - R).cwiseAbs().maxCoeff() < 1e-12);

  Mat3 refl = Mat3::Identity();
  refl(2, 2) = -1.0;
  CHECK_THROWS_AS(orthonormalize(refl), Error);
}

TEST_CASE("euler round trips") {
  const Vec3 e0 = euler_from_dcm(Mat3::Identity());
  CHECK(e0.norm() == doctest::Approx(0.0));

  const Mat3 Ch = dcm_from_euler(0, 0, M_PI / 2);
  const Vec3 eh = euler_from_dcm(Ch);
  CHECK(eh.x() == doctest::Approx(0.0));
  CHECK(eh.y() == doctest::Approx(0.0));
  CHECK(eh.z() == doctest::Approx(M_PI / 2));

  const Vec3 e(0.1, -0.05, 2.0);
  const Vec3 r = euler_from_dcm(dcm_from_euler(e.x(), e.y(), e.z()));
  CHECK((r - e).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(euler_from_dcm(dcm_from_euler(0, M_PI / 2, 0)),
                  GimbalLockError);
}

TEST_CASE("solve3") {
  CHECK((solve3(Mat3::Identity(), Vec3(1, 2, 3)) - Vec3(1, 2, 3)).norm() ==
        0.0);

  const Mat3 A = skew(Vec3(0, 0, 0.2)) + 0.25 * Mat3::Identity();
  const Vec3 b(1, 0, 0);
  const Vec3 x = solve3(A, b);
  CHECK((A * x - b).norm() < 1e-10 * b.norm());

  CHECK_THROWS_AS(solve3(Mat3::Zero(), b), SingularMatrixError);

  for (int i = 0; i < 100; ++i) {
    const Mat3 M = skew(random_vec(2.0)) + 0.3 * Mat3::Identity();
    const Vec3 rhs = random_vec(5.0);
    const Vec3 s = solve3(M, rhs);
    CHECK((M * s - rhs).norm() <= 1e-10 * (rhs.norm() + 1.0));
  }
}
