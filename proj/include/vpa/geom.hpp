// Fixed-size linear algebra kernel for the virtual-platform AHRS:
// skew matrices, DCM maintenance, Euler conversions and a guarded 3x3 solve.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace vpa {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class GimbalLockError : public Error {
 public:
  using Error::Error;
};

/// Skew-symmetric matrix of v, so that skew(v) * w == v.cross(w).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3> skew(
    const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  Eigen::Matrix<S, 3, 3> m;
  m << S(0), -v.z(), v.y(),
       v.z(), S(0), -v.x(),
      -v.y(), v.x(), S(0);
  return m;
}

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

/// Nearest proper rotation matrix (polar projection via SVD).
/// Throws if the input has non-positive determinant, which indicates a
/// corrupted attitude state rather than ordinary integration drift.
inline Mat3 orthonormalize(const Mat3& C) {
  if (C.determinant() <= 0.0) {
    throw Error("orthonormalize: non-positive determinant");
  }
  Eigen::JacobiSVD<Mat3> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Body-to-navigation DCM from aerospace Z-Y-X Euler angles (radians).
inline Mat3 dcm_from_euler(double roll, double pitch, double heading) {
  return (Eigen::AngleAxisd(heading, Vec3::UnitZ()) *
          Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

inline double heading_of(const Mat3& C) { return std::atan2(C(1, 0), C(0, 0)); }

/// (roll, pitch, heading) in radians from a body-to-navigation DCM.
/// Throws GimbalLockError when |pitch| approaches pi/2.
inline Vec3 euler_from_dcm(const Mat3& C) {
  const double s = -C(2, 0);
  if (std::abs(s) >= std::cos(1e-6)) {
    throw GimbalLockError("euler_from_dcm: pitch too close to +/-pi/2");
  }
  const double pitch = std::asin(s);
  const double roll = std::atan2(C(2, 1), C(2, 2));
  const double heading = std::atan2(C(1, 0), C(0, 0));
  return {roll, pitch, heading};
}

/// Direct 3x3 solve (cofactor inverse). Throws SingularMatrixError when
/// |det A| <= 1e-12 * ||A||^3.
inline Vec3 solve3(const Mat3& A, const Vec3& b) {
  const double det = A.determinant();
  const double scale = std::pow(A.norm(), 3);
  if (scale == 0.0 || std::abs(det) <= 1e-12 * scale) {
    throw SingularMatrixError("solve3: matrix is singular or near-singular");
  }
  return A.inverse() * b;
}

}  // namespace vpa
