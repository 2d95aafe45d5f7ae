#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace curvemag {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or input files (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Violated mathematical precondition: non-unit vector, grid mismatch,
/// chart outside its validity range, etc.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation that ran but could not produce a usable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Skew matrix [a]_x with [a]_x w = a x w.
inline Mat3 cross_matrix(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return m;
}

}  // namespace curvemag
