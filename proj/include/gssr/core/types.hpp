#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gssr {

using Vec2d = Eigen::Vector2d;
using Vec3d = Eigen::Vector3d;
using Vec4d = Eigen::Vector4d;
using Mat2d = Eigen::Matrix2d;
using Mat3d = Eigen::Matrix3d;
using Quatd = Eigen::Quaterniond;

template <class T>
using Vec2 = Eigen::Matrix<T, 2, 1>;
template <class T>
using Vec3 = Eigen::Matrix<T, 3, 1>;
template <class T>
using Vec4 = Eigen::Matrix<T, 4, 1>;
template <class T>
using Mat2 = Eigen::Matrix<T, 2, 2>;
template <class T>
using Mat3 = Eigen::Matrix<T, 3, 3>;

/// Base class for all recoverable errors raised by the library.
class GssrError : public std::runtime_error {
  public:
    explicit GssrError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public GssrError {
  public:
    explicit IoError(const std::string& msg) : GssrError("io error: " + msg) {}
};

class DimensionMismatch : public GssrError {
  public:
    explicit DimensionMismatch(const std::string& msg) : GssrError("dimension mismatch: " + msg) {}
};

/// Parameter/gradient/optimizer-state length disagreement.
class ShapeMismatch : public DimensionMismatch {
  public:
    explicit ShapeMismatch(const std::string& msg) : DimensionMismatch(msg) {}
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Inverse of sigmoid; x must lie in (0,1).
inline double logit(double x) { return std::log(x) - std::log(1.0 - x); }

template <class T>
T clamp(T v, T lo, T hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace gssr
