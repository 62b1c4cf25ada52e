// Copyright 2026 The TaxelSim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Rigid transforms and rotation representations.
//
// Three rotation encodings are used across the toolkit:
//   - 3x3 orthonormal matrices (the canonical form),
//   - unit quaternions, which double-cover SO(3): q and -q are the same
//     rotation, so any single-valued quaternion chart has a seam,
//   - the continuous 6D encoding, i.e. the first two matrix columns,
//     decoded by Gram-Schmidt. It has no seam and is what policies observe.

#ifndef TAXELSIM_ROTATION_H_
#define TAXELSIM_ROTATION_H_

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace taxelsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Tolerance accepted by Encode6D for orthonormality of its input.
inline constexpr double kRotationInputTolerance = 1e-6;

struct Transform {
  Vec3 translation = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  static Transform Identity() { return {}; }
  static Transform FromTranslation(const Vec3& t) { return {t, Mat3::Identity()}; }

  // Maps a point from the local frame into the parent frame.
  Vec3 Apply(const Vec3& p) const { return rotation * p + translation; }
  // Maps a direction (no translation).
  Vec3 ApplyDirection(const Vec3& d) const { return rotation * d; }

  Transform operator*(const Transform& rhs) const {
    return {rotation * rhs.translation + translation, rotation * rhs.rotation};
  }

  Transform Inverse() const {
    Mat3 rt = rotation.transpose();
    return {-(rt * translation), rt};
  }
};

struct Rotation6D {
  Vec3 a1 = Vec3::UnitX();
  Vec3 a2 = Vec3::UnitY();

  // (a1.x, a1.y, a1.z, a2.x, a2.y, a2.z)
  std::array<double, 6> ToArray() const {
    return {a1.x(), a1.y(), a1.z(), a2.x(), a2.y(), a2.z()};
  }
  double MaxAbsDifference(const Rotation6D& other) const;
};

struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  double Norm() const;
  Quaternion Normalized() const;
  std::array<double, 4> ToArray() const { return {w, x, y, z}; }
  double MaxAbsDifference(const Quaternion& other) const;
};

// True when r is orthonormal with determinant +1 within `tolerance`
// (max-abs entry error of R^T R - I, and |det - 1|).
bool IsRotation(const Mat3& r, double tolerance);

// Throws InvalidRotationError if r is not a rotation within
// kRotationInputTolerance.
Rotation6D Encode6D(const Mat3& r);

// Gram-Schmidt: b1 = a1/|a1|, b2 = normalize(a2 - (b1.a2) b1), b3 = b1 x b2.
// Throws DegenerateInputError for zero a1 or a2 parallel to a1.
Mat3 Decode6D(const Rotation6D& r);

// Geodesic angle between two rotations, in [0, pi].
double RotationDistance(const Mat3& r1, const Mat3& r2);

Mat3 QuaternionToMatrix(const Quaternion& q);

// Returns the quaternion with w >= 0 (ties broken toward the first
// non-zero of x, y, z being positive). This is the usual single-valued
// chart and is discontinuous at rotation angle pi.
Quaternion MatrixToQuaternion(const Mat3& r);

// Rotation by `angle` radians about `axis` (normalized internally).
Mat3 AxisAngle(const Vec3& axis, double angle);

// +90 degrees about `axis`, built with exact cos = 0, sin = 1 so that
// axis-aligned quarter turns have exact 0 / +-1 entries.
Mat3 QuarterTurn(const Vec3& axis);

// Exponential map of a rotation vector (axis * angle).
Mat3 ExpMap(const Vec3& rotation_vector);

// Inverse of ExpMap for angles in [0, pi).
Vec3 LogMap(const Mat3& r);

// Projects a nearly-orthonormal matrix back onto SO(3).
Mat3 Orthonormalize(const Mat3& r);

}  // namespace taxelsim

#endif  // TAXELSIM_ROTATION_H_
