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

#include "taxelsim/rotation.h"

#include <algorithm>
#include <cmath>

#include "taxelsim/errors.h"

namespace taxelsim {

namespace {

// Below this, a1 is treated as zero and a2 as parallel to a1.
constexpr double kDegenerateNorm = 1e-12;

}  // namespace

double Rotation6D::MaxAbsDifference(const Rotation6D& other) const {
  return std::max((a1 - other.a1).cwiseAbs().maxCoeff(),
                  (a2 - other.a2).cwiseAbs().maxCoeff());
}

double Quaternion::Norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::Normalized() const {
  const double n = Norm();
  return {w / n, x / n, y / n, z / n};
}

double Quaternion::MaxAbsDifference(const Quaternion& other) const {
  return std::max({std::abs(w - other.w), std::abs(x - other.x),
                   std::abs(y - other.y), std::abs(z - other.z)});
}

bool IsRotation(const Mat3& r, double tolerance) {
  if (!r.allFinite()) return false;
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tolerance && std::abs(r.determinant() - 1.0) <= tolerance;
}

Rotation6D Encode6D(const Mat3& r) {
  if (!IsRotation(r, kRotationInputTolerance)) {
    throw InvalidRotationError("Encode6D: input is not orthonormal with det +1");
  }
  return {r.col(0), r.col(1)};
}

Mat3 Decode6D(const Rotation6D& r) {
  const double n1 = r.a1.norm();
  if (!(n1 > kDegenerateNorm)) {
    throw DegenerateInputError("Decode6D: first column is zero");
  }
  const Vec3 b1 = r.a1 / n1;
  const Vec3 u2 = r.a2 - b1.dot(r.a2) * b1;
  const double n2 = u2.norm();
  if (!(n2 > kDegenerateNorm * std::max(1.0, r.a2.norm()))) {
    throw DegenerateInputError("Decode6D: columns are parallel");
  }
  const Vec3 b2 = u2 / n2;
  Mat3 out;
  out.col(0) = b1;
  out.col(1) = b2;
  out.col(2) = b1.cross(b2);
  return out;
}

double RotationDistance(const Mat3& r1, const Mat3& r2) {
  const double trace = (r1.transpose() * r2).trace();
  const double c = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Mat3 QuaternionToMatrix(const Quaternion& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Quaternion MatrixToQuaternion(const Mat3& r) {
  const Eigen::Quaterniond e(r);
  Quaternion q{e.w(), e.x(), e.y(), e.z()};
  q = q.Normalized();
  bool flip = q.w < 0.0;
  if (q.w == 0.0) {
    const double lead = q.x != 0.0 ? q.x : (q.y != 0.0 ? q.y : q.z);
    flip = lead < 0.0;
  }
  return flip ? -q : q;
}

Mat3 AxisAngle(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Mat3 QuarterTurn(const Vec3& axis) {
  const Vec3 k = axis.normalized();
  Mat3 kx;
  kx << 0.0, -k.z(), k.y(), k.z(), 0.0, -k.x(), -k.y(), k.x(), 0.0;
  // Rodrigues with sin = 1, cos = 0: I + K + K^2.
  return Mat3::Identity() + kx + kx * kx;
}

Mat3 ExpMap(const Vec3& rotation_vector) {
  const double angle = rotation_vector.norm();
  if (angle == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, rotation_vector / angle).toRotationMatrix();
}

Vec3 LogMap(const Mat3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.axis() * aa.angle();
}

Mat3 Orthonormalize(const Mat3& r) { return Decode6D({r.col(0), r.col(1)}); }

}  // namespace taxelsim
