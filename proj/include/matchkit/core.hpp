// Copyright (c) 2026 The matchkit authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Dense>

namespace matchkit {

/// Base class for every error the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedHeader : Error { using Error::Error; };
struct TruncatedData : Error { using Error::Error; };
struct UnsupportedMaxval : Error { using Error::Error; };
struct SingularHomography : Error { using Error::Error; };
struct ImageTooSmall : Error { using Error::Error; };
struct PatchOutOfBounds : Error { using Error::Error; };
struct PointOutOfBounds : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct DegenerateSample : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };
struct TooFewMatches : Error { using Error::Error; };
struct NoValidModel : Error { using Error::Error; };
struct ImageLoadError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/// One candidate correspondence: a point in image A paired with a point in image B.
struct PointPair {
  Eigen::Vector2d a = Eigen::Vector2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
};

/// Applies a 3x3 projective transform to a 2D point and dehomogenizes.
/// Points that map to the plane at infinity come back as (inf, inf).
inline Eigen::Vector2d project_point(const Eigen::Matrix3d& h, const Eigen::Vector2d& p) {
  const Eigen::Vector3d v = h * Eigen::Vector3d(p.x(), p.y(), 1.0);
  if (std::abs(v.z()) < 1e-12) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  return {v.x() / v.z(), v.y() / v.z()};
}

}  // namespace matchkit
