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

#include <cstdint>
#include <utility>
#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/image.hpp"
#include "matchkit/rng.hpp"

namespace matchkit::imageio {

/// Exact labels for a synthetic correspondence set.
struct GroundTruth {
  Eigen::Matrix3d homography = Eigen::Matrix3d::Identity();
  std::vector<std::uint8_t> inlier_labels;
  double noise_sigma = 0.0;
};

namespace detail {

inline double symmetric_transfer(const Eigen::Matrix3d& h, const Eigen::Matrix3d& h_inv,
                                 const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d fwd = project_point(h, a);
  const Eigen::Vector2d bwd = project_point(h_inv, b);
  return 0.5 * ((fwd - b).norm() + (bwd - a).norm());
}

}  // namespace detail

/// Generates labeled point pairs: n_inliers pairs (p, h p + N(0, sigma^2))
/// with p uniform over the extent, plus n_outliers independent uniform pairs.
/// Outlier pairs that land within 3 px symmetric transfer error of h are
/// redrawn so the labels stay unambiguous. The combined list is returned in a
/// seeded shuffle order; the whole function is a pure function of its
/// arguments.
inline std::pair<std::vector<PointPair>, GroundTruth> synth_correspondences(
    int n_inliers, int n_outliers, const Eigen::Matrix3d& h, double noise_sigma,
    int extent_w, int extent_h, std::uint64_t seed) {
  if (n_inliers < 0 || n_outliers < 0 || extent_w <= 0 || extent_h <= 0)
    throw ConfigError("synth_correspondences: nonpositive extent or negative counts");

  Eigen::Matrix3d hn = h;
  if (std::abs(hn(2, 2)) > 1e-12) hn /= hn(2, 2);
  if (std::abs(hn.determinant()) < 1e-9)
    throw SingularHomography("synth_correspondences: homography not invertible");
  const Eigen::Matrix3d hn_inv = hn.inverse();

  Rng rng(seed);
  std::vector<PointPair> pairs;
  std::vector<std::uint8_t> labels;
  pairs.reserve(static_cast<std::size_t>(n_inliers + n_outliers));
  labels.reserve(pairs.capacity());

  for (int i = 0; i < n_inliers; ++i) {
    Eigen::Vector2d a;
    Eigen::Vector2d b;
    do {
      a = {rng.uniform(0.0, extent_w), rng.uniform(0.0, extent_h)};
      b = project_point(hn, a);
    } while (!b.allFinite());
    if (noise_sigma > 0.0) b += noise_sigma * Eigen::Vector2d(rng.gaussian(), rng.gaussian());
    pairs.push_back({a, b});
    labels.push_back(1);
  }
  for (int i = 0; i < n_outliers; ++i) {
    Eigen::Vector2d a;
    Eigen::Vector2d b;
    do {
      a = {rng.uniform(0.0, extent_w), rng.uniform(0.0, extent_h)};
      b = {rng.uniform(0.0, extent_w), rng.uniform(0.0, extent_h)};
    } while (detail::symmetric_transfer(hn, hn_inv, a, b) < 3.0);
    pairs.push_back({a, b});
    labels.push_back(0);
  }

  // Seeded shuffle applied to pairs and labels in lockstep.
  std::vector<std::size_t> perm(pairs.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng.shuffle(perm);
  std::vector<PointPair> shuffled_pairs(pairs.size());
  std::vector<std::uint8_t> shuffled_labels(labels.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled_pairs[i] = pairs[perm[i]];
    shuffled_labels[i] = labels[perm[i]];
  }

  GroundTruth gt;
  gt.homography = hn;
  gt.inlier_labels = std::move(shuffled_labels);
  gt.noise_sigma = noise_sigma;
  return {std::move(shuffled_pairs), std::move(gt)};
}

/// Cluttered synthetic scene: seeded random rectangles over a mid-gray
/// field, plus low per-pixel noise. Overlaps produce a dense field of
/// corners and junctions with globally distinctive local texture, so both
/// the corner detector and the binary descriptors have something real to
/// work with.
inline Image make_textured_scene(int width, int height, int rectangles, std::uint64_t seed) {
  Rng rng(seed);
  Image img(width, height, 128);
  for (int k = 0; k < rectangles; ++k) {
    const int rw = 6 + static_cast<int>(rng.below(23));
    const int rh = 6 + static_cast<int>(rng.below(23));
    const int x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, width - rw))));
    const int y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, height - rh))));
    const auto v = static_cast<std::uint8_t>(10 + rng.below(236));
    for (int y = y0; y < y0 + rh; ++y)
      for (int x = x0; x < x0 + rw; ++x) img.at(x, y) = v;
  }
  for (auto& px : img.data) {
    const int v = static_cast<int>(px) + static_cast<int>(rng.below(9)) - 4;
    px = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
  }
  return img;
}

/// Grid of isolated bright squares on a dark field; each square contributes
/// four L-corners, so the constructed corner count is 4 * squares placed.
/// Returns the image and the number of squares.
inline std::pair<Image, int> make_square_grid(int width, int height, int square, int pitch,
                                              int margin = 24, std::uint8_t fg = 230,
                                              std::uint8_t bg = 15) {
  Image img(width, height, bg);
  int count = 0;
  for (int y0 = margin; y0 + square + margin <= height; y0 += pitch) {
    for (int x0 = margin; x0 + square + margin <= width; x0 += pitch) {
      for (int y = y0; y < y0 + square; ++y)
        for (int x = x0; x < x0 + square; ++x) img.at(x, y) = fg;
      ++count;
    }
  }
  return {std::move(img), count};
}

}  // namespace matchkit::imageio
