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

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/image.hpp"
#include "matchkit/pattern.hpp"

namespace matchkit::features {

using imageio::Image;

/// Corner with response score and intensity-centroid orientation.
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double score = 0.0;
  double angle = 0.0;  // radians in [0, 2pi)
};

/// 256-bit binary descriptor.
struct Descriptor {
  std::array<std::uint64_t, 4> words{};

  bool bit(int i) const { return (words[i >> 6] >> (i & 63)) & 1ULL; }
  void set(int i) { words[i >> 6] |= 1ULL << (i & 63); }
  bool operator==(const Descriptor&) const = default;
};

/// Parallel keypoint/descriptor lists, sorted by descending score
/// (ties by ascending y then x).
struct FeatureSet {
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor> descriptors;
  int width = 0;
  int height = 0;

  std::size_t size() const { return keypoints.size(); }
};

struct FeatureConfig {
  int base_threshold = 20;
  int fallback_threshold = 7;
  double nms_radius = 3.0;
  int orientation_radius = 15;
};

/// Keypoints must sit at least this far inside the border so the 31x31
/// descriptor patch (and any rotation of it) fits.
inline constexpr int kBorderMargin = 16;

namespace detail {

// 16-pixel Bresenham circle of radius 3, clockwise from (0, -3).
inline constexpr std::array<std::array<int, 2>, 16> kRing = {{{0, -3},
                                                              {1, -3},
                                                              {2, -2},
                                                              {3, -1},
                                                              {3, 0},
                                                              {3, 1},
                                                              {2, 2},
                                                              {1, 3},
                                                              {0, 3},
                                                              {-1, 3},
                                                              {-2, 2},
                                                              {-3, 1},
                                                              {-3, 0},
                                                              {-3, -1},
                                                              {-2, -2},
                                                              {-1, -3}}};

// Best SAD over any contiguous circular run of length >= 9 among flagged
// ring positions; 0 when no such run exists.
inline int best_arc_score(const std::array<bool, 16>& flag, const std::array<int, 16>& absdiff) {
  bool all = true;
  for (bool f : flag) all = all && f;
  if (all) {
    int s = 0;
    for (int d : absdiff) s += d;
    return s;
  }
  int best = 0;
  int run = 0;
  int sum = 0;
  for (int i = 0; i < 32; ++i) {
    const int k = i & 15;
    if (flag[k]) {
      ++run;
      sum += absdiff[k];
      if (run >= 9 && sum > best) best = sum;
    } else {
      run = 0;
      sum = 0;
    }
  }
  return best;
}

struct Candidate {
  int x;
  int y;
  int score;
};

// Greedy non-maximum suppression: candidates are visited in (score desc,
// y asc, x asc) order and kept unless a kept candidate lies within radius.
inline std::vector<Candidate> suppress(std::vector<Candidate> cands, double radius) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  const double r2 = radius * radius;
  const int cell = std::max(1, static_cast<int>(std::ceil(radius)));
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  std::vector<Candidate> kept;
  kept.reserve(cands.size());
  auto key = [](int cx, int cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
  };
  for (const Candidate& c : cands) {
    const int cx = c.x / cell;
    const int cy = c.y / cell;
    bool blocked = false;
    for (int dy = -1; dy <= 1 && !blocked; ++dy) {
      for (int dx = -1; dx <= 1 && !blocked; ++dx) {
        auto it = buckets.find(key(cx + dx, cy + dy));
        if (it == buckets.end()) continue;
        for (int idx : it->second) {
          const double ddx = kept[idx].x - c.x;
          const double ddy = kept[idx].y - c.y;
          if (ddx * ddx + ddy * ddy <= r2) {
            blocked = true;
            break;
          }
        }
      }
    }
    if (!blocked) {
      buckets[key(cx, cy)].push_back(static_cast<int>(kept.size()));
      kept.push_back(c);
    }
  }
  return kept;
}

inline void sort_by_score(std::vector<Keypoint>& kps) {
  std::sort(kps.begin(), kps.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
}

}  // namespace detail

/// FAST-9 segment-test detector. A pixel is a corner when at least 9
/// contiguous ring pixels are all brighter than center + threshold or all
/// darker than center - threshold; the score is the SAD over the best such
/// arc. Non-maximum suppression within nms_radius; 16 px border margin.
inline std::vector<Keypoint> detect_fast(const Image& img, int threshold, double nms_radius) {
  if (img.width < 32 || img.height < 32)
    throw ImageTooSmall("detect_fast: image smaller than 32x32");
  if (threshold < 1) throw ConfigError("detect_fast: threshold must be >= 1");

  std::vector<detail::Candidate> cands;
  for (int y = kBorderMargin; y < img.height - kBorderMargin; ++y) {
    for (int x = kBorderMargin; x < img.width - kBorderMargin; ++x) {
      const int c = img.at(x, y);
      // Any 9-long arc covers at least two of the four compass points.
      int compass_bright = 0;
      int compass_dark = 0;
      for (int k : {0, 4, 8, 12}) {
        const int v = img.at(x + detail::kRing[k][0], y + detail::kRing[k][1]);
        if (v > c + threshold) ++compass_bright;
        if (v < c - threshold) ++compass_dark;
      }
      if (compass_bright < 2 && compass_dark < 2) continue;

      std::array<bool, 16> bright{};
      std::array<bool, 16> dark{};
      std::array<int, 16> absdiff{};
      for (int k = 0; k < 16; ++k) {
        const int v = img.at(x + detail::kRing[k][0], y + detail::kRing[k][1]);
        const int d = v - c;
        bright[k] = d > threshold;
        dark[k] = -d > threshold;
        absdiff[k] = d >= 0 ? d : -d;
      }
      const int score = std::max(detail::best_arc_score(bright, absdiff),
                                 detail::best_arc_score(dark, absdiff));
      if (score > 0) cands.push_back({x, y, score});
    }
  }

  std::vector<Keypoint> kps;
  for (const auto& c : detail::suppress(std::move(cands), nms_radius))
    kps.push_back({static_cast<double>(c.x), static_cast<double>(c.y),
                   static_cast<double>(c.score), 0.0});
  detail::sort_by_score(kps);
  return kps;
}

/// Intensity-centroid orientation over the circular patch of the given
/// radius: atan2(m01, m10) with mpq = sum x^p y^q I(x, y) in patch-centered
/// coordinates, mapped into [0, 2pi). Both moments zero -> 0 by convention.
inline double orientation(const Image& img, const Keypoint& kp, int radius = 15) {
  const int cx = static_cast<int>(std::lround(kp.x));
  const int cy = static_cast<int>(std::lround(kp.y));
  if (cx - radius < 0 || cy - radius < 0 || cx + radius >= img.width || cy + radius >= img.height)
    throw PatchOutOfBounds("orientation: patch leaves the image");
  const int r2 = radius * radius;
  long long m10 = 0;
  long long m01 = 0;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy > r2) continue;
      const int v = img.at(cx + dx, cy + dy);
      m10 += static_cast<long long>(dx) * v;
      m01 += static_cast<long long>(dy) * v;
    }
  }
  if (m10 == 0 && m01 == 0) return 0.0;
  double a = std::atan2(static_cast<double>(m01), static_cast<double>(m10));
  if (a < 0.0) a += 2.0 * 3.14159265358979323846;
  if (a >= 2.0 * 3.14159265358979323846) a = 0.0;
  return a;
}

/// Rotated binary test pattern: bit i is set iff I(p_i') < I(q_i') with the
/// pattern offsets rotated by kp.angle and sampled at the nearest pixel.
/// Ties produce 0. Rotated offsets are clamped to the 31x31 patch; the
/// shipped pattern lives inside the radius-15 disc and never clamps.
inline Descriptor describe(const Image& img, const Keypoint& kp,
                           const Pattern& pattern = default_pattern()) {
  const int cx = static_cast<int>(std::lround(kp.x));
  const int cy = static_cast<int>(std::lround(kp.y));
  if (cx - 15 < 0 || cy - 15 < 0 || cx + 15 >= img.width || cy + 15 >= img.height)
    throw PatchOutOfBounds("describe: 31x31 patch leaves the image");
  const double c = std::cos(kp.angle);
  const double s = std::sin(kp.angle);
  auto clamp15 = [](long v) { return static_cast<int>(v < -15 ? -15 : (v > 15 ? 15 : v)); };
  auto sample = [&](int ox, int oy) {
    const int rx = clamp15(std::lround(c * ox - s * oy));
    const int ry = clamp15(std::lround(s * ox + c * oy));
    return img.at(cx + rx, cy + ry);
  };
  Descriptor d;
  for (int i = 0; i < 256; ++i) {
    const PatternEntry& e = pattern[static_cast<std::size_t>(i)];
    if (sample(e.px, e.py) < sample(e.qx, e.qy)) d.set(i);
  }
  return d;
}

/// Detection step of extract(): base-threshold pass, one fallback pass at the
/// lower threshold when the preset is not met (merged without violating NMS),
/// top `preset` by score.
inline std::vector<Keypoint> detect_for_preset(const Image& img, int preset,
                                               const FeatureConfig& cfg = {}) {
  if (preset < 1) throw ConfigError("extract: preset must be >= 1");
  std::vector<Keypoint> kps = detect_fast(img, cfg.base_threshold, cfg.nms_radius);
  if (static_cast<int>(kps.size()) < preset) {
    const std::vector<Keypoint> weak = detect_fast(img, cfg.fallback_threshold, cfg.nms_radius);
    const double r2 = cfg.nms_radius * cfg.nms_radius;
    const int cell = std::max(1, static_cast<int>(std::ceil(cfg.nms_radius)));
    auto key = [](int cx, int cy) {
      return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
             static_cast<std::uint32_t>(cy);
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < kps.size(); ++i)
      buckets[key(static_cast<int>(kps[i].x) / cell, static_cast<int>(kps[i].y) / cell)]
          .push_back(i);
    for (const Keypoint& w : weak) {
      const int cx = static_cast<int>(w.x) / cell;
      const int cy = static_cast<int>(w.y) / cell;
      bool blocked = false;
      for (int dy = -1; dy <= 1 && !blocked; ++dy) {
        for (int dx = -1; dx <= 1 && !blocked; ++dx) {
          auto it = buckets.find(key(cx + dx, cy + dy));
          if (it == buckets.end()) continue;
          for (std::size_t idx : it->second) {
            const double ddx = kps[idx].x - w.x;
            const double ddy = kps[idx].y - w.y;
            if (ddx * ddx + ddy * ddy <= r2) {
              blocked = true;
              break;
            }
          }
        }
      }
      if (!blocked) kps.push_back(w);  // fallback points are not re-inserted as blockers
    }
    detail::sort_by_score(kps);
  }
  if (static_cast<int>(kps.size()) > preset) kps.resize(static_cast<std::size_t>(preset));
  return kps;
}

/// Orientation + descriptor for an already-detected keypoint list.
inline FeatureSet describe_all(const Image& img, std::vector<Keypoint> kps,
                               const FeatureConfig& cfg = {},
                               const Pattern& pattern = default_pattern()) {
  FeatureSet fs;
  fs.width = img.width;
  fs.height = img.height;
  fs.descriptors.reserve(kps.size());
  for (Keypoint& kp : kps) {
    kp.angle = orientation(img, kp, cfg.orientation_radius);
    fs.descriptors.push_back(describe(img, kp, pattern));
  }
  fs.keypoints = std::move(kps);
  return fs;
}

/// Full extraction: detect up to `preset` corners (two thresholds), then
/// orient and describe each. Returns fewer than `preset` features when the
/// image does not have that many corners.
inline FeatureSet extract(const Image& img, int preset, const FeatureConfig& cfg = {},
                          const Pattern& pattern = default_pattern()) {
  return describe_all(img, detect_for_preset(img, preset, cfg), cfg, pattern);
}

}  // namespace matchkit::features
