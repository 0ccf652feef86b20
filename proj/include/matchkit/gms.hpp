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
#include <cstdint>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "matchkit/features.hpp"
#include "matchkit/matcher.hpp"

namespace matchkit::gms {

using features::FeatureSet;
using matcher::Match;

enum class GridShift { none, half_x, half_y, half_both };

inline constexpr std::array<GridShift, 4> kAllShifts = {
    GridShift::none, GridShift::half_x, GridShift::half_y, GridShift::half_both};

struct GridSpec {
  int cols = 20;
  int rows = 20;
  GridShift shift = GridShift::none;

  int num_cells() const { return cols * rows; }
};

struct GmsConfig {
  int grid_cols = 20;
  int grid_rows = 20;
  double alpha = 6.0;
  std::vector<GridShift> shifts = {kAllShifts.begin(), kAllShifts.end()};
};

/// Match plus its neighborhood-support confidence and the cell pair of the
/// shift that produced the winning score.
struct ScoredMatch {
  Match match;
  int confidence = 0;
  int cell_a = -1;
  int cell_b = -1;
};

/// Maps points to grid cells: cell = floor((x + sx) / cell_w) +
/// cols * floor((y + sy) / cell_h) with half-cell shift offsets per the
/// GridSpec. Points pushed past the last cell edge by the shift clamp to the
/// last cell. Points outside the image raise PointOutOfBounds.
inline std::vector<int> assign_cells(std::span<const Eigen::Vector2d> points, int width,
                                     int height, const GridSpec& grid) {
  if (grid.cols < 1 || grid.rows < 1) throw ConfigError("assign_cells: grid must be >= 1x1");
  const double cell_w = static_cast<double>(width) / grid.cols;
  const double cell_h = static_cast<double>(height) / grid.rows;
  const bool shift_x = grid.shift == GridShift::half_x || grid.shift == GridShift::half_both;
  const bool shift_y = grid.shift == GridShift::half_y || grid.shift == GridShift::half_both;
  const double sx = shift_x ? cell_w / 2.0 : 0.0;
  const double sy = shift_y ? cell_h / 2.0 : 0.0;

  std::vector<int> cells;
  cells.reserve(points.size());
  for (const auto& p : points) {
    if (p.x() < 0.0 || p.y() < 0.0 || p.x() >= width || p.y() >= height)
      throw PointOutOfBounds("assign_cells: point outside image extent");
    int col = static_cast<int>(std::floor((p.x() + sx) / cell_w));
    int row = static_cast<int>(std::floor((p.y() + sy) / cell_h));
    if (col >= grid.cols) col = grid.cols - 1;
    if (row >= grid.rows) row = grid.rows - 1;
    cells.push_back(col + grid.cols * row);
  }
  return cells;
}

/// Tally of matches per (cell_a, cell_b) pair, keyed as
/// cell_a * num_cells + cell_b.
inline std::unordered_map<std::uint64_t, int> cell_pair_scores(std::span<const Match> matches,
                                                               std::span<const int> cells_a,
                                                               std::span<const int> cells_b,
                                                               const GridSpec& grid) {
  if (cells_a.size() != matches.size() || cells_b.size() != matches.size())
    throw LengthMismatch("cell_pair_scores: assignments not parallel to matches");
  const auto n_cells = static_cast<std::uint64_t>(grid.num_cells());
  std::unordered_map<std::uint64_t, int> counts;
  counts.reserve(matches.size());
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const std::uint64_t key =
        static_cast<std::uint64_t>(cells_a[i]) * n_cells + static_cast<std::uint64_t>(cells_b[i]);
    ++counts[key];
  }
  return counts;
}

namespace detail {

struct ShiftPass {
  std::vector<int> scores;     // per-match neighborhood support (self excluded)
  std::vector<int> cells_a;
  std::vector<int> cells_b;
  double tau = 0.0;
};

// Scores one shift. A match in cell pair (ca, cb) is supported by matches in
// the aligned 3x3 neighborhood pairs (ca + d, cb + d); the match itself is
// excluded. The threshold is alpha * sqrt(mean matches per non-empty A cell).
inline ShiftPass score_shift(std::span<const Match> matches, const FeatureSet& fs_a,
                             const FeatureSet& fs_b, const GmsConfig& cfg, GridShift shift) {
  GridSpec grid{cfg.grid_cols, cfg.grid_rows, shift};

  std::vector<Eigen::Vector2d> pa;
  std::vector<Eigen::Vector2d> pb;
  pa.reserve(matches.size());
  pb.reserve(matches.size());
  for (const Match& m : matches) {
    const auto& ka = fs_a.keypoints[static_cast<std::size_t>(m.idx_a)];
    const auto& kb = fs_b.keypoints[static_cast<std::size_t>(m.idx_b)];
    pa.emplace_back(ka.x, ka.y);
    pb.emplace_back(kb.x, kb.y);
  }

  ShiftPass pass;
  pass.cells_a = assign_cells(pa, fs_a.width, fs_a.height, grid);
  pass.cells_b = assign_cells(pb, fs_b.width, fs_b.height, grid);
  const auto counts = cell_pair_scores(matches, pass.cells_a, pass.cells_b, grid);

  std::unordered_set<int> nonempty(pass.cells_a.begin(), pass.cells_a.end());
  const double mean = nonempty.empty()
                          ? 0.0
                          : static_cast<double>(matches.size()) / static_cast<double>(nonempty.size());
  pass.tau = cfg.alpha * std::sqrt(mean);

  const auto n_cells = static_cast<std::uint64_t>(grid.num_cells());
  pass.scores.resize(matches.size());
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const int ca = pass.cells_a[i];
    const int cb = pass.cells_b[i];
    const int col_a = ca % grid.cols;
    const int row_a = ca / grid.cols;
    const int col_b = cb % grid.cols;
    const int row_b = cb / grid.cols;
    int support = -1;  // self-exclusion
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int na_col = col_a + dx;
        const int na_row = row_a + dy;
        const int nb_col = col_b + dx;
        const int nb_row = row_b + dy;
        if (na_col < 0 || na_col >= grid.cols || na_row < 0 || na_row >= grid.rows) continue;
        if (nb_col < 0 || nb_col >= grid.cols || nb_row < 0 || nb_row >= grid.rows) continue;
        const std::uint64_t key =
            static_cast<std::uint64_t>(na_col + grid.cols * na_row) * n_cells +
            static_cast<std::uint64_t>(nb_col + grid.cols * nb_row);
        auto it = counts.find(key);
        if (it != counts.end()) support += it->second;
      }
    }
    pass.scores[i] = support;
  }
  return pass;
}

struct ScoreResult {
  std::vector<ScoredMatch> scored;       // all input matches, input order
  std::vector<std::uint8_t> survives;    // score >= tau under some shift
};

inline ScoreResult score_all(std::span<const Match> matches, const FeatureSet& fs_a,
                             const FeatureSet& fs_b, const GmsConfig& cfg) {
  if (cfg.shifts.empty()) throw ConfigError("gms: at least one grid shift must be enabled");
  ScoreResult res;
  res.scored.resize(matches.size());
  res.survives.assign(matches.size(), 0);
  for (std::size_t i = 0; i < matches.size(); ++i) {
    res.scored[i].match = matches[i];
    res.scored[i].confidence = -1;
  }
  if (matches.empty()) return res;

  for (const GridShift shift : cfg.shifts) {
    const ShiftPass pass = score_shift(matches, fs_a, fs_b, cfg, shift);
    for (std::size_t i = 0; i < matches.size(); ++i) {
      if (pass.scores[i] > res.scored[i].confidence) {
        res.scored[i].confidence = pass.scores[i];
        res.scored[i].cell_a = pass.cells_a[i];
        res.scored[i].cell_b = pass.cells_b[i];
      }
      if (static_cast<double>(pass.scores[i]) >= pass.tau) res.survives[i] = 1;
    }
  }
  return res;
}

}  // namespace detail

/// Scores every match (confidence = best support over the enabled shifts)
/// without applying the threshold. Used where downstream stages want the
/// confidence ordering but the full candidate set.
inline std::vector<ScoredMatch> gms_score(std::span<const Match> matches, const FeatureSet& fs_a,
                                          const FeatureSet& fs_b, const GmsConfig& cfg = {}) {
  return detail::score_all(matches, fs_a, fs_b, cfg).scored;
}

/// Grid-based motion statistics filter: a match survives when its
/// neighborhood support reaches alpha * sqrt(mean cell occupancy) under any
/// enabled shift. Survivors keep input order; confidence is the best score
/// over shifts.
inline std::vector<ScoredMatch> gms_filter(std::span<const Match> matches, const FeatureSet& fs_a,
                                           const FeatureSet& fs_b, const GmsConfig& cfg = {}) {
  const detail::ScoreResult res = detail::score_all(matches, fs_a, fs_b, cfg);
  std::vector<ScoredMatch> out;
  for (std::size_t i = 0; i < matches.size(); ++i)
    if (res.survives[i]) out.push_back(res.scored[i]);
  return out;
}

}  // namespace matchkit::gms
