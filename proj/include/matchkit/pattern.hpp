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

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "matchkit/core.hpp"

namespace matchkit::features {

/// One descriptor comparison: intensities are read at offsets (px, py) and
/// (qx, qy) from the keypoint, rotated by the keypoint angle.
struct PatternEntry {
  std::int8_t px, py, qx, qy;
};

/// 256 point-pair offsets in patch coordinates. The canonical table was
/// drawn once from a seeded isotropic Gaussian (sigma = 31/5) restricted to
/// the radius-15 disc and frozen; the same table ships as data/orb_pattern.txt
/// ("px py qx qy" per line) for cross-implementation comparisons.
using Pattern = std::array<PatternEntry, 256>;

inline const Pattern& default_pattern() {
  static const Pattern table = {{
    {3, -1, -3, 4}, {-4, -8, -5, -7}, {-6, -1, 6, 5}, {7, 13, 2, -3},
    {5, -2, -5, -1}, {2, -11, 3, -9}, {5, 3, -11, -3}, {7, -9, 14, 1},
    {-1, -5, 9, -3}, {3, 8, -5, -2}, {9, 1, 2, -2}, {3, 1, -7, -6},
    {-7, 11, -6, 3}, {-1, -4, -4, 0}, {4, -4, 11, -6}, {-8, 5, -3, 14},
    {4, -2, 1, 1}, {-9, 6, -10, 6}, {3, 0, 3, -3}, {-4, 3, -1, 1},
    {1, -3, 6, 0}, {0, 0, 2, -11}, {2, -9, 11, 3}, {-2, 7, 4, 1},
    {-6, 4, 2, 3}, {-3, -6, -1, 5}, {-4, -7, 2, 6}, {-1, -4, -4, 0},
    {-1, -6, -3, -2}, {4, 2, -1, 6}, {0, -6, 3, 7}, {-4, -3, 6, 4},
    {0, -1, 7, 9}, {3, 8, 3, 0}, {1, -1, 1, 12}, {-1, 5, 6, 8},
    {7, -2, 0, -6}, {9, 0, -7, -6}, {-4, 2, -5, 2}, {4, 5, 9, 1},
    {10, -3, 9, -12}, {10, -7, 2, 9}, {-8, -7, 5, -2}, {-3, 14, -4, 3},
    {-12, -3, -3, 0}, {3, -4, -6, 1}, {-1, -3, 1, -5}, {-2, 2, -2, 3},
    {-4, -6, -9, -7}, {-1, 9, 10, 2}, {-14, -3, 7, 8}, {3, -3, -3, -4},
    {3, 4, -9, 2}, {2, 4, 2, -6}, {6, -3, -4, -3}, {-5, 2, 3, 10},
    {13, 6, 4, 8}, {8, 0, 7, -3}, {-1, 2, -4, -10}, {-1, 2, 3, -1},
    {-1, -8, 3, -3}, {3, 0, -3, -2}, {9, 7, -5, 3}, {4, 0, -2, -5},
    {-4, 5, 4, 10}, {-7, 2, -4, -1}, {-8, -5, 8, -5}, {7, 3, -2, -1},
    {1, 0, 0, -3}, {3, 3, -5, 0}, {6, 2, -10, 7}, {-11, 8, -2, 6},
    {10, -4, -1, 2}, {-1, -6, 6, -1}, {-2, 4, 9, -5}, {-9, -2, 1, -3},
    {0, -8, 1, 0}, {-3, 5, 9, 9}, {2, 0, -4, 7}, {5, 5, -10, 5},
    {7, -8, -5, -4}, {-7, -3, -1, 2}, {1, -10, -1, -3}, {-5, 1, -4, 3},
    {3, 0, -9, -4}, {-3, 13, -6, 11}, {-4, 6, 11, -1}, {0, 3, 3, -6},
    {3, -8, 0, -8}, {-7, 7, -3, 2}, {-1, -3, 7, 1}, {-5, 0, -14, 2},
    {-2, -1, 3, 5}, {2, -9, 0, 2}, {1, 7, 1, -1}, {4, -7, -9, 3},
    {4, -6, 9, 11}, {-3, -1, 8, 6}, {-9, 6, -6, 4}, {-2, 6, 2, -7},
    {3, 8, -4, -7}, {-3, -1, -1, -2}, {-5, -3, 5, 3}, {0, -10, -10, 0},
    {3, -6, -1, 4}, {3, -6, 12, -3}, {-3, 0, -9, 1}, {10, 9, -1, 2},
    {-8, 9, -2, -7}, {-7, -7, -2, 2}, {-7, -4, 7, 5}, {3, 3, -1, 1},
    {7, -2, -5, 1}, {-2, 3, -2, 4}, {8, 4, -2, -2}, {-6, -4, 1, 5},
    {-8, -10, 6, 7}, {6, 3, -6, 7}, {2, -1, 1, 5}, {-2, -9, 9, -3},
    {-10, 4, -4, -3}, {2, 4, 3, -6}, {-7, 0, -9, -6}, {-5, 4, 4, -1},
    {-5, 2, 2, -4}, {-3, -4, 0, 7}, {1, 2, -3, 3}, {-11, 7, 7, 0},
    {-1, -2, 3, 7}, {3, 11, 1, 8}, {-3, 7, -10, -5}, {3, -5, 0, -7},
    {5, -13, -2, -1}, {2, 6, -2, -1}, {4, -2, 10, -1}, {12, 4, 1, 7},
    {-2, 9, -5, 3}, {6, -6, 0, -5}, {0, -1, 10, -2}, {-4, 5, 2, -10},
    {-5, -1, 9, -2}, {-3, -3, 1, 6}, {11, -8, 2, 8}, {-10, -2, -1, -10},
    {-2, 0, -8, -3}, {-10, -5, -2, 0}, {-4, 6, -10, 0}, {3, 3, 13, 4},
    {-5, -9, -2, 1}, {-7, 0, 0, 13}, {-1, -9, -1, -5}, {12, 7, -4, -5},
    {4, -1, -3, 10}, {4, -4, 1, -2}, {2, 1, 4, -6}, {1, -3, -8, 4},
    {-9, 9, 6, -7}, {-6, 0, -12, 9}, {3, 5, 7, 2}, {-1, 11, 0, -10},
    {3, 7, 0, 1}, {9, -4, -10, 4}, {0, 0, -4, -4}, {4, 1, 9, 3},
    {0, 0, -6, 0}, {0, 1, -4, 7}, {1, 4, 3, -2}, {-4, -1, 1, 1},
    {-2, -5, -7, -4}, {7, 3, -3, 2}, {4, 7, 5, -7}, {6, 6, -6, 3},
    {10, -8, 6, -9}, {0, -2, 1, -7}, {2, 7, 5, -3}, {2, -2, -3, 4},
    {7, 1, -7, 5}, {4, -9, 5, 3}, {-3, 6, 1, -8}, {2, 9, 1, 10},
    {-6, -8, -5, -1}, {6, 7, 1, -4}, {0, -6, -9, 5}, {-6, -6, -6, -8},
    {-4, 1, -3, -1}, {3, -2, -6, -3}, {12, -6, 6, 0}, {3, 2, -1, 1},
    {-6, 0, -6, 6}, {2, 4, 3, 1}, {3, 3, 0, -5}, {-6, 3, 10, -4},
    {-1, -8, 10, -2}, {-5, -3, -6, 4}, {4, 1, 4, 2}, {2, 1, -2, 8},
    {7, 6, -5, -4}, {4, 4, -4, 7}, {2, -11, 8, 4}, {-7, -3, -5, 4},
    {2, -3, -11, 0}, {13, -2, 11, -8}, {-8, 6, 7, -5}, {-2, 8, -12, -5},
    {-7, 8, -1, -11}, {4, 12, 7, 7}, {3, 0, -4, 4}, {-1, -1, -5, 8},
    {5, 1, 9, -6}, {-5, -6, 14, 0}, {3, -8, 4, -2}, {4, 7, -2, -4},
    {-8, 5, -5, 11}, {5, 11, 6, 4}, {3, 0, 1, 6}, {-4, -3, 8, 7},
    {4, -7, -1, -2}, {-6, -1, 3, 12}, {0, 0, 1, 7}, {2, 9, -2, -5},
    {-1, 3, -11, 1}, {4, -2, -1, -1}, {-11, -2, 12, 4}, {-5, 6, -4, 8},
    {-3, -3, 2, -2}, {5, -8, 7, -1}, {0, 5, 10, 2}, {-2, 9, 1, 3},
    {-3, -5, -7, 4}, {-5, 5, -3, -1}, {0, 0, -7, 8}, {0, 4, 1, -6},
    {-3, -2, 3, -6}, {5, 4, -8, -5}, {-6, -8, 0, -15}, {-7, 11, 2, -1},
    {3, -2, -5, -2}, {2, -8, 7, -11}, {-4, 6, -2, 3}, {7, -10, 4, -4},
    {-5, 3, -3, 0}, {-1, 1, -2, 2}, {-1, -6, -6, -4}, {3, -4, -1, -8},
    {-2, -3, 2, 0}, {1, 0, -6, 6}, {3, 10, 5, 10}, {10, -5, 7, 1},
    {3, 4, -5, -7}, {7, -1, -4, -2}, {0, 1, 8, 0}, {6, 2, 12, -8},
    {1, 6, -3, 0}, {-3, -6, -10, -1}, {-2, -1, 4, -10}, {-6, -9, 3, -6},
  }};
  return table;
}

/// Parses the text interchange format: 256 lines of four signed integers in
/// [-15, 15].
inline Pattern load_pattern(std::istream& in) {
  Pattern out{};
  for (int i = 0; i < 256; ++i) {
    int px, py, qx, qy;
    if (!(in >> px >> py >> qx >> qy))
      throw ConfigError("pattern: expected 256 lines of four integers");
    for (int v : {px, py, qx, qy})
      if (v < -15 || v > 15) throw ConfigError("pattern: offset out of [-15, 15]");
    out[i] = {static_cast<std::int8_t>(px), static_cast<std::int8_t>(py),
              static_cast<std::int8_t>(qx), static_cast<std::int8_t>(qy)};
  }
  return out;
}

inline Pattern load_pattern(const std::string& text) {
  std::istringstream in(text);
  return load_pattern(in);
}

inline void save_pattern(const Pattern& p, std::ostream& out) {
  for (const auto& e : p)
    out << int(e.px) << ' ' << int(e.py) << ' ' << int(e.qx) << ' ' << int(e.qy) << '\n';
}

}  // namespace matchkit::features
