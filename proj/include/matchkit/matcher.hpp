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

#include <bit>
#include <cstdint>
#include <vector>

#include "matchkit/features.hpp"

namespace matchkit::matcher {

using features::Descriptor;
using features::FeatureSet;

/// Correspondence between feature idx_a of set A and idx_b of set B.
struct Match {
  int idx_a = 0;
  int idx_b = 0;
  int distance = 0;  // Hamming distance in bits, 0..256
};

/// Number of differing bits between two 256-bit descriptors.
inline int hamming(const Descriptor& a, const Descriptor& b) {
  int d = 0;
  for (int w = 0; w < 4; ++w)
    d += std::popcount(a.words[static_cast<std::size_t>(w)] ^
                       b.words[static_cast<std::size_t>(w)]);
  return d;
}

/// Brute-force nearest neighbor under Hamming distance: one match per A
/// feature, ties broken by the lowest B index. With cross_check only mutual
/// nearest pairs are kept. Output is sorted by idx_a ascending; either set
/// empty yields an empty result.
inline std::vector<Match> match_bruteforce(const FeatureSet& a, const FeatureSet& b,
                                           bool cross_check = false) {
  std::vector<Match> out;
  if (a.size() == 0 || b.size() == 0) return out;

  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  std::vector<int> best_b(static_cast<std::size_t>(na));
  for (int i = 0; i < na; ++i) {
    int bj = 0;
    int bd = 257;
    for (int j = 0; j < nb; ++j) {
      const int d = hamming(a.descriptors[static_cast<std::size_t>(i)],
                            b.descriptors[static_cast<std::size_t>(j)]);
      if (d < bd) {
        bd = d;
        bj = j;
      }
    }
    best_b[static_cast<std::size_t>(i)] = bj;
    out.push_back({i, bj, bd});
  }

  if (cross_check) {
    std::vector<int> best_a(static_cast<std::size_t>(nb));
    for (int j = 0; j < nb; ++j) {
      int bi = 0;
      int bd = 257;
      for (int i = 0; i < na; ++i) {
        const int d = hamming(a.descriptors[static_cast<std::size_t>(i)],
                              b.descriptors[static_cast<std::size_t>(j)]);
        if (d < bd) {
          bd = d;
          bi = i;
        }
      }
      best_a[static_cast<std::size_t>(j)] = bi;
    }
    std::vector<Match> mutual;
    for (const Match& m : out)
      if (best_a[static_cast<std::size_t>(m.idx_b)] == m.idx_a) mutual.push_back(m);
    out = std::move(mutual);
  }
  return out;
}

}  // namespace matchkit::matcher
