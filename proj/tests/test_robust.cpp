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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "matchkit/rng.hpp"
#include "matchkit/robust.hpp"
#include "matchkit/synth.hpp"

using namespace matchkit;
using robust::ModelKind;
using robust::RansacConfig;
using robust::SamplerMode;
using robust::ScoredPair;

namespace {

Eigen::Matrix3d normalize_max(const Eigen::Matrix3d& m) {
  Eigen::Index i, j;
  m.cwiseAbs().maxCoeff(&i, &j);
  return m / m(i, j);
}

Eigen::Matrix3d random_mild_homography(Rng& rng) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
  h(0, 0) = 1.0 + rng.uniform(-0.1, 0.1);
  h(1, 1) = 1.0 + rng.uniform(-0.1, 0.1);
  h(0, 1) = rng.uniform(-0.05, 0.05);
  h(1, 0) = rng.uniform(-0.05, 0.05);
  h(0, 2) = rng.uniform(-30, 30);
  h(1, 2) = rng.uniform(-30, 30);
  h(2, 0) = rng.uniform(-1e-4, 1e-4);
  h(2, 1) = rng.uniform(-1e-4, 1e-4);
  return h;
}

// Synthetic two-view scene in normalized camera coordinates; F is known
// analytically as [t]x R.
struct TwoView {
  Eigen::Matrix3d f;
  std::vector<PointPair> pairs;
};

TwoView make_two_view(int n, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Vector3d axis = Eigen::Vector3d(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                               rng.uniform(-1, 1))
                                   .normalized();
  const Eigen::Matrix3d r = Eigen::AngleAxisd(rng.uniform(0.05, 0.3), axis).toRotationMatrix();
  const Eigen::Vector3d t = Eigen::Vector3d(rng.uniform(0.5, 1.0), rng.uniform(-0.3, 0.3),
                                            rng.uniform(-0.3, 0.3));
  Eigen::Matrix3d tx;
  tx << 0, -t.z(), t.y(), t.z(), 0, -t.x(), -t.y(), t.x(), 0;

  TwoView tv;
  tv.f = tx * r;
  tv.f /= tv.f.norm();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d x(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(3, 8));
    const Eigen::Vector3d x2 = r.transpose() * (x - t);  // world = cam1 frame
    tv.pairs.push_back({{x.x() / x.z(), x.y() / x.z()}, {x2.x() / x2.z(), x2.y() / x2.z()}});
  }
  return tv;
}

std::vector<ScoredPair> to_scored(const std::vector<PointPair>& pairs) {
  std::vector<ScoredPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out.push_back({pairs[i].a, pairs[i].b, 0, 0, static_cast<int>(i)});
  return out;
}

bool models_bit_identical(const robust::Model& x, const robust::Model& y) {
  if (x.kind != y.kind || x.inlier_count != y.inlier_count ||
      x.iterations_used != y.iterations_used || x.inlier_mask != y.inlier_mask)
    return false;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (x.m(r, c) != y.m(r, c)) return false;
  return true;
}

}  // namespace

TEST_CASE("required_iterations reference values") {
  CHECK(robust::required_iterations(0.99, 1.0, 8) == 1);
  // Independent direct evaluation: ceil(log(1-p) / log(1-t^n)).
  CHECK(robust::required_iterations(0.99, 0.5, 4) == 72);
  CHECK(robust::required_iterations(0.99, 0.5, 8) == 1177);
  CHECK(robust::required_iterations(0.99, 0.0, 4) == 2000);
  CHECK(robust::required_iterations(0.99, 0.0, 4, 500) == 500);
  CHECK(robust::required_iterations(0.99, 1e-9, 8) == 2000);  // underflow clamps to cap
}

TEST_CASE("required_iterations is monotone over a grid") {
  const double ps[] = {0.8, 0.9, 0.95, 0.99, 0.999};
  const double ts[] = {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99};
  const int ns[] = {1, 2, 4, 8};
  const int cap = 1 << 28;
  for (const double p : ps)
    for (const int n : ns)
      for (std::size_t i = 1; i < std::size(ts); ++i)
        CHECK(robust::required_iterations(p, ts[i], n, cap) <=
              robust::required_iterations(p, ts[i - 1], n, cap));
  for (const double p : ps)
    for (const double t : ts)
      for (std::size_t i = 1; i < std::size(ns); ++i)
        CHECK(robust::required_iterations(p, t, ns[i], cap) >=
              robust::required_iterations(p, t, ns[i - 1], cap));
  for (const double t : ts)
    for (const int n : ns)
      for (std::size_t i = 1; i < std::size(ps); ++i)
        CHECK(robust::required_iterations(ps[i], t, n, cap) >=
              robust::required_iterations(ps[i - 1], t, n, cap));
}

TEST_CASE("estimate_homography identity and scale") {
  const std::vector<PointPair> square = {
      {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{1, 1}, {1, 1}}, {{0, 1}, {0, 1}}};
  const Eigen::Matrix3d h_id = robust::estimate_homography(square);
  CHECK((normalize_max(h_id) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);

  std::vector<PointPair> scaled = square;
  for (auto& p : scaled) p.b = 2.0 * p.a;
  Eigen::Matrix3d expected = Eigen::Matrix3d::Identity();
  expected(0, 0) = expected(1, 1) = 2.0;
  const Eigen::Matrix3d h_s = robust::estimate_homography(scaled);
  CHECK((normalize_max(h_s) - normalize_max(expected)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("estimate_homography recovers a random homography from 4 pairs") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix3d h = random_mild_homography(rng);
    std::vector<PointPair> pairs;
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector2d a{rng.uniform(0, 640), rng.uniform(0, 480)};
      pairs.push_back({a, project_point(h, a)});
    }
    Eigen::Matrix3d est;
    try {
      est = robust::estimate_homography(pairs);
    } catch (const DegenerateSample&) {
      continue;  // nearly-collinear random draw
    }
    CHECK((normalize_max(est) - normalize_max(h)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("estimate_homography flags collinear sources") {
  const std::vector<PointPair> collinear = {
      {{0, 0}, {3, 1}}, {{1, 1}, {4, 5}}, {{2, 2}, {9, 2}}, {{5, 7}, {1, 6}}};
  CHECK_THROWS_AS(robust::estimate_homography(collinear), DegenerateSample);
}

TEST_CASE("estimate_fundamental recovers epipolar geometry") {
  for (std::uint64_t seed : {50ULL, 51ULL, 52ULL}) {
    const TwoView tv = make_two_view(8, seed);
    const Eigen::Matrix3d f = robust::estimate_fundamental(tv.pairs);

    // Algebraic residual on the sample.
    for (const auto& pr : tv.pairs) {
      const Eigen::Vector3d a(pr.a.x(), pr.a.y(), 1.0);
      const Eigen::Vector3d b(pr.b.x(), pr.b.y(), 1.0);
      CHECK(std::abs(b.dot(f * a)) < 1e-8);
    }

    // Rank 2 enforced, Frobenius norm 1.
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(f);
    CHECK(svd.singularValues()(2) < 1e-9);
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("estimate_fundamental flags collinear sources") {
  Rng rng(53);
  std::vector<PointPair> pairs;
  for (int i = 0; i < 8; ++i) {
    const double x = rng.uniform(-1, 1);
    pairs.push_back({{x, 2 * x + 1}, {rng.uniform(-1, 1), rng.uniform(-1, 1)}});
  }
  CHECK_THROWS_AS(robust::estimate_fundamental(pairs), DegenerateSample);
}

TEST_CASE("residual conventions") {
  robust::Model model;
  model.kind = ModelKind::homography;
  model.m = Eigen::Matrix3d::Identity();
  CHECK(robust::residual(model, {{10, 20}, {10, 20}}) == 0.0);
  CHECK(robust::residual(model, {{10, 20}, {13, 24}}) == doctest::Approx(5.0).epsilon(1e-12));

  robust::Model singular;
  singular.kind = ModelKind::homography;
  singular.m = Eigen::Matrix3d::Zero();
  CHECK_THROWS_AS(robust::residual(singular, {{0, 0}, {0, 0}}), SingularHomography);

  // Pair constructed on the epipolar line has (near) zero Sampson distance.
  const TwoView tv = make_two_view(1, 54);
  robust::Model fm;
  fm.kind = ModelKind::fundamental;
  fm.m = tv.f;
  Rng rng(55);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Eigen::Vector3d l = tv.f * Eigen::Vector3d(a.x(), a.y(), 1.0);
    if (std::abs(l.y()) < 1e-6) continue;
    const double bx = rng.uniform(-1, 1);
    const Eigen::Vector2d b{bx, -(l.x() * bx + l.z()) / l.y()};
    CHECK(robust::sampson_error(tv.f, {a, b}) < 1e-9);
    CHECK(robust::residual(fm, {a, b}) < 1e-9);
  }
}

TEST_CASE("partition split points and tie rules") {
  std::vector<ScoredPair> matches(10);
  for (int i = 0; i < 10; ++i) {
    matches[std::size_t(i)].confidence = 5;
    matches[std::size_t(i)].distance = 100 - i;  // descending distance
    matches[std::size_t(i)].idx_a = i;
  }
  const auto p_half = robust::partition(matches, 0.5, 4);
  CHECK(p_half.split == 5);
  const auto p_fifth = robust::partition(matches, 1.0 / 5.0, 4);
  CHECK(p_fifth.split == 4);  // ceil(2) clamped up to the minimal sample
  const auto p_eight = robust::partition(matches, 1.0 / 5.0, 8);
  CHECK(p_eight.split == 8);

  // Equal confidences: strictly ascending distance.
  for (std::size_t k = 1; k < p_half.order.size(); ++k)
    CHECK(matches[std::size_t(p_half.order[k - 1])].distance <
          matches[std::size_t(p_half.order[k])].distance);

  // Confidence dominates, then distance, then idx_a.
  std::vector<ScoredPair> mixed(4);
  mixed[0] = {{}, {}, 3, 9, 2};
  mixed[1] = {{}, {}, 7, 5, 1};
  mixed[2] = {{}, {}, 3, 2, 9};
  mixed[3] = {{}, {}, 3, 2, 4};
  const auto part = robust::partition(mixed, 1.0, 4);
  CHECK(part.order == std::vector<int>{1, 3, 2, 0});

  CHECK_THROWS_AS(robust::partition(matches, 0.0, 4), ConfigError);
}

TEST_CASE("partition group confidences dominate the remainder") {
  Rng rng(56);
  std::vector<ScoredPair> matches(200);
  for (auto& m : matches) {
    m.confidence = static_cast<int>(rng.below(40));
    m.distance = static_cast<int>(rng.below(200));
  }
  const auto part = robust::partition(matches, 0.3, 4);
  int min_in = 1 << 30;
  int max_out = -1;
  for (int pos = 0; pos < static_cast<int>(part.order.size()); ++pos) {
    const int c = matches[std::size_t(part.order[std::size_t(pos)])].confidence;
    if (pos < part.split)
      min_in = std::min(min_in, c);
    else
      max_out = std::max(max_out, c);
  }
  CHECK(min_in >= max_out);
}

TEST_CASE("ransac on exact inliers terminates after one iteration") {
  Rng rng(57);
  const Eigen::Matrix3d h = random_mild_homography(rng);
  std::vector<PointPair> pairs;
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d a{rng.uniform(0, 640), rng.uniform(0, 480)};
    pairs.push_back({a, project_point(h, a)});
  }
  RansacConfig cfg;
  cfg.seed = 7;
  for (const auto mode : {SamplerMode::uniform, SamplerMode::prioritized}) {
    const auto model = robust::ransac(to_scored(pairs), cfg, mode);
    CHECK(model.inlier_count == 20);
    CHECK(model.iterations_used == 1);
    CHECK((normalize_max(model.m) - normalize_max(h)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("ransac uniform mode attains the exhaustive enumeration optimum") {
  int instances_checked = 0;
  for (std::uint64_t seed = 0; instances_checked < 100; ++seed) {
    Rng rng(900 + seed);
    const Eigen::Matrix3d h = random_mild_homography(rng);
    const Eigen::Matrix3d h_inv = h.inverse();

    std::vector<PointPair> pairs;
    for (int i = 0; i < 8; ++i) {
      const Eigen::Vector2d a{rng.uniform(50, 590), rng.uniform(50, 430)};
      pairs.push_back({a, project_point(h, a)});
    }
    for (int i = 0; i < 4; ++i) {
      Eigen::Vector2d a, b;
      do {
        a = {rng.uniform(50, 590), rng.uniform(50, 430)};
        b = {rng.uniform(50, 590), rng.uniform(50, 430)};
      } while (robust::homography_transfer_error(h, h_inv, {a, b}) < 8.0);
      pairs.push_back({a, b});
    }
    ++instances_checked;

    RansacConfig cfg;
    cfg.max_iterations = 1000;  // >= C(12, 4)
    cfg.seed = seed;
    const auto model = robust::ransac(to_scored(pairs), cfg, SamplerMode::uniform);

    // Exhaustive oracle over all C(12,4) minimal samples.
    int best_count = 0;
    std::vector<std::uint8_t> best_mask;
    for (int i = 0; i < 12; ++i)
      for (int j = i + 1; j < 12; ++j)
        for (int k = j + 1; k < 12; ++k)
          for (int l = k + 1; l < 12; ++l) {
            const std::vector<PointPair> sample = {pairs[std::size_t(i)], pairs[std::size_t(j)],
                                                   pairs[std::size_t(k)], pairs[std::size_t(l)]};
            Eigen::Matrix3d m;
            try {
              m = robust::estimate_homography(sample);
            } catch (const Error&) {
              continue;
            }
            if (std::abs(m.determinant()) < 1e-12) continue;
            const Eigen::Matrix3d mi = m.inverse();
            int count = 0;
            std::vector<std::uint8_t> mask(12, 0);
            for (std::size_t q = 0; q < 12; ++q) {
              if (robust::homography_transfer_error(m, mi, pairs[q]) < cfg.inlier_threshold) {
                mask[q] = 1;
                ++count;
              }
            }
            if (count > best_count) {
              best_count = count;
              best_mask = mask;
            }
          }

    CHECK(model.inlier_count == best_count);
    CHECK(model.inlier_mask == best_mask);
  }
}

TEST_CASE("prioritized mode halves iterations at 50% contamination") {
  // 2000 matches, half inliers of a known homography with 0.5 px noise,
  // confidences stochastically higher for inliers (GMS-like).
  std::vector<double> iter_ratio;
  std::vector<double> count_rel_diff;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(7000 + seed);
    const Eigen::Matrix3d h = random_mild_homography(rng);
    const Eigen::Matrix3d h_inv = h.inverse();
    std::vector<ScoredPair> matches;
    for (int i = 0; i < 1000; ++i) {
      const Eigen::Vector2d a{rng.uniform(0, 640), rng.uniform(0, 480)};
      const Eigen::Vector2d b =
          project_point(h, a) + 0.5 * Eigen::Vector2d(rng.gaussian(), rng.gaussian());
      matches.push_back({a, b, 20 + static_cast<int>(rng.below(10)), 0, i});
    }
    for (int i = 0; i < 1000; ++i) {
      Eigen::Vector2d a, b;
      do {
        a = {rng.uniform(0, 640), rng.uniform(0, 480)};
        b = {rng.uniform(0, 640), rng.uniform(0, 480)};
      } while (robust::homography_transfer_error(h, h_inv, {a, b}) < 6.0);
      matches.push_back({a, b, static_cast<int>(rng.below(8)), 0, 1000 + i});
    }

    RansacConfig cfg;
    cfg.seed = seed;
    const auto uni = robust::ransac(matches, cfg, SamplerMode::uniform);
    const auto pri = robust::ransac(matches, cfg, SamplerMode::prioritized);
    iter_ratio.push_back(double(pri.iterations_used) / double(uni.iterations_used));
    count_rel_diff.push_back(std::abs(pri.inlier_count - uni.inlier_count) /
                             double(uni.inlier_count));
  }
  std::sort(iter_ratio.begin(), iter_ratio.end());
  std::sort(count_rel_diff.begin(), count_rel_diff.end());
  CHECK(iter_ratio[iter_ratio.size() / 2] <= 0.5);
  CHECK(count_rel_diff[count_rel_diff.size() / 2] <= 0.01);
}

TEST_CASE("prioritized mode with ratio 1 is bit-identical to uniform mode") {
  Rng rng(58);
  const Eigen::Matrix3d h = random_mild_homography(rng);
  const Eigen::Matrix3d h_inv = h.inverse();
  std::vector<ScoredPair> matches;
  for (int i = 0; i < 60; ++i) {
    const Eigen::Vector2d a{rng.uniform(0, 640), rng.uniform(0, 480)};
    const Eigen::Vector2d b =
        project_point(h, a) + 0.3 * Eigen::Vector2d(rng.gaussian(), rng.gaussian());
    matches.push_back({a, b, static_cast<int>(rng.below(30)), static_cast<int>(rng.below(60)), i});
  }
  for (int i = 0; i < 40; ++i) {
    Eigen::Vector2d a, b;
    do {
      a = {rng.uniform(0, 640), rng.uniform(0, 480)};
      b = {rng.uniform(0, 640), rng.uniform(0, 480)};
    } while (robust::homography_transfer_error(h, h_inv, {a, b}) < 6.0);
    matches.push_back({a, b, static_cast<int>(rng.below(30)), static_cast<int>(rng.below(60)),
                       60 + i});
  }

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RansacConfig cfg;
    cfg.seed = seed;
    cfg.group_ratio = 1.0;
    const auto uni = robust::ransac(matches, cfg, SamplerMode::uniform);
    const auto pri = robust::ransac(matches, cfg, SamplerMode::prioritized);
    CHECK(models_bit_identical(uni, pri));
  }
}

TEST_CASE("ransac is deterministic and its mask is self-consistent after refit") {
  Rng rng(59);
  const Eigen::Matrix3d h = random_mild_homography(rng);
  const Eigen::Matrix3d h_inv = h.inverse();
  std::vector<ScoredPair> matches;
  for (int i = 0; i < 80; ++i) {
    const Eigen::Vector2d a{rng.uniform(0, 640), rng.uniform(0, 480)};
    const Eigen::Vector2d b =
        project_point(h, a) + 0.5 * Eigen::Vector2d(rng.gaussian(), rng.gaussian());
    matches.push_back({a, b, 10, 0, i});
  }
  for (int i = 0; i < 40; ++i) {
    Eigen::Vector2d a, b;
    do {
      a = {rng.uniform(0, 640), rng.uniform(0, 480)};
      b = {rng.uniform(0, 640), rng.uniform(0, 480)};
    } while (robust::homography_transfer_error(h, h_inv, {a, b}) < 6.0);
    matches.push_back({a, b, 1, 0, 80 + i});
  }

  RansacConfig cfg;
  cfg.seed = 13;
  const auto m1 = robust::ransac(matches, cfg, SamplerMode::prioritized);
  const auto m2 = robust::ransac(matches, cfg, SamplerMode::prioritized);
  CHECK(models_bit_identical(m1, m2));

  REQUIRE(std::abs(m1.m.determinant()) > 1e-12);
  const Eigen::Matrix3d inv = m1.m.inverse();
  int counted = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const double err =
        robust::homography_transfer_error(m1.m, inv, {matches[i].a, matches[i].b});
    if (m1.inlier_mask[i]) {
      CHECK(err < cfg.inlier_threshold);
      ++counted;
    } else {
      CHECK(err >= cfg.inlier_threshold);
    }
  }
  CHECK(counted == m1.inlier_count);
}

TEST_CASE("prioritized sampler widens to phase 2 when confidences mislead") {
  // Confidences are inverted: the priority group is almost all outliers, so
  // phase 1 cannot terminate and the sampler must recover over the full set.
  Rng rng(63);
  const Eigen::Matrix3d h = random_mild_homography(rng);
  const Eigen::Matrix3d h_inv = h.inverse();
  std::vector<ScoredPair> matches;
  for (int i = 0; i < 40; ++i) {
    const Eigen::Vector2d a{rng.uniform(0, 640), rng.uniform(0, 480)};
    matches.push_back({a, project_point(h, a), 0, 0, i});  // inliers: confidence 0
  }
  for (int i = 0; i < 60; ++i) {
    Eigen::Vector2d a, b;
    do {
      a = {rng.uniform(0, 640), rng.uniform(0, 480)};
      b = {rng.uniform(0, 640), rng.uniform(0, 480)};
    } while (robust::homography_transfer_error(h, h_inv, {a, b}) < 6.0);
    matches.push_back({a, b, 50, 0, 40 + i});  // outliers: confidence 50
  }

  RansacConfig cfg;
  cfg.seed = 17;
  const auto model = robust::ransac(matches, cfg, SamplerMode::prioritized);
  const int budget = std::max(30, robust::required_iterations(cfg.confidence_p, 0.9, 4));
  CHECK(model.iterations_used > budget);  // phase 2 engaged
  CHECK(model.inlier_count >= 38);
  int planted = 0;
  for (int i = 0; i < 40; ++i) planted += model.inlier_mask[std::size_t(i)];
  CHECK(planted >= 38);
}

TEST_CASE("ransac error paths") {
  std::vector<ScoredPair> three(3);
  RansacConfig cfg;
  CHECK_THROWS_AS(robust::ransac(three, cfg, SamplerMode::uniform), TooFewMatches);

  // Every minimal sample degenerate: all source points on one line.
  std::vector<ScoredPair> collinear;
  Rng rng(60);
  for (int i = 0; i < 10; ++i) {
    const double x = i * 10.0;
    collinear.push_back({{x, 2.0 * x}, {rng.uniform(0, 100), rng.uniform(0, 100)}, 0, 0, i});
  }
  RansacConfig small = cfg;
  small.max_iterations = 50;
  CHECK_THROWS_AS(robust::ransac(collinear, small, SamplerMode::uniform), NoValidModel);
}

TEST_CASE("ransac with the fundamental kernel finds planted epipolar inliers") {
  const TwoView tv = make_two_view(60, 61);
  Rng rng(62);
  std::vector<ScoredPair> matches;
  for (std::size_t i = 0; i < tv.pairs.size(); ++i)
    matches.push_back({tv.pairs[i].a, tv.pairs[i].b, 10, 0, static_cast<int>(i)});
  for (int i = 0; i < 30; ++i) {
    Eigen::Vector2d a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Eigen::Vector2d b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (robust::sampson_error(tv.f, {a, b}) < 0.05) {
      --i;
      continue;
    }
    matches.push_back({a, b, 1, 0, 60 + i});
  }

  RansacConfig cfg = RansacConfig::for_kernel(ModelKind::fundamental);
  cfg.inlier_threshold = 0.01;  // normalized image coordinates
  cfg.seed = 3;
  const auto model = robust::ransac(matches, cfg, SamplerMode::prioritized);
  CHECK(model.inlier_count >= 55);
  int planted_found = 0;
  for (int i = 0; i < 60; ++i) planted_found += model.inlier_mask[std::size_t(i)];
  CHECK(planted_found >= 55);
}
