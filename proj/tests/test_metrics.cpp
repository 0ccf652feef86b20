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

#include <chrono>
#include <thread>

#include "matchkit/metrics.hpp"
#include "matchkit/rng.hpp"

using namespace matchkit;
using metrics::Stage;

TEST_CASE("precision arithmetic") {
  const std::vector<std::uint8_t> labels = {1, 1, 1, 1, 1, 1, 1, 1, 0, 0};
  const auto p = metrics::precision(labels);
  CHECK(p.value == doctest::Approx(80.0));
  CHECK_FALSE(p.empty);

  const std::vector<std::uint8_t> all_true(5, 1);
  CHECK(metrics::precision(all_true).value == doctest::Approx(100.0));

  const auto empty = metrics::precision(std::span<const std::uint8_t>{});
  CHECK(empty.value == 0.0);
  CHECK(empty.empty);
}

TEST_CASE("recall arithmetic") {
  CHECK(metrics::recall(8, 8).value == doctest::Approx(50.0));
  CHECK(metrics::recall(8, 0).value == doctest::Approx(100.0));
  const auto empty = metrics::recall(0, 0);
  CHECK(empty.value == 0.0);
  CHECK(empty.empty);
}

TEST_CASE("precision complement identity and recall bounds") {
  Rng rng(70);
  for (int trial = 0; trial < 50; ++trial) {
    const int correct = static_cast<int>(rng.below(50));
    const int wrong = static_cast<int>(rng.below(50));
    if (correct + wrong == 0) continue;
    const double prec = metrics::precision_from_counts(correct, wrong).value;
    const double false_rate = 100.0 * wrong / (correct + wrong);
    CHECK(prec + false_rate == doctest::Approx(100.0).epsilon(1e-12));

    const int missed = static_cast<int>(rng.below(50));
    const auto rec = metrics::recall(correct, missed);
    if (!rec.empty) {
      CHECK(rec.value <= 100.0);
      CHECK((rec.value == 100.0) == (missed == 0));
    }
  }
}

TEST_CASE("evaluate counts against the pool") {
  const std::vector<std::uint8_t> pool = {1, 0, 1, 1, 0, 1};  // 4 true matches
  const std::vector<int> final_rows = {0, 1, 2};              // 2 correct, 1 false
  const auto r = metrics::evaluate(pool, final_rows);
  CHECK(r.num_correct == 2);
  CHECK(r.num_false == 1);
  CHECK(r.num_missed == 2);
  CHECK(r.precision.value == doctest::Approx(100.0 * 2 / 3));
  CHECK(r.recall.value == doctest::Approx(50.0));
  CHECK_THROWS_AS(metrics::evaluate(pool, std::vector<int>{9}), LengthMismatch);
}

TEST_CASE("stopwatch totals are the sum of the five stages") {
  metrics::Stopwatch sw;
  sw.add(Stage::extract, 1.5);
  sw.add(Stage::describe, 2.0);
  sw.add(Stage::match, 0.25);
  sw.add(Stage::gms, 0.5);
  sw.add(Stage::ransac, 3.0);
  CHECK(sw.times().total_ms() == doctest::Approx(7.25).epsilon(1e-12));
}

TEST_CASE("stopwatch no-op stages cost nearly nothing") {
  metrics::Stopwatch sw;
  for (const Stage s : {Stage::extract, Stage::describe, Stage::match, Stage::gms, Stage::ransac})
    sw.time(s, [] {});
  CHECK(sw.times().total_ms() < 1.0);
}

TEST_CASE("time spent outside stages never enters the total") {
  metrics::Stopwatch sw;
  sw.time(Stage::match, [] {});
  // Simulated slow input processing: not a stage, so not charged.
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  sw.time(Stage::ransac, [] {});
  CHECK(sw.times().total_ms() < 50.0);
}

TEST_CASE("label_by_homography applies the 3 px transfer rule") {
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  const std::vector<PointPair> pairs = {
      {{10, 10}, {10, 10}},   // exact
      {{10, 10}, {12.9, 10}}, // 2.9 px, inside
      {{10, 10}, {14, 10}},   // 4 px, outside
  };
  const auto labels = metrics::label_by_homography(pairs, id, 3.0);
  CHECK(labels == std::vector<std::uint8_t>{1, 1, 0});
}
