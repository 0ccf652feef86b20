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

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/robust.hpp"

namespace matchkit::metrics {

enum class Stage { extract, describe, match, gms, ransac };

/// Wall time per pipeline stage. Image loading and metric computation are
/// never timed as stages, so they are excluded from the total by
/// construction.
struct StageTimes {
  double extract_ms = 0.0;
  double describe_ms = 0.0;
  double match_ms = 0.0;
  double gms_ms = 0.0;
  double ransac_ms = 0.0;

  double total_ms() const { return extract_ms + describe_ms + match_ms + gms_ms + ransac_ms; }
};

class Stopwatch {
 public:
  void add(Stage stage, double ms) {
    switch (stage) {
      case Stage::extract: times_.extract_ms += ms; break;
      case Stage::describe: times_.describe_ms += ms; break;
      case Stage::match: times_.match_ms += ms; break;
      case Stage::gms: times_.gms_ms += ms; break;
      case Stage::ransac: times_.ransac_ms += ms; break;
    }
  }

  /// Runs fn, charging its wall time to the given stage.
  template <typename F>
  auto time(Stage stage, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      add(stage, elapsed_ms(t0));
    } else {
      auto result = fn();
      add(stage, elapsed_ms(t0));
      return result;
    }
  }

  const StageTimes& times() const { return times_; }

 private:
  static double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }

  StageTimes times_;
};

/// Percentage with an explicit marker for the empty-denominator case
/// (reported as 0 rather than NaN so CSV consumers stay happy).
struct Percent {
  double value = 0.0;
  bool empty = false;
};

inline Percent precision_from_counts(int num_correct, int num_false) {
  if (num_correct + num_false == 0) return {0.0, true};
  return {100.0 * num_correct / (num_correct + num_false), false};
}

/// Precision over the retained match set: labels are the ground-truth
/// verdicts for each retained match.
inline Percent precision(std::span<const std::uint8_t> final_labels) {
  int correct = 0;
  for (const auto l : final_labels) correct += l ? 1 : 0;
  return precision_from_counts(correct, static_cast<int>(final_labels.size()) - correct);
}

/// Recall: retained correct matches over all true matches (retained plus
/// missed).
inline Percent recall(int retained_correct, int missed_true) {
  if (retained_correct + missed_true == 0) return {0.0, true};
  return {100.0 * retained_correct / (retained_correct + missed_true), false};
}

struct EvalResult {
  int num_correct = 0;
  int num_false = 0;
  int num_missed = 0;
  Percent precision;
  Percent recall;
  StageTimes elapsed;
};

/// Counts final matches against pool labels. pool_labels covers the full
/// candidate set entering the filter pipeline; final_indices are the indices
/// of the matches that survived.
inline EvalResult evaluate(std::span<const std::uint8_t> pool_labels,
                           std::span<const int> final_indices) {
  EvalResult r;
  int pool_true = 0;
  for (const auto l : pool_labels) pool_true += l ? 1 : 0;
  for (const int idx : final_indices) {
    if (idx < 0 || idx >= static_cast<int>(pool_labels.size()))
      throw LengthMismatch("evaluate: final index outside the candidate pool");
    if (pool_labels[static_cast<std::size_t>(idx)])
      ++r.num_correct;
    else
      ++r.num_false;
  }
  r.num_missed = pool_true - r.num_correct;
  r.precision = precision_from_counts(r.num_correct, r.num_false);
  r.recall = recall(r.num_correct, r.num_missed);
  return r;
}

/// Labels pairs against a reference homography: correct iff the symmetric
/// transfer error is below the threshold. This is also the pseudo-labeling
/// rule for real image pairs with a config-supplied reference model.
inline std::vector<std::uint8_t> label_by_homography(std::span<const PointPair> pairs,
                                                     const Eigen::Matrix3d& reference,
                                                     double threshold_px = 3.0) {
  if (std::abs(reference.determinant()) < 1e-12)
    throw SingularHomography("label_by_homography: reference not invertible");
  const Eigen::Matrix3d inv = reference.inverse();
  std::vector<std::uint8_t> labels;
  labels.reserve(pairs.size());
  for (const auto& pr : pairs)
    labels.push_back(robust::homography_transfer_error(reference, inv, pr) < threshold_px ? 1
                                                                                          : 0);
  return labels;
}

}  // namespace matchkit::metrics
