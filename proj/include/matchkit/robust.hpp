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
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/SVD>

#include "matchkit/core.hpp"
#include "matchkit/rng.hpp"

namespace matchkit::robust {

enum class ModelKind { homography, fundamental };

inline constexpr int minimal_sample_size(ModelKind k) {
  return k == ModelKind::homography ? 4 : 8;
}

/// Iterations needed so that with probability p at least one size-n sample is
/// all inliers when the inlier ratio is t: k = ceil(log(1-p) / log(1 - t^n)),
/// clamped to [1, cap]. t = 1 gives 1, t = 0 gives cap.
inline int required_iterations(double p, double t, int n, int cap = 2000) {
  if (t >= 1.0) return 1;
  if (t <= 0.0) return cap;
  const double tn = std::pow(t, n);
  const double denom = std::log(1.0 - tn);
  if (!(denom < 0.0)) return cap;  // t^n underflowed
  const double k = std::ceil(std::log(1.0 - p) / denom);
  if (!std::isfinite(k) || k >= static_cast<double>(cap)) return cap;
  return k < 1.0 ? 1 : static_cast<int>(k);
}

namespace detail {

struct Normalization {
  Eigen::Matrix3d t;
  std::vector<Eigen::Vector2d> pts;
};

// Hartley conditioning: centroid to the origin, mean distance sqrt(2).
inline Normalization hartley_normalize(std::span<const PointPair> pairs, bool side_a) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& pr : pairs) centroid += side_a ? pr.a : pr.b;
  centroid /= static_cast<double>(pairs.size());
  double mean_dist = 0.0;
  for (const auto& pr : pairs) mean_dist += ((side_a ? pr.a : pr.b) - centroid).norm();
  mean_dist /= static_cast<double>(pairs.size());
  if (mean_dist < 1e-12) throw DegenerateSample("normalization: points coincide");
  const double scale = std::sqrt(2.0) / mean_dist;

  Normalization out;
  out.t << scale, 0, -scale * centroid.x(), 0, scale, -scale * centroid.y(), 0, 0, 1;
  out.pts.reserve(pairs.size());
  for (const auto& pr : pairs) out.pts.push_back(scale * ((side_a ? pr.a : pr.b) - centroid));
  return out;
}

inline Eigen::Matrix3d unflatten(const Eigen::VectorXd& h) {
  Eigen::Matrix3d m;
  m << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return m;
}

}  // namespace detail

/// DLT homography from >= 4 pairs (least squares beyond the minimal sample),
/// Hartley-normalized, normalized so the largest-magnitude entry is 1. For a
/// minimal sample, three collinear source points raise DegenerateSample.
inline Eigen::Matrix3d estimate_homography(std::span<const PointPair> pairs) {
  const auto n = pairs.size();
  if (n < 4) throw TooFewMatches("estimate_homography: need at least 4 pairs");
  if (n == 4) {
    for (int i = 0; i < 2; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        for (int k = j + 1; k < 4; ++k) {
          const Eigen::Vector2d u = pairs[static_cast<std::size_t>(j)].a - pairs[static_cast<std::size_t>(i)].a;
          const Eigen::Vector2d v = pairs[static_cast<std::size_t>(k)].a - pairs[static_cast<std::size_t>(i)].a;
          if (std::abs(u.x() * v.y() - u.y() * v.x()) <= 1e-9)
            throw DegenerateSample("estimate_homography: collinear source points");
        }
      }
    }
  }

  const auto na = detail::hartley_normalize(pairs, true);
  const auto nb = detail::hartley_normalize(pairs, false);

  Eigen::MatrixXd a(2 * static_cast<Eigen::Index>(n), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = na.pts[i].x();
    const double y = na.pts[i].y();
    const double u = nb.pts[i].x();
    const double v = nb.pts[i].y();
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.row(r) << x, y, 1, 0, 0, 0, -u * x, -u * y, -u;
    a.row(r + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y, -v;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double sigma_last = a.rows() > 8 ? sv(8) : 0.0;
  if (sv(7) - sigma_last < 1e-12)
    throw NumericalFailure("estimate_homography: solution direction not unique");

  Eigen::Matrix3d h = nb.t.inverse() * detail::unflatten(svd.matrixV().col(8)) * na.t;
  Eigen::Index mi = 0;
  Eigen::Index mj = 0;
  h.cwiseAbs().maxCoeff(&mi, &mj);
  if (std::abs(h(mi, mj)) < 1e-300)
    throw NumericalFailure("estimate_homography: zero solution");
  return h / h(mi, mj);
}

/// Normalized eight-point fundamental matrix from >= 8 pairs: smallest right
/// singular vector, rank-2 enforcement in the normalized frame, Frobenius
/// norm 1, largest-magnitude entry made positive.
inline Eigen::Matrix3d estimate_fundamental(std::span<const PointPair> pairs) {
  const auto n = pairs.size();
  if (n < 8) throw TooFewMatches("estimate_fundamental: need at least 8 pairs");

  const auto na = detail::hartley_normalize(pairs, true);
  const auto nb = detail::hartley_normalize(pairs, false);

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = na.pts[i].x();
    const double v = na.pts[i].y();
    const double up = nb.pts[i].x();
    const double vp = nb.pts[i].y();
    a.row(static_cast<Eigen::Index>(i)) << up * u, up * v, up, vp * u, vp * v, vp, u, v, 1;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(7) <= 1e-9) throw DegenerateSample("estimate_fundamental: degenerate configuration");
  if (a.rows() > 8 && sv(7) - sv(8) < 1e-12)
    throw NumericalFailure("estimate_fundamental: solution direction not unique");

  const Eigen::Matrix3d f0 = detail::unflatten(svd.matrixV().col(8));
  Eigen::JacobiSVD<Eigen::Matrix3d> rank2(f0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d s = rank2.singularValues();
  s(2) = 0.0;
  const Eigen::Matrix3d f_norm = rank2.matrixU() * s.asDiagonal() * rank2.matrixV().transpose();

  Eigen::Matrix3d f = nb.t.transpose() * f_norm * na.t;
  const double fro = f.norm();
  if (fro < 1e-300) throw NumericalFailure("estimate_fundamental: zero solution");
  f /= fro;
  Eigen::Index mi = 0;
  Eigen::Index mj = 0;
  f.cwiseAbs().maxCoeff(&mi, &mj);
  if (f(mi, mj) < 0.0) f = -f;
  return f;
}

/// Symmetric transfer error under a homography with a precomputed inverse.
inline double homography_transfer_error(const Eigen::Matrix3d& h, const Eigen::Matrix3d& h_inv,
                                        const PointPair& pair) {
  const Eigen::Vector2d fwd = project_point(h, pair.a);
  const Eigen::Vector2d bwd = project_point(h_inv, pair.b);
  if (!fwd.allFinite() || !bwd.allFinite()) return std::numeric_limits<double>::infinity();
  return 0.5 * ((fwd - pair.b).norm() + (bwd - pair.a).norm());
}

/// First-order (Sampson) distance of a pair to epipolar consistency, in
/// pixels.
inline double sampson_error(const Eigen::Matrix3d& f, const PointPair& pair) {
  const Eigen::Vector3d xa(pair.a.x(), pair.a.y(), 1.0);
  const Eigen::Vector3d xb(pair.b.x(), pair.b.y(), 1.0);
  const double r = xb.dot(f * xa);
  const Eigen::Vector3d fa = f * xa;
  const Eigen::Vector3d ftb = f.transpose() * xb;
  const double denom = fa(0) * fa(0) + fa(1) * fa(1) + ftb(0) * ftb(0) + ftb(1) * ftb(1);
  if (denom < 1e-300) return r == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(r) / std::sqrt(denom);
}

/// Estimated model with its consensus set.
struct Model {
  ModelKind kind = ModelKind::homography;
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  std::vector<std::uint8_t> inlier_mask;
  int inlier_count = 0;
  int iterations_used = 0;
};

/// Residual of one pair against a model: symmetric transfer error for a
/// homography (SingularHomography if not invertible), Sampson distance for a
/// fundamental matrix.
inline double residual(const Model& model, const PointPair& pair) {
  if (model.kind == ModelKind::homography) {
    if (std::abs(model.m.determinant()) < 1e-12)
      throw SingularHomography("residual: homography not invertible");
    return homography_transfer_error(model.m, model.m.inverse(), pair);
  }
  return sampson_error(model.m, pair);
}

/// RANSAC input: one correspondence with the confidence and tie-break keys
/// used by the prioritized sampler.
struct ScoredPair {
  Eigen::Vector2d a = Eigen::Vector2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  int confidence = 0;  // GMS neighborhood support
  int distance = 0;    // descriptor Hamming distance
  int idx_a = 0;       // source feature index
};

struct RansacConfig {
  ModelKind kernel = ModelKind::homography;
  double inlier_threshold = 3.0;  // px; 3.0 symmetric transfer / 1.0 Sampson
  double confidence_p = 0.99;
  int max_iterations = 2000;
  double group_ratio = 0.5;
  // Phase-1 iterations before the prioritized sampler widens to the full
  // set. 0 derives the default: required_iterations at an assumed top-group
  // inlier rate of 0.9, floored at 30.
  int phase1_budget = 0;
  std::uint64_t seed = 0;

  static RansacConfig for_kernel(ModelKind k) {
    RansacConfig c;
    c.kernel = k;
    c.inlier_threshold = k == ModelKind::homography ? 3.0 : 1.0;
    return c;
  }
};

/// Confidence-descending ordering with its priority-group split point.
struct Partition {
  std::vector<int> order;  // permutation of 0..N-1
  int split = 0;           // ceil(rho * N), clamped to [min(min_sample, N), N]
};

inline Partition partition(std::span<const ScoredPair> matches, double rho, int min_sample) {
  if (!(rho > 0.0) || rho > 1.0) throw ConfigError("partition: rho must be in (0, 1]");
  const int n = static_cast<int>(matches.size());
  Partition part;
  part.order.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) part.order[static_cast<std::size_t>(i)] = i;
  std::sort(part.order.begin(), part.order.end(), [&](int lhs, int rhs) {
    const ScoredPair& a = matches[static_cast<std::size_t>(lhs)];
    const ScoredPair& b = matches[static_cast<std::size_t>(rhs)];
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.idx_a != b.idx_a) return a.idx_a < b.idx_a;
    return lhs < rhs;
  });
  int split = static_cast<int>(std::ceil(rho * static_cast<double>(n) - 1e-9));
  split = std::max(split, std::min(min_sample, n));
  split = std::min(split, n);
  part.split = split;
  return part;
}

enum class SamplerMode { uniform, prioritized };

namespace detail {

struct Consensus {
  std::vector<std::uint8_t> mask;
  int count = 0;
  int group_count = 0;
};

// Scores a candidate matrix against all pairs; group_count restricts to the
// priority group for the phase-1 stopping rule.
inline bool score_candidate(ModelKind kind, const Eigen::Matrix3d& m,
                            std::span<const PointPair> pairs,
                            std::span<const std::uint8_t> in_group, double threshold,
                            Consensus& out) {
  Eigen::Matrix3d inv = Eigen::Matrix3d::Identity();
  if (kind == ModelKind::homography) {
    if (std::abs(m.determinant()) < 1e-12) return false;
    inv = m.inverse();
  }
  out.mask.assign(pairs.size(), 0);
  out.count = 0;
  out.group_count = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double err = kind == ModelKind::homography
                           ? homography_transfer_error(m, inv, pairs[i])
                           : sampson_error(m, pairs[i]);
    if (err < threshold) {
      out.mask[i] = 1;
      ++out.count;
      out.group_count += in_group[i];
    }
  }
  return true;
}

}  // namespace detail

/// Robust model estimation over scored correspondences.
///
/// Uniform mode is the classic loop: seeded uniform minimal samples over all
/// matches, inliers counted under the residual threshold, best model kept
/// (ties keep the earlier find), and the adaptive bound
/// k = required_iterations(p, best_count / N, n) re-evaluated after every
/// improvement; the loop stops once the iteration index reaches k or the cap.
///
/// Prioritized mode first samples only the high-confidence group
/// order[0..split). Within that phase the same adaptive rule is applied to
/// the group treated as the dataset (t = best-model inliers inside the group
/// / group size); if it has not fired after phase1_budget iterations the
/// sampler widens to all matches and the global rule takes over. The best
/// model carries across phases. With group_ratio = 1 the group is the whole
/// set, both phases sample identically, and one continuous random stream
/// makes the run bit-identical to uniform mode.
///
/// The final model is re-estimated by least squares over its inliers and the
/// mask recomputed once.
inline Model ransac(std::span<const ScoredPair> input, const RansacConfig& cfg,
                    SamplerMode mode) {
  const int n = minimal_sample_size(cfg.kernel);
  const int total = static_cast<int>(input.size());
  if (total < n) throw TooFewMatches("ransac: fewer matches than the minimal sample size");
  if (!(cfg.confidence_p > 0.0) || !(cfg.confidence_p < 1.0))
    throw ConfigError("ransac: confidence_p must be in (0, 1)");
  if (!(cfg.inlier_threshold > 0.0)) throw ConfigError("ransac: threshold must be positive");
  if (cfg.max_iterations < 1) throw ConfigError("ransac: max_iterations must be >= 1");

  const double rho = mode == SamplerMode::uniform ? 1.0 : cfg.group_ratio;
  const Partition part = partition(input, rho, n);
  const int split = part.split;

  std::vector<PointPair> pairs(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) pairs[i] = {input[i].a, input[i].b};
  std::vector<std::uint8_t> in_group(input.size(), 0);
  for (int pos = 0; pos < split; ++pos)
    in_group[static_cast<std::size_t>(part.order[static_cast<std::size_t>(pos)])] = 1;

  const int cap = cfg.max_iterations;
  const int budget = cfg.phase1_budget > 0
                         ? cfg.phase1_budget
                         : std::max(30, required_iterations(cfg.confidence_p, 0.9, n, cap));

  Rng rng(cfg.seed);
  auto fit = [&](std::span<const PointPair> sample) {
    return cfg.kernel == ModelKind::homography ? estimate_homography(sample)
                                               : estimate_fundamental(sample);
  };

  bool has_best = false;
  Eigen::Matrix3d best_m = Eigen::Matrix3d::Identity();
  detail::Consensus best;
  int iter = 0;
  int phase = 1;
  std::array<int, 8> pos{};
  std::vector<PointPair> sample(static_cast<std::size_t>(n));

  while (iter < cap) {
    if (phase == 1) {
      const int k1 = has_best ? required_iterations(
                                    cfg.confidence_p,
                                    static_cast<double>(best.group_count) / split, n, cap)
                              : cap;
      if (iter >= k1) break;
      if (iter >= budget) {
        phase = 2;
        continue;
      }
    } else {
      const int k2 = has_best ? required_iterations(cfg.confidence_p,
                                                    static_cast<double>(best.count) / total, n,
                                                    cap)
                              : cap;
      if (iter >= k2) break;
    }

    const int range = phase == 1 ? split : total;
    for (int k = 0; k < n; ++k) {
      int v;
      bool dup;
      do {
        v = static_cast<int>(rng.below(static_cast<std::uint64_t>(range)));
        dup = false;
        for (int j = 0; j < k; ++j) dup = dup || pos[static_cast<std::size_t>(j)] == v;
      } while (dup);
      pos[static_cast<std::size_t>(k)] = v;
    }
    ++iter;

    for (int k = 0; k < n; ++k)
      sample[static_cast<std::size_t>(k)] =
          pairs[static_cast<std::size_t>(part.order[static_cast<std::size_t>(pos[static_cast<std::size_t>(k)])])];

    Eigen::Matrix3d m;
    try {
      m = fit(sample);
    } catch (const Error&) {
      continue;  // degenerate draws still consume the budget
    }
    detail::Consensus cand;
    if (!detail::score_candidate(cfg.kernel, m, pairs, in_group, cfg.inlier_threshold, cand))
      continue;
    if (!has_best || cand.count > best.count) {
      has_best = true;
      best = std::move(cand);
      best_m = m;
    }
  }

  if (!has_best) throw NoValidModel("ransac: no non-degenerate sample produced a model");

  // Least-squares refit over the consensus set, mask recomputed once.
  if (best.count >= n) {
    std::vector<PointPair> inliers;
    inliers.reserve(static_cast<std::size_t>(best.count));
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (best.mask[i]) inliers.push_back(pairs[i]);
    try {
      const Eigen::Matrix3d refit = fit(inliers);
      detail::Consensus re;
      if (detail::score_candidate(cfg.kernel, refit, pairs, in_group, cfg.inlier_threshold, re)) {
        best_m = refit;
        best = std::move(re);
      }
    } catch (const Error&) {
      // keep the sample-fit model; its mask is already consistent
    }
  }

  Model out;
  out.kind = cfg.kernel;
  out.m = best_m;
  out.inlier_mask = std::move(best.mask);
  out.inlier_count = best.count;
  out.iterations_used = iter;
  return out;
}

}  // namespace matchkit::robust
