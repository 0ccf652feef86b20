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
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "matchkit/core.hpp"
#include "matchkit/gms.hpp"
#include "matchkit/image.hpp"
#include "matchkit/matcher.hpp"
#include "matchkit/metrics.hpp"
#include "matchkit/robust.hpp"
#include "matchkit/synth.hpp"

namespace matchkit::bench {

enum class Method { gms_ransac_uniform, gms_ransac_prioritized };

inline std::string method_name(Method m) {
  return m == Method::gms_ransac_uniform ? "gms_ransac_uniform" : "gms_ransac_prioritized";
}

inline Method parse_method(const std::string& s) {
  if (s == "gms_ransac_uniform") return Method::gms_ransac_uniform;
  if (s == "gms_ransac_prioritized") return Method::gms_ransac_prioritized;
  throw ConfigError("unknown method '" + s + "'");
}

/// Point-pair scenario with exact labels from the generator.
struct SyntheticSource {
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
  int n_inliers = 500;
  int n_outliers = 500;
  double noise_sigma = 0.5;
  int extent_w = 640;
  int extent_h = 480;
};

/// Real (or synthesized-on-disk) image pair run through the full pipeline.
/// Labels come from the reference model when one is supplied; without it the
/// run is recorded as unlabeled. outlier_injection rewires that fraction of
/// brute-force matches to random B features; position_jitter_sigma perturbs
/// the B keypoint positions after description, modeling measurement noise.
struct ImagePairSource {
  std::string path_a;
  std::string path_b;
  std::optional<Eigen::Matrix3d> reference_model;
  double outlier_injection = 0.0;
  double position_jitter_sigma = 0.0;
};

struct Scenario {
  std::string id = "scenario";
  std::variant<SyntheticSource, ImagePairSource> source = SyntheticSource{};
  int preset = 3000;
  double ratio = 0.5;
  Method method = Method::gms_ransac_prioritized;
  std::uint64_t base_seed = 1;
  int repeats = 1;
  std::vector<std::uint64_t> seeds;  // explicit list; empty -> base_seed + i
  bool gms_score_only = false;       // score matches but skip the GMS threshold
  gms::GmsConfig gms_cfg;
  robust::RansacConfig ransac_cfg;
  features::FeatureConfig feature_cfg;
  std::string hardware;
  bool single_worker = false;

  std::vector<std::uint64_t> run_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(repeats));
    for (int i = 0; i < repeats; ++i) out.push_back(base_seed + static_cast<std::uint64_t>(i));
    return out;
  }
};

/// One benchmark measurement row. Schema columns are fixed and ordered; the
/// wall-clock columns and the hardware tag are the only fields allowed to
/// differ between reruns of the same scenario and seed.
struct RunRecord {
  std::string scenario;
  std::string method;
  int preset = 0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // ok | empty | unlabeled | failed:<reason>
  int matches_final = 0;
  int num_correct = 0;
  int num_false = 0;
  int num_missed = 0;
  double precision = 0.0;
  double recall = 0.0;
  int iterations_used = 0;
  metrics::StageTimes times;
  std::string hardware;
};

inline constexpr const char* kCsvHeader =
    "scenario,method,preset,ratio,seed,status,matches_final,num_correct,num_false,num_missed,"
    "precision,recall,iterations_used,t_extract_ms,t_describe_ms,t_match_ms,t_gms_ms,"
    "t_ransac_ms,t_total_ms,hardware";

namespace detail {

inline std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

inline std::string to_csv_row(const RunRecord& r) {
  // Stage times are emitted at millisecond*1e-3 resolution; the total column
  // is the sum of the emitted (rounded) stages so the file re-serializes
  // byte-identically after a read.
  const auto round3 = [](double v) { return static_cast<double>(std::llround(v * 1000.0)) / 1000.0; };
  const double te = round3(r.times.extract_ms);
  const double td = round3(r.times.describe_ms);
  const double tm = round3(r.times.match_ms);
  const double tg = round3(r.times.gms_ms);
  const double tr = round3(r.times.ransac_ms);
  std::ostringstream os;
  os << detail::csv_safe(r.scenario) << ',' << detail::csv_safe(r.method) << ',' << r.preset
     << ',' << detail::fmt("%g", r.ratio) << ',' << r.seed << ',' << detail::csv_safe(r.status)
     << ',' << r.matches_final << ',' << r.num_correct << ',' << r.num_false << ','
     << r.num_missed << ',' << detail::fmt("%.4f", r.precision) << ','
     << detail::fmt("%.4f", r.recall) << ',' << r.iterations_used << ','
     << detail::fmt("%.3f", te) << ',' << detail::fmt("%.3f", td) << ','
     << detail::fmt("%.3f", tm) << ',' << detail::fmt("%.3f", tg) << ','
     << detail::fmt("%.3f", tr) << ',' << detail::fmt("%.3f", te + td + tm + tg + tr) << ','
     << detail::csv_safe(r.hardware);
  return os.str();
}

/// Writes comment lines, the fixed header, then rows sorted by
/// (scenario, method, preset, ratio, seed) so worker scheduling never changes
/// the output bytes.
inline void write_csv(std::ostream& out, std::vector<RunRecord> records,
                      const std::vector<std::string>& comments = {}) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    if (a.scenario != b.scenario) return a.scenario < b.scenario;
    if (a.method != b.method) return a.method < b.method;
    if (a.preset != b.preset) return a.preset < b.preset;
    if (a.ratio != b.ratio) return a.ratio < b.ratio;
    return a.seed < b.seed;
  });
  for (const auto& c : comments) out << "# " << c << '\n';
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

/// Parses CSV produced by write_csv (comments and the header line are
/// skipped).
inline std::vector<RunRecord> read_csv(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("scenario,", 0) == 0) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 20) throw ConfigError("csv: expected 20 columns, got " + std::to_string(f.size()));
    RunRecord r;
    r.scenario = f[0];
    r.method = f[1];
    r.preset = std::stoi(f[2]);
    r.ratio = std::stod(f[3]);
    r.seed = std::stoull(f[4]);
    r.status = f[5];
    r.matches_final = std::stoi(f[6]);
    r.num_correct = std::stoi(f[7]);
    r.num_false = std::stoi(f[8]);
    r.num_missed = std::stoi(f[9]);
    r.precision = std::stod(f[10]);
    r.recall = std::stod(f[11]);
    r.iterations_used = std::stoi(f[12]);
    r.times.extract_ms = std::stod(f[13]);
    r.times.describe_ms = std::stod(f[14]);
    r.times.match_ms = std::stod(f[15]);
    r.times.gms_ms = std::stod(f[16]);
    r.times.ransac_ms = std::stod(f[17]);
    r.hardware = f[19];
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_jsonl(std::ostream& out, const std::vector<RunRecord>& records) {
  for (const auto& r : records) {
    nlohmann::json j{{"scenario", r.scenario},
                     {"method", r.method},
                     {"preset", r.preset},
                     {"ratio", r.ratio},
                     {"seed", r.seed},
                     {"status", r.status},
                     {"matches_final", r.matches_final},
                     {"num_correct", r.num_correct},
                     {"num_false", r.num_false},
                     {"num_missed", r.num_missed},
                     {"precision", r.precision},
                     {"recall", r.recall},
                     {"iterations_used", r.iterations_used},
                     {"t_extract_ms", r.times.extract_ms},
                     {"t_describe_ms", r.times.describe_ms},
                     {"t_match_ms", r.times.match_ms},
                     {"t_gms_ms", r.times.gms_ms},
                     {"t_ransac_ms", r.times.ransac_ms},
                     {"t_total_ms", r.times.total_ms()},
                     {"hardware", r.hardware}};
    out << j.dump() << '\n';
  }
}

namespace detail {

// Pseudo feature sets let the GMS grid statistics run on bare point pairs:
// keypoints at the pair positions (clamped into the extent for cell
// assignment), zero descriptors.
inline features::FeatureSet pseudo_set(const std::vector<PointPair>& pairs, bool side_a, int w,
                                       int h) {
  features::FeatureSet fs;
  fs.width = w;
  fs.height = h;
  fs.keypoints.reserve(pairs.size());
  fs.descriptors.resize(pairs.size());
  for (const auto& pr : pairs) {
    const Eigen::Vector2d& p = side_a ? pr.a : pr.b;
    features::Keypoint kp;
    kp.x = std::min(std::max(p.x(), 0.0), w - 1e-6);
    kp.y = std::min(std::max(p.y(), 0.0), h - 1e-6);
    kp.score = 1.0;
    fs.keypoints.push_back(kp);
  }
  return fs;
}

struct PipelineData {
  std::vector<PointPair> pool;              // candidate pairs entering the filter chain
  std::vector<std::uint8_t> pool_labels;    // empty when unlabeled
  std::vector<matcher::Match> matches;      // parallel to pool
  features::FeatureSet fs_a;
  features::FeatureSet fs_b;
};

inline PipelineData prepare_synthetic(const SyntheticSource& src, int /*preset*/,
                                      std::uint64_t seed) {
  PipelineData d;
  auto [pairs, gt] = imageio::synth_correspondences(src.n_inliers, src.n_outliers, src.h,
                                                    src.noise_sigma, src.extent_w, src.extent_h,
                                                    Rng::derive(seed, 1));
  d.pool = std::move(pairs);
  d.pool_labels = std::move(gt.inlier_labels);
  d.fs_a = pseudo_set(d.pool, true, src.extent_w, src.extent_h);
  d.fs_b = pseudo_set(d.pool, false, src.extent_w, src.extent_h);
  d.matches.reserve(d.pool.size());
  for (int i = 0; i < static_cast<int>(d.pool.size()); ++i) d.matches.push_back({i, i, 0});
  return d;
}

inline PipelineData prepare_image_pair(const ImagePairSource& src, const Scenario& s,
                                       std::uint64_t seed, metrics::Stopwatch& sw) {
  const imageio::Image img_a = imageio::read_pgm_file(src.path_a);
  const imageio::Image img_b = imageio::read_pgm_file(src.path_b);

  auto kps_a = sw.time(metrics::Stage::extract, [&] {
    return features::detect_for_preset(img_a, s.preset, s.feature_cfg);
  });
  auto kps_b = sw.time(metrics::Stage::extract, [&] {
    return features::detect_for_preset(img_b, s.preset, s.feature_cfg);
  });
  PipelineData d;
  d.fs_a = sw.time(metrics::Stage::describe,
                   [&] { return features::describe_all(img_a, std::move(kps_a), s.feature_cfg); });
  d.fs_b = sw.time(metrics::Stage::describe,
                   [&] { return features::describe_all(img_b, std::move(kps_b), s.feature_cfg); });

  if (src.position_jitter_sigma > 0.0) {
    Rng jitter(Rng::derive(seed, 3));
    for (auto& kp : d.fs_b.keypoints) {
      kp.x = std::min(std::max(kp.x + src.position_jitter_sigma * jitter.gaussian(), 0.0),
                      d.fs_b.width - 1e-6);
      kp.y = std::min(std::max(kp.y + src.position_jitter_sigma * jitter.gaussian(), 0.0),
                      d.fs_b.height - 1e-6);
    }
  }

  d.matches = sw.time(metrics::Stage::match,
                      [&] { return matcher::match_bruteforce(d.fs_a, d.fs_b, false); });

  if (src.outlier_injection > 0.0 && !d.matches.empty()) {
    Rng inject(Rng::derive(seed, 2));
    const auto m = d.matches.size();
    const auto k = static_cast<std::size_t>(
        std::llround(src.outlier_injection * static_cast<double>(m)));
    std::vector<std::size_t> rows(m);
    for (std::size_t i = 0; i < m; ++i) rows[i] = i;
    inject.shuffle(rows);
    const auto nb = static_cast<std::uint64_t>(d.fs_b.size());
    for (std::size_t i = 0; i < k && i < m; ++i) {
      auto& match = d.matches[rows[i]];
      if (nb < 2) break;
      int nj;
      do {
        nj = static_cast<int>(inject.below(nb));
      } while (nj == match.idx_b);
      match.idx_b = nj;
    }
  }

  d.pool.reserve(d.matches.size());
  for (const auto& m : d.matches) {
    const auto& ka = d.fs_a.keypoints[static_cast<std::size_t>(m.idx_a)];
    const auto& kb = d.fs_b.keypoints[static_cast<std::size_t>(m.idx_b)];
    d.pool.push_back({{ka.x, ka.y}, {kb.x, kb.y}});
  }
  if (src.reference_model)
    d.pool_labels = metrics::label_by_homography(d.pool, *src.reference_model, 3.0);
  return d;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace detail

/// Executes one seed of a scenario: the filter pipeline with per-stage
/// timing, then exact-label metrics when labels exist. Errors are captured
/// as a failed record, not propagated.
inline RunRecord run_one(const Scenario& s, std::uint64_t seed) {
  RunRecord r;
  r.scenario = s.id;
  r.method = method_name(s.method);
  r.preset = s.preset;
  r.ratio = s.ratio;
  r.seed = seed;
  r.hardware = s.hardware;

  metrics::Stopwatch sw;
  try {
    detail::PipelineData d;
    if (std::holds_alternative<SyntheticSource>(s.source))
      d = detail::prepare_synthetic(std::get<SyntheticSource>(s.source), s.preset, seed);
    else
      d = detail::prepare_image_pair(std::get<ImagePairSource>(s.source), s, seed, sw);

    const auto scored = sw.time(metrics::Stage::gms, [&] {
      return s.gms_score_only ? gms::gms_score(d.matches, d.fs_a, d.fs_b, s.gms_cfg)
                              : gms::gms_filter(d.matches, d.fs_a, d.fs_b, s.gms_cfg);
    });

    // Map survivors back to pool rows via idx_a (unique per brute-force row).
    std::unordered_map<int, int> row_of;
    row_of.reserve(d.matches.size());
    for (int i = 0; i < static_cast<int>(d.matches.size()); ++i)
      row_of.emplace(d.matches[static_cast<std::size_t>(i)].idx_a, i);

    std::vector<robust::ScoredPair> input;
    std::vector<int> pool_row;
    input.reserve(scored.size());
    pool_row.reserve(scored.size());
    for (const auto& sm : scored) {
      const int row = row_of.at(sm.match.idx_a);
      const auto& pr = d.pool[static_cast<std::size_t>(row)];
      input.push_back({pr.a, pr.b, sm.confidence, sm.match.distance, sm.match.idx_a});
      pool_row.push_back(row);
    }

    robust::RansacConfig rc = s.ransac_cfg;
    rc.group_ratio = s.ratio;
    rc.seed = Rng::derive(seed, 4);
    const auto mode = s.method == Method::gms_ransac_uniform ? robust::SamplerMode::uniform
                                                             : robust::SamplerMode::prioritized;
    const robust::Model model =
        sw.time(metrics::Stage::ransac, [&] { return robust::ransac(input, rc, mode); });

    r.matches_final = model.inlier_count;
    r.iterations_used = model.iterations_used;

    std::vector<int> final_rows;
    for (std::size_t i = 0; i < input.size(); ++i)
      if (model.inlier_mask[i]) final_rows.push_back(pool_row[i]);

    if (d.pool_labels.empty()) {
      r.status = "unlabeled";
    } else {
      const auto eval = metrics::evaluate(d.pool_labels, final_rows);
      r.num_correct = eval.num_correct;
      r.num_false = eval.num_false;
      r.num_missed = eval.num_missed;
      r.precision = eval.precision.value;
      r.recall = eval.recall.value;
      if (eval.precision.empty) r.status = "empty";
    }
  } catch (const Error& e) {
    r.status = std::string("failed:") + e.what();
  }
  r.times = sw.times();
  return r;
}

/// Runs every seed of the scenario; seeds execute in parallel workers unless
/// single_worker is set. Records come back in seed order regardless of
/// scheduling.
inline std::vector<RunRecord> run_scenario(const Scenario& s) {
  const auto seeds = s.run_seeds();
  std::vector<RunRecord> records(seeds.size());
  const unsigned workers =
      s.single_worker ? 1u
                      : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  if (workers <= 1 || seeds.size() <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) records[i] = run_one(s, seeds[i]);
    return records;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      records[i] = run_one(s, seeds[i]);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return records;
}

struct SweepSummary {
  bool matches_nondecreasing = true;
  std::vector<std::pair<int, double>> median_matches_by_preset;
};

struct PresetSweepResult {
  std::vector<RunRecord> records;
  SweepSummary summary;
};

/// One run_scenario per preset plus the trend summary: median matches_final
/// must be non-decreasing in the preset (plateaus allowed). Presets must be
/// given in ascending order.
inline PresetSweepResult sweep_presets(const Scenario& base, const std::vector<int>& presets) {
  if (presets.empty()) throw ConfigError("sweep_presets: empty preset list");
  for (std::size_t i = 1; i < presets.size(); ++i)
    if (presets[i] < presets[i - 1]) throw ConfigError("sweep_presets: presets must ascend");
  PresetSweepResult out;
  for (const int preset : presets) {
    Scenario s = base;
    s.preset = preset;
    if (std::holds_alternative<SyntheticSource>(s.source)) {
      // Point-pair scenarios have no extraction stage; the preset caps the
      // generated pair count instead so the sweep still scales the workload.
      auto& src = std::get<SyntheticSource>(s.source);
      const double total = src.n_inliers + src.n_outliers;
      if (total > 0 && preset < total) {
        const double f = preset / total;
        src.n_inliers = static_cast<int>(std::lround(src.n_inliers * f));
        src.n_outliers = preset - src.n_inliers;
      }
    }
    auto records = run_scenario(s);
    std::vector<double> matches;
    for (const auto& r : records)
      if (r.status == "ok" || r.status == "unlabeled") matches.push_back(r.matches_final);
    out.summary.median_matches_by_preset.emplace_back(preset, detail::median(matches));
    for (auto& r : records) out.records.push_back(std::move(r));
  }
  for (std::size_t i = 1; i < out.summary.median_matches_by_preset.size(); ++i)
    if (out.summary.median_matches_by_preset[i].second <
        out.summary.median_matches_by_preset[i - 1].second)
      out.summary.matches_nondecreasing = false;
  return out;
}

/// One run per (preset, ratio) combination. The default ratio grid mirrors
/// the benchmark's seven-column sweep.
inline std::vector<RunRecord> sweep_ratios(const Scenario& base, std::vector<double> ratios = {},
                                           std::vector<int> presets = {}) {
  if (ratios.empty()) ratios = {1.0 / 5, 1.0 / 4, 1.0 / 3, 1.0 / 2, 2.0 / 3, 3.0 / 4, 4.0 / 5};
  if (presets.empty()) presets = {base.preset};
  std::vector<RunRecord> out;
  for (const int preset : presets) {
    for (const double ratio : ratios) {
      if (!(ratio > 0.0) || ratio > 1.0) throw ConfigError("sweep_ratios: ratio outside (0, 1]");
      Scenario s = base;
      s.preset = preset;
      s.ratio = ratio;
      for (auto& r : run_scenario(s)) out.push_back(std::move(r));
    }
  }
  return out;
}

struct MethodPresetStat {
  Method method = Method::gms_ransac_uniform;
  int preset = 0;
  double median_total_ms = 0.0;
  double median_ransac_ms = 0.0;
  double median_iterations = 0.0;
  double median_matches = 0.0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
};

struct CompareResult {
  std::vector<RunRecord> records;
  std::vector<MethodPresetStat> stats;
  // 100 * (t_uniform - t_prioritized) / t_uniform on median total time,
  // averaged over presets.
  double avg_total_time_reduction_pct = 0.0;
  double avg_ransac_time_reduction_pct = 0.0;
};

inline MethodPresetStat summarize(Method method, int preset,
                                  const std::vector<RunRecord>& records) {
  std::vector<double> total;
  std::vector<double> ransac_ms;
  std::vector<double> iters;
  std::vector<double> matches;
  double psum = 0.0;
  double rsum = 0.0;
  int n = 0;
  for (const auto& r : records) {
    if (r.method != method_name(method) || r.preset != preset) continue;
    total.push_back(r.times.total_ms());
    ransac_ms.push_back(r.times.ransac_ms);
    iters.push_back(r.iterations_used);
    matches.push_back(r.matches_final);
    psum += r.precision;
    rsum += r.recall;
    ++n;
  }
  MethodPresetStat s;
  s.method = method;
  s.preset = preset;
  s.median_total_ms = detail::median(total);
  s.median_ransac_ms = detail::median(ransac_ms);
  s.median_iterations = detail::median(iters);
  s.median_matches = detail::median(matches);
  s.mean_precision = n ? psum / n : 0.0;
  s.mean_recall = n ? rsum / n : 0.0;
  return s;
}

/// Runs the scenario under both methods with the same seeds and aggregates
/// per-preset medians plus the averaged pairwise time reduction.
inline CompareResult compare_methods(const Scenario& base, std::vector<int> presets = {}) {
  if (presets.empty()) presets = {base.preset};
  CompareResult out;
  for (const int preset : presets) {
    for (const Method method : {Method::gms_ransac_uniform, Method::gms_ransac_prioritized}) {
      Scenario s = base;
      s.preset = preset;
      s.method = method;
      for (auto& r : run_scenario(s)) out.records.push_back(std::move(r));
    }
  }
  double total_red = 0.0;
  double ransac_red = 0.0;
  int counted = 0;
  for (const int preset : presets) {
    const auto uni = summarize(Method::gms_ransac_uniform, preset, out.records);
    const auto pri = summarize(Method::gms_ransac_prioritized, preset, out.records);
    out.stats.push_back(uni);
    out.stats.push_back(pri);
    if (uni.median_total_ms > 0.0 && uni.median_ransac_ms > 0.0) {
      total_red += 100.0 * (uni.median_total_ms - pri.median_total_ms) / uni.median_total_ms;
      ransac_red += 100.0 * (uni.median_ransac_ms - pri.median_ransac_ms) / uni.median_ransac_ms;
      ++counted;
    }
  }
  if (counted) {
    out.avg_total_time_reduction_pct = total_red / counted;
    out.avg_ransac_time_reduction_pct = ransac_red / counted;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flat key-value config (documented in the README). '#' starts a comment.
// ---------------------------------------------------------------------------

inline double parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  double v = 0.0;
  try {
    if (slash == std::string::npos) {
      v = std::stod(text);
    } else {
      const double num = std::stod(text.substr(0, slash));
      const double den = std::stod(text.substr(slash + 1));
      if (den == 0.0) throw ConfigError("ratio: division by zero");
      v = num / den;
    }
  } catch (const std::exception&) {
    throw ConfigError("ratio: cannot parse '" + text + "'");
  }
  if (!(v > 0.0) || v > 1.0) throw ConfigError("ratio must be in (0, 1]");
  return v;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline Eigen::Matrix3d parse_matrix(const std::string& text) {
  if (trim(text) == "identity") return Eigen::Matrix3d::Identity();
  std::istringstream in(text);
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (!(in >> m(r, c))) throw ConfigError("matrix: expected 9 numbers or 'identity'");
  return m;
}

inline bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("boolean: cannot parse '" + v + "'");
}

inline std::vector<gms::GridShift> parse_shifts(const std::string& v) {
  if (v == "all") return {gms::kAllShifts.begin(), gms::kAllShifts.end()};
  std::vector<gms::GridShift> out;
  std::istringstream in(v);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok == "none") out.push_back(gms::GridShift::none);
    else if (tok == "half_x") out.push_back(gms::GridShift::half_x);
    else if (tok == "half_y") out.push_back(gms::GridShift::half_y);
    else if (tok == "half_both") out.push_back(gms::GridShift::half_both);
    else throw ConfigError("shifts_enabled: unknown shift '" + tok + "'");
  }
  if (out.empty()) throw ConfigError("shifts_enabled: empty list");
  return out;
}

}  // namespace detail

/// Parses the flat `key = value` scenario grammar. Unknown keys are errors.
inline Scenario parse_config(std::istream& in) {
  Scenario s;
  ImagePairSource image;
  SyntheticSource synthetic;
  bool is_image = false;
  bool threshold_set = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    try {
      if (key == "id") s.id = val;
      else if (key == "source") {
        if (val == "synthetic") is_image = false;
        else if (val == "image_pair") is_image = true;
        else throw ConfigError("source must be synthetic or image_pair");
      }
      else if (key == "h") synthetic.h = detail::parse_matrix(val);
      else if (key == "n_inliers") synthetic.n_inliers = std::stoi(val);
      else if (key == "n_outliers") synthetic.n_outliers = std::stoi(val);
      else if (key == "noise_sigma") synthetic.noise_sigma = std::stod(val);
      else if (key == "extent") {
        const auto x = val.find('x');
        if (x == std::string::npos) throw ConfigError("extent must look like 640x480");
        synthetic.extent_w = std::stoi(val.substr(0, x));
        synthetic.extent_h = std::stoi(val.substr(x + 1));
      }
      else if (key == "path_a") image.path_a = val;
      else if (key == "path_b") image.path_b = val;
      else if (key == "reference_model") image.reference_model = detail::parse_matrix(val);
      else if (key == "outlier_injection") image.outlier_injection = std::stod(val);
      else if (key == "position_jitter_sigma") image.position_jitter_sigma = std::stod(val);
      else if (key == "preset") s.preset = std::stoi(val);
      else if (key == "ratio") s.ratio = parse_ratio(val);
      else if (key == "method") s.method = parse_method(val);
      else if (key == "seed") s.base_seed = std::stoull(val);
      else if (key == "repeats") s.repeats = std::stoi(val);
      else if (key == "gms_score_only") s.gms_score_only = detail::parse_bool(val);
      else if (key == "grid_cols") s.gms_cfg.grid_cols = std::stoi(val);
      else if (key == "grid_rows") s.gms_cfg.grid_rows = std::stoi(val);
      else if (key == "alpha") s.gms_cfg.alpha = std::stod(val);
      else if (key == "shifts_enabled") s.gms_cfg.shifts = detail::parse_shifts(val);
      else if (key == "kernel") {
        if (val == "homography") s.ransac_cfg.kernel = robust::ModelKind::homography;
        else if (val == "fundamental") s.ransac_cfg.kernel = robust::ModelKind::fundamental;
        else throw ConfigError("kernel must be homography or fundamental");
      }
      else if (key == "inlier_threshold") {
        s.ransac_cfg.inlier_threshold = std::stod(val);
        threshold_set = true;
      }
      else if (key == "confidence_p") s.ransac_cfg.confidence_p = std::stod(val);
      else if (key == "max_iterations") s.ransac_cfg.max_iterations = std::stoi(val);
      else if (key == "phase1_budget") s.ransac_cfg.phase1_budget = std::stoi(val);
      else if (key == "base_threshold") s.feature_cfg.base_threshold = std::stoi(val);
      else if (key == "fallback_threshold") s.feature_cfg.fallback_threshold = std::stoi(val);
      else if (key == "nms_radius") s.feature_cfg.nms_radius = std::stod(val);
      else if (key == "hardware") s.hardware = val;
      else if (key == "single_worker") s.single_worker = detail::parse_bool(val);
      else throw ConfigError("unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (s.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!threshold_set)
    s.ransac_cfg.inlier_threshold =
        s.ransac_cfg.kernel == robust::ModelKind::homography ? 3.0 : 1.0;
  if (is_image) {
    if (image.path_a.empty() || image.path_b.empty())
      throw ConfigError("image_pair source needs path_a and path_b");
    s.source = image;
  } else {
    s.source = synthetic;
  }
  return s;
}

/// Writes a synthetic scenario's correspondences and labels: comment lines
/// carrying the homography, then one `x_a,y_a,x_b,y_b,inlier` row per pair.
inline void write_synth_file(std::ostream& out, const std::vector<PointPair>& pairs,
                             const imageio::GroundTruth& gt) {
  out << "# synthetic correspondences\n# homography";
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out << ' ' << detail::fmt("%.17g", gt.homography(r, c));
  out << "\n# noise_sigma " << detail::fmt("%.17g", gt.noise_sigma) << '\n';
  out << "x_a,y_a,x_b,y_b,inlier\n";
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out << detail::fmt("%.17g", pairs[i].a.x()) << ',' << detail::fmt("%.17g", pairs[i].a.y())
        << ',' << detail::fmt("%.17g", pairs[i].b.x()) << ','
        << detail::fmt("%.17g", pairs[i].b.y()) << ',' << int(gt.inlier_labels[i]) << '\n';
}

}  // namespace matchkit::bench
