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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matchkit/matchkit.hpp"

namespace {

using namespace matchkit;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> repeats;
  std::string out_path;
  std::string format = "csv";
  std::optional<int> preset;
  std::optional<std::string> ratio;
  std::optional<std::string> method;
  bool single_worker = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "scenario config file (key = value lines)");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--repeats", f.repeats, "runs per scenario point");
  cmd->add_option("--out", f.out_path, "output file (default: stdout)");
  cmd->add_option("--format", f.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--preset", f.preset, "feature preset count");
  cmd->add_option("--ratio", f.ratio, "grouping ratio, e.g. 1/2 or 0.5");
  cmd->add_option("--method", f.method, "gms_ransac_uniform or gms_ransac_prioritized");
  cmd->add_flag("--single-worker", f.single_worker, "disable parallel seed execution");
}

bench::Scenario load_scenario(const CommonFlags& f) {
  bench::Scenario s;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("cannot open config file " + f.config_path);
    s = bench::parse_config(in);
  }
  if (f.seed) s.base_seed = *f.seed;
  if (f.repeats) s.repeats = *f.repeats;
  if (f.preset) s.preset = *f.preset;
  if (f.ratio) s.ratio = bench::parse_ratio(*f.ratio);
  if (f.method) s.method = bench::parse_method(*f.method);
  if (f.single_worker) s.single_worker = true;
  return s;
}

int emit(const CommonFlags& f, const std::vector<bench::RunRecord>& records,
         const std::vector<std::string>& comments = {}) {
  std::ostringstream buf;
  if (f.format == "jsonl")
    bench::write_jsonl(buf, records);
  else
    bench::write_csv(buf, records, comments);
  if (f.out_path.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream out(f.out_path);
    if (!out) throw ConfigError("cannot open output file " + f.out_path);
    out << buf.str();
  }
  for (const auto& r : records)
    if (r.status.rfind("failed:", 0) == 0) return 1;
  return 0;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_ratio_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(bench::parse_ratio(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-match filtering benchmark (GMS + prioritized RANSAC)"};
  app.require_subcommand(1);

  CommonFlags run_f, sweep_p_f, sweep_r_f, compare_f, synth_f;
  std::string presets_arg = "1000,2000,3000,5000,8000,10000";
  std::string ratios_arg;
  std::string synth_out;

  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  add_common(run_cmd, run_f);

  auto* sweep_p_cmd = app.add_subcommand("sweep-presets", "run the scenario over a preset grid");
  add_common(sweep_p_cmd, sweep_p_f);
  sweep_p_cmd->add_option("--presets", presets_arg, "comma-separated preset list (ascending)");

  auto* sweep_r_cmd = app.add_subcommand("sweep-ratios", "run the scenario over a ratio grid");
  add_common(sweep_r_cmd, sweep_r_f);
  sweep_r_cmd->add_option("--ratios", ratios_arg,
                          "comma-separated ratios (default 1/5,1/4,1/3,1/2,2/3,3/4,4/5)");

  auto* compare_cmd = app.add_subcommand("compare", "uniform vs prioritized on the same seeds");
  add_common(compare_cmd, compare_f);

  auto* synth_cmd =
      app.add_subcommand("synth", "emit a synthetic scenario's correspondences and labels");
  add_common(synth_cmd, synth_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      const auto s = load_scenario(run_f);
      return emit(run_f, bench::run_scenario(s));
    }
    if (sweep_p_cmd->parsed()) {
      const auto s = load_scenario(sweep_p_f);
      const auto presets = parse_int_list(presets_arg);
      const auto result = bench::sweep_presets(s, presets);
      std::ostringstream trend;
      trend << "trend matches_nondecreasing="
            << (result.summary.matches_nondecreasing ? "true" : "false");
      for (const auto& [preset, med] : result.summary.median_matches_by_preset)
        trend << " p" << preset << "=" << med;
      return emit(sweep_p_f, result.records, {trend.str()});
    }
    if (sweep_r_cmd->parsed()) {
      const auto s = load_scenario(sweep_r_f);
      std::vector<double> ratios;
      if (!ratios_arg.empty()) ratios = parse_ratio_list(ratios_arg);
      return emit(sweep_r_f, bench::sweep_ratios(s, ratios));
    }
    if (compare_cmd->parsed()) {
      const auto s = load_scenario(compare_f);
      const auto result = bench::compare_methods(s);
      std::vector<std::string> comments;
      for (const auto& st : result.stats) {
        std::ostringstream line;
        line << "summary method=" << bench::method_name(st.method) << " preset=" << st.preset
             << " median_total_ms=" << st.median_total_ms
             << " median_ransac_ms=" << st.median_ransac_ms
             << " median_iterations=" << st.median_iterations
             << " median_matches=" << st.median_matches
             << " mean_precision=" << st.mean_precision << " mean_recall=" << st.mean_recall;
        comments.push_back(line.str());
      }
      {
        std::ostringstream line;
        line << "summary avg_total_time_reduction_pct=" << result.avg_total_time_reduction_pct
             << " avg_ransac_time_reduction_pct=" << result.avg_ransac_time_reduction_pct;
        comments.push_back(line.str());
      }
      return emit(compare_f, result.records, comments);
    }
    if (synth_cmd->parsed()) {
      const auto s = load_scenario(synth_f);
      if (!std::holds_alternative<bench::SyntheticSource>(s.source))
        throw ConfigError("synth needs a synthetic source");
      const auto& src = std::get<bench::SyntheticSource>(s.source);
      const auto [pairs, gt] =
          imageio::synth_correspondences(src.n_inliers, src.n_outliers, src.h, src.noise_sigma,
                                         src.extent_w, src.extent_h, s.base_seed);
      std::ostringstream buf;
      bench::write_synth_file(buf, pairs, gt);
      if (synth_f.out_path.empty()) {
        std::cout << buf.str();
      } else {
        std::ofstream out(synth_f.out_path);
        if (!out) throw ConfigError("cannot open output file " + synth_f.out_path);
        out << buf.str();
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
