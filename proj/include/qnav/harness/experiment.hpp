// Copyright 2026 The QNav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnav/harness/config.hpp"

namespace qnav::harness {

struct RunOutcome {
    std::uint64_t seed = 0;
    rl::TrainingRecord record;
    bool failed = false;
    std::string error;
};

struct CurvePoint {
    int train_step = 0;
    double mean_reward_rescaled = 0.0;
    double ci95 = 0.0;
};

/// Best-k statistics over a set of runs. Solve steps are re-derived from the
/// evaluation logs against the threshold, so aggregation is a pure function
/// of (records, threshold).
struct Aggregation {
    int k = 0;                      // best-k actually used, min(10, records)
    std::vector<std::size_t> best;  // record indices ranked best first
    int successes = 0;              // solved count over all records
    bool has_mean_best = false;     // false when no best-k run solved
    double mean_best_steps = 0.0;
    std::vector<CurvePoint> curve;
};

Aggregation aggregate(const std::vector<rl::TrainingRecord>& records,
                      double success_threshold, int k = 10);

struct ExperimentResult {
    ExperimentConfig config;
    std::string environment_name;  // resolved world name
    double threshold = 0.0;        // effective success threshold
    std::size_t params = 0;
    std::vector<RunOutcome> outcomes;
    Aggregation agg;
    std::string artifacts_dir;  // per-run files live here; empty if not written
};

/// Trains config.runs independent runs with seeds base_seed + index. Runs
/// may execute concurrently up to `parallel`; outputs are ordered by run
/// index regardless. When artifacts_dir is non-empty, per-run evaluation CSVs
/// and solved-run checkpoints are written there. Per-run failures are
/// recorded in the outcome and do not stop the sweep.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                int parallel = 1,
                                const std::string& artifacts_dir = "");

/// summary.csv + summary.json in out_dir, plus curve.csv in each result's
/// artifacts directory. Bytes are a pure function of the inputs.
void emit_outputs(const std::vector<ExperimentResult>& results,
                  const std::string& out_dir);

/// Full pipeline for the CLI: per-config artifact dirs under out_dir, then
/// the combined summary files.
std::vector<ExperimentResult> run_sweep(
    const std::vector<ExperimentConfig>& configs, const std::string& out_dir,
    int parallel);

/// Deterministic directory name for config index `idx` within a sweep.
std::string config_dir_name(std::size_t idx, const ExperimentConfig& config);

/// 17-significant-digit formatting shared by every emitted file.
std::string format_double(double v);

/// Negative rewards are compressed by 10x before plotting/aggregation;
/// non-negative values pass through.
double rescale_reward(double v);

/// Two-sided 95% t-quantile; df above 30 falls back to the normal value.
double t_quantile_975(int df);

}  // namespace qnav::harness
