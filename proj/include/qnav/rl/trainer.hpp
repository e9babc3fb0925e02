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
#include <functional>
#include <span>
#include <vector>

#include "qnav/env/world.hpp"
#include "qnav/rl/q_model.hpp"
#include "qnav/rl/replay_buffer.hpp"
#include "qnav/rng.hpp"

namespace qnav::rl {

struct TrainingConfig {
    double gamma = 0.99;
    int batch_size = 64;
    int max_steps = 50000;
    int eval_interval = 100;
    int eval_episodes = 10;
    double epsilon_start = 1.0;
    double epsilon_end = 0.1;
    int epsilon_decay_horizon = 40000;
    int target_sync_interval = 500;
    int warmup_transitions = 1000;
    int replay_capacity = 20000;
    double success_threshold = 0.0;
    std::uint64_t seed = 0;
};

void validate_training_config(const TrainingConfig& config);

/// Exploration rate before environment step `step` (0-based): linear decay
/// from epsilon_start at 0 to epsilon_end at the horizon, constant after.
double epsilon_at(const TrainingConfig& config, int step);

struct EvalPoint {
    int train_step = 0;
    double mean_eval_reward = 0.0;
    double epsilon = 0.0;
};

struct TrainingRecord {
    std::vector<EvalPoint> log;  // strictly increasing train_step
    bool solved = false;
    int solve_step = 0;   // first evaluation step whose mean beat the threshold
    int steps_taken = 0;
    // Wall-clock measurement for operator feedback only; the emitted files
    // never contain it, so outputs stay byte-reproducible.
    double wall_seconds = 0.0;
};

/// Epsilon-greedy pick: argmax of q (ties to the lowest index), replaced by
/// a uniform action with probability epsilon. No rng draw happens at
/// epsilon == 0, so greedy callers never advance a stream.
int select_action(std::span<const double> q, double epsilon, Rng& rng);

/// Pure argmax with the same tie-break.
int greedy_action(std::span<const double> q);

using QFunction =
    std::function<void(std::span<const double>, std::vector<double>&)>;

/// Per-transition bootstrap targets: r + gamma * Q_target(s', argmax_a
/// Q_online(s', a)), truncated to r on terminal transitions.
std::vector<double> ddqn_targets(std::span<const Transition> batch,
                                 const QFunction& online,
                                 const QFunction& target, double gamma);

/// One gradient update: samples batch_size transitions uniformly with
/// replacement, regresses Q_online(s, a) onto the bootstrap targets under
/// mean squared error, steps the optimizer. Returns the batch loss.
double train_step(ReplayBuffer& buffer, QModel& model,
                  const TrainingConfig& config, Rng& batch_rng);

/// Mean total reward over `episodes` greedy episodes from the fixed start,
/// each capped at the environment step limit.
double evaluate(QModel& model, const env::WorldSpec& world, int episodes);

/// Full DDQN loop: act, store, learn after warmup, sync the target on its
/// interval, evaluate every eval_interval steps, stop early once an
/// evaluation mean exceeds the success threshold, hard stop at max_steps.
TrainingRecord train(QModel& model, const env::WorldSpec& world,
                     const TrainingConfig& config);

}  // namespace qnav::rl
