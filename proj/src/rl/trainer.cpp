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

#include "qnav/rl/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qnav::rl {

void validate_training_config(const TrainingConfig& config) {
    if (!(config.gamma > 0.0) || !(config.gamma < 1.0)) {
        throw std::invalid_argument("gamma must be in (0, 1)");
    }
    if (config.batch_size < 1) {
        throw std::invalid_argument("batch_size must be positive");
    }
    if (config.max_steps < 0) {
        throw std::invalid_argument("max_steps must be non-negative");
    }
    if (config.eval_interval < 1) {
        throw std::invalid_argument("eval_interval must be positive");
    }
    if (config.eval_episodes < 1) {
        throw std::invalid_argument("eval_episodes must be positive");
    }
    if (config.epsilon_start < 0.0 || config.epsilon_start > 1.0 ||
        config.epsilon_end < 0.0 || config.epsilon_end > 1.0 ||
        config.epsilon_end > config.epsilon_start) {
        throw std::invalid_argument(
            "epsilon schedule must satisfy 0 <= end <= start <= 1");
    }
    if (config.epsilon_decay_horizon < 0) {
        throw std::invalid_argument("epsilon_decay_horizon must be non-negative");
    }
    if (config.target_sync_interval < 1) {
        throw std::invalid_argument("target_sync_interval must be positive");
    }
    if (config.warmup_transitions < 0) {
        throw std::invalid_argument("warmup_transitions must be non-negative");
    }
    if (config.replay_capacity < config.batch_size) {
        throw std::invalid_argument("replay_capacity must hold a batch");
    }
    if (!std::isfinite(config.success_threshold)) {
        throw std::invalid_argument("success_threshold must be finite");
    }
}

double epsilon_at(const TrainingConfig& config, int step) {
    if (step < 0) throw std::invalid_argument("negative step");
    if (config.epsilon_decay_horizon == 0 ||
        step >= config.epsilon_decay_horizon) {
        return config.epsilon_end;
    }
    const double frac = static_cast<double>(step) /
                        static_cast<double>(config.epsilon_decay_horizon);
    return config.epsilon_start -
           (config.epsilon_start - config.epsilon_end) * frac;
}

int greedy_action(std::span<const double> q) {
    if (q.empty()) throw std::invalid_argument("empty Q-value vector");
    int best = 0;
    for (int i = 1; i < static_cast<int>(q.size()); ++i) {
        if (q[i] > q[best]) best = i;
    }
    return best;
}

int select_action(std::span<const double> q, double epsilon, Rng& rng) {
    if (q.empty()) throw std::invalid_argument("empty Q-value vector");
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("epsilon must be in [0, 1]");
    }
    if (epsilon > 0.0 && rng.uniform() < epsilon) {
        return static_cast<int>(rng.uniform_index(q.size()));
    }
    return greedy_action(q);
}

std::vector<double> ddqn_targets(std::span<const Transition> batch,
                                 const QFunction& online,
                                 const QFunction& target, double gamma) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    std::vector<double> y(batch.size());
    std::vector<double> q_next;
    std::vector<double> q_next_target;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = batch[i];
        if (t.terminal) {
            y[i] = t.reward;
            continue;
        }
        online(t.next_state, q_next);
        target(t.next_state, q_next_target);
        const int a_star = greedy_action(q_next);
        y[i] = t.reward + gamma * q_next_target[static_cast<std::size_t>(a_star)];
    }
    return y;
}

double train_step(ReplayBuffer& buffer, QModel& model,
                  const TrainingConfig& config, Rng& batch_rng) {
    const auto need = static_cast<std::size_t>(
        std::max(config.batch_size, config.warmup_transitions));
    if (buffer.size() < need) {
        throw std::invalid_argument("buffer below warmup/batch size");
    }

    std::vector<Transition> batch;
    batch.reserve(static_cast<std::size_t>(config.batch_size));
    for (int i = 0; i < config.batch_size; ++i) {
        batch.push_back(buffer[batch_rng.uniform_index(buffer.size())]);
    }

    std::vector<double> q_buf;
    const std::vector<double> y = ddqn_targets(
        batch,
        [&model](std::span<const double> s, std::vector<double>& out) {
            model.q_online(s, out);
        },
        [&model](std::span<const double> s, std::vector<double>& out) {
            model.q_target(s, out);
        },
        config.gamma);

    const auto n_actions = static_cast<std::size_t>(model.n_actions());
    std::vector<double> upstream(n_actions, 0.0);
    const double inv_batch = 1.0 / static_cast<double>(config.batch_size);

    double loss = 0.0;
    model.zero_gradient();
    for (std::size_t i = 0; i < batch.size(); ++i) {
        model.q_online(batch[i].state, q_buf);
        const auto a = static_cast<std::size_t>(batch[i].action);
        const double delta = q_buf[a] - y[i];
        loss += delta * delta * inv_batch;
        upstream[a] = 2.0 * delta * inv_batch;
        model.accumulate_gradient(batch[i].state, upstream);
        upstream[a] = 0.0;
    }
    model.optimizer_step();
    return loss;
}

double evaluate(QModel& model, const env::WorldSpec& world, int episodes) {
    if (episodes < 1) throw std::invalid_argument("episodes must be positive");
    std::vector<double> q;
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        env::Pose pose = env::reset(world);
        double episode_reward = 0.0;
        for (int s = 1; s <= env::kMaxEpisodeSteps; ++s) {
            model.q_online(env::state_features(pose), q);
            const env::Action a = env::action_from_index(greedy_action(q));
            const env::StepResult res = env::step(world, pose, a, s);
            episode_reward += res.reward;
            pose = res.pose;
            if (res.terminal) break;
        }
        total += episode_reward;
    }
    return total / static_cast<double>(episodes);
}

TrainingRecord train(QModel& model, const env::WorldSpec& world,
                     const TrainingConfig& config) {
    validate_training_config(config);
    env::validate_world(world);
    const auto start_time = std::chrono::steady_clock::now();

    Rng exploration = make_stream(config.seed, RngStream::kExploration);
    Rng batch_rng = make_stream(config.seed, RngStream::kBatchSampling);
    ReplayBuffer buffer(static_cast<std::size_t>(config.replay_capacity));

    TrainingRecord record;
    env::Pose pose = env::reset(world);
    int episode_step = 0;
    std::vector<double> q;

    const auto learn_after = static_cast<std::size_t>(
        std::max(config.batch_size, config.warmup_transitions));

    for (int t = 1; t <= config.max_steps; ++t) {
        const double eps = epsilon_at(config, t - 1);
        model.q_online(env::state_features(pose), q);
        const int a = select_action(q, eps, exploration);

        ++episode_step;
        const env::StepResult res =
            env::step(world, pose, env::action_from_index(a), episode_step);
        buffer.push({env::state_features(pose), a, res.reward,
                     env::state_features(res.pose), res.terminal});
        if (res.terminal) {
            pose = env::reset(world);
            episode_step = 0;
        } else {
            pose = res.pose;
        }

        if (buffer.size() >= learn_after) {
            const double loss = train_step(buffer, model, config, batch_rng);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("non-finite loss at training step " +
                                         std::to_string(t));
            }
        }
        if (t % config.target_sync_interval == 0) model.sync_target();

        record.steps_taken = t;
        if (t % config.eval_interval == 0) {
            const double mean = evaluate(model, world, config.eval_episodes);
            record.log.push_back({t, mean, epsilon_at(config, t)});
            if (mean > config.success_threshold) {
                record.solved = true;
                record.solve_step = t;
                break;
            }
        }
    }

    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_time)
            .count();
    return record;
}

}  // namespace qnav::rl
