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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnav/nn/mlp.hpp"
#include "qnav/pqc/model.hpp"
#include "qnav/rng.hpp"

namespace qnav::rl {

/// A Q-function approximator bundled with its target copy, gradient
/// accumulator, and optimizer. One instance belongs to one training run.
class QModel {
  public:
    virtual ~QModel() = default;

    virtual std::string kind() const = 0;
    virtual int n_actions() const = 0;
    virtual std::size_t param_total() const = 0;

    virtual void q_online(std::span<const double> state,
                          std::vector<double>& out) = 0;
    virtual void q_target(std::span<const double> state,
                          std::vector<double>& out) = 0;

    virtual void zero_gradient() = 0;
    /// Adds the gradient of sum_j upstream_j * Q_online_j(state).
    virtual void accumulate_gradient(std::span<const double> state,
                                     std::span<const double> upstream) = 0;
    /// One optimizer update from the accumulated gradient; false when the
    /// gradient contained non-finite values and the step was rejected.
    virtual bool optimizer_step() = 0;

    virtual void sync_target() = 0;

    virtual nlohmann::json to_checkpoint() const = 0;
};

// Learning rates fixed across all experiments: variational angles at 1e-3,
// input/output scalings at 1e-2, classical weights at 1e-3.
inline constexpr double kVariationalLr = 1e-3;
inline constexpr double kScalingLr = 1e-2;
inline constexpr double kClassicalLr = 1e-3;

std::unique_ptr<QModel> make_pqc_model(const pqc::CircuitSpec& spec,
                                       Rng& init_rng);
std::unique_ptr<QModel> make_pqc_model(const pqc::CircuitSpec& spec,
                                       pqc::ParameterSet params);
std::unique_ptr<QModel> make_mlp_model(const nn::MlpArch& arch, Rng& init_rng);
std::unique_ptr<QModel> make_mlp_model(const nn::MlpArch& arch,
                                       nn::MlpParams params);

std::unique_ptr<QModel> model_from_checkpoint(const nlohmann::json& j);
void save_checkpoint_file(const QModel& model, const std::string& path);
std::unique_ptr<QModel> load_checkpoint_file(const std::string& path);

}  // namespace qnav::rl
