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

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnav/env/world.hpp"
#include "qnav/nn/mlp.hpp"
#include "qnav/pqc/circuit.hpp"
#include "qnav/rl/q_model.hpp"
#include "qnav/rl/trainer.hpp"

namespace qnav::harness {

enum class ModelFamily { kDdqnMlp, kPqcSingle, kPqcTriple };

std::string family_name(ModelFamily family);
ModelFamily family_from_name(const std::string& name);

struct ExperimentConfig {
    std::string environment;  // bundled world name, or a world file path
    ModelFamily family = ModelFamily::kPqcTriple;
    std::array<int, 2> hidden{0, 0};  // DDQN_MLP sizes
    int layers = 0;                   // PQC re-upload depth
    rl::TrainingConfig training;
    // When false the success threshold comes from the world file.
    bool threshold_overridden = false;
    int runs = 20;
    std::uint64_t base_seed = 1;
    std::string out_dir = "out";
};

/// "L=10" for PQC families, "32;16" for the classical net.
std::string model_size_label(const ExperimentConfig& config);

/// Throws std::invalid_argument listing every violated invariant at once.
void validate_config(const ExperimentConfig& config);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Single config from a JSON file; defaults applied, then validated.
ExperimentConfig load_config(const std::string& path);

/// A sweep file is either one config object or an array of them.
std::vector<ExperimentConfig> load_sweep(const std::string& path);

/// Bundled world by name, otherwise treats `environment` as a file path.
env::WorldSpec resolve_world(const ExperimentConfig& config);

pqc::CircuitSpec circuit_spec_for(const ExperimentConfig& config);
nn::MlpArch mlp_arch_for(const ExperimentConfig& config);

std::size_t model_param_count(const ExperimentConfig& config);

/// Fresh model for one run, initialized from the run seed's init stream.
std::unique_ptr<rl::QModel> build_model(const ExperimentConfig& config,
                                        std::uint64_t run_seed);

}  // namespace qnav::harness
