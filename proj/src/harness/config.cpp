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

#include "qnav/harness/config.hpp"

#include <fstream>
#include <stdexcept>

namespace qnav::harness {

std::string family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::kDdqnMlp: return "DDQN_MLP";
        case ModelFamily::kPqcSingle: return "PQC_SINGLE";
        case ModelFamily::kPqcTriple: return "PQC_TRIPLE";
    }
    throw std::invalid_argument("unknown model family");
}

ModelFamily family_from_name(const std::string& name) {
    if (name == "DDQN_MLP") return ModelFamily::kDdqnMlp;
    if (name == "PQC_SINGLE") return ModelFamily::kPqcSingle;
    if (name == "PQC_TRIPLE") return ModelFamily::kPqcTriple;
    throw std::invalid_argument("unknown model family: " + name);
}

std::string model_size_label(const ExperimentConfig& config) {
    if (config.family == ModelFamily::kDdqnMlp) {
        return std::to_string(config.hidden[0]) + ";" +
               std::to_string(config.hidden[1]);
    }
    return "L=" + std::to_string(config.layers);
}

void validate_config(const ExperimentConfig& config) {
    std::vector<std::string> issues;
    if (config.environment.empty()) {
        issues.push_back("environment must be set");
    }
    if (config.family == ModelFamily::kDdqnMlp) {
        if (config.hidden[0] < 1 || config.hidden[1] < 1) {
            issues.push_back("hidden sizes must be >= 1 for DDQN_MLP");
        }
        if (config.layers != 0) {
            issues.push_back("layers is not a DDQN_MLP field");
        }
    } else {
        if (config.layers < 1) {
            issues.push_back("layers must be >= 1 for PQC families");
        }
        if (config.hidden[0] != 0 || config.hidden[1] != 0) {
            issues.push_back("hidden is not a PQC field");
        }
    }
    if (config.runs < 1) issues.push_back("runs must be >= 1");
    if (config.out_dir.empty()) issues.push_back("out_dir must be set");
    try {
        rl::TrainingConfig t = config.training;
        t.success_threshold =
            config.threshold_overridden ? t.success_threshold : 0.0;
        rl::validate_training_config(t);
    } catch (const std::invalid_argument& e) {
        issues.push_back(e.what());
    }
    if (!issues.empty()) {
        std::string message = "invalid config:";
        for (const std::string& issue : issues) message += "\n  - " + issue;
        throw std::invalid_argument(message);
    }
}

namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> allowed,
                         const char* where) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument(std::string("unknown key \"") + key +
                                        "\" in " + where);
        }
    }
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j,
                        {"environment", "model", "training", "runs",
                         "base_seed", "out_dir"},
                        "config");
    ExperimentConfig config;
    config.environment = j.at("environment").get<std::string>();

    const auto& model = j.at("model");
    reject_unknown_keys(model, {"family", "hidden", "layers"}, "model");
    config.family = family_from_name(model.at("family").get<std::string>());
    if (model.contains("hidden")) {
        config.hidden = model.at("hidden").get<std::array<int, 2>>();
    }
    if (model.contains("layers")) {
        config.layers = model.at("layers").get<int>();
    }
    if (config.family == ModelFamily::kDdqnMlp && !model.contains("hidden")) {
        throw std::invalid_argument("DDQN_MLP model requires hidden sizes");
    }
    if (config.family != ModelFamily::kDdqnMlp && !model.contains("layers")) {
        throw std::invalid_argument("PQC model requires a layer count");
    }

    if (j.contains("training")) {
        const auto& t = j.at("training");
        reject_unknown_keys(t,
                            {"gamma", "batch_size", "max_steps", "eval_interval",
                             "eval_episodes", "epsilon_start", "epsilon_end",
                             "epsilon_decay_horizon", "target_sync_interval",
                             "warmup_transitions", "replay_capacity",
                             "success_threshold"},
                            "training");
        rl::TrainingConfig& tc = config.training;
        tc.gamma = t.value("gamma", tc.gamma);
        tc.batch_size = t.value("batch_size", tc.batch_size);
        tc.max_steps = t.value("max_steps", tc.max_steps);
        tc.eval_interval = t.value("eval_interval", tc.eval_interval);
        tc.eval_episodes = t.value("eval_episodes", tc.eval_episodes);
        tc.epsilon_start = t.value("epsilon_start", tc.epsilon_start);
        tc.epsilon_end = t.value("epsilon_end", tc.epsilon_end);
        tc.epsilon_decay_horizon =
            t.value("epsilon_decay_horizon", tc.epsilon_decay_horizon);
        tc.target_sync_interval =
            t.value("target_sync_interval", tc.target_sync_interval);
        tc.warmup_transitions =
            t.value("warmup_transitions", tc.warmup_transitions);
        tc.replay_capacity = t.value("replay_capacity", tc.replay_capacity);
        if (t.contains("success_threshold")) {
            tc.success_threshold = t.at("success_threshold").get<double>();
            config.threshold_overridden = true;
        }
    }

    config.runs = j.value("runs", config.runs);
    config.base_seed = j.value("base_seed", config.base_seed);
    config.out_dir = j.value("out_dir", config.out_dir);
    validate_config(config);
    return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json model;
    model["family"] = family_name(config.family);
    if (config.family == ModelFamily::kDdqnMlp) {
        model["hidden"] = config.hidden;
    } else {
        model["layers"] = config.layers;
    }

    const rl::TrainingConfig& tc = config.training;
    nlohmann::json training = {
        {"gamma", tc.gamma},
        {"batch_size", tc.batch_size},
        {"max_steps", tc.max_steps},
        {"eval_interval", tc.eval_interval},
        {"eval_episodes", tc.eval_episodes},
        {"epsilon_start", tc.epsilon_start},
        {"epsilon_end", tc.epsilon_end},
        {"epsilon_decay_horizon", tc.epsilon_decay_horizon},
        {"target_sync_interval", tc.target_sync_interval},
        {"warmup_transitions", tc.warmup_transitions},
        {"replay_capacity", tc.replay_capacity},
    };
    if (config.threshold_overridden) {
        training["success_threshold"] = tc.success_threshold;
    }

    return {{"environment", config.environment},
            {"model", model},
            {"training", training},
            {"runs", config.runs},
            {"base_seed", config.base_seed},
            {"out_dir", config.out_dir}};
}

namespace {

nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("parse error in " + path + ": " + e.what());
    }
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    const nlohmann::json j = parse_json_file(path);
    if (j.is_array()) {
        throw std::invalid_argument(path +
                                    " holds a sweep; expected a single config");
    }
    return config_from_json(j);
}

std::vector<ExperimentConfig> load_sweep(const std::string& path) {
    const nlohmann::json j = parse_json_file(path);
    std::vector<ExperimentConfig> configs;
    if (j.is_array()) {
        for (const auto& item : j) configs.push_back(config_from_json(item));
    } else {
        configs.push_back(config_from_json(j));
    }
    if (configs.empty()) {
        throw std::invalid_argument("sweep file lists no configs: " + path);
    }
    return configs;
}

env::WorldSpec resolve_world(const ExperimentConfig& config) {
    for (const env::WorldSpec& w : env::builtin_worlds()) {
        if (w.name == config.environment) return w;
    }
    return env::load_world_file(config.environment);
}

pqc::CircuitSpec circuit_spec_for(const ExperimentConfig& config) {
    if (config.family == ModelFamily::kDdqnMlp) {
        throw std::logic_error("classical model has no circuit spec");
    }
    pqc::CircuitSpec spec;
    spec.n_qubits = 3;
    spec.n_features = 3;
    spec.n_actions = env::kNumActions;
    spec.layers = config.layers;
    spec.encoding = (config.family == ModelFamily::kPqcSingle)
                        ? pqc::EncodingScheme::kSingle
                        : pqc::EncodingScheme::kTriple;
    return spec;
}

nn::MlpArch mlp_arch_for(const ExperimentConfig& config) {
    if (config.family != ModelFamily::kDdqnMlp) {
        throw std::logic_error("quantum model has no MLP arch");
    }
    nn::MlpArch arch;
    arch.input_dim = 3;
    arch.hidden = config.hidden;
    arch.output_dim = env::kNumActions;
    return arch;
}

std::size_t model_param_count(const ExperimentConfig& config) {
    if (config.family == ModelFamily::kDdqnMlp) {
        return nn::mlp_param_count(mlp_arch_for(config));
    }
    return pqc::param_count(circuit_spec_for(config));
}

std::unique_ptr<rl::QModel> build_model(const ExperimentConfig& config,
                                        std::uint64_t run_seed) {
    Rng init = make_stream(run_seed, RngStream::kModelInit);
    if (config.family == ModelFamily::kDdqnMlp) {
        return rl::make_mlp_model(mlp_arch_for(config), init);
    }
    return rl::make_pqc_model(circuit_spec_for(config), init);
}

}  // namespace qnav::harness
