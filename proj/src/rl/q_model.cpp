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

#include "qnav/rl/q_model.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "qnav/nn/adam.hpp"

namespace qnav::rl {

namespace {

class PqcQModel final : public QModel {
  public:
    PqcQModel(const pqc::CircuitSpec& spec, pqc::ParameterSet params)
        : spec_(spec),
          eval_(spec),
          online_(std::move(params)),
          target_(online_),
          grad_(pqc::zero_parameters(spec)) {
        pqc::validate_parameters(spec_, online_);
        opt_.add_group(online_.theta.size(), kVariationalLr);
        opt_.add_group(online_.xi.size(), kScalingLr);
        opt_.add_group(online_.w.size(), kScalingLr);
    }

    std::string kind() const override {
        return spec_.encoding == pqc::EncodingScheme::kSingle ? "pqc_single"
                                                              : "pqc_triple";
    }
    int n_actions() const override { return spec_.n_actions; }
    std::size_t param_total() const override { return pqc::param_count(spec_); }

    void q_online(std::span<const double> state,
                  std::vector<double>& out) override {
        eval_.q_values_into(online_, state, out);
    }
    void q_target(std::span<const double> state,
                  std::vector<double>& out) override {
        eval_.q_values_into(target_, state, out);
    }

    void zero_gradient() override {
        std::fill(grad_.theta.begin(), grad_.theta.end(), 0.0);
        std::fill(grad_.xi.begin(), grad_.xi.end(), 0.0);
        std::fill(grad_.w.begin(), grad_.w.end(), 0.0);
    }
    void accumulate_gradient(std::span<const double> state,
                             std::span<const double> upstream) override {
        eval_.accumulate_gradient(online_, state, upstream, grad_);
    }
    bool optimizer_step() override {
        std::span<double> params[3] = {online_.theta, online_.xi, online_.w};
        std::span<const double> grads[3] = {grad_.theta, grad_.xi, grad_.w};
        return opt_.step(params, grads);
    }

    void sync_target() override { target_ = online_; }

    nlohmann::json to_checkpoint() const override {
        return {{"family", kind()},
                {"n_qubits", spec_.n_qubits},
                {"n_features", spec_.n_features},
                {"n_actions", spec_.n_actions},
                {"layers", spec_.layers},
                {"theta", online_.theta},
                {"xi", online_.xi},
                {"w", online_.w}};
    }

  private:
    pqc::CircuitSpec spec_;
    pqc::PqcEvaluator eval_;
    pqc::ParameterSet online_;
    pqc::ParameterSet target_;
    pqc::ParameterSet grad_;
    nn::AdamOptimizer opt_;
};

class MlpQModel final : public QModel {
  public:
    MlpQModel(const nn::MlpArch& arch, nn::MlpParams params)
        : arch_(arch),
          eval_(arch),
          online_(std::move(params)),
          target_(online_),
          grad_(nn::zero_mlp_params(arch)) {
        nn::validate_mlp_params(arch_, online_);
        for (int k = 0; k < 3; ++k) {
            opt_.add_group(online_.weights[k].size(), kClassicalLr);
            opt_.add_group(online_.biases[k].size(), kClassicalLr);
        }
    }

    std::string kind() const override { return "mlp"; }
    int n_actions() const override { return arch_.output_dim; }
    std::size_t param_total() const override {
        return nn::mlp_param_count(arch_);
    }

    void q_online(std::span<const double> state,
                  std::vector<double>& out) override {
        eval_.forward_into(state, online_, out);
    }
    void q_target(std::span<const double> state,
                  std::vector<double>& out) override {
        eval_.forward_into(state, target_, out);
    }

    void zero_gradient() override {
        for (int k = 0; k < 3; ++k) {
            std::fill(grad_.weights[k].begin(), grad_.weights[k].end(), 0.0);
            std::fill(grad_.biases[k].begin(), grad_.biases[k].end(), 0.0);
        }
    }
    void accumulate_gradient(std::span<const double> state,
                             std::span<const double> upstream) override {
        eval_.accumulate_gradient(state, online_, upstream, grad_);
    }
    bool optimizer_step() override {
        std::span<double> params[6] = {online_.weights[0], online_.biases[0],
                                       online_.weights[1], online_.biases[1],
                                       online_.weights[2], online_.biases[2]};
        std::span<const double> grads[6] = {grad_.weights[0], grad_.biases[0],
                                            grad_.weights[1], grad_.biases[1],
                                            grad_.weights[2], grad_.biases[2]};
        return opt_.step(params, grads);
    }

    void sync_target() override { target_ = online_; }

    nlohmann::json to_checkpoint() const override {
        return {{"family", kind()},
                {"input_dim", arch_.input_dim},
                {"hidden", arch_.hidden},
                {"output_dim", arch_.output_dim},
                {"weights", online_.weights},
                {"biases", online_.biases}};
    }

  private:
    nn::MlpArch arch_;
    nn::MlpEvaluator eval_;
    nn::MlpParams online_;
    nn::MlpParams target_;
    nn::MlpParams grad_;
    nn::AdamOptimizer opt_;
};

}  // namespace

std::unique_ptr<QModel> make_pqc_model(const pqc::CircuitSpec& spec,
                                       Rng& init_rng) {
    return std::make_unique<PqcQModel>(spec, pqc::init_parameters(spec, init_rng));
}

std::unique_ptr<QModel> make_pqc_model(const pqc::CircuitSpec& spec,
                                       pqc::ParameterSet params) {
    return std::make_unique<PqcQModel>(spec, std::move(params));
}

std::unique_ptr<QModel> make_mlp_model(const nn::MlpArch& arch, Rng& init_rng) {
    return std::make_unique<MlpQModel>(arch, nn::init_mlp_params(arch, init_rng));
}

std::unique_ptr<QModel> make_mlp_model(const nn::MlpArch& arch,
                                       nn::MlpParams params) {
    return std::make_unique<MlpQModel>(arch, std::move(params));
}

std::unique_ptr<QModel> model_from_checkpoint(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "pqc_single" || family == "pqc_triple") {
        pqc::CircuitSpec spec;
        spec.n_qubits = j.at("n_qubits").get<int>();
        spec.n_features = j.at("n_features").get<int>();
        spec.n_actions = j.at("n_actions").get<int>();
        spec.layers = j.at("layers").get<int>();
        spec.encoding = (family == "pqc_single") ? pqc::EncodingScheme::kSingle
                                                 : pqc::EncodingScheme::kTriple;
        pqc::ParameterSet params;
        params.theta = j.at("theta").get<std::vector<double>>();
        params.xi = j.at("xi").get<std::vector<double>>();
        params.w = j.at("w").get<std::vector<double>>();
        return make_pqc_model(spec, std::move(params));
    }
    if (family == "mlp") {
        nn::MlpArch arch;
        arch.input_dim = j.at("input_dim").get<int>();
        arch.hidden = j.at("hidden").get<std::array<int, 2>>();
        arch.output_dim = j.at("output_dim").get<int>();
        nn::MlpParams params;
        for (int k = 0; k < 3; ++k) {
            params.weights[k] = j.at("weights").at(k).get<std::vector<double>>();
            params.biases[k] = j.at("biases").at(k).get<std::vector<double>>();
        }
        return make_mlp_model(arch, std::move(params));
    }
    throw std::invalid_argument("unknown checkpoint family: " + family);
}

void save_checkpoint_file(const QModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << model.to_checkpoint().dump(2) << "\n";
}

std::unique_ptr<QModel> load_checkpoint_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j;
    in >> j;
    return model_from_checkpoint(j);
}

}  // namespace qnav::rl
