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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnav/harness/experiment.hpp"
#include "qnav/pqc/spectrum.hpp"
#include "qnav/rl/trainer.hpp"

namespace {

using qnav::harness::ExperimentConfig;
using qnav::harness::ExperimentResult;

void print_result(const ExperimentResult& result) {
    std::cout << qnav::harness::family_name(result.config.family) << " "
              << qnav::harness::model_size_label(result.config) << " on "
              << result.environment_name << ": " << result.agg.successes << "/"
              << result.config.runs << " solved";
    if (result.agg.has_mean_best) {
        std::cout << ", mean solve step of best " << result.agg.k << " = "
                  << qnav::harness::format_double(result.agg.mean_best_steps);
    }
    std::cout << "\n";
    for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
        const auto& o = result.outcomes[i];
        std::cout << "  run " << i << " seed " << o.seed;
        if (o.failed) {
            std::cout << " FAILED: " << o.error;
        } else if (o.record.solved) {
            std::cout << " solved at step " << o.record.solve_step;
        } else {
            std::cout << " exhausted after " << o.record.steps_taken
                      << " steps";
        }
        std::cout << " (" << qnav::harness::format_double(o.record.wall_seconds)
                  << " s)\n";
    }
}

int cmd_train(const std::string& config_path, std::uint64_t seed,
              bool seed_given, const std::string& out_override) {
    ExperimentConfig config = qnav::harness::load_config(config_path);
    config.runs = 1;
    if (seed_given) config.base_seed = seed;
    if (!out_override.empty()) config.out_dir = out_override;
    const auto results =
        qnav::harness::run_sweep({config}, config.out_dir, 1);
    print_result(results.front());
    std::cout << "outputs in " << config.out_dir << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, int runs_override,
              const std::string& out_override, int parallel) {
    std::vector<ExperimentConfig> configs =
        qnav::harness::load_sweep(config_path);
    for (ExperimentConfig& c : configs) {
        if (runs_override > 0) c.runs = runs_override;
    }
    const std::string out_dir =
        out_override.empty() ? configs.front().out_dir : out_override;
    const auto results = qnav::harness::run_sweep(configs, out_dir, parallel);
    for (const ExperimentResult& r : results) print_result(r);
    std::cout << "outputs in " << out_dir << "\n";
    return 0;
}

int cmd_evaluate(const std::string& checkpoint_path, const std::string& world_ref,
                 int episodes) {
    auto model = qnav::rl::load_checkpoint_file(checkpoint_path);
    qnav::env::WorldSpec world;
    try {
        world = qnav::env::builtin_world(world_ref);
    } catch (const std::invalid_argument&) {
        world = qnav::env::load_world_file(world_ref);
    }
    const double mean = qnav::rl::evaluate(*model, world, episodes);
    std::cout << "mean reward over " << episodes << " greedy episodes on "
              << world.name << ": " << qnav::harness::format_double(mean)
              << "\n";
    return 0;
}

int cmd_spectrum(int layers, std::uint64_t seed, int samples,
                 const std::string& out_path) {
    qnav::pqc::CircuitSpec spec;
    spec.n_qubits = 1;
    spec.n_features = 1;
    spec.n_actions = 1;
    spec.layers = layers;
    spec.encoding = qnav::pqc::EncodingScheme::kSingle;

    qnav::Rng rng =
        qnav::make_stream(seed, qnav::RngStream::kModelInit);
    const qnav::pqc::ParameterSet params =
        qnav::pqc::init_parameters(spec, rng);
    if (samples <= 0) samples = 4 * layers + 4;
    const qnav::pqc::FourierSpectrum spectrum =
        qnav::pqc::analyze_spectrum(spec, params, samples);

    std::cout << "layers " << layers << ", " << samples
              << " samples, residual above band: "
              << qnav::harness::format_double(spectrum.residual) << "\n";
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
        std::cout << "  freq " << spectrum.frequencies[i] << " power "
                  << qnav::harness::format_double(
                         std::norm(spectrum.coefficients[i]))
                  << "\n";
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            throw std::runtime_error("cannot write spectrum file: " + out_path);
        }
        out << "frequency,real,imag\n";
        for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
            out << spectrum.frequencies[i] << ","
                << qnav::harness::format_double(spectrum.coefficients[i].real())
                << ","
                << qnav::harness::format_double(spectrum.coefficients[i].imag())
                << "\n";
        }
        std::cout << "spectrum written to " << out_path << "\n";
    }
    return 0;
}

int cmd_worlds(const std::vector<std::string>& paths) {
    if (paths.empty()) {
        for (const qnav::env::WorldSpec& w : qnav::env::builtin_worlds()) {
            std::cout << w.name << ": extent " << w.extent << " m, "
                      << w.obstacles.size() << " obstacle(s), start ("
                      << w.start.x << ", " << w.start.y << ", yaw "
                      << qnav::harness::format_double(w.start.yaw)
                      << "), goal (" << w.goal.x << ", " << w.goal.y
                      << ", r=" << w.goal.radius << "), success threshold "
                      << qnav::harness::format_double(w.success_threshold)
                      << "\n";
        }
        return 0;
    }
    int failures = 0;
    for (const std::string& path : paths) {
        try {
            const qnav::env::WorldSpec w = qnav::env::load_world_file(path);
            std::cout << "OK " << path << " (" << w.name << ")\n";
        } catch (const std::exception& e) {
            std::cout << "FAIL " << path << ": " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum and classical Q-learning for robot navigation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int runs = 0;
    int parallel = 1;

    CLI::App* train = app.add_subcommand("train", "Run one training run");
    train->add_option("--config", config_path, "experiment config JSON")
        ->required();
    CLI::Option* train_seed =
        train->add_option("--seed", seed, "override the run seed");
    train->add_option("--out", out_dir, "override the output directory");

    CLI::App* sweep =
        app.add_subcommand("sweep", "Run a multi-config, multi-seed sweep");
    sweep->add_option("--config", config_path,
                      "sweep JSON (config object or array)")
        ->required();
    sweep->add_option("--runs", runs, "override run count for every config");
    sweep->add_option("--out", out_dir, "override the output directory");
    sweep->add_option("--parallel", parallel, "max concurrent runs")
        ->check(CLI::PositiveNumber);

    std::string checkpoint_path;
    std::string world_ref = "env3x3";
    int episodes = 10;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Greedy-evaluate a checkpoint in a world");
    evaluate->add_option("checkpoint", checkpoint_path, "checkpoint JSON path")
        ->required();
    evaluate->add_option("--world", world_ref, "bundled name or world file");
    evaluate->add_option("--episodes", episodes, "episode count")
        ->check(CLI::PositiveNumber);

    int layers = 1;
    int samples = 0;
    std::string spectrum_out;
    std::uint64_t spectrum_seed = 1;
    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Fourier spectrum of a 1-qubit re-upload circuit");
    spectrum->add_option("--layers", layers, "re-upload layer count")
        ->required()
        ->check(CLI::PositiveNumber);
    spectrum->add_option("--seed", spectrum_seed, "parameter init seed");
    spectrum->add_option("--samples", samples,
                         "sample count (default 4L + 4)");
    spectrum->add_option("--out", spectrum_out, "CSV output path");

    std::vector<std::string> world_paths;
    CLI::App* worlds =
        app.add_subcommand("worlds", "List bundled worlds or validate files");
    worlds->add_option("paths", world_paths, "world files to validate");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            return cmd_train(config_path, seed, train_seed->count() > 0,
                             out_dir);
        }
        if (sweep->parsed()) {
            return cmd_sweep(config_path, runs, out_dir, parallel);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(checkpoint_path, world_ref, episodes);
        }
        if (spectrum->parsed()) {
            return cmd_spectrum(layers, spectrum_seed, samples, spectrum_out);
        }
        if (worlds->parsed()) {
            return cmd_worlds(world_paths);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
