// Copyright 2026 The QNav Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnav/harness/config.hpp"
#include "qnav/harness/experiment.hpp"

using namespace qnav;
using namespace qnav::harness;

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(bool(out));
    out << text;
}

rl::TrainingRecord make_record(
    const std::vector<std::pair<int, double>>& evals) {
    rl::TrainingRecord record;
    for (const auto& [step, value] : evals) {
        rl::EvalPoint p;
        p.train_step = step;
        p.mean_eval_reward = value;
        p.epsilon = 0.1;
        record.log.push_back(p);
        record.steps_taken = step;
    }
    return record;
}

ExperimentConfig tiny_mlp_config() {
    ExperimentConfig config;
    config.environment = "env3x3";
    config.family = ModelFamily::kDdqnMlp;
    config.hidden = {4, 4};
    config.layers = 0;
    config.runs = 2;
    config.base_seed = 7;
    config.out_dir = "unused";
    config.training.batch_size = 4;
    config.training.warmup_transitions = 4;
    config.training.replay_capacity = 64;
    config.training.eval_interval = 30;
    config.training.eval_episodes = 1;
    config.training.max_steps = 60;
    config.training.success_threshold = 1e9;  // never reached
    config.threshold_overridden = true;
    return config;
}

ExperimentConfig tiny_pqc_config() {
    ExperimentConfig config = tiny_mlp_config();
    config.family = ModelFamily::kPqcSingle;
    config.hidden = {0, 0};
    config.layers = 1;
    config.runs = 1;
    config.base_seed = 3;
    config.training.max_steps = 40;
    config.training.eval_interval = 20;
    return config;
}

}  // namespace

TEST_CASE("family names round-trip") {
    for (ModelFamily f : {ModelFamily::kDdqnMlp, ModelFamily::kPqcSingle,
                          ModelFamily::kPqcTriple}) {
        CHECK(family_from_name(family_name(f)) == f);
    }
    CHECK(family_name(ModelFamily::kDdqnMlp) == "DDQN_MLP");
    CHECK_THROWS_AS(family_from_name("TABULAR"), std::invalid_argument);
}

TEST_CASE("model size labels") {
    ExperimentConfig config = tiny_mlp_config();
    config.hidden = {32, 16};
    CHECK(model_size_label(config) == "32;16");
    config = tiny_pqc_config();
    config.layers = 10;
    CHECK(model_size_label(config) == "L=10");
}

TEST_CASE("validate_config reports every violation at once") {
    ExperimentConfig config = tiny_mlp_config();
    config.environment = "";
    config.hidden = {0, 0};
    config.runs = 0;
    try {
        validate_config(config);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("environment") != std::string::npos);
        CHECK(what.find("hidden") != std::string::npos);
        CHECK(what.find("runs") != std::string::npos);
    }
}

TEST_CASE("validate_config rejects cross-family fields") {
    ExperimentConfig config = tiny_mlp_config();
    config.layers = 5;
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
    config = tiny_pqc_config();
    config.hidden = {8, 8};
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
    config = tiny_pqc_config();
    config.layers = 0;
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
}

TEST_CASE("config_from_json fills documented defaults") {
    const nlohmann::json j = nlohmann::json::parse(R"({
        "environment": "env3x3",
        "model": {"family": "PQC_TRIPLE", "layers": 10}
    })");
    const ExperimentConfig config = config_from_json(j);
    CHECK(config.environment == "env3x3");
    CHECK(config.family == ModelFamily::kPqcTriple);
    CHECK(config.layers == 10);
    CHECK(config.runs == 20);
    CHECK(config.base_seed == 1);
    CHECK(config.out_dir == "out");
    CHECK_FALSE(config.threshold_overridden);
    CHECK(config.training.gamma == 0.99);
    CHECK(config.training.batch_size == 64);
    CHECK(config.training.max_steps == 50000);
    CHECK(config.training.epsilon_decay_horizon == 40000);
}

TEST_CASE("config_from_json rejects unknown keys at every level") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({
        "environment": "env3x3",
        "model": {"family": "PQC_TRIPLE", "layers": 10},
        "optimizer": "adam"
    })")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({
        "environment": "env3x3",
        "model": {"family": "PQC_TRIPLE", "layers": 10, "qubits": 3}
    })")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({
        "environment": "env3x3",
        "model": {"family": "PQC_TRIPLE", "layers": 10},
        "training": {"learning_rate": 0.001}
    })")),
                    std::invalid_argument);
}

TEST_CASE("config_from_json requires the family's size field") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({
        "environment": "env3x3",
        "model": {"family": "DDQN_MLP"}
    })")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({
        "environment": "env3x3",
        "model": {"family": "PQC_SINGLE"}
    })")),
                    std::invalid_argument);
}

TEST_CASE("an explicit success threshold marks the override") {
    const ExperimentConfig config = config_from_json(nlohmann::json::parse(R"({
        "environment": "env4x4",
        "model": {"family": "DDQN_MLP", "hidden": [32, 32]},
        "training": {"success_threshold": 12.5}
    })"));
    CHECK(config.threshold_overridden);
    CHECK(config.training.success_threshold == 12.5);
}

TEST_CASE("config json round-trips losslessly") {
    ExperimentConfig config = tiny_pqc_config();
    config.layers = 14;
    config.runs = 5;
    config.base_seed = 42;
    config.out_dir = "results";
    config.training.gamma = 0.95;
    const ExperimentConfig back = config_from_json(config_to_json(config));
    CHECK(back.environment == config.environment);
    CHECK(back.family == config.family);
    CHECK(back.layers == config.layers);
    CHECK(back.hidden == config.hidden);
    CHECK(back.runs == config.runs);
    CHECK(back.base_seed == config.base_seed);
    CHECK(back.out_dir == config.out_dir);
    CHECK(back.threshold_overridden == config.threshold_overridden);
    CHECK(back.training.gamma == config.training.gamma);
    CHECK(back.training.batch_size == config.training.batch_size);
    CHECK(back.training.success_threshold ==
          config.training.success_threshold);
}

TEST_CASE("config and sweep files load with shape checks") {
    const std::string single = "test_harness_single.json";
    const std::string sweep = "test_harness_sweep.json";
    const std::string broken = "test_harness_broken.json";
    spit(single, R"({"environment": "env3x3",
                     "model": {"family": "PQC_TRIPLE", "layers": 8}})");
    spit(sweep, R"([{"environment": "env3x3",
                     "model": {"family": "PQC_TRIPLE", "layers": 8}},
                    {"environment": "env4x4",
                     "model": {"family": "DDQN_MLP", "hidden": [8, 8]}}])");
    spit(broken, "{not json");

    CHECK(load_config(single).layers == 8);
    CHECK_THROWS_AS(load_config(sweep), std::invalid_argument);
    CHECK(load_sweep(single).size() == 1);
    const std::vector<ExperimentConfig> configs = load_sweep(sweep);
    REQUIRE(configs.size() == 2);
    CHECK(configs[0].family == ModelFamily::kPqcTriple);
    CHECK(configs[1].family == ModelFamily::kDdqnMlp);

    spit(sweep, "[]");
    CHECK_THROWS_AS(load_sweep(sweep), std::invalid_argument);
    CHECK_THROWS_AS(load_config("no_such_config.json"), std::runtime_error);
    CHECK_THROWS_AS(load_config(broken), std::runtime_error);

    std::remove(single.c_str());
    std::remove(sweep.c_str());
    std::remove(broken.c_str());
}

TEST_CASE("resolve_world prefers bundled names, then file paths") {
    ExperimentConfig config = tiny_mlp_config();
    CHECK(resolve_world(config).name == "env3x3");
    config.environment = QNAV_WORLDS_DIR "/env4x4.json";
    CHECK(resolve_world(config).name == "env4x4");
    config.environment = "no_such_world";
    CHECK_THROWS_AS(resolve_world(config), std::runtime_error);
}

TEST_CASE("model shapes derive from the config") {
    ExperimentConfig pqc = tiny_pqc_config();
    pqc.layers = 10;
    pqc.family = ModelFamily::kPqcTriple;
    const pqc::CircuitSpec spec = circuit_spec_for(pqc);
    CHECK(spec.n_qubits == 3);
    CHECK(spec.n_features == 3);
    CHECK(spec.n_actions == 3);
    CHECK(spec.layers == 10);
    CHECK(spec.encoding == pqc::EncodingScheme::kTriple);
    CHECK_THROWS_AS(mlp_arch_for(pqc), std::logic_error);

    ExperimentConfig mlp = tiny_mlp_config();
    mlp.hidden = {32, 16};
    const nn::MlpArch arch = mlp_arch_for(mlp);
    CHECK(arch.input_dim == 3);
    CHECK(arch.hidden[0] == 32);
    CHECK(arch.hidden[1] == 16);
    CHECK(arch.output_dim == 3);
    CHECK_THROWS_AS(circuit_spec_for(mlp), std::logic_error);
}

TEST_CASE("parameter counts match the published model sizes") {
    ExperimentConfig mlp = tiny_mlp_config();
    mlp.hidden = {32, 32};
    CHECK(model_param_count(mlp) == 1283);
    mlp.hidden = {16, 16};
    CHECK(model_param_count(mlp) == 387);

    ExperimentConfig pqc = tiny_pqc_config();
    pqc.family = ModelFamily::kPqcTriple;
    pqc.layers = 10;
    CHECK(model_param_count(pqc) == 192);
    pqc.family = ModelFamily::kPqcSingle;
    pqc.layers = 12;
    CHECK(model_param_count(pqc) == 156);
}

TEST_CASE("build_model is deterministic in the run seed") {
    const ExperimentConfig config = tiny_pqc_config();
    auto a = build_model(config, 17);
    auto b = build_model(config, 17);
    auto c = build_model(config, 18);
    const std::vector<double> s = {0.3, -0.7, 1.2};
    std::vector<double> qa, qb, qc;
    a->q_online(s, qa);
    b->q_online(s, qb);
    c->q_online(s, qc);
    bool same_ab = true, same_ac = true;
    for (std::size_t j = 0; j < qa.size(); ++j) {
        same_ab = same_ab && (qa[j] == qb[j]);
        same_ac = same_ac && (qa[j] == qc[j]);
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
}

TEST_CASE("negative rewards are compressed tenfold for plots") {
    CHECK(rescale_reward(-40.0) == -4.0);
    CHECK(rescale_reward(-0.5) == -0.05);
    CHECK(rescale_reward(0.0) == 0.0);
    CHECK(rescale_reward(2.5) == 2.5);
    CHECK(rescale_reward(11.2) == 11.2);
}

TEST_CASE("t quantiles match the standard table") {
    CHECK(t_quantile_975(1) == doctest::Approx(12.706204736).epsilon(1e-9));
    CHECK(t_quantile_975(9) == doctest::Approx(2.262157163).epsilon(1e-9));
    CHECK(t_quantile_975(30) == doctest::Approx(2.042272456).epsilon(1e-9));
    CHECK(t_quantile_975(31) == doctest::Approx(1.959963985).epsilon(1e-12));
    CHECK(t_quantile_975(1000) == doctest::Approx(1.959963985).epsilon(1e-12));
    CHECK_THROWS_AS(t_quantile_975(0), std::invalid_argument);
}

TEST_CASE("doubles are emitted with 17 significant digits") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-4.0) == "-4");
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("aggregate ranks solved runs first and averages their steps") {
    std::vector<rl::TrainingRecord> records;
    records.push_back(make_record({{100, -40.0}, {200, 0.9}}));  // solves @200
    records.push_back(make_record({{100, 0.6}}));                // solves @100
    records.push_back(
        make_record({{100, 0.2}, {200, 0.3}, {300, 0.4}}));  // never solves

    const Aggregation agg = aggregate(records, 0.5, 2);
    CHECK(agg.k == 2);
    CHECK(agg.successes == 2);
    REQUIRE(agg.best.size() == 2);
    CHECK(agg.best[0] == 1);
    CHECK(agg.best[1] == 0);
    CHECK(agg.has_mean_best);
    CHECK(agg.mean_best_steps == doctest::Approx(150.0).epsilon(1e-12));

    // The curve grid comes from the longest best-k log, not the excluded run.
    REQUIRE(agg.curve.size() == 2);
    CHECK(agg.curve[0].train_step == 100);
    CHECK(agg.curve[1].train_step == 200);
    // Step one mixes 0.6 with the rescaled -40 -> -4.
    CHECK(agg.curve[0].mean_reward_rescaled ==
          doctest::Approx(-1.7).epsilon(1e-12));
    CHECK(agg.curve[0].ci95 ==
          doctest::Approx(12.706204736 * 2.3).epsilon(1e-9));
    // Step two extends the shorter run's final value.
    CHECK(agg.curve[1].mean_reward_rescaled ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(agg.curve[1].ci95 ==
          doctest::Approx(12.706204736 * 0.15).epsilon(1e-9));
}

TEST_CASE("aggregate without any solved run reports no mean steps") {
    std::vector<rl::TrainingRecord> records;
    records.push_back(make_record({{100, 0.1}}));
    records.push_back(make_record({{100, 0.3}}));
    const Aggregation agg = aggregate(records, 0.5, 10);
    CHECK(agg.k == 2);
    CHECK(agg.successes == 0);
    CHECK_FALSE(agg.has_mean_best);
    // Unsolved runs ranked by final evaluation, strongest first.
    CHECK(agg.best[0] == 1);
    CHECK(agg.best[1] == 0);
}

TEST_CASE("aggregate of a single run has zero-width intervals") {
    std::vector<rl::TrainingRecord> records;
    records.push_back(make_record({{50, -2.0}, {100, 3.0}}));
    const Aggregation agg = aggregate(records, 10.0, 1);
    REQUIRE(agg.curve.size() == 2);
    CHECK(agg.curve[0].mean_reward_rescaled == -0.2);
    CHECK(agg.curve[0].ci95 == 0.0);
    CHECK(agg.curve[1].mean_reward_rescaled == 3.0);
    CHECK(agg.curve[1].ci95 == 0.0);
}

TEST_CASE("aggregate handles runs that never evaluated") {
    std::vector<rl::TrainingRecord> records(2);
    const Aggregation agg = aggregate(records, 0.5, 10);
    CHECK(agg.successes == 0);
    CHECK(agg.curve.empty());
    CHECK_FALSE(agg.has_mean_best);
}

TEST_CASE("aggregate validates its inputs") {
    CHECK_THROWS_AS(aggregate({}, 0.5, 10), std::invalid_argument);
    std::vector<rl::TrainingRecord> records;
    records.push_back(make_record({{100, 0.1}}));
    CHECK_THROWS_AS(aggregate(records, 0.5, 0), std::invalid_argument);
}

TEST_CASE("aggregate derives success from the log, not stored flags") {
    rl::TrainingRecord record = make_record({{100, 5.0}});
    record.solved = false;  // stale flag: the log says otherwise
    record.solve_step = 0;
    const Aggregation agg = aggregate({record}, 1.0, 10);
    CHECK(agg.successes == 1);
    CHECK(agg.has_mean_best);
    CHECK(agg.mean_best_steps == 100.0);
}

TEST_CASE("config directory names are flat and deterministic") {
    ExperimentConfig pqc = tiny_pqc_config();
    pqc.family = ModelFamily::kPqcTriple;
    pqc.layers = 10;
    CHECK(config_dir_name(3, pqc) == "c03_PQC_TRIPLE_L_10_env3x3");

    ExperimentConfig mlp = tiny_mlp_config();
    mlp.hidden = {32, 16};
    mlp.environment = "worlds/env4x4.json";
    CHECK(config_dir_name(0, mlp) == "c00_DDQN_MLP_32_16_env4x4");
}

TEST_CASE("emit_outputs writes a header-only summary for an empty sweep") {
    const std::string dir = "test_harness_emit_empty";
    emit_outputs({}, dir);
    CHECK(slurp(dir + "/summary.csv") ==
          "family,size,params,successes,runs,mean_best10_steps\n");
    const nlohmann::json j =
        nlohmann::json::parse(slurp(dir + "/summary.json"));
    CHECK(j.at("sweep").is_array());
    CHECK(j.at("sweep").empty());
    fs::remove_all(dir);
}

TEST_CASE("emit_outputs reports unsolved configs with an n/a sentinel") {
    ExperimentConfig config = tiny_mlp_config();
    config.runs = 1;
    ExperimentResult r;
    r.config = config;
    r.environment_name = "env3x3";
    r.threshold = 0.5;
    r.params = model_param_count(config);
    RunOutcome outcome;
    outcome.seed = 7;
    outcome.record = make_record({{100, 0.2}});
    r.outcomes = {outcome};
    r.agg = aggregate({outcome.record}, r.threshold);

    const std::string dir = "test_harness_emit_na";
    emit_outputs({r}, dir);
    const std::string csv = slurp(dir + "/summary.csv");
    CHECK(csv ==
          "family,size,params,successes,runs,mean_best10_steps\n"
          "DDQN_MLP,4;4,51,0,1,n/a\n");
    const nlohmann::json j =
        nlohmann::json::parse(slurp(dir + "/summary.json"));
    const nlohmann::json& row = j.at("sweep").at(0);
    CHECK(row.at("mean_best10_steps").is_null());
    CHECK(row.at("successes") == 0);
    CHECK(row.at("runs_detail").at(0).at("solve_step").is_null());
    CHECK(row.at("runs_detail").at(0).at("final_eval") == 0.2);
    fs::remove_all(dir);
}

TEST_CASE("run_experiment trains seeded runs and writes their logs") {
    const ExperimentConfig config = tiny_mlp_config();
    const std::string dir = "test_harness_runs_a";
    const ExperimentResult result = run_experiment(config, 1, dir);
    REQUIRE(result.outcomes.size() == 2);
    CHECK(result.outcomes[0].seed == 7);
    CHECK(result.outcomes[1].seed == 8);
    CHECK_FALSE(result.outcomes[0].failed);
    CHECK_FALSE(result.outcomes[1].failed);
    CHECK(result.outcomes[0].record.steps_taken == 60);
    CHECK(result.outcomes[0].record.log.size() == 2);
    CHECK(result.threshold == 1e9);
    CHECK(result.params == 51);
    CHECK(fs::exists(dir + "/run_00.csv"));
    CHECK(fs::exists(dir + "/run_01.csv"));

    const std::string csv = slurp(dir + "/run_00.csv");
    CHECK(csv.rfind("train_step,mean_eval_reward,epsilon\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 evals

    // The same config and seeds reproduce the files byte for byte.
    const std::string dir_b = "test_harness_runs_b";
    run_experiment(config, 1, dir_b);
    CHECK(slurp(dir + "/run_00.csv") == slurp(dir_b + "/run_00.csv"));
    CHECK(slurp(dir + "/run_01.csv") == slurp(dir_b + "/run_01.csv"));

    // Worker count affects scheduling only, never the bytes.
    const std::string dir_c = "test_harness_runs_c";
    run_experiment(config, 2, dir_c);
    CHECK(slurp(dir + "/run_00.csv") == slurp(dir_c + "/run_00.csv"));
    CHECK(slurp(dir + "/run_01.csv") == slurp(dir_c + "/run_01.csv"));

    fs::remove_all(dir);
    fs::remove_all(dir_b);
    fs::remove_all(dir_c);
}

TEST_CASE("run_experiment checkpoints solved runs") {
    ExperimentConfig config = tiny_mlp_config();
    config.runs = 1;
    config.training.success_threshold = -1e9;  // first evaluation wins
    const std::string dir = "test_harness_solved";
    const ExperimentResult result = run_experiment(config, 1, dir);
    CHECK(result.agg.successes == 1);
    CHECK(result.outcomes[0].record.solved);
    CHECK(result.outcomes[0].record.solve_step == 30);
    CHECK(fs::exists(dir + "/checkpoint_run_00.json"));
    auto restored = rl::load_checkpoint_file(dir + "/checkpoint_run_00.json");
    CHECK(restored->kind() == "mlp");
    const std::string csv = slurp(dir + "/run_00.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + 1 eval
    fs::remove_all(dir);
}

TEST_CASE("run_experiment validates its arguments") {
    const ExperimentConfig config = tiny_mlp_config();
    CHECK_THROWS_AS(run_experiment(config, 0), std::invalid_argument);
    ExperimentConfig bad = config;
    bad.runs = 0;
    CHECK_THROWS_AS(run_experiment(bad, 1), std::invalid_argument);
}

TEST_CASE("run_sweep lays out per-config directories and summaries") {
    ExperimentConfig mlp = tiny_mlp_config();
    mlp.runs = 1;
    const ExperimentConfig pqc = tiny_pqc_config();
    const std::vector<ExperimentConfig> configs = {mlp, pqc};

    const std::string dir_a = "test_harness_sweep_out_a";
    const std::vector<ExperimentResult> results = run_sweep(configs, dir_a, 1);
    REQUIRE(results.size() == 2);
    const std::string mlp_dir = dir_a + "/c00_DDQN_MLP_4_4_env3x3";
    const std::string pqc_dir = dir_a + "/c01_PQC_SINGLE_L_1_env3x3";
    CHECK(fs::exists(mlp_dir + "/run_00.csv"));
    CHECK(fs::exists(mlp_dir + "/curve.csv"));
    CHECK(fs::exists(pqc_dir + "/run_00.csv"));
    CHECK(fs::exists(pqc_dir + "/curve.csv"));
    const std::string summary = slurp(dir_a + "/summary.csv");
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);
    CHECK(summary.find("DDQN_MLP,4;4,") != std::string::npos);
    CHECK(summary.find("PQC_SINGLE,L=1,") != std::string::npos);

    const nlohmann::json j = nlohmann::json::parse(slurp(dir_a + "/summary.json"));
    REQUIRE(j.at("sweep").size() == 2);
    CHECK(j.at("sweep").at(0).at("params") == 51);
    CHECK(j.at("sweep").at(1).at("family") == "PQC_SINGLE");

    // A second invocation reproduces every emitted byte.
    const std::string dir_b = "test_harness_sweep_out_b";
    run_sweep(configs, dir_b, 1);
    CHECK(slurp(dir_a + "/summary.csv") == slurp(dir_b + "/summary.csv"));
    CHECK(slurp(dir_a + "/summary.json") == slurp(dir_b + "/summary.json"));
    CHECK(slurp(mlp_dir + "/run_00.csv") ==
          slurp(dir_b + "/c00_DDQN_MLP_4_4_env3x3/run_00.csv"));
    CHECK(slurp(pqc_dir + "/curve.csv") ==
          slurp(dir_b + "/c01_PQC_SINGLE_L_1_env3x3/curve.csv"));

    CHECK_THROWS_AS(run_sweep({}, dir_a, 1), std::invalid_argument);

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}
