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

#include "qnav/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace qnav::harness {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double rescale_reward(double v) { return v < 0.0 ? v * 0.1 : v; }

double t_quantile_975(int df) {
    // Two-sided 95% critical values of Student's t.
    static constexpr double kTable[30] = {
        12.706204736, 4.302652730, 3.182446305, 2.776445105, 2.570581836,
        2.446911851,  2.364624252, 2.306004135, 2.262157163, 2.228138852,
        2.200985160,  2.178812830, 2.160368656, 2.144786688, 2.131449546,
        2.119905299,  2.109815578, 2.100922040, 2.093024054, 2.085963447,
        2.079613845,  2.073873068, 2.068657610, 2.063898562, 2.059538553,
        2.055529439,  2.051830516, 2.048407142, 2.045229642, 2.042272456};
    if (df < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
    if (df <= 30) return kTable[df - 1];
    return 1.959963985;
}

namespace {

struct RankEntry {
    std::size_t index = 0;
    bool solved = false;
    int solve_step = 0;
    double final_eval = -std::numeric_limits<double>::infinity();
};

/// First evaluation whose mean beat the threshold; 0 when none did.
int derive_solve_step(const rl::TrainingRecord& record, double threshold) {
    for (const rl::EvalPoint& p : record.log) {
        if (p.mean_eval_reward > threshold) return p.train_step;
    }
    return 0;
}

}  // namespace

Aggregation aggregate(const std::vector<rl::TrainingRecord>& records,
                      double success_threshold, int k) {
    if (records.empty()) throw std::invalid_argument("no records to aggregate");
    if (k < 1) throw std::invalid_argument("best-k requires k >= 1");

    std::vector<RankEntry> ranked(records.size());
    Aggregation agg;
    for (std::size_t i = 0; i < records.size(); ++i) {
        RankEntry& e = ranked[i];
        e.index = i;
        const int solve_step = derive_solve_step(records[i], success_threshold);
        e.solved = solve_step > 0;
        e.solve_step = solve_step;
        if (!records[i].log.empty()) {
            e.final_eval = records[i].log.back().mean_eval_reward;
        }
        if (e.solved) agg.successes += 1;
    }

    // Solved runs first by earliest solve; unsolved after, strongest final
    // evaluation first. Stable so equal runs keep index order.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankEntry& a, const RankEntry& b) {
                         if (a.solved != b.solved) return a.solved;
                         if (a.solved) return a.solve_step < b.solve_step;
                         return a.final_eval > b.final_eval;
                     });

    agg.k = std::min<int>(k, static_cast<int>(records.size()));
    double steps_sum = 0.0;
    int solved_in_best = 0;
    std::size_t longest = 0;
    std::size_t longest_at = records.size();
    for (int i = 0; i < agg.k; ++i) {
        const RankEntry& e = ranked[static_cast<std::size_t>(i)];
        agg.best.push_back(e.index);
        if (e.solved) {
            steps_sum += e.solve_step;
            solved_in_best += 1;
        }
        const std::size_t len = records[e.index].log.size();
        if (len > longest) {
            longest = len;
            longest_at = e.index;
        }
    }
    if (solved_in_best > 0) {
        agg.has_mean_best = true;
        agg.mean_best_steps = steps_sum / solved_in_best;
    }

    if (longest == 0) return agg;  // nothing evaluated anywhere

    const std::vector<rl::EvalPoint>& grid = records[longest_at].log;
    std::vector<double> values;
    for (std::size_t s = 0; s < longest; ++s) {
        values.clear();
        for (std::size_t bi : agg.best) {
            const auto& log = records[bi].log;
            if (log.empty()) continue;  // run produced no evaluations
            const std::size_t at = std::min(s, log.size() - 1);
            values.push_back(rescale_reward(log[at].mean_eval_reward));
        }
        if (values.empty()) continue;
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double ci = 0.0;
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - mean) * (v - mean);
            const double sd =
                std::sqrt(ss / static_cast<double>(values.size() - 1));
            ci = t_quantile_975(static_cast<int>(values.size()) - 1) * sd /
                 std::sqrt(static_cast<double>(values.size()));
        }
        agg.curve.push_back({grid[s].train_step, mean, ci});
    }
    return agg;
}

namespace {

void write_run_csv(const std::string& path, const RunOutcome& outcome) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write run log: " + path);
    out << "train_step,mean_eval_reward,epsilon\n";
    for (const rl::EvalPoint& p : outcome.record.log) {
        out << p.train_step << "," << format_double(p.mean_eval_reward) << ","
            << format_double(p.epsilon) << "\n";
    }
}

std::string zero_pad(std::size_t value, int width) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        if (!ok) c = '_';
    }
    return s;
}

}  // namespace

std::string config_dir_name(std::size_t idx, const ExperimentConfig& config) {
    const std::string env_base =
        std::filesystem::path(config.environment).stem().string();
    return "c" + zero_pad(idx, 2) + "_" + sanitize(family_name(config.family)) +
           "_" + sanitize(model_size_label(config)) + "_" + sanitize(env_base);
}

ExperimentResult run_experiment(const ExperimentConfig& config, int parallel,
                                const std::string& artifacts_dir) {
    validate_config(config);
    if (parallel < 1) throw std::invalid_argument("parallel must be >= 1");

    const env::WorldSpec world = resolve_world(config);
    ExperimentResult result;
    result.config = config;
    result.environment_name = world.name;
    result.threshold = config.threshold_overridden
                           ? config.training.success_threshold
                           : world.success_threshold;
    result.params = model_param_count(config);
    result.artifacts_dir = artifacts_dir;
    result.outcomes.resize(static_cast<std::size_t>(config.runs));

    const auto run_one = [&](std::size_t i) {
        RunOutcome& outcome = result.outcomes[i];
        outcome.seed = config.base_seed + i;
        try {
            rl::TrainingConfig tc = config.training;
            tc.seed = outcome.seed;
            tc.success_threshold = result.threshold;
            auto model = build_model(config, outcome.seed);
            outcome.record = rl::train(*model, world, tc);
            if (!artifacts_dir.empty() && outcome.record.solved) {
                rl::save_checkpoint_file(
                    *model, artifacts_dir + "/checkpoint_run_" +
                                zero_pad(i, 2) + ".json");
            }
        } catch (const std::exception& e) {
            outcome.failed = true;
            outcome.error = e.what();
        }
    };

    if (!artifacts_dir.empty()) {
        std::filesystem::create_directories(artifacts_dir);
    }

    const int workers =
        std::min(parallel, config.runs > 0 ? config.runs : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < result.outcomes.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= result.outcomes.size()) return;
                    run_one(i);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    if (!artifacts_dir.empty()) {
        for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
            write_run_csv(artifacts_dir + "/run_" + zero_pad(i, 2) + ".csv",
                          result.outcomes[i]);
        }
    }

    std::vector<rl::TrainingRecord> records;
    records.reserve(result.outcomes.size());
    for (const RunOutcome& o : result.outcomes) records.push_back(o.record);
    result.agg = aggregate(records, result.threshold);
    return result;
}

namespace {

nlohmann::json result_to_json(const ExperimentResult& r) {
    nlohmann::json runs = nlohmann::json::array();
    for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
        const RunOutcome& o = r.outcomes[i];
        const int solve_step = derive_solve_step(o.record, r.threshold);
        nlohmann::json jr = {
            {"run", i},
            {"seed", o.seed},
            {"solved", solve_step > 0},
            {"steps_taken", o.record.steps_taken},
            {"evaluations", o.record.log.size()},
        };
        if (solve_step > 0) {
            jr["solve_step"] = solve_step;
        } else {
            jr["solve_step"] = nullptr;
        }
        if (!o.record.log.empty()) {
            jr["final_eval"] = o.record.log.back().mean_eval_reward;
        } else {
            jr["final_eval"] = nullptr;
        }
        if (o.failed) jr["error"] = o.error;
        runs.push_back(jr);
    }

    nlohmann::json curve = nlohmann::json::array();
    for (const CurvePoint& p : r.agg.curve) {
        curve.push_back({{"train_step", p.train_step},
                         {"mean_reward_rescaled", p.mean_reward_rescaled},
                         {"ci95", p.ci95}});
    }

    return {{"config", config_to_json(r.config)},
            {"environment", r.environment_name},
            {"threshold", r.threshold},
            {"family", family_name(r.config.family)},
            {"size", model_size_label(r.config)},
            {"params", r.params},
            {"successes", r.agg.successes},
            {"runs", r.config.runs},
            {"best_k", r.agg.k},
            {"best_run_indices", r.agg.best},
            {"mean_best10_steps",
             r.agg.has_mean_best ? nlohmann::json(r.agg.mean_best_steps)
                                 : nlohmann::json(nullptr)},
            {"runs_detail", runs},
            {"curve", curve}};
}

void write_curve_csv(const std::string& path,
                     const std::vector<CurvePoint>& curve) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write curve file: " + path);
    out << "train_step,mean_reward_rescaled,ci95\n";
    for (const CurvePoint& p : curve) {
        out << p.train_step << "," << format_double(p.mean_reward_rescaled)
            << "," << format_double(p.ci95) << "\n";
    }
}

}  // namespace

void emit_outputs(const std::vector<ExperimentResult>& results,
                  const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::ofstream summary(out_dir + "/summary.csv");
    if (!summary) {
        throw std::runtime_error("cannot write summary: " + out_dir +
                                 "/summary.csv");
    }
    summary << "family,size,params,successes,runs,mean_best10_steps\n";
    for (const ExperimentResult& r : results) {
        summary << family_name(r.config.family) << "," << model_size_label(r.config)
                << "," << r.params << "," << r.agg.successes << ","
                << r.config.runs << ",";
        if (r.agg.has_mean_best) {
            summary << format_double(r.agg.mean_best_steps);
        } else {
            summary << "n/a";
        }
        summary << "\n";
    }
    summary.close();

    nlohmann::json sweep = nlohmann::json::array();
    for (const ExperimentResult& r : results) sweep.push_back(result_to_json(r));
    std::ofstream mirror(out_dir + "/summary.json");
    if (!mirror) {
        throw std::runtime_error("cannot write summary: " + out_dir +
                                 "/summary.json");
    }
    mirror << nlohmann::json({{"sweep", sweep}}).dump(2) << "\n";
    mirror.close();

    for (const ExperimentResult& r : results) {
        if (r.artifacts_dir.empty()) continue;
        write_curve_csv(r.artifacts_dir + "/curve.csv", r.agg.curve);
    }
}

std::vector<ExperimentResult> run_sweep(
    const std::vector<ExperimentConfig>& configs, const std::string& out_dir,
    int parallel) {
    if (configs.empty()) throw std::invalid_argument("empty sweep");
    std::vector<ExperimentResult> results;
    results.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const std::string dir =
            out_dir + "/" + config_dir_name(i, configs[i]);
        results.push_back(run_experiment(configs[i], parallel, dir));
    }
    emit_outputs(results, out_dir);
    return results;
}

}  // namespace qnav::harness
