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

#include "qnav/env/world.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace qnav::env {

double normalize_yaw(double yaw) {
    while (yaw > std::numbers::pi) yaw -= 2.0 * std::numbers::pi;
    while (yaw <= -std::numbers::pi) yaw += 2.0 * std::numbers::pi;
    return yaw;
}

std::array<double, 3> state_features(const Pose& pose) {
    return {pose.x, pose.y, pose.yaw};
}

Action action_from_index(int index) {
    if (index < 0 || index >= kNumActions) {
        throw std::out_of_range("action index out of range");
    }
    return static_cast<Action>(index);
}

namespace {

bool disc_overlaps_rect(double cx, double cy, double r, const Rect& rect) {
    const double dx = std::max({rect.min_x - cx, 0.0, cx - rect.max_x});
    const double dy = std::max({rect.min_y - cy, 0.0, cy - rect.max_y});
    return dx * dx + dy * dy < r * r;
}

bool point_in_rect(double x, double y, const Rect& rect) {
    return x >= rect.min_x && x <= rect.max_x && y >= rect.min_y &&
           y <= rect.max_y;
}

double goal_distance(const Pose& pose, const GoalSpec& goal) {
    return std::hypot(pose.x - goal.x, pose.y - goal.y);
}

}  // namespace

void validate_world(const WorldSpec& world) {
    if (!(world.extent > 0.0) || !std::isfinite(world.extent)) {
        throw std::invalid_argument("world extent must be positive");
    }
    auto check_rect = [&](const Rect& r, const char* kind) {
        if (!(r.min_x < r.max_x) || !(r.min_y < r.max_y)) {
            throw std::invalid_argument(std::string(kind) +
                                        " rectangle is degenerate");
        }
    };
    for (const Rect& r : world.walls) check_rect(r, "wall");
    for (const Rect& r : world.obstacles) check_rect(r, "obstacle");
    if (!(world.goal.radius > 0.0)) {
        throw std::invalid_argument("goal radius must be positive");
    }
    if (!std::isfinite(world.success_threshold)) {
        throw std::invalid_argument("success threshold must be finite");
    }
    if (collision_check(world.start, world)) {
        throw std::invalid_argument("start pose collides");
    }
    if (world.goal.x < 0.0 || world.goal.x > world.extent || world.goal.y < 0.0 ||
        world.goal.y > world.extent) {
        throw std::invalid_argument("goal center outside the boundary");
    }
    for (const Rect& r : world.obstacles) {
        if (point_in_rect(world.goal.x, world.goal.y, r)) {
            throw std::invalid_argument("goal center inside an obstacle");
        }
    }
}

Pose reset(const WorldSpec& world) {
    Pose p = world.start;
    p.yaw = normalize_yaw(p.yaw);
    return p;
}

namespace {

struct DriveRates {
    double v = 0.0;
    double omega = 0.0;
};

DriveRates rates_for(Action action) {
    switch (action) {
        case Action::kForward: return {kForwardSpeed, 0.0};
        case Action::kLeft: return {0.0, kTurnRate};
        case Action::kRight: return {0.0, -kTurnRate};
    }
    throw std::out_of_range("unknown action");
}

Pose substep(const Pose& pose, const DriveRates& rates) {
    Pose next = pose;
    if (rates.v != 0.0) {
        next.x += rates.v * std::cos(pose.yaw) * kSubStepDt;
        next.y += rates.v * std::sin(pose.yaw) * kSubStepDt;
    }
    if (rates.omega != 0.0) {
        next.yaw = normalize_yaw(pose.yaw + rates.omega * kSubStepDt);
    }
    return next;
}

}  // namespace

Pose integrate_drive(const Pose& pose, Action action, const WorldSpec&) {
    const DriveRates rates = rates_for(action);
    Pose p = pose;
    for (int i = 0; i < kSubSteps; ++i) p = substep(p, rates);
    return p;
}

bool collision_check(const Pose& pose, const WorldSpec& world) {
    if (pose.x - kRobotRadius < 0.0 || pose.x + kRobotRadius > world.extent ||
        pose.y - kRobotRadius < 0.0 || pose.y + kRobotRadius > world.extent) {
        return true;
    }
    for (const Rect& r : world.walls) {
        if (disc_overlaps_rect(pose.x, pose.y, kRobotRadius, r)) return true;
    }
    for (const Rect& r : world.obstacles) {
        if (disc_overlaps_rect(pose.x, pose.y, kRobotRadius, r)) return true;
    }
    return false;
}

StepResult step(const WorldSpec& world, const Pose& pose, Action action,
                int step_index) {
    if (step_index < 1 || step_index > kMaxEpisodeSteps) {
        throw std::invalid_argument("step on finished episode");
    }
    const DriveRates rates = rates_for(action);
    const double dist_before = goal_distance(pose, world.goal);

    Pose current = pose;
    for (int i = 0; i < kSubSteps; ++i) {
        const Pose candidate = substep(current, rates);
        if (collision_check(candidate, world)) {
            return {current, kCollisionReward, true, StepEvent::kCollision};
        }
        current = candidate;
    }

    if (goal_distance(current, world.goal) < world.goal.radius) {
        return {current, kGoalReward, true, StepEvent::kGoal};
    }

    const bool toward = goal_distance(current, world.goal) < dist_before;
    StepResult result{current, toward ? kTowardReward : kAwayReward, false,
                      toward ? StepEvent::kStepToward : StepEvent::kStepAway};
    if (step_index == kMaxEpisodeSteps) {
        result.terminal = true;
        result.event = StepEvent::kTimeout;
    }
    return result;
}

std::vector<WorldSpec> builtin_worlds() {
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    std::vector<WorldSpec> worlds(3);

    WorldSpec& w3 = worlds[0];
    w3.name = "env3x3";
    w3.extent = 3.0;
    w3.obstacles = {{1.25, 1.25, 1.75, 1.75}};
    w3.start = {0.5, 2.5, -kHalfPi};
    w3.goal = {2.5, 0.5, 0.25};
    w3.success_threshold = 10.5;

    WorldSpec& w4 = worlds[1];
    w4.name = "env4x4";
    w4.extent = 4.0;
    w4.obstacles = {{1.2, 2.2, 1.8, 2.8}, {2.2, 1.2, 2.8, 1.8}};
    w4.start = {0.5, 3.5, -kHalfPi};
    w4.goal = {3.5, 0.5, 0.25};
    w4.success_threshold = 11.0;

    WorldSpec& w5 = worlds[2];
    w5.name = "env5x5";
    w5.extent = 5.0;
    w5.obstacles = {{0.0, 2.3, 2.6, 2.65}, {2.3, 0.0, 2.7, 2.65}};
    w5.start = {0.5, 4.5, 0.0};
    w5.goal = {4.5, 0.5, 0.25};
    w5.success_threshold = 10.0;

    for (const WorldSpec& w : worlds) validate_world(w);
    return worlds;
}

WorldSpec builtin_world(const std::string& name) {
    for (WorldSpec& w : builtin_worlds()) {
        if (w.name == name) return std::move(w);
    }
    throw std::invalid_argument("unknown world: " + name);
}

namespace {

nlohmann::json rect_to_json(const Rect& r) {
    return {{"min_x", r.min_x},
            {"min_y", r.min_y},
            {"max_x", r.max_x},
            {"max_y", r.max_y}};
}

Rect rect_from_json(const nlohmann::json& j) {
    return {j.at("min_x").get<double>(), j.at("min_y").get<double>(),
            j.at("max_x").get<double>(), j.at("max_y").get<double>()};
}

}  // namespace

WorldSpec load_world_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open world file: " + path);
    nlohmann::json j;
    in >> j;

    WorldSpec w;
    w.name = j.at("name").get<std::string>();
    w.extent = j.at("extent").get<double>();
    for (const auto& r : j.value("walls", nlohmann::json::array())) {
        w.walls.push_back(rect_from_json(r));
    }
    for (const auto& r : j.value("obstacles", nlohmann::json::array())) {
        w.obstacles.push_back(rect_from_json(r));
    }
    const auto& start = j.at("start");
    w.start = {start.at("x").get<double>(), start.at("y").get<double>(),
               start.at("yaw").get<double>()};
    const auto& goal = j.at("goal");
    w.goal = {goal.at("x").get<double>(), goal.at("y").get<double>(),
              goal.at("radius").get<double>()};
    w.success_threshold = j.at("success_threshold").get<double>();
    validate_world(w);
    return w;
}

void save_world_file(const WorldSpec& world, const std::string& path) {
    validate_world(world);
    nlohmann::json j;
    j["name"] = world.name;
    j["extent"] = world.extent;
    j["walls"] = nlohmann::json::array();
    for (const Rect& r : world.walls) j["walls"].push_back(rect_to_json(r));
    j["obstacles"] = nlohmann::json::array();
    for (const Rect& r : world.obstacles) {
        j["obstacles"].push_back(rect_to_json(r));
    }
    j["start"] = {{"x", world.start.x},
                  {"y", world.start.y},
                  {"yaw", world.start.yaw}};
    j["goal"] = {{"x", world.goal.x},
                 {"y", world.goal.y},
                 {"radius", world.goal.radius}};
    j["success_threshold"] = world.success_threshold;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write world file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace qnav::env
