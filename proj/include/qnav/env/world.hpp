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
#include <string>
#include <vector>

namespace qnav::env {

/// Planar pose; yaw is normalized into (-pi, pi] after every update.
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
};

double normalize_yaw(double yaw);

/// The 3-feature observation (x, y, yaw) handed to the Q-function.
std::array<double, 3> state_features(const Pose& pose);

struct Rect {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
};

struct GoalSpec {
    double x = 0.0;
    double y = 0.0;
    double radius = 0.0;
};

struct WorldSpec {
    std::string name;
    double extent = 0.0;  // square side length, meters
    std::vector<Rect> walls;
    std::vector<Rect> obstacles;
    Pose start;
    GoalSpec goal;
    double success_threshold = 0.0;
};

/// Throws std::invalid_argument when geometry is inconsistent (start or goal
/// outside the boundary or inside an obstacle, degenerate rectangles).
void validate_world(const WorldSpec& world);

enum class Action { kForward = 0, kLeft = 1, kRight = 2 };
inline constexpr int kNumActions = 3;

Action action_from_index(int index);

enum class StepEvent { kGoal, kCollision, kStepToward, kStepAway, kTimeout };

struct StepResult {
    Pose pose;
    double reward = 0.0;
    bool terminal = false;
    StepEvent event = StepEvent::kStepAway;
};

// Kinematic calibration. One action integrates 50 sub-steps of 10 ms, so
// FORWARD covers 0.2 m and a turn sweeps 30 degrees per action.
inline constexpr double kRobotRadius = 0.18;
inline constexpr double kForwardSpeed = 0.4;        // m/s
inline constexpr double kTurnRate = 1.0471975511965976;  // pi/3 rad/s
inline constexpr double kSubStepDt = 0.01;          // s
inline constexpr int kSubSteps = 50;
inline constexpr int kMaxEpisodeSteps = 200;

inline constexpr double kGoalReward = 10.0;
inline constexpr double kCollisionReward = -1.0;
inline constexpr double kTowardReward = 0.1;
inline constexpr double kAwayReward = -0.2;

/// Fixed start pose; the environments have no reset randomness.
Pose reset(const WorldSpec& world);

/// 50 unicycle sub-steps without collision handling. FORWARD drives both
/// wheels equally (yaw untouched); LEFT/RIGHT spin in place (x, y untouched).
Pose integrate_drive(const Pose& pose, Action action, const WorldSpec& world);

/// True iff the robot disc strictly overlaps any wall or obstacle rectangle
/// or strictly crosses the outer boundary. Touching at exactly the radius
/// does not collide.
bool collision_check(const Pose& pose, const WorldSpec& world);

/// Applies one action. Collisions are checked at every sub-step; the first
/// colliding sub-step ends the episode at the last collision-free pose.
/// Otherwise the goal test runs on the final pose, then the shaping reward
/// compares center-to-goal distance before and after (strict decrease earns
/// the positive shaping). step_index counts actions from 1; the episode
/// times out on action 200 when nothing else ended it, keeping the shaping
/// reward it earned.
StepResult step(const WorldSpec& world, const Pose& pose, Action action,
                int step_index);

/// The bundled 3x3, 4x4, and 5x5 worlds.
std::vector<WorldSpec> builtin_worlds();

/// Looks up a bundled world by name; throws std::invalid_argument if absent.
WorldSpec builtin_world(const std::string& name);

/// JSON world file with keys extent, start, goal, walls, obstacles,
/// success_threshold.
WorldSpec load_world_file(const std::string& path);
void save_world_file(const WorldSpec& world, const std::string& path);

}  // namespace qnav::env
