#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dom/sim.hpp"

namespace dom {

struct ExpertError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AmbiguousTarget : ExpertError {
    using ExpertError::ExpertError;
};
struct NoCandidates : ExpertError {
    using ExpertError::ExpertError;
};
struct TargetLost : ExpertError {
    using ExpertError::ExpertError;
};
struct DegenerateWindow : ExpertError {
    using ExpertError::ExpertError;
};

enum class Phase { ApproachObject, GraspLift, ApproachTargetPlace, Reset };

const char* to_string(Phase p);
Phase phase_from_string(const std::string& s);

enum class SelectorKind { ByLabel, ByRelativePosition, ByRelativeSpeed };

struct TargetSpec {
    SelectorKind selector = SelectorKind::ByLabel;
    std::string label;            // ByLabel
    bool rightmost = false;       // ByRelativePosition: true = Right (max x)
    bool faster = false;          // ByRelativeSpeed: true = Faster (argmax speed)
    bool gather_all = false;      // ByLabel over duplicates resolves to lowest id
    int container_id = -1;
};

struct ObservedObject {
    int id = 0;
    std::string label;
    Vec3 position;
    Vec3 velocity;
};

struct ExpertObservation {
    int tick = 0;
    EndEffectorState end_effector;
    std::vector<ObservedObject> objects;
    TargetSpec instruction;
    Vec3 target_location;
};

struct VelocityFitWindow {
    std::vector<std::pair<int, Vec3>> samples;  // (tick, position), ticks strictly increasing
};

struct ExpertParams {
    double dt = 1.0 / 25.0;
    double predict_horizon_s = 0.23;
    double hover_offset = 0.10;
    double hover_tolerance = 0.03;
    double lift_height = 0.15;
    int velocity_window = 8;
    bool use_velocity_estimator = false;
    Vec3 home{0.0, -0.35, 0.25};
    // sim tolerances the controller plans against
    double v_max = 1.5;
    double grasp_tolerance = 0.02;
    double grasp_speed_tolerance = 0.25;
    double place_tolerance = 0.05;

    static ExpertParams from_config(const Config& cfg, const SimParams& sim,
                                    const Box3& workspace);
};

struct ActionChunk {
    int start_tick = 0;
    int horizon = 0;
    std::vector<EndEffectorCommand> actions;  // horizon + 1, absolute ticks
    int delivery_tick = 0;
    std::vector<Phase> phase_trace;           // phase before each action, + final

    const EndEffectorCommand& at(int abs_tick) const { return actions[abs_tick - start_tick]; }
    bool covers(int abs_tick) const {
        return abs_tick >= start_tick && abs_tick <= start_tick + horizon;
    }
};

int resolve_target(const ExpertObservation& obs);
Vec3 estimate_velocity(const VelocityFitWindow& window, double dt);

std::pair<EndEffectorCommand, Phase> expert_step(const ExpertObservation& obs, Phase phase,
                                                 const ExpertParams& params);

// Chunk rollout against a frozen belief: objects extrapolated at constant
// velocity from the single input observation, end-effector propagated with the
// simulator's kinematics. Accuracy degrades with object speed and staleness,
// which is the effect the streaming runtime is built to measure.
ActionChunk expert_rollout(const ExpertObservation& obs, Phase phase, int n,
                           const ExpertParams& params);

}  // namespace dom
