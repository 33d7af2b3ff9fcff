#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dom/config.hpp"
#include "dom/geometry.hpp"
#include "dom/rng.hpp"

namespace dom {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasiblePlacement : SimError {
    using SimError::SimError;
};
struct UnknownObject : SimError {
    using SimError::SimError;
};
struct AttachedObject : SimError {
    using SimError::SimError;
};

enum class GripperState { Open, Closing, Closed };
enum class GripperCommand { Open, Close };

enum class ObjectStatus { Pending, Active, Attached, Placed, Dropped };

enum class EventKind {
    Grasped,
    Released,
    Placed,
    Dropped,
    DirectionChange,
    Disturbance,
    WorkspaceViolation,
    Timeout,
};

struct Event {
    EventKind kind;
    int tick = 0;
    int object_id = -1;  // -1 for object-less events
};

// Scripted per-object motion events, applied before integration on their tick.
struct MotionEvent {
    int tick = 0;
    enum class Kind { SetVelocity, RotateVelocity } kind = Kind::SetVelocity;
    Vec3 velocity;        // SetVelocity
    double angle = 0.0;   // RotateVelocity, radians about +z
};

struct MotionProgram {
    std::vector<MotionEvent> events;
    double turn_rate = 0.0;  // rad/s about +z, applied every tick (curved paths)
    int spawn_tick = 0;      // object inactive before this tick
};

struct ObjectState {
    int id = 0;
    std::string label;
    Pose6D pose;
    Vec3 linear_velocity;
    Vec3 angular_velocity;
    double friction = 0.0;
    double radius = 0.03;
    ObjectStatus status = ObjectStatus::Active;
    MotionProgram motion;
};

struct EndEffectorState {
    Pose6D pose;
    Vec3 linear_velocity;
    GripperState gripper = GripperState::Open;
    std::optional<int> attached_object;
};

struct EndEffectorCommand {
    Vec3 target_position;
    Quat target_orientation;
    GripperCommand gripper_command = GripperCommand::Open;
    bool hold = false;

    static EndEffectorCommand make_hold() {
        EndEffectorCommand c;
        c.hold = true;
        return c;
    }
    bool operator==(const EndEffectorCommand& o) const = default;
};

struct SimParams {
    double dt = 1.0 / 25.0;
    double gravity = 9.81;
    double v_max = 1.5;
    double grasp_tolerance = 0.02;
    double grasp_speed_tolerance = 0.25;
    double place_tolerance = 0.05;
    int timeout_ticks = 300;
    bool bounce_walls = false;
    double object_radius = 0.03;

    static SimParams from_config(const Config& cfg);
};

struct WorldState {
    int tick = 0;
    SimParams params;
    Box3 workspace;
    std::vector<ObjectState> objects;
    EndEffectorState end_effector;
    Vec3 place_target;       // placement pose center used by release checks
    Vec3 grasp_offset;       // attached object position relative to the EE
    uint64_t rng_state = 0;  // generator state carried for reproducibility
    std::vector<Event> events;
    bool aborted = false;

    const ObjectState* find_object(int id) const;
    ObjectState* find_object(int id);
};

struct SceneConfig {
    int n_objects = 1;
    double speed_min = 0.0;
    double speed_max = 0.75;
    double friction_min = 0.5;
    double friction_max = 1.5;
    Box3 workspace{{-0.4, -0.4, 0.0}, {0.4, 0.4, 0.5}};
    SimParams params;
    std::vector<std::string> labels;  // cycled over objects; default "ball"
    int max_placement_attempts = 1000;

    static SceneConfig from_config(const Config& cfg);
};

enum class Outcome { InProgress, Success, Drop, Timeout, Aborted };

struct Scenario;  // defined in bench.hpp; evaluate_outcome needs only the parts below

struct OutcomeSpec {
    std::vector<int> instructed_ids;
    int timeout_ticks = 300;
};

// One tick of free object motion: translate by current velocity, decay speed
// by Coulomb friction, propagate orientation by angular velocity. This exact
// function backs both step() and predict_pose() so the two can never drift.
void integrate_object_tick(ObjectState& obj, double dt, double gravity);

WorldState spawn_scene(const SceneConfig& config, uint64_t seed);
WorldState step(const WorldState& world, const EndEffectorCommand& command);
Pose6D predict_pose(const ObjectState& object, double horizon, double dt, double gravity);
WorldState apply_disturbance(const WorldState& world, int object_id, const Vec3& impulse);
Outcome evaluate_outcome(const WorldState& world, const OutcomeSpec& spec);

// Grasp predicate at the Close tick; shared with the expert's belief model.
bool grasp_predicate(const Vec3& ee_pos, const Vec3& ee_vel, const Vec3& obj_pos,
                     const Vec3& obj_vel, const SimParams& p);

const char* to_string(Outcome o);
const char* to_string(EventKind k);

}  // namespace dom
