#include "dom/sim.hpp"

#include <algorithm>
#include <cmath>

namespace dom {

SimParams SimParams::from_config(const Config& cfg) {
    SimParams p;
    if (cfg.has("sim.control_rate_hz")) p.dt = 1.0 / cfg.get_double("sim.control_rate_hz");
    if (cfg.has("sim.gravity")) p.gravity = cfg.get_double("sim.gravity");
    if (cfg.has("sim.v_max")) p.v_max = cfg.get_double("sim.v_max");
    if (cfg.has("sim.grasp_tolerance")) p.grasp_tolerance = cfg.get_double("sim.grasp_tolerance");
    if (cfg.has("sim.grasp_speed_tolerance"))
        p.grasp_speed_tolerance = cfg.get_double("sim.grasp_speed_tolerance");
    if (cfg.has("sim.place_tolerance")) p.place_tolerance = cfg.get_double("sim.place_tolerance");
    if (cfg.has("sim.timeout_ticks")) p.timeout_ticks = cfg.get_int("sim.timeout_ticks");
    if (cfg.has("sim.bounce_walls")) p.bounce_walls = cfg.get_bool("sim.bounce_walls");
    if (cfg.has("sim.object_radius")) p.object_radius = cfg.get_double("sim.object_radius");
    return p;
}

SceneConfig SceneConfig::from_config(const Config& cfg) {
    SceneConfig sc;
    sc.params = SimParams::from_config(cfg);
    if (cfg.has("sim.n_objects")) sc.n_objects = cfg.get_int("sim.n_objects");
    if (cfg.has("sim.speed_min")) sc.speed_min = cfg.get_double("sim.speed_min");
    if (cfg.has("sim.speed_max")) sc.speed_max = cfg.get_double("sim.speed_max");
    if (cfg.has("sim.friction_min")) sc.friction_min = cfg.get_double("sim.friction_min");
    if (cfg.has("sim.friction_max")) sc.friction_max = cfg.get_double("sim.friction_max");
    if (cfg.has("sim.workspace_min_x")) {
        sc.workspace.min = {cfg.get_double("sim.workspace_min_x"),
                            cfg.get_double("sim.workspace_min_y"),
                            cfg.get_double("sim.workspace_min_z")};
        sc.workspace.max = {cfg.get_double("sim.workspace_max_x"),
                            cfg.get_double("sim.workspace_max_y"),
                            cfg.get_double("sim.workspace_max_z")};
    }
    return sc;
}

const ObjectState* WorldState::find_object(int id) const {
    for (const auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

ObjectState* WorldState::find_object(int id) {
    for (auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

void integrate_object_tick(ObjectState& obj, double dt, double gravity) {
    if (obj.motion.turn_rate != 0.0) {
        double a = obj.motion.turn_rate * dt;
        double c = std::cos(a), s = std::sin(a);
        Vec3 v = obj.linear_velocity;
        obj.linear_velocity = {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
    }
    obj.pose.position += obj.linear_velocity * dt;
    double speed = obj.linear_velocity.norm();
    if (speed > 0.0 && obj.friction > 0.0) {
        double decel = obj.friction * gravity * dt;
        double new_speed = std::max(0.0, speed - decel);
        obj.linear_velocity = obj.linear_velocity * (new_speed / speed);
    }
    if (obj.angular_velocity.norm() > 0.0) {
        obj.pose.orientation =
            (quat_from_angular_velocity(obj.angular_velocity, dt) * obj.pose.orientation)
                .normalized();
    }
}

bool grasp_predicate(const Vec3& ee_pos, const Vec3& ee_vel, const Vec3& obj_pos,
                     const Vec3& obj_vel, const SimParams& p) {
    return (obj_pos - ee_pos).norm() <= p.grasp_tolerance &&
           (obj_vel - ee_vel).norm() <= p.grasp_speed_tolerance;
}

WorldState spawn_scene(const SceneConfig& config, uint64_t seed) {
    if (config.speed_min > config.speed_max || config.friction_min > config.friction_max)
        throw SimError("invalid scene config: min > max");

    WorldState w;
    w.params = config.params;
    w.workspace = config.workspace;
    Rng rng(seed);

    const double r = config.params.object_radius;
    const Box3& ws = config.workspace;
    // home pose: center-back of the workspace at 25 cm
    w.end_effector.pose.position = {0.5 * (ws.min.x + ws.max.x), ws.min.y + 0.05, 0.25};
    w.place_target = {0.5 * (ws.min.x + ws.max.x), ws.max.y - 0.08, r};

    for (int i = 0; i < config.n_objects; ++i) {
        ObjectState obj;
        obj.id = i;
        obj.label = config.labels.empty() ? std::string("ball")
                                          : config.labels[i % config.labels.size()];
        obj.radius = r;
        obj.friction = rng.uniform(config.friction_min, config.friction_max);

        double speed = rng.uniform(config.speed_min, config.speed_max);
        double heading = rng.uniform(0.0, 6.283185307179586476925286766559);
        obj.linear_velocity = {speed * std::cos(heading), speed * std::sin(heading), 0.0};

        bool placed = false;
        for (int attempt = 0; attempt < config.max_placement_attempts; ++attempt) {
            Vec3 pos{rng.uniform(ws.min.x + 2 * r, ws.max.x - 2 * r),
                     rng.uniform(ws.min.y + 2 * r, ws.max.y - 2 * r), r};
            bool clear = (pos - w.place_target).horizontal_norm() > 4 * r;
            for (const auto& other : w.objects) {
                if ((pos - other.pose.position).norm() < obj.radius + other.radius) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                obj.pose.position = pos;
                placed = true;
                break;
            }
        }
        if (!placed)
            throw InfeasiblePlacement("cannot place object " + std::to_string(i) +
                                      " with required clearance");
        w.objects.push_back(std::move(obj));
    }
    w.rng_state = rng.state();
    return w;
}

namespace {

void bounce_off_walls(ObjectState& obj, const Box3& ws, double dt) {
    Vec3 next = obj.pose.position + obj.linear_velocity * dt;
    double r = obj.radius;
    if ((next.x < ws.min.x + r && obj.linear_velocity.x < 0.0) ||
        (next.x > ws.max.x - r && obj.linear_velocity.x > 0.0))
        obj.linear_velocity.x = -obj.linear_velocity.x;
    if ((next.y < ws.min.y + r && obj.linear_velocity.y < 0.0) ||
        (next.y > ws.max.y - r && obj.linear_velocity.y > 0.0))
        obj.linear_velocity.y = -obj.linear_velocity.y;
}

}  // namespace

WorldState step(const WorldState& world, const EndEffectorCommand& command) {
    WorldState w = world;
    const SimParams& p = w.params;
    int t = w.tick;      // transition trigger tick
    w.tick = t + 1;      // events below are logged at the new tick

    // scripted motion events, then spawn activation
    for (auto& obj : w.objects) {
        if (obj.status == ObjectStatus::Pending && obj.motion.spawn_tick <= t)
            obj.status = ObjectStatus::Active;
        if (obj.status != ObjectStatus::Active) continue;
        for (const auto& ev : obj.motion.events) {
            if (ev.tick != t) continue;
            if (ev.kind == MotionEvent::Kind::SetVelocity) {
                obj.linear_velocity = ev.velocity;
            } else {
                double c = std::cos(ev.angle), s = std::sin(ev.angle);
                Vec3 v = obj.linear_velocity;
                obj.linear_velocity = {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
            }
            w.events.push_back({EventKind::DirectionChange, w.tick, obj.id});
        }
        if (p.bounce_walls) bounce_off_walls(obj, w.workspace, p.dt);
    }

    // free object motion
    for (auto& obj : w.objects)
        if (obj.status == ObjectStatus::Active) integrate_object_tick(obj, p.dt, p.gravity);

    // end-effector kinematics
    EndEffectorState& ee = w.end_effector;
    Vec3 prev_pos = ee.pose.position;
    if (!command.hold) {
        ee.pose.position = move_toward(prev_pos, command.target_position, p.v_max * p.dt);
        ee.pose.orientation = command.target_orientation.normalized();
    }
    ee.linear_velocity = (ee.pose.position - prev_pos) * (1.0 / p.dt);

    // attached object rides the end-effector
    if (ee.attached_object) {
        ObjectState* obj = w.find_object(*ee.attached_object);
        obj->pose.position = ee.pose.position + w.grasp_offset;
        obj->linear_velocity = ee.linear_velocity;
    }

    // gripper transitions
    if (!command.hold) {
        if (command.gripper_command == GripperCommand::Close) {
            if (ee.gripper != GripperState::Closed) {
                ee.gripper = GripperState::Closed;
                int best = -1;
                double best_d = 1e300;
                for (const auto& obj : w.objects) {
                    if (obj.status != ObjectStatus::Active) continue;
                    if (!grasp_predicate(ee.pose.position, ee.linear_velocity,
                                         obj.pose.position, obj.linear_velocity, p))
                        continue;
                    double d = (obj.pose.position - ee.pose.position).norm();
                    if (d < best_d) {
                        best_d = d;
                        best = obj.id;
                    }
                }
                if (best >= 0) {
                    ObjectState* obj = w.find_object(best);
                    obj->status = ObjectStatus::Attached;
                    ee.attached_object = best;
                    w.grasp_offset = obj->pose.position - ee.pose.position;
                    w.events.push_back({EventKind::Grasped, w.tick, best});
                }
            }
        } else {  // Open
            if (ee.attached_object) {
                int id = *ee.attached_object;
                ObjectState* obj = w.find_object(id);
                ee.attached_object.reset();
                w.events.push_back({EventKind::Released, w.tick, id});
                double horiz = (obj->pose.position - w.place_target).horizontal_norm();
                if (horiz <= p.place_tolerance) {
                    obj->status = ObjectStatus::Placed;
                    obj->pose.position = {obj->pose.position.x, obj->pose.position.y,
                                          obj->radius};
                    obj->linear_velocity = {};
                    w.events.push_back({EventKind::Placed, w.tick, id});
                } else {
                    obj->status = ObjectStatus::Dropped;
                    w.events.push_back({EventKind::Dropped, w.tick, id});
                }
            }
            ee.gripper = GripperState::Open;
        }
    }

    // workspace closure
    for (auto& obj : w.objects) {
        if (obj.status != ObjectStatus::Active) continue;
        if (!w.workspace.contains(obj.pose.position)) {
            obj.status = ObjectStatus::Dropped;
            w.events.push_back({EventKind::Dropped, w.tick, obj.id});
        }
    }
    if (!w.workspace.contains(ee.pose.position)) {
        w.events.push_back({EventKind::WorkspaceViolation, w.tick, -1});
        w.aborted = true;
    }

    if (w.tick >= p.timeout_ticks) {
        bool already = std::any_of(w.events.begin(), w.events.end(), [](const Event& e) {
            return e.kind == EventKind::Timeout;
        });
        if (!already) w.events.push_back({EventKind::Timeout, w.tick, -1});
    }
    return w;
}

Pose6D predict_pose(const ObjectState& object, double horizon, double dt, double gravity) {
    if (horizon < 0.0) throw SimError("predict_pose: negative horizon");
    // horizons round up to whole ticks
    int ticks = static_cast<int>(std::ceil(horizon / dt - 1e-12));
    ObjectState obj = object;
    obj.motion = {};  // prediction sees free motion only
    obj.motion.turn_rate = object.motion.turn_rate;
    for (int k = 0; k < ticks; ++k) integrate_object_tick(obj, dt, gravity);
    return obj.pose;
}

WorldState apply_disturbance(const WorldState& world, int object_id, const Vec3& impulse) {
    WorldState w = world;
    ObjectState* obj = w.find_object(object_id);
    if (!obj) throw UnknownObject("no object with id " + std::to_string(object_id));
    if (obj->status == ObjectStatus::Attached)
        throw AttachedObject("cannot disturb attached object " + std::to_string(object_id));
    obj->linear_velocity += impulse;
    w.events.push_back({EventKind::Disturbance, w.tick, object_id});
    return w;
}

Outcome evaluate_outcome(const WorldState& world, const OutcomeSpec& spec) {
    // precedence: Aborted > Drop > Success > Timeout, regardless of event order
    for (const auto& ev : world.events)
        if (ev.kind == EventKind::WorkspaceViolation) return Outcome::Aborted;
    for (const auto& ev : world.events) {
        if (ev.kind != EventKind::Dropped) continue;
        for (int id : spec.instructed_ids)
            if (ev.object_id == id) return Outcome::Drop;
    }
    bool all_placed = !spec.instructed_ids.empty();
    for (int id : spec.instructed_ids) {
        bool placed = std::any_of(world.events.begin(), world.events.end(), [&](const Event& e) {
            return e.kind == EventKind::Placed && e.object_id == id;
        });
        if (!placed) {
            all_placed = false;
            break;
        }
    }
    if (all_placed) return Outcome::Success;
    if (world.tick >= spec.timeout_ticks) return Outcome::Timeout;
    return Outcome::InProgress;
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::InProgress: return "in_progress";
        case Outcome::Success: return "success";
        case Outcome::Drop: return "drop";
        case Outcome::Timeout: return "timeout";
        case Outcome::Aborted: return "aborted";
    }
    return "?";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Grasped: return "grasped";
        case EventKind::Released: return "released";
        case EventKind::Placed: return "placed";
        case EventKind::Dropped: return "dropped";
        case EventKind::DirectionChange: return "direction_change";
        case EventKind::Disturbance: return "disturbance";
        case EventKind::WorkspaceViolation: return "workspace_violation";
        case EventKind::Timeout: return "timeout";
    }
    return "?";
}

}  // namespace dom
