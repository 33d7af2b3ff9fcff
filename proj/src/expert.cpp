#include "dom/expert.hpp"

#include <algorithm>
#include <cmath>

namespace dom {

const char* to_string(Phase p) {
    switch (p) {
        case Phase::ApproachObject: return "approach_object";
        case Phase::GraspLift: return "grasp_lift";
        case Phase::ApproachTargetPlace: return "approach_target_place";
        case Phase::Reset: return "reset";
    }
    return "?";
}

Phase phase_from_string(const std::string& s) {
    if (s == "approach_object") return Phase::ApproachObject;
    if (s == "grasp_lift") return Phase::GraspLift;
    if (s == "approach_target_place") return Phase::ApproachTargetPlace;
    if (s == "reset") return Phase::Reset;
    throw ExpertError("unknown phase: " + s);
}

ExpertParams ExpertParams::from_config(const Config& cfg, const SimParams& sim,
                                       const Box3& ws) {
    ExpertParams p;
    p.dt = sim.dt;
    p.v_max = sim.v_max;
    p.grasp_tolerance = sim.grasp_tolerance;
    p.grasp_speed_tolerance = sim.grasp_speed_tolerance;
    p.place_tolerance = sim.place_tolerance;
    p.home = {0.5 * (ws.min.x + ws.max.x), ws.min.y + 0.05, 0.25};
    if (cfg.has("expert.predict_horizon_s"))
        p.predict_horizon_s = cfg.get_double("expert.predict_horizon_s");
    if (cfg.has("expert.hover_offset")) p.hover_offset = cfg.get_double("expert.hover_offset");
    if (cfg.has("expert.hover_tolerance"))
        p.hover_tolerance = cfg.get_double("expert.hover_tolerance");
    if (cfg.has("expert.lift_height")) p.lift_height = cfg.get_double("expert.lift_height");
    if (cfg.has("expert.velocity_window"))
        p.velocity_window = cfg.get_int("expert.velocity_window");
    if (cfg.has("expert.use_velocity_estimator"))
        p.use_velocity_estimator = cfg.get_bool("expert.use_velocity_estimator");
    return p;
}

int resolve_target(const ExpertObservation& obs) {
    const TargetSpec& spec = obs.instruction;
    const auto& objs = obs.objects;
    if (objs.empty()) throw NoCandidates("no objects in observation");

    switch (spec.selector) {
        case SelectorKind::ByLabel: {
            int found = -1;
            for (const auto& o : objs) {
                if (o.label != spec.label) continue;
                if (found >= 0) {
                    if (!spec.gather_all)
                        throw AmbiguousTarget("duplicate label: " + spec.label);
                    found = std::min(found, o.id);
                } else {
                    found = o.id;
                }
            }
            if (found < 0) throw NoCandidates("no object labeled " + spec.label);
            return found;
        }
        case SelectorKind::ByRelativePosition: {
            if (objs.size() < 2) throw NoCandidates("relative selector needs >= 2 candidates");
            int best = -1;
            double best_x = 0.0;
            for (const auto& o : objs) {
                double lateral = spec.rightmost ? o.position.x : -o.position.x;
                if (best < 0 || lateral > best_x || (lateral == best_x && o.id < best)) {
                    best = o.id;
                    best_x = lateral;
                }
            }
            return best;
        }
        case SelectorKind::ByRelativeSpeed: {
            if (objs.size() < 2) throw NoCandidates("relative selector needs >= 2 candidates");
            int best = -1;
            double best_s = 0.0;
            for (const auto& o : objs) {
                double s = o.velocity.norm();
                double score = spec.faster ? s : -s;
                if (best < 0 || score > best_s || (score == best_s && o.id < best)) {
                    best = o.id;
                    best_s = score;
                }
            }
            return best;
        }
    }
    throw NoCandidates("unreachable");
}

Vec3 estimate_velocity(const VelocityFitWindow& window, double dt) {
    const auto& s = window.samples;
    if (s.size() < 2) throw DegenerateWindow("velocity window needs >= 2 samples");
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i].first <= s[i - 1].first) throw DegenerateWindow("ticks not strictly increasing");

    double n = static_cast<double>(s.size());
    double t_mean = 0.0;
    Vec3 p_mean;
    for (const auto& [tick, pos] : s) {
        t_mean += tick * dt;
        p_mean += pos;
    }
    t_mean /= n;
    p_mean = p_mean * (1.0 / n);

    double stt = 0.0;
    Vec3 stp;
    for (const auto& [tick, pos] : s) {
        double td = tick * dt - t_mean;
        stt += td * td;
        stp += (pos - p_mean) * td;
    }
    return stp * (1.0 / stt);
}

namespace {

const ObservedObject* find_observed(const ExpertObservation& obs, int id) {
    for (const auto& o : obs.objects)
        if (o.id == id) return &o;
    return nullptr;
}

// Constant-velocity prediction through the simulator's integrator. Friction is
// not observable, so the expert predicts with mu = 0.
Vec3 predict_position(const ObservedObject& o, double horizon, const ExpertParams& p) {
    ObjectState obj;
    obj.pose.position = o.position;
    obj.linear_velocity = o.velocity;
    obj.friction = 0.0;
    return predict_pose(obj, horizon, p.dt, 9.81).position;
}

SimParams belief_sim_params(const ExpertParams& p) {
    SimParams sp;
    sp.dt = p.dt;
    sp.v_max = p.v_max;
    sp.grasp_tolerance = p.grasp_tolerance;
    sp.grasp_speed_tolerance = p.grasp_speed_tolerance;
    sp.place_tolerance = p.place_tolerance;
    return sp;
}

}  // namespace

std::pair<EndEffectorCommand, Phase> expert_step(const ExpertObservation& obs, Phase phase,
                                                 const ExpertParams& params) {
    EndEffectorCommand cmd;
    cmd.target_orientation = Quat{};  // grasps are top-down
    const EndEffectorState& ee = obs.end_effector;
    bool attached = ee.attached_object.has_value();

    switch (phase) {
        case Phase::ApproachObject: {
            if (attached) {  // abnormal entry; fall through the normal order
                cmd.target_position = ee.pose.position;
                cmd.gripper_command = GripperCommand::Close;
                return {cmd, Phase::GraspLift};
            }
            int id = resolve_target(obs);
            const ObservedObject* obj = find_observed(obs, id);
            Vec3 pred = predict_position(*obj, params.predict_horizon_s, params);
            Vec3 hover = pred + Vec3{0.0, 0.0, params.hover_offset};
            cmd.target_position = hover;
            cmd.gripper_command = GripperCommand::Open;
            Phase next = ((ee.pose.position - hover).norm() < params.hover_tolerance)
                             ? Phase::GraspLift
                             : Phase::ApproachObject;
            return {cmd, next};
        }
        case Phase::GraspLift: {
            if (attached) {
                cmd.target_position = ee.pose.position + Vec3{0.0, 0.0, params.lift_height};
                cmd.gripper_command = GripperCommand::Close;
                return {cmd, Phase::ApproachTargetPlace};
            }
            int id = resolve_target(obs);
            const ObservedObject* obj = find_observed(obs, id);
            // chase one tick ahead so the end-effector matches the object's velocity
            Vec3 chase = predict_position(*obj, params.dt, params);
            cmd.target_position = chase;
            double dist = (obj->position - ee.pose.position).norm();
            double rel_speed = (obj->velocity - ee.linear_velocity).norm();
            bool close_now = dist <= 0.9 * params.grasp_tolerance &&
                             rel_speed <= 0.9 * params.grasp_speed_tolerance;
            bool closed_on_empty = ee.gripper == GripperState::Closed;
            cmd.gripper_command =
                (close_now && !closed_on_empty) ? GripperCommand::Close : GripperCommand::Open;
            return {cmd, Phase::GraspLift};
        }
        case Phase::ApproachTargetPlace: {
            if (!attached) {  // released (placed) or lost the grasp
                cmd.target_position = ee.pose.position;
                cmd.gripper_command = GripperCommand::Open;
                return {cmd, Phase::Reset};
            }
            Vec3 waypoint = obs.target_location + Vec3{0.0, 0.0, params.lift_height};
            cmd.target_position = waypoint;
            double horiz = (ee.pose.position - obs.target_location).horizontal_norm();
            cmd.gripper_command = (horiz <= 0.5 * params.place_tolerance)
                                      ? GripperCommand::Open
                                      : GripperCommand::Close;
            return {cmd, Phase::ApproachTargetPlace};
        }
        case Phase::Reset: {
            cmd.target_position = params.home;
            cmd.gripper_command = GripperCommand::Open;
            Phase next = Phase::Reset;
            if ((ee.pose.position - params.home).norm() < params.hover_tolerance) {
                try {
                    resolve_target(obs);  // any candidate left re-arms the cycle
                    next = Phase::ApproachObject;
                } catch (const ExpertError&) {
                    next = Phase::Reset;
                }
            }
            return {cmd, next};
        }
    }
    throw ExpertError("unreachable phase");
}

ActionChunk expert_rollout(const ExpertObservation& obs, Phase phase, int n,
                           const ExpertParams& params) {
    if (n < 1) throw ExpertError("chunk horizon must be >= 1");
    ActionChunk chunk;
    chunk.start_tick = obs.tick;
    chunk.horizon = n;
    chunk.actions.reserve(n + 1);
    chunk.phase_trace.reserve(n + 2);

    SimParams sp = belief_sim_params(params);
    // frozen belief: everything after tick 0 is extrapolated from `obs`
    ExpertObservation belief = obs;
    Vec3 grasp_offset;

    for (int k = 0; k <= n; ++k) {
        chunk.phase_trace.push_back(phase);
        EndEffectorCommand cmd;
        try {
            std::tie(cmd, phase) = expert_step(belief, phase, params);
        } catch (const ExpertError&) {
            cmd = EndEffectorCommand::make_hold();
        }
        chunk.actions.push_back(cmd);
        if (k == n) break;

        // advance the belief one tick, mirroring the simulator's update order
        EndEffectorState& ee = belief.end_effector;
        for (auto& o : belief.objects) {
            if (ee.attached_object && o.id == *ee.attached_object) continue;
            ObjectState tmp;
            tmp.pose.position = o.position;
            tmp.linear_velocity = o.velocity;
            tmp.friction = 0.0;
            integrate_object_tick(tmp, params.dt, sp.gravity);
            o.position = tmp.pose.position;
            o.velocity = tmp.linear_velocity;
        }
        Vec3 prev = ee.pose.position;
        if (!cmd.hold) {
            ee.pose.position = move_toward(prev, cmd.target_position, sp.v_max * sp.dt);
            ee.pose.orientation = cmd.target_orientation.normalized();
        }
        ee.linear_velocity = (ee.pose.position - prev) * (1.0 / sp.dt);
        if (ee.attached_object) {
            for (auto& o : belief.objects) {
                if (o.id != *ee.attached_object) continue;
                o.position = ee.pose.position + grasp_offset;
                o.velocity = ee.linear_velocity;
            }
        }
        if (!cmd.hold) {
            if (cmd.gripper_command == GripperCommand::Close) {
                if (ee.gripper != GripperState::Closed) {
                    ee.gripper = GripperState::Closed;
                    int best = -1;
                    double best_d = 1e300;
                    for (const auto& o : belief.objects) {
                        if (!grasp_predicate(ee.pose.position, ee.linear_velocity, o.position,
                                             o.velocity, sp))
                            continue;
                        double d = (o.position - ee.pose.position).norm();
                        if (d < best_d) {
                            best_d = d;
                            best = o.id;
                        }
                    }
                    if (best >= 0) {
                        ee.attached_object = best;
                        for (const auto& o : belief.objects)
                            if (o.id == best) grasp_offset = o.position - ee.pose.position;
                    }
                }
            } else {
                if (ee.attached_object) {
                    int id = *ee.attached_object;
                    ee.attached_object.reset();
                    // believed placed or dropped either way: out of play
                    std::erase_if(belief.objects,
                                  [id](const ObservedObject& o) { return o.id == id; });
                }
                ee.gripper = GripperState::Open;
            }
        }
        belief.tick += 1;
    }
    chunk.phase_trace.push_back(phase);
    return chunk;
}

}  // namespace dom
