#include "dom/flow_policy.hpp"

namespace dom {

std::vector<double> encode_chunk(const ActionChunk& chunk) {
    std::vector<double> flat;
    flat.reserve(chunk.actions.size() * kActionDim);
    for (const auto& a : chunk.actions) {
        flat.push_back(a.target_position.x);
        flat.push_back(a.target_position.y);
        flat.push_back(a.target_position.z);
        flat.push_back(a.target_orientation.w);
        flat.push_back(a.target_orientation.x);
        flat.push_back(a.target_orientation.y);
        flat.push_back(a.target_orientation.z);
        flat.push_back(a.gripper_command == GripperCommand::Close ? 1.0 : -1.0);
    }
    return flat;
}

ActionChunk decode_chunk(const std::vector<double>& flat, int start_tick, int horizon) {
    if (static_cast<int>(flat.size()) != (horizon + 1) * kActionDim)
        throw FlowError("decode_chunk: flat vector has wrong dimension");
    ActionChunk chunk;
    chunk.start_tick = start_tick;
    chunk.horizon = horizon;
    for (int k = 0; k <= horizon; ++k) {
        const double* v = flat.data() + static_cast<size_t>(k) * kActionDim;
        EndEffectorCommand cmd;
        cmd.target_position = {v[0], v[1], v[2]};
        cmd.target_orientation = Quat{v[3], v[4], v[5], v[6]}.normalized();
        if (cmd.target_orientation.norm() == 0.0) cmd.target_orientation = Quat{};
        cmd.gripper_command = v[7] > 0.0 ? GripperCommand::Close : GripperCommand::Open;
        chunk.actions.push_back(cmd);
    }
    return chunk;
}

std::vector<double> build_condition(const ExpertObservation& obs, Phase phase) {
    std::vector<double> c;
    c.reserve(kConditionDim);
    const Vec3& ee = obs.end_effector.pose.position;
    c.insert(c.end(), {ee.x, ee.y, ee.z});

    Vec3 tp, tv;
    try {
        int id = resolve_target(obs);
        for (const auto& o : obs.objects) {
            if (o.id != id) continue;
            tp = o.position;
            tv = o.velocity;
        }
    } catch (const ExpertError&) {
        // unresolvable: zeros
    }
    c.insert(c.end(), {tp.x, tp.y, tp.z});
    c.insert(c.end(), {tv.x, tv.y, tv.z});
    c.insert(c.end(), {obs.target_location.x, obs.target_location.y, obs.target_location.z});

    double phase_oh[4] = {0, 0, 0, 0};
    phase_oh[static_cast<int>(phase)] = 1.0;
    c.insert(c.end(), phase_oh, phase_oh + 4);

    double sel_oh[3] = {0, 0, 0};
    sel_oh[static_cast<int>(obs.instruction.selector)] = 1.0;
    c.insert(c.end(), sel_oh, sel_oh + 3);
    return c;
}

ActionChunk FlowPolicy::infer(const ExpertObservation& obs, int start_tick) {
    // phase transitions follow the state-machine rules on the live observation
    try {
        phase_ = expert_step(obs, phase_, expert_).second;
    } catch (const ExpertError&) {
        // keep the previous phase when the target is unresolvable
    }
    std::vector<double> cond = build_condition(obs, phase_);
    uint64_t draw_seed = hash_combine(seed_, static_cast<uint64_t>(start_tick));
    std::vector<double> flat = sample_chunk(params_, cond, sample_steps_, draw_seed);
    ActionChunk chunk = decode_chunk(flat, start_tick, horizon_);
    chunk.phase_trace.assign(chunk.actions.size() + 1, phase_);
    return chunk;
}

}  // namespace dom
