#include "dom/streaming.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace dom {

const char* to_string(ExecutorMode m) {
    switch (m) {
        case ExecutorMode::SerializedNaive: return "serialized";
        case ExecutorMode::SerializedLaas: return "serialized-laas";
        case ExecutorMode::ContinuousOnly: return "ci";
        case ExecutorMode::ContinuousLaas: return "ci-laas";
    }
    return "?";
}

ExecutorMode executor_mode_from_string(const std::string& s) {
    if (s == "serialized") return ExecutorMode::SerializedNaive;
    if (s == "serialized-laas") return ExecutorMode::SerializedLaas;
    if (s == "ci") return ExecutorMode::ContinuousOnly;
    if (s == "ci-laas") return ExecutorMode::ContinuousLaas;
    throw std::runtime_error("unknown executor mode: " + s +
                             " (expected serialized|serialized-laas|ci|ci-laas)");
}

int LatencyModel::draw(int cycle_index) const {
    if (kind == Kind::Constant) return m;
    Rng r(hash_combine(seed, static_cast<uint64_t>(cycle_index)));
    return static_cast<int>(r.uniform_int(m_lo, m_hi));
}

ActionChunk OraclePolicy::infer(const ExpertObservation& obs, int start_tick) {
    if (last_start_ >= 0) {
        int offset = std::min<int>(start_tick - last_start_,
                                   static_cast<int>(last_trace_.size()) - 1);
        if (offset >= 0) phase_ = last_trace_[offset];
    }
    ActionChunk chunk = expert_rollout(obs, phase_, horizon_, params_);
    last_start_ = start_tick;
    last_trace_ = chunk.phase_trace;
    return chunk;
}

std::optional<std::pair<EndEffectorCommand, int>> select_action(
    const std::vector<ActionChunk>& buffer, int tick) {
    const ActionChunk* best = nullptr;
    for (const auto& c : buffer) {
        if (c.delivery_tick > tick || !c.covers(tick)) continue;
        if (!best || c.start_tick > best->start_tick) best = &c;
    }
    if (!best) return std::nullopt;
    return std::make_pair(best->at(tick), best->start_tick);
}

void Executor::start_inference(int u, const std::function<ExpertObservation()>& observe,
                               ChunkPolicy& policy) {
    ActionChunk chunk = policy.infer(observe(), u);
    chunk.start_tick = u;
    int m = latency_.draw(cycle_count_++);
    in_flight_ = InFlight{u, u + m, std::move(chunk)};
    if (m == 0) deliver(u);
}

void Executor::deliver(int u) {
    ActionChunk chunk = std::move(in_flight_->chunk);
    chunk.delivery_tick = in_flight_->completes_at;
    in_flight_.reset();
    buffer_.push_back(std::move(chunk));
    stats_.deliveries += 1;
    if (stats_.first_delivery_tick < 0) stats_.first_delivery_tick = u;

    const ActionChunk& c = buffer_.back();
    int idx = static_cast<int>(buffer_.size()) - 1;
    switch (mode_) {
        case ExecutorMode::ContinuousOnly:
        case ExecutorMode::SerializedNaive:
            // execute the fresh chunk from its first (m ticks stale) action
            exec_chunk_ = idx;
            exec_index_ = 0;
            break;
        case ExecutorMode::SerializedLaas:
            // drop the actions whose ticks already passed during inference
            exec_chunk_ = idx;
            exec_index_ = std::min(c.delivery_tick - c.start_tick, c.horizon + 1);
            break;
        case ExecutorMode::ContinuousLaas:
            break;  // selection handles everything
    }
}

Executor::TickResult Executor::hold_result(bool coverage_gap) {
    stats_.hold_ticks += 1;
    if (stats_.deliveries > 0) stats_.hold_ticks_after_first_delivery += 1;
    if (coverage_gap) stats_.coverage_gaps += 1;
    if (gap_ == GapBehavior::RepeatLast && !last_command_.hold)
        return {last_command_, kSourceHold};
    return {EndEffectorCommand::make_hold(), kSourceHold};
}

Executor::TickResult Executor::tick(int u, const std::function<ExpertObservation()>& observe,
                                    ChunkPolicy& policy) {
    if (in_flight_ && in_flight_->completes_at <= u) deliver(u);

    bool continuous =
        mode_ == ExecutorMode::ContinuousOnly || mode_ == ExecutorMode::ContinuousLaas;
    if (continuous) {
        if (!in_flight_) start_inference(u, observe, policy);
    } else {
        bool exhausted = exec_chunk_ < 0 || exec_index_ > horizon_;
        if (exhausted && !in_flight_) start_inference(u, observe, policy);
    }

    if (mode_ == ExecutorMode::ContinuousLaas) {
        auto sel = select_action(buffer_, u);
        if (!sel) return hold_result(stats_.deliveries > 0);
        last_command_ = sel->first;
        return {sel->first, sel->second};
    }

    if (exec_chunk_ >= 0 && exec_index_ <= buffer_[exec_chunk_].horizon) {
        const ActionChunk& c = buffer_[exec_chunk_];
        EndEffectorCommand cmd = c.actions[exec_index_++];
        last_command_ = cmd;
        return {cmd, c.start_tick};
    }
    return hold_result(mode_ == ExecutorMode::ContinuousOnly && stats_.deliveries > 0);
}

namespace {

// Per-episode observation source: deterministic per-tick noise and the
// optional windowed velocity estimator fed by noisy positions.
class ObservationBuilder {
public:
    explicit ObservationBuilder(const EpisodeSetup& setup) : setup_(setup) {}

    ExpertObservation observe(const WorldState& world) {
        ExpertObservation obs = make_observation(world, setup_);
        if (setup_.expert.use_velocity_estimator) {
            for (auto& o : obs.objects) {
                auto& win = windows_[o.id];
                win.emplace_back(obs.tick, o.position);
                while (static_cast<int>(win.size()) > setup_.expert.velocity_window)
                    win.pop_front();
                if (win.size() >= 2) {
                    VelocityFitWindow w;
                    w.samples.assign(win.begin(), win.end());
                    o.velocity = estimate_velocity(w, setup_.expert.dt);
                }
            }
        }
        return obs;
    }

private:
    const EpisodeSetup& setup_;
    std::map<int, std::deque<std::pair<int, Vec3>>> windows_;
};

std::vector<Event> events_at(const WorldState& world, int tick) {
    std::vector<Event> out;
    for (const auto& e : world.events)
        if (e.tick == tick) out.push_back(e);
    return out;
}

TickRecord snapshot(const WorldState& world, Phase phase, const EndEffectorCommand& cmd,
                    int source) {
    TickRecord tr;
    tr.tick = world.tick;
    for (const auto& o : world.objects) {
        TickObject to;
        to.id = o.id;
        to.label = o.label;
        to.status = o.status;
        to.position = o.pose.position;
        to.orientation = o.pose.orientation;
        to.velocity = o.linear_velocity;
        tr.objects.push_back(std::move(to));
    }
    const EndEffectorState& ee = world.end_effector;
    tr.ee_position = ee.pose.position;
    tr.ee_orientation = ee.pose.orientation;
    tr.ee_velocity = ee.linear_velocity;
    tr.gripper = ee.gripper;
    tr.attached_object = ee.attached_object.value_or(-1);
    tr.phase = phase;
    tr.command = cmd;
    tr.command_source = source;
    tr.events = events_at(world, world.tick);
    return tr;
}

std::vector<int> resolve_instructed(const ExpertObservation& obs) {
    if (obs.instruction.gather_all) {
        std::vector<int> ids;
        for (const auto& o : obs.objects)
            if (o.label == obs.instruction.label) ids.push_back(o.id);
        return ids;
    }
    try {
        return {resolve_target(obs)};
    } catch (const ExpertError&) {
        return {};
    }
}

EpisodeLog init_log(const WorldState& world, const EpisodeSetup& setup) {
    EpisodeLog log;
    log.seed = setup.seed;
    log.config_digest = setup.config_digest;
    log.scenario = setup.scenario_name;
    log.dt = world.params.dt;
    return log;
}

}  // namespace

ExpertObservation make_observation(const WorldState& world, const EpisodeSetup& setup) {
    ExpertObservation obs;
    obs.tick = world.tick;
    obs.end_effector = world.end_effector;
    obs.instruction = setup.instruction;
    obs.target_location = world.place_target;

    Rng noise(hash_combine(setup.noise_seed, static_cast<uint64_t>(world.tick)));
    double sigma = setup.observation_noise_sigma;
    for (const auto& o : world.objects) {
        if (o.status != ObjectStatus::Active && o.status != ObjectStatus::Attached) continue;
        ObservedObject oo{o.id, o.label, o.pose.position, o.linear_velocity};
        if (sigma > 0.0) {
            oo.position += Vec3{sigma * noise.normal(), sigma * noise.normal(),
                                sigma * noise.normal()};
            oo.velocity += Vec3{sigma * noise.normal(), sigma * noise.normal(),
                                sigma * noise.normal()};
        }
        obs.objects.push_back(std::move(oo));
    }
    return obs;
}

EpisodeLog run_episode(const WorldState& world, ChunkPolicy& policy, ExecutorMode mode,
                       const LatencyModel& latency, int chunk_horizon,
                       const EpisodeSetup& setup) {
    WorldState w = world;
    EpisodeLog log = init_log(w, setup);

    OutcomeSpec spec;
    spec.timeout_ticks = w.params.timeout_ticks;
    spec.instructed_ids = setup.instructed_ids.empty()
                              ? resolve_instructed(make_observation(w, setup))
                              : setup.instructed_ids;

    Executor exec(mode, latency, chunk_horizon, setup.gap);
    ObservationBuilder builder(setup);

    Outcome outcome = Outcome::InProgress;
    for (;;) {
        int u = w.tick;
        for (const auto& d : setup.disturbances) {
            if (d.tick != u) continue;
            if (const ObjectState* o = w.find_object(d.object_id);
                o && o->status == ObjectStatus::Active)
                w = apply_disturbance(w, d.object_id, d.impulse);
        }
        ExpertObservation obs = builder.observe(w);
        auto [cmd, source] = exec.tick(u, [&] { return obs; }, policy);
        log.ticks.push_back(snapshot(w, policy.current_phase(), cmd, source));
        w = step(w, cmd);
        outcome = evaluate_outcome(w, spec);
        if (outcome != Outcome::InProgress) {
            log.ticks.push_back(snapshot(w, policy.current_phase(),
                                         EndEffectorCommand::make_hold(), kSourceHold));
            break;
        }
    }
    log.footer = recompute_footer(log, spec, outcome);
    return log;
}

EpisodeLog run_closed_loop(const WorldState& world, const EpisodeSetup& setup) {
    WorldState w = world;
    EpisodeLog log = init_log(w, setup);

    OutcomeSpec spec;
    spec.timeout_ticks = w.params.timeout_ticks;
    spec.instructed_ids = setup.instructed_ids.empty()
                              ? resolve_instructed(make_observation(w, setup))
                              : setup.instructed_ids;

    ObservationBuilder builder(setup);
    Phase phase = Phase::ApproachObject;

    Outcome outcome = Outcome::InProgress;
    for (;;) {
        int u = w.tick;
        for (const auto& d : setup.disturbances) {
            if (d.tick != u) continue;
            if (const ObjectState* o = w.find_object(d.object_id);
                o && o->status == ObjectStatus::Active)
                w = apply_disturbance(w, d.object_id, d.impulse);
        }
        ExpertObservation obs = builder.observe(w);
        EndEffectorCommand cmd;
        Phase logged = phase;
        try {
            std::tie(cmd, phase) = expert_step(obs, phase, setup.expert);
        } catch (const ExpertError&) {
            cmd = EndEffectorCommand::make_hold();
        }
        log.ticks.push_back(snapshot(w, logged, cmd, kSourceClosedLoop));
        w = step(w, cmd);
        outcome = evaluate_outcome(w, spec);
        if (outcome != Outcome::InProgress) {
            log.ticks.push_back(
                snapshot(w, phase, EndEffectorCommand::make_hold(), kSourceHold));
            break;
        }
    }
    log.footer = recompute_footer(log, spec, outcome);
    return log;
}

}  // namespace dom
