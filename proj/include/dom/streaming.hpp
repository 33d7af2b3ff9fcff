#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dom/episode.hpp"
#include "dom/expert.hpp"
#include "dom/sim.hpp"

namespace dom {

enum class ExecutorMode { SerializedNaive, SerializedLaas, ContinuousOnly, ContinuousLaas };

const char* to_string(ExecutorMode m);
ExecutorMode executor_mode_from_string(const std::string& s);

struct LatencyModel {
    enum class Kind { Constant, UniformRandom };
    Kind kind = Kind::Constant;
    int m = 0;            // Constant
    int m_lo = 0, m_hi = 0;  // UniformRandom, inclusive
    uint64_t seed = 0;

    static LatencyModel constant(int m) { return {Kind::Constant, m, 0, 0, 0}; }
    static LatencyModel uniform(int lo, int hi, uint64_t seed) {
        return {Kind::UniformRandom, 0, lo, hi, seed};
    }

    int draw(int cycle_index) const;
};

enum class GapBehavior { Hold, RepeatLast };

// Chunk-producing policy. infer() is called with the observation snapshotted
// at inference start; the chunk is delivered after the latency model's delay.
class ChunkPolicy {
public:
    virtual ~ChunkPolicy() = default;
    virtual ActionChunk infer(const ExpertObservation& obs, int start_tick) = 0;
    virtual Phase current_phase() const { return Phase::ApproachObject; }
};

// The state-machine expert wrapped as a chunk producer. Phase is carried
// between inference cycles via the previous rollout's phase trace.
class OraclePolicy : public ChunkPolicy {
public:
    OraclePolicy(const ExpertParams& params, int chunk_horizon)
        : params_(params), horizon_(chunk_horizon) {}

    ActionChunk infer(const ExpertObservation& obs, int start_tick) override;
    Phase current_phase() const override { return phase_; }

private:
    ExpertParams params_;
    int horizon_;
    Phase phase_ = Phase::ApproachObject;
    int last_start_ = -1;
    std::vector<Phase> last_trace_;
};

// LAAS selection rule: the action for tick u comes from the delivered chunk
// with the greatest start_tick covering u; stale indices are unreachable
// because delivery implies s + m <= u. Pure function of (buffer, u).
std::optional<std::pair<EndEffectorCommand, int>> select_action(
    const std::vector<ActionChunk>& buffer, int tick);

struct ExecutorStats {
    int hold_ticks = 0;
    int hold_ticks_after_first_delivery = 0;
    int coverage_gaps = 0;  // LAAS holds caused by n <= m
    int deliveries = 0;
    int first_delivery_tick = -1;
};

class Executor {
public:
    Executor(ExecutorMode mode, LatencyModel latency, int chunk_horizon,
             GapBehavior gap = GapBehavior::Hold)
        : mode_(mode), latency_(latency), horizon_(chunk_horizon), gap_(gap) {}

    struct TickResult {
        EndEffectorCommand command;
        int source = kSourceHold;  // sourcing chunk's start_tick, or kSourceHold
    };

    // observe is only invoked when an inference actually starts this tick.
    TickResult tick(int u, const std::function<ExpertObservation()>& observe,
                    ChunkPolicy& policy);

    const std::vector<ActionChunk>& buffer() const { return buffer_; }
    const ExecutorStats& stats() const { return stats_; }
    bool inference_in_flight() const { return in_flight_.has_value(); }

private:
    struct InFlight {
        int start_tick;
        int completes_at;
        ActionChunk chunk;
    };

    void start_inference(int u, const std::function<ExpertObservation()>& observe,
                         ChunkPolicy& policy);
    void deliver(int u);
    TickResult hold_result(bool coverage_gap);

    ExecutorMode mode_;
    LatencyModel latency_;
    int horizon_;
    GapBehavior gap_;
    std::vector<ActionChunk> buffer_;
    std::optional<InFlight> in_flight_;
    int cycle_count_ = 0;
    // sequential execution cursor (serialized modes and continuous-only)
    int exec_chunk_ = -1;  // index into buffer_
    int exec_index_ = 0;   // next action index within that chunk
    EndEffectorCommand last_command_ = EndEffectorCommand::make_hold();
    ExecutorStats stats_;
};

struct DisturbanceSpec {
    int tick = 0;
    int object_id = 0;
    Vec3 impulse;
};

struct EpisodeSetup {
    TargetSpec instruction;
    std::vector<int> instructed_ids;  // empty: resolve from the initial observation
    std::vector<DisturbanceSpec> disturbances;
    double observation_noise_sigma = 0.0;
    uint64_t noise_seed = 0;
    ExpertParams expert;
    GapBehavior gap = GapBehavior::Hold;
    uint64_t seed = 0;            // recorded in the log header
    uint64_t config_digest = 0;   // recorded in the log header
    std::string scenario_name = "adhoc";
};

ExpertObservation make_observation(const WorldState& world, const EpisodeSetup& setup);

EpisodeLog run_episode(const WorldState& world, ChunkPolicy& policy, ExecutorMode mode,
                       const LatencyModel& latency, int chunk_horizon,
                       const EpisodeSetup& setup);

// Zero-latency closed-loop expert rollout; the reference the CI+LAAS runtime
// must collapse to at m = 0, and the data-collection driver.
EpisodeLog run_closed_loop(const WorldState& world, const EpisodeSetup& setup);

}  // namespace dom
