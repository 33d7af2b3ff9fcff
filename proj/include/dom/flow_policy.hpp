#pragma once

#include "dom/expert.hpp"
#include "dom/flow.hpp"
#include "dom/streaming.hpp"

namespace dom {

// 8 values per action: position(3), quaternion(4), gripper(+1 close / -1 open)
std::vector<double> encode_chunk(const ActionChunk& chunk);
ActionChunk decode_chunk(const std::vector<double>& flat, int start_tick, int horizon);

inline constexpr int kConditionDim = 3 + 3 + 3 + 3 + 4 + 3;

// (ee position, target position, target velocity, target location,
//  phase one-hot, selector one-hot); zero target fields when unresolvable.
std::vector<double> build_condition(const ExpertObservation& obs, Phase phase);

// Trained flow expert wrapped as a chunk producer. Phase tracking reuses the
// state-machine transition rules so the condition vector stays meaningful.
class FlowPolicy : public ChunkPolicy {
public:
    FlowPolicy(MlpParams params, const ExpertParams& expert, int chunk_horizon,
               int sample_steps, uint64_t seed)
        : params_(std::move(params)),
          expert_(expert),
          horizon_(chunk_horizon),
          sample_steps_(sample_steps),
          seed_(seed) {}

    ActionChunk infer(const ExpertObservation& obs, int start_tick) override;
    Phase current_phase() const override { return phase_; }

private:
    MlpParams params_;
    ExpertParams expert_;
    int horizon_;
    int sample_steps_;
    uint64_t seed_;
    Phase phase_ = Phase::ApproachObject;
};

}  // namespace dom
