#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dom/expert.hpp"
#include "dom/sim.hpp"

namespace dom {

struct SchemaMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CorruptRecord : std::runtime_error {
    CorruptRecord(const std::string& msg, int tick) : std::runtime_error(msg), tick(tick) {}
    int tick;
};

inline constexpr int kEpisodeSchemaVersion = 1;

// command_source values: >= 0 is the sourcing chunk's start_tick
inline constexpr int kSourceHold = -1;
inline constexpr int kSourceClosedLoop = -2;

struct TickObject {
    int id = 0;
    std::string label;
    ObjectStatus status = ObjectStatus::Active;
    Vec3 position;
    Quat orientation;
    Vec3 velocity;
};

struct TickRecord {
    int tick = 0;
    std::vector<TickObject> objects;
    Vec3 ee_position;
    Quat ee_orientation;
    Vec3 ee_velocity;
    GripperState gripper = GripperState::Open;
    int attached_object = -1;
    Phase phase = Phase::ApproachObject;
    EndEffectorCommand command;
    int command_source = kSourceClosedLoop;
    std::vector<Event> events;
};

struct EpisodeFooter {
    Outcome outcome = Outcome::InProgress;
    bool success = false;
    double path_length = 0.0;
    double completion_time = 0.0;
    std::vector<std::pair<int, bool>> placed;  // (object id, placed flag)
};

struct EpisodeLog {
    int schema_version = kEpisodeSchemaVersion;
    uint64_t seed = 0;
    uint64_t config_digest = 0;
    std::string scenario;
    double dt = 1.0 / 25.0;
    std::vector<TickRecord> ticks;
    EpisodeFooter footer;
};

std::string write_episode(const EpisodeLog& log);
EpisodeLog read_episode(const std::string& bytes);
uint64_t episode_digest(const EpisodeLog& log);

// Recompute footer metrics from the tick records (exact; used by tests
// and by the collection pipeline to fill the footer).
EpisodeFooter recompute_footer(const EpisodeLog& log, const OutcomeSpec& spec,
                               Outcome outcome);

}  // namespace dom
