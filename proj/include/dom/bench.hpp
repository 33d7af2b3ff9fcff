#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dom/config.hpp"
#include "dom/streaming.hpp"

namespace dom {

struct InvalidDimensionConfig : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The nine benchmark sub-dimensions, state-level analogs. The perception
// dimensions (VU/SR/MP) use symbolic selectors over labeled state rather
// than language over pixels.
const std::vector<std::string>& benchmark_dimensions();

struct Scenario {
    std::string dimension;
    std::string name;
    SceneConfig scene;
    TargetSpec instruction;
    std::vector<double> object_speeds;      // per-object speed magnitude overrides (<0: keep)
    std::vector<double> object_turn_rates;  // rad/s; curved trajectories (MG)
    std::vector<int> spawn_ticks;           // staggered spawns (LS)
    std::vector<MotionEvent> target_events; // scripted direction changes on object 0 (DA)
    struct DisturbancePlan {
        int tick;
        double magnitude;  // impulse in a seeded horizontal direction
    };
    std::vector<DisturbancePlan> disturbances;  // DR
    double observation_noise_sigma = 0.0;
    bool held_out = false;  // VG/MG: at least one parameter outside training ranges
};

std::vector<Scenario> generate_scenarios(const std::string& dimension, int count,
                                         uint64_t seed, const Config& cfg);

// Instantiates a scenario into a concrete world + episode setup for one trial.
std::pair<WorldState, EpisodeSetup> instantiate_scenario(const Scenario& scenario,
                                                         uint64_t trial_seed,
                                                         const Config& cfg);

struct MetricsRow {
    std::string dimension;
    std::string mode;
    int latency_ticks = 0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;      // percent
    double mean_path_length = 0.0;  // meters
    double mean_completion_time = 0.0;  // seconds
    uint64_t seed_digest = 0;
};

struct MetricsTable {
    std::vector<MetricsRow> rows;
};

using PolicyFactory = std::function<std::unique_ptr<ChunkPolicy>()>;

struct BenchOptions {
    int trials = 20;
    uint64_t sweep_seed = 0;
    std::string episode_out_dir;  // empty: do not write per-episode logs
};

MetricsTable run_benchmark(const PolicyFactory& make_policy, ExecutorMode mode,
                           const LatencyModel& latency, int chunk_horizon,
                           const std::vector<Scenario>& scenarios, const Config& cfg,
                           const BenchOptions& opts);

enum class ReportFormat { Csv, Json, Markdown };

std::string render_report(const MetricsTable& table, ReportFormat format);
MetricsTable parse_report_csv(const std::string& text);

}  // namespace dom
