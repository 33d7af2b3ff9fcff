#pragma once

#include <string>
#include <vector>

#include "dom/config.hpp"
#include "dom/episode.hpp"
#include "dom/streaming.hpp"

namespace dom {

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DatasetSummary {
    int episode_count = 0;
    int success_count = 0;
    int infeasible_count = 0;
    double success_fraction = 0.0;
    std::vector<int> speed_histogram;     // 10 bins over [0, 1.0] m/s
    std::vector<int> friction_histogram;  // 10 bins over [0, 2.0]
    std::vector<std::string> files;

    std::string to_json() const;
};

// per-episode seed derived from (master seed, index) only, so output is
// independent of N and collection order
uint64_t episode_seed(uint64_t master_seed, int index);

DatasetSummary collect(const Config& cfg, int episodes, uint64_t master_seed,
                       const std::string& out_dir);

void write_episode_file(const EpisodeLog& log, const std::string& path);
EpisodeLog read_episode_file(const std::string& path);

// Training tuples from collected episodes: every tick t with a full
// (n+1)-action window ahead becomes one (condition, chunk) pair.
// Failed episodes are excluded by default.
std::vector<struct FlowDatum> load_flow_dataset(const std::vector<std::string>& files,
                                                int chunk_horizon, bool include_failures);

}  // namespace dom
