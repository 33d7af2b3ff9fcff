#include "dom/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dom/flow.hpp"
#include "dom/flow_policy.hpp"

namespace fs = std::filesystem;

namespace dom {

uint64_t episode_seed(uint64_t master_seed, int index) {
    return hash_combine(master_seed, static_cast<uint64_t>(index) + 0x0ddba11ULL);
}

void write_episode_file(const EpisodeLog& log, const std::string& path) {
    std::string bytes = write_episode(log);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for write: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write failed: " + path);
}

EpisodeLog read_episode_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open episode file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return read_episode(ss.str());
}

std::string DatasetSummary::to_json() const {
    std::ostringstream o;
    o << "{\n  \"episode_count\": " << episode_count
      << ",\n  \"success_count\": " << success_count
      << ",\n  \"infeasible_count\": " << infeasible_count
      << ",\n  \"success_fraction\": " << success_fraction << ",\n  \"speed_histogram\": [";
    for (size_t i = 0; i < speed_histogram.size(); ++i)
        o << (i ? "," : "") << speed_histogram[i];
    o << "],\n  \"friction_histogram\": [";
    for (size_t i = 0; i < friction_histogram.size(); ++i)
        o << (i ? "," : "") << friction_histogram[i];
    o << "]\n}\n";
    return o.str();
}

DatasetSummary collect(const Config& cfg, int episodes, uint64_t master_seed,
                       const std::string& out_dir) {
    if (episodes < 1) throw IoFailure("episode count must be >= 1");
    fs::create_directories(out_dir);

    SceneConfig scene = SceneConfig::from_config(cfg);
    DatasetSummary summary;
    summary.speed_histogram.assign(10, 0);
    summary.friction_histogram.assign(10, 0);

    for (int i = 0; i < episodes; ++i) {
        uint64_t seed = episode_seed(master_seed, i);
        WorldState world;
        try {
            world = spawn_scene(scene, seed);
        } catch (const InfeasiblePlacement&) {
            summary.infeasible_count += 1;
            continue;
        }

        for (const auto& obj : world.objects) {
            double speed = obj.linear_velocity.norm();
            int sbin = std::min(9, static_cast<int>(speed / 0.1));
            int fbin = std::min(9, static_cast<int>(obj.friction / 0.2));
            summary.speed_histogram[sbin] += 1;
            summary.friction_histogram[fbin] += 1;
        }

        EpisodeSetup setup;
        setup.instruction.selector = SelectorKind::ByLabel;
        setup.instruction.label = "ball";
        setup.instruction.gather_all = true;
        setup.expert = ExpertParams::from_config(cfg, world.params, world.workspace);
        setup.seed = seed;
        setup.config_digest = cfg.digest();
        {
            char sc[160];
            snprintf(sc, sizeof(sc), "dim=COLLECT;sel=label:ball;gather=1;target=%.17g,%.17g,%.17g",
                     world.place_target.x, world.place_target.y, world.place_target.z);
            setup.scenario_name = sc;
        }

        EpisodeLog log = run_closed_loop(world, setup);
        char name[64];
        snprintf(name, sizeof(name), "ep_%06d.dom", i);
        std::string path = (fs::path(out_dir) / name).string();
        write_episode_file(log, path);
        summary.files.push_back(path);
        summary.episode_count += 1;
        if (log.footer.success) summary.success_count += 1;
    }
    summary.success_fraction =
        summary.episode_count ? static_cast<double>(summary.success_count) / summary.episode_count
                              : 0.0;
    return summary;
}

std::vector<FlowDatum> load_flow_dataset(const std::vector<std::string>& files,
                                         int chunk_horizon, bool include_failures) {
    std::vector<FlowDatum> data;
    for (const auto& path : files) {
        EpisodeLog log = read_episode_file(path);
        if (!log.footer.success && !include_failures) continue;

        // reconstruct the per-tick observation pieces the condition needs
        TargetSpec instruction;
        instruction.selector = SelectorKind::ByLabel;
        instruction.label = "ball";
        instruction.gather_all = true;
        Vec3 target_location;
        if (size_t pos = log.scenario.find("target="); pos != std::string::npos) {
            sscanf(log.scenario.c_str() + pos + 7, "%lf,%lf,%lf", &target_location.x,
                   &target_location.y, &target_location.z);
        }

        int n = static_cast<int>(log.ticks.size());
        for (int t = 0; t + chunk_horizon < n; ++t) {
            ActionChunk chunk;
            chunk.start_tick = t;
            chunk.horizon = chunk_horizon;
            bool ok = true;
            for (int k = 0; k <= chunk_horizon; ++k) {
                const EndEffectorCommand& c = log.ticks[t + k].command;
                if (c.hold) {
                    ok = false;
                    break;
                }
                chunk.actions.push_back(c);
            }
            if (!ok) continue;

            const TickRecord& tr = log.ticks[t];
            ExpertObservation obs;
            obs.tick = tr.tick;
            obs.end_effector.pose.position = tr.ee_position;
            obs.end_effector.pose.orientation = tr.ee_orientation;
            obs.end_effector.linear_velocity = tr.ee_velocity;
            obs.end_effector.gripper = tr.gripper;
            if (tr.attached_object >= 0) obs.end_effector.attached_object = tr.attached_object;
            obs.instruction = instruction;
            obs.target_location = target_location;
            for (const auto& o : tr.objects) {
                if (o.status != ObjectStatus::Active && o.status != ObjectStatus::Attached)
                    continue;
                obs.objects.push_back({o.id, o.label, o.position, o.velocity});
            }
            FlowDatum d;
            d.chunk = encode_chunk(chunk);
            d.condition = build_condition(obs, tr.phase);
            data.push_back(std::move(d));
        }
    }
    return data;
}

}  // namespace dom
