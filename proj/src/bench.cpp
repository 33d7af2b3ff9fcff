#include "dom/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "dom/datagen.hpp"

namespace fs = std::filesystem;

namespace dom {

const std::vector<std::string>& benchmark_dimensions() {
    static const std::vector<std::string> dims = {"CR", "DA", "LS", "VU", "SR",
                                                  "MP", "VG", "MG", "DR"};
    return dims;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) grid.push_back(std::stod(tok));
    return grid;
}

SceneConfig base_scene(const Config& cfg) {
    SceneConfig sc = SceneConfig::from_config(cfg);
    sc.params.bounce_walls = true;  // sustained motion inside the workspace
    return sc;
}

}  // namespace

std::vector<Scenario> generate_scenarios(const std::string& dim, int count, uint64_t seed,
                                         const Config& cfg) {
    if (count < 1) throw InvalidDimensionConfig("scenario count must be >= 1");
    const auto& dims = benchmark_dimensions();
    if (std::find(dims.begin(), dims.end(), dim) == dims.end())
        throw InvalidDimensionConfig("unknown dimension: " + dim);

    Rng rng(hash_combine(seed, fnv1a(dim.data(), dim.size())));
    std::vector<double> speed_grid = cfg.has("bench.speed_grid")
                                         ? parse_grid(cfg.get_string("bench.speed_grid"))
                                         : std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    double impulse_mag = cfg.has("bench.disturbance_impulse")
                             ? cfg.get_double("bench.disturbance_impulse")
                             : 0.3;
    double noise_sigma = cfg.has("bench.observation_noise")
                             ? cfg.get_double("bench.observation_noise")
                             : 0.002;

    std::vector<Scenario> out;
    for (int i = 0; i < count; ++i) {
        Scenario s;
        s.dimension = dim;
        s.name = dim + "_" + std::to_string(i);
        s.scene = base_scene(cfg);
        s.instruction.selector = SelectorKind::ByLabel;
        s.instruction.label = "ball";
        s.scene.labels = {"ball"};
        s.scene.n_objects = 1;
        s.scene.friction_min = s.scene.friction_max = 0.0;  // persistent motion

        if (dim == "CR") {
            double sp = speed_grid[i % speed_grid.size()];
            s.scene.speed_min = s.scene.speed_max = sp;
            if (cfg.has("bench.friction_grid")) {
                auto fg = parse_grid(cfg.get_string("bench.friction_grid"));
                double mu = fg[(i / speed_grid.size()) % fg.size()];
                s.scene.friction_min = s.scene.friction_max = mu;
            }
        } else if (dim == "DA") {
            double sp = rng.uniform(0.2, 0.5);
            s.scene.speed_min = s.scene.speed_max = sp;
            MotionEvent ev;
            ev.tick = static_cast<int>(rng.uniform_int(50, 120));
            ev.kind = MotionEvent::Kind::RotateVelocity;
            ev.angle = rng.uniform(1.5707963267948966, 3.141592653589793);
            s.target_events.push_back(ev);
        } else if (dim == "LS") {
            s.scene.n_objects = 3;
            s.scene.speed_min = 0.1;
            s.scene.speed_max = 0.25;
            s.instruction.gather_all = true;
            s.spawn_ticks = {0, 70, 140};
            s.scene.params.timeout_ticks = 450;  // three pick-place cycles
        } else if (dim == "VU") {
            s.scene.n_objects = 3;
            s.scene.labels = {"ball", "cup", "block"};
            s.scene.speed_min = 0.1;
            s.scene.speed_max = 0.35;
            s.instruction.label = s.scene.labels[rng.uniform_int(0, 2)];
        } else if (dim == "SR") {
            s.scene.n_objects = 2;
            s.scene.speed_min = 0.1;
            s.scene.speed_max = 0.35;
            s.instruction.selector = SelectorKind::ByRelativePosition;
            s.instruction.rightmost = rng.uniform_int(0, 1) == 1;
        } else if (dim == "MP") {
            s.scene.n_objects = 2;
            s.instruction.selector = SelectorKind::ByRelativeSpeed;
            s.instruction.faster = rng.uniform_int(0, 1) == 1;
            s.object_speeds = {rng.uniform(0.1, 0.2), rng.uniform(0.35, 0.5)};
        } else if (dim == "VG") {
            s.scene.labels = {"pear"};  // label outside the training pool
            s.instruction.label = "pear";
            s.scene.params.object_radius = (i % 2 == 0) ? 0.02 : 0.045;
            s.scene.speed_min = 0.1;
            s.scene.speed_max = 0.35;
            s.held_out = true;
        } else if (dim == "MG") {
            int variant = i % 3;
            if (variant == 0) {  // speeds above the 0.75 m/s training cap
                double sp = rng.uniform(0.8, 0.9);
                s.scene.speed_min = s.scene.speed_max = sp;
            } else if (variant == 1) {  // friction below the 0.5 training floor
                s.scene.friction_min = 0.2;
                s.scene.friction_max = 0.3;
                double sp = rng.uniform(0.3, 0.6);
                s.scene.speed_min = s.scene.speed_max = sp;
            } else {  // curved constant-turn-rate trajectory
                double sp = rng.uniform(0.2, 0.4);
                s.scene.speed_min = s.scene.speed_max = sp;
                s.object_turn_rates = {rng.uniform_int(0, 1) ? 1.2 : -1.2};
            }
            s.held_out = true;
        } else if (dim == "DR") {
            double sp = rng.uniform(0.15, 0.4);
            s.scene.speed_min = s.scene.speed_max = sp;
            s.disturbances.push_back({static_cast<int>(rng.uniform_int(40, 100)), impulse_mag});
            s.observation_noise_sigma = noise_sigma;
        }

        // dimension-specific structural invariants
        if (dim == "MP" && s.scene.n_objects < 2)
            throw InvalidDimensionConfig("MP needs >= 2 moving candidates");
        if (dim == "LS" && s.spawn_ticks.empty())
            throw InvalidDimensionConfig("LS needs a spawn schedule");
        if (dim == "MG" && !s.held_out)
            throw InvalidDimensionConfig("MG must hold out at least one parameter");
        out.push_back(std::move(s));
    }
    return out;
}

std::pair<WorldState, EpisodeSetup> instantiate_scenario(const Scenario& scn,
                                                         uint64_t trial_seed,
                                                         const Config& cfg) {
    WorldState world = spawn_scene(scn.scene, trial_seed);
    Rng r(hash_combine(trial_seed, 0xbe9c4ULL));

    for (size_t i = 0; i < world.objects.size(); ++i) {
        ObjectState& obj = world.objects[i];
        if (i < scn.object_speeds.size() && scn.object_speeds[i] >= 0.0) {
            double heading = r.uniform(0.0, kTwoPi);
            obj.linear_velocity = {scn.object_speeds[i] * std::cos(heading),
                                   scn.object_speeds[i] * std::sin(heading), 0.0};
        }
        if (i < scn.object_turn_rates.size()) obj.motion.turn_rate = scn.object_turn_rates[i];
        if (i < scn.spawn_ticks.size() && scn.spawn_ticks[i] > 0) {
            obj.motion.spawn_tick = scn.spawn_ticks[i];
            obj.status = ObjectStatus::Pending;
        }
    }
    if (!scn.target_events.empty() && !world.objects.empty())
        world.objects[0].motion.events = scn.target_events;

    EpisodeSetup setup;
    setup.instruction = scn.instruction;
    setup.expert = ExpertParams::from_config(cfg, world.params, world.workspace);
    setup.observation_noise_sigma = scn.observation_noise_sigma;
    setup.noise_seed = hash_combine(trial_seed, 0x9015eULL);
    setup.seed = trial_seed;
    setup.config_digest = cfg.digest();
    for (const auto& d : scn.disturbances) {
        double heading = r.uniform(0.0, kTwoPi);
        setup.disturbances.push_back(
            {d.tick, 0, {d.magnitude * std::cos(heading), d.magnitude * std::sin(heading), 0.0}});
    }
    char name[200];
    snprintf(name, sizeof(name), "dim=%s;name=%s;target=%.17g,%.17g,%.17g",
             scn.dimension.c_str(), scn.name.c_str(), world.place_target.x,
             world.place_target.y, world.place_target.z);
    setup.scenario_name = name;
    return {std::move(world), std::move(setup)};
}

MetricsTable run_benchmark(const PolicyFactory& make_policy, ExecutorMode mode,
                           const LatencyModel& latency, int chunk_horizon,
                           const std::vector<Scenario>& scenarios, const Config& cfg,
                           const BenchOptions& opts) {
    struct Agg {
        int trials = 0;
        int successes = 0;
        double path = 0.0;
        double time = 0.0;
        uint64_t seed_digest = 0xcbf29ce484222325ULL;
    };
    std::map<std::string, Agg> agg;

    if (!opts.episode_out_dir.empty()) fs::create_directories(opts.episode_out_dir);

    for (size_t s = 0; s < scenarios.size(); ++s) {
        const Scenario& scn = scenarios[s];
        for (int t = 0; t < opts.trials; ++t) {
            uint64_t trial_seed =
                hash_combine(hash_combine(opts.sweep_seed, static_cast<uint64_t>(s)),
                             static_cast<uint64_t>(t));
            auto [world, setup] = instantiate_scenario(scn, trial_seed, cfg);
            auto policy = make_policy();
            EpisodeLog log;
            try {
                log = run_episode(world, *policy, mode, latency, chunk_horizon, setup);
            } catch (const std::exception&) {
                // an abort is a failed trial, never a crashed sweep
                log.footer.outcome = Outcome::Aborted;
                log.footer.success = false;
            }
            Agg& a = agg[scn.dimension];
            a.trials += 1;
            a.successes += log.footer.success ? 1 : 0;
            a.path += log.footer.path_length;
            a.time += log.footer.completion_time;
            a.seed_digest = fnv1a(&trial_seed, sizeof(trial_seed), a.seed_digest);
            if (!opts.episode_out_dir.empty()) {
                char fname[128];
                snprintf(fname, sizeof(fname), "%s_s%03zu_t%03d.dom", scn.dimension.c_str(), s,
                         t);
                write_episode_file(log, (fs::path(opts.episode_out_dir) / fname).string());
            }
        }
    }

    MetricsTable table;
    int m_ticks = latency.kind == LatencyModel::Kind::Constant ? latency.m : latency.m_hi;
    for (const auto& [dim, a] : agg) {
        MetricsRow row;
        row.dimension = dim;
        row.mode = to_string(mode);
        row.latency_ticks = m_ticks;
        row.trials = a.trials;
        row.successes = a.successes;
        row.success_rate = a.trials ? 100.0 * a.successes / a.trials : 0.0;
        row.mean_path_length = a.trials ? a.path / a.trials : 0.0;
        row.mean_completion_time = a.trials ? a.time / a.trials : 0.0;
        row.seed_digest = a.seed_digest;
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {
const char* kCsvHeader =
    "dimension,mode,latency_ticks,trials,successes,sr,path_len,time,seed_digest";
}

std::string render_report(const MetricsTable& table, ReportFormat format) {
    std::string out;
    char buf[256];
    switch (format) {
        case ReportFormat::Csv: {
            out = kCsvHeader;
            out += '\n';
            for (const auto& r : table.rows) {
                snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%d,%.2f,%.2f,%.2f,%016llx\n",
                         r.dimension.c_str(), r.mode.c_str(), r.latency_ticks, r.trials,
                         r.successes, r.success_rate, r.mean_path_length,
                         r.mean_completion_time,
                         static_cast<unsigned long long>(r.seed_digest));
                out += buf;
            }
            return out;
        }
        case ReportFormat::Json: {
            out = "[";
            for (size_t i = 0; i < table.rows.size(); ++i) {
                const auto& r = table.rows[i];
                snprintf(buf, sizeof(buf),
                         "%s\n  {\"dimension\": \"%s\", \"mode\": \"%s\", \"latency_ticks\": %d, "
                         "\"trials\": %d, \"successes\": %d, \"sr\": %.2f, \"path_len\": %.2f, "
                         "\"time\": %.2f, \"seed_digest\": \"%016llx\"}",
                         i ? "," : "", r.dimension.c_str(), r.mode.c_str(), r.latency_ticks,
                         r.trials, r.successes, r.success_rate, r.mean_path_length,
                         r.mean_completion_time,
                         static_cast<unsigned long long>(r.seed_digest));
                out += buf;
            }
            out += "\n]\n";
            return out;
        }
        case ReportFormat::Markdown: {
            // dimensions as columns, (mode, latency) as rows
            std::vector<std::string> dims;
            for (const auto& r : table.rows)
                if (std::find(dims.begin(), dims.end(), r.dimension) == dims.end())
                    dims.push_back(r.dimension);
            std::sort(dims.begin(), dims.end());
            std::vector<std::pair<std::string, int>> modes;
            for (const auto& r : table.rows) {
                std::pair<std::string, int> key{r.mode, r.latency_ticks};
                if (std::find(modes.begin(), modes.end(), key) == modes.end())
                    modes.push_back(key);
            }
            out = "| Mode | m |";
            for (const auto& d : dims) out += " " + d + " |";
            out += " Path Len | Time |\n|---|---|";
            for (size_t i = 0; i < dims.size(); ++i) out += "---|";
            out += "---|---|\n";
            for (const auto& [mode, m] : modes) {
                snprintf(buf, sizeof(buf), "| %s | %d |", mode.c_str(), m);
                out += buf;
                double path = 0.0, time = 0.0;
                int n = 0;
                for (const auto& d : dims) {
                    bool found = false;
                    for (const auto& r : table.rows) {
                        if (r.mode != mode || r.latency_ticks != m || r.dimension != d) continue;
                        snprintf(buf, sizeof(buf), " %.2f |", r.success_rate);
                        out += buf;
                        path += r.mean_path_length;
                        time += r.mean_completion_time;
                        n += 1;
                        found = true;
                    }
                    if (!found) out += " - |";
                }
                snprintf(buf, sizeof(buf), " %.2f | %.2f |\n", n ? path / n : 0.0,
                         n ? time / n : 0.0);
                out += buf;
            }
            return out;
        }
    }
    return out;
}

MetricsTable parse_report_csv(const std::string& text) {
    MetricsTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("bad report csv header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        MetricsRow r;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, r.dimension, ',');
        std::getline(ls, r.mode, ',');
        std::getline(ls, tok, ',');
        r.latency_ticks = std::stoi(tok);
        std::getline(ls, tok, ',');
        r.trials = std::stoi(tok);
        std::getline(ls, tok, ',');
        r.successes = std::stoi(tok);
        std::getline(ls, tok, ',');
        r.success_rate = std::stod(tok);
        std::getline(ls, tok, ',');
        r.mean_path_length = std::stod(tok);
        std::getline(ls, tok, ',');
        r.mean_completion_time = std::stod(tok);
        std::getline(ls, tok, ',');
        r.seed_digest = strtoull(tok.c_str(), nullptr, 16);
        table.rows.push_back(std::move(r));
    }
    return table;
}

}  // namespace dom
