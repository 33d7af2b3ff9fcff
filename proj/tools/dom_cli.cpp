#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dom/bench.hpp"
#include "dom/datagen.hpp"
#include "dom/flow.hpp"
#include "dom/flow_policy.hpp"
#include "dom/streaming.hpp"

namespace fs = std::filesystem;
using namespace dom;

namespace {

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
    Config cfg;
    std::string p = path;
    if (p.empty()) {
        if (const char* env = std::getenv("DOM_CONFIG")) p = env;
    }
    if (!p.empty()) cfg = Config::from_file(p);
    for (const auto& kv : overrides) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override must be key=value: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

int chunk_horizon_of(const Config& cfg) {
    return cfg.has("executor.chunk_horizon") ? cfg.get_int("executor.chunk_horizon") : 20;
}

std::vector<std::string> episode_files_in(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".dom") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

ReportFormat format_from(const std::string& s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    if (s == "markdown" || s == "md") return ReportFormat::Markdown;
    throw std::runtime_error("unknown format: " + s + " (expected csv|json|markdown)");
}

int cmd_collect(const std::string& config_path, const std::vector<std::string>& overrides,
                int episodes, uint64_t seed, const std::string& out) {
    Config cfg = load_config(config_path, overrides);
    DatasetSummary summary = collect(cfg, episodes, seed, out);
    std::ofstream sf(fs::path(out) / "summary.json");
    sf << summary.to_json();
    std::cout << summary.to_json();
    return 0;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& data_dir, const std::string& out_path, int steps,
              uint64_t seed) {
    Config cfg = load_config(config_path, overrides);
    int horizon = chunk_horizon_of(cfg);
    std::vector<std::string> files = episode_files_in(data_dir);
    std::vector<FlowDatum> dataset = load_flow_dataset(files, horizon, false);
    if (dataset.empty()) throw EmptyDataset("no training tuples under " + data_dir);

    int hidden = cfg.has("flow.hidden_width") ? cfg.get_int("flow.hidden_width") : 256;
    TrainConfig tc;
    // flag wins over config; config wins over the built-in default
    if (steps < 0) steps = cfg.has("flow.steps") ? cfg.get_int("flow.steps") : 2000;
    tc.steps = steps;
    tc.batch = cfg.has("flow.batch") ? cfg.get_int("flow.batch") : 64;
    tc.learning_rate = cfg.has("flow.learning_rate") ? cfg.get_double("flow.learning_rate") : 1e-3;
    tc.seed = seed;

    int data_dim = (horizon + 1) * kActionDim;
    MlpParams init = MlpParams::init(data_dim, kConditionDim, hidden, seed);
    TrainResult result = train(dataset, init, tc);
    save_params(result.params, out_path, cfg.digest());

    printf("trained on %zu tuples, %d steps\n", dataset.size(), steps);
    if (!result.loss_trace.empty())
        printf("loss: first %.6f last %.6f\n", result.loss_trace.front(),
               result.loss_trace.back());
    return 0;
}

int cmd_bench(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& policy_spec, const std::string& mode_str, int latency_ticks,
              int latency_jitter, const std::vector<std::string>& dims, int scenarios_per_dim,
              int trials, uint64_t seed, const std::string& out,
              const std::string& format_str, bool save_episodes) {
    Config cfg = load_config(config_path, overrides);
    ExecutorMode mode = executor_mode_from_string(mode_str);
    int horizon = chunk_horizon_of(cfg);
    LatencyModel latency =
        latency_jitter > 0
            ? LatencyModel::uniform(std::max(0, latency_ticks - latency_jitter),
                                    latency_ticks + latency_jitter, seed)
            : LatencyModel::constant(latency_ticks);

    std::vector<std::string> dim_list = dims.empty() ? benchmark_dimensions() : dims;
    for (const auto& d : dim_list) {
        const auto& known = benchmark_dimensions();
        if (std::find(known.begin(), known.end(), d) == known.end()) {
            std::string valid;
            for (const auto& k : known) valid += k + " ";
            throw CLI::ValidationError("--dims", "unknown dimension '" + d +
                                                     "' (valid: " + valid + ")");
        }
    }

    MlpParams flow_params;
    bool use_flow = policy_spec.rfind("flow:", 0) == 0;
    if (use_flow) flow_params = load_params(policy_spec.substr(5));
    else if (policy_spec != "oracle")
        throw CLI::ValidationError("--policy", "expected oracle or flow:PATH");

    fs::create_directories(out);
    std::ofstream manifest(fs::path(out) / "manifest.txt");
    manifest << "sweep_seed=" << seed << " config=" << std::hex << cfg.digest() << std::dec
             << " mode=" << mode_str << " latency=" << latency_ticks << " trials=" << trials
             << "\n";

    MetricsTable table;
    for (const auto& dim : dim_list) {
        auto scns = generate_scenarios(dim, scenarios_per_dim, seed, cfg);
        BenchOptions opts;
        opts.trials = trials;
        opts.sweep_seed = hash_combine(seed, fnv1a(dim.data(), dim.size()));
        if (save_episodes) opts.episode_out_dir = (fs::path(out) / "episodes").string();

        for (size_t s = 0; s < scns.size(); ++s)
            for (int t = 0; t < trials; ++t)
                manifest << dim << " s=" << s << " t=" << t << " seed="
                         << hash_combine(hash_combine(opts.sweep_seed, s),
                                         static_cast<uint64_t>(t))
                         << "\n";

        SceneConfig sc = SceneConfig::from_config(cfg);
        ExpertParams ep = ExpertParams::from_config(cfg, sc.params, sc.workspace);
        PolicyFactory factory;
        if (use_flow) {
            int sample_steps = cfg.has("flow.sample_steps") ? cfg.get_int("flow.sample_steps") : 10;
            factory = [=] {
                return std::make_unique<FlowPolicy>(flow_params, ep, horizon, sample_steps, seed);
            };
        } else {
            factory = [=] { return std::make_unique<OraclePolicy>(ep, horizon); };
        }
        MetricsTable part = run_benchmark(factory, mode, latency, horizon, scns, cfg, opts);
        for (auto& r : part.rows) table.rows.push_back(std::move(r));
    }

    ReportFormat fmt = format_from(format_str);
    std::string rendered = render_report(table, fmt);
    std::string ext = format_str == "markdown" || format_str == "md" ? "md" : format_str;
    std::ofstream rf(fs::path(out) / ("report." + ext));
    rf << rendered;
    // always keep a csv alongside for replay/report tooling
    std::ofstream cf(fs::path(out) / "report.csv");
    cf << render_report(table, ReportFormat::Csv);
    std::cout << rendered;
    return 0;
}

int cmd_replay(const std::string& episode_path, const std::string& format_str) {
    EpisodeLog log = read_episode_file(episode_path);
    bool md = format_str == "markdown" || format_str == "md";
    if (md) {
        printf("| tick | phase | source | ee x | ee y | ee z | grip | events |\n");
        printf("|---|---|---|---|---|---|---|---|\n");
    } else {
        printf("tick,phase,source,ee_x,ee_y,ee_z,grip,events\n");
    }
    for (const auto& tr : log.ticks) {
        std::string events;
        for (const auto& e : tr.events) {
            if (!events.empty()) events += ";";
            events += to_string(e.kind);
        }
        const char* fmt = md ? "| %d | %s | %d | %.4f | %.4f | %.4f | %c | %s |\n"
                             : "%d,%s,%d,%.4f,%.4f,%.4f,%c,%s\n";
        printf(fmt, tr.tick, to_string(tr.phase), tr.command_source, tr.ee_position.x,
               tr.ee_position.y, tr.ee_position.z,
               tr.gripper == GripperState::Closed ? 'x' : 'o', events.c_str());
    }
    printf(md ? "\nOutcome: %s, path %.3f m, time %.2f s\n"
              : "# outcome=%s path=%.3f time=%.2f\n",
           to_string(log.footer.outcome), log.footer.path_length,
           log.footer.completion_time);
    return 0;
}

int cmd_report(const std::string& in_path, const std::string& format_str) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open report: " + in_path);
    std::stringstream ss;
    ss << in.rdbuf();
    MetricsTable table = parse_report_csv(ss.str());
    std::cout << render_report(table, format_from(format_str));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic object manipulation simulator and benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "config file (or DOM_CONFIG env var)");
    app.add_option("--set", overrides, "override config entries as key=value");

    auto* collect_cmd = app.add_subcommand("collect", "roll out expert episodes to disk");
    int episodes = 100;
    uint64_t seed = 0;
    std::string out = "dataset";
    collect_cmd->add_option("--episodes", episodes, "episodes to collect")
        ->check(CLI::PositiveNumber);
    collect_cmd->add_option("--seed", seed, "master seed");
    collect_cmd->add_option("--out", out, "output directory");

    auto* train_cmd = app.add_subcommand("train", "train the flow-matching action expert");
    std::string data_dir = "dataset", model_out = "flow.bin";
    int steps = -1;  // resolved against flow.steps in cmd_train
    train_cmd->add_option("--data", data_dir, "episode directory");
    train_cmd->add_option("--out", model_out, "parameter file to write");
    train_cmd->add_option("--steps", steps, "gradient steps")->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--seed", seed, "training seed");

    auto* bench_cmd = app.add_subcommand("bench", "run the evaluation sweep");
    std::string policy = "oracle", mode = "ci-laas", format = "markdown";
    int latency_ticks = 6, latency_jitter = 0, scenarios_per_dim = 10, trials = 20;
    std::vector<std::string> dims;
    bool save_episodes = false;
    bench_cmd->add_option("--policy", policy, "oracle or flow:PATH");
    bench_cmd->add_option("--mode", mode, "serialized|serialized-laas|ci|ci-laas");
    bench_cmd->add_option("--latency-ticks", latency_ticks, "inference delay m in ticks")
        ->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--latency-jitter", latency_jitter, "uniform jitter half-width");
    bench_cmd->add_option("--dims", dims, "dimensions (default: all nine)")->delimiter(',');
    bench_cmd->add_option("--scenarios", scenarios_per_dim, "scenarios per dimension");
    bench_cmd->add_option("--trials", trials, "trials per scenario");
    bench_cmd->add_option("--seed", seed, "sweep seed");
    bench_cmd->add_option("--out", out, "output directory");
    bench_cmd->add_option("--format", format, "csv|json|markdown");
    bench_cmd->add_flag("--save-episodes", save_episodes, "write per-episode logs");

    auto* replay_cmd = app.add_subcommand("replay", "print an episode's tick table");
    std::string episode_path;
    replay_cmd->add_option("--episode", episode_path, "episode file")->required();
    replay_cmd->add_option("--format", format, "csv|markdown");

    auto* report_cmd = app.add_subcommand("report", "re-render a report csv");
    std::string report_in;
    report_cmd->add_option("--in", report_in, "report.csv path")->required();
    report_cmd->add_option("--format", format, "csv|json|markdown");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (collect_cmd->parsed())
            return cmd_collect(config_path, overrides, episodes, seed, out);
        if (train_cmd->parsed())
            return cmd_train(config_path, overrides, data_dir, model_out, steps, seed);
        if (bench_cmd->parsed())
            return cmd_bench(config_path, overrides, policy, mode, latency_ticks,
                             latency_jitter, dims, scenarios_per_dim, trials, seed, out,
                             format, save_episodes);
        if (replay_cmd->parsed()) return cmd_replay(episode_path, format);
        if (report_cmd->parsed()) return cmd_report(report_in, format);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
