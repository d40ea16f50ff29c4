#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "scot/error.hpp"
#include "scot/experiment.hpp"

namespace fs = std::filesystem;
using namespace scot;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitTimeout = 3;

struct Source {
    std::string config;
    std::string fixture;
};

void add_source(CLI::App* app, Source& s) {
    auto* c = app->add_option("--config", s.config, "Experiment config (JSON)");
    auto* f = app->add_option("--fixture", s.fixture, "Built-in config name instead of --config");
    c->excludes(f);
}

Experiment load(const Source& s) {
    if (!s.fixture.empty()) return parse_experiment(fixture(s.fixture), "fixture:" + s.fixture);
    if (s.config.empty()) throw ConfigError("one of --config or --fixture is required");
    return load_experiment(s.config);
}

fs::path output_dir(const std::string& flag, const Experiment& e) {
    if (!flag.empty()) return flag;
    if (e.output) return *e.output;
    if (const char* env = std::getenv("SCOT_OUT_DIR"); env && *env) return env;
    return "scot-out";
}

// First of base, base-2, base-3, ... that does not exist yet.
fs::path fresh_dir(const fs::path& base) {
    if (!fs::exists(base)) return base;
    for (int i = 2;; ++i) {
        fs::path p = base.string() + "-" + std::to_string(i);
        if (!fs::exists(p)) return p;
    }
}

std::vector<Mode> parse_modes(const std::string& text, Mode fallback) {
    if (text.empty()) return {fallback};
    if (text == "all") return {Mode::Bid, Mode::Snr, Mode::Dnr};
    std::vector<Mode> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_mode(item));
    return out;
}

int cmd_topology(const Source& src, bool dump) {
    Experiment e = load(src);
    std::cout << topology_summary(*e.topology) << "\n";
    if (dump) std::cout << dump_topology(*e.topology);
    return 0;
}

struct RunOptions {
    Source src;
    std::string mode;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool trace = false;
};

int cmd_run(const RunOptions& o) {
    Experiment e = load(o.src);
    if (o.seed) e.reseed(*o.seed);
    e.sim.trace = o.trace;
    auto modes = parse_modes(o.mode, e.sim.mode);
    fs::path dir = output_dir(o.out, e);
    std::vector<RunArtifacts> runs;
    for (Mode m : modes) {
        runs.push_back(run_experiment(e, m));
        fs::path d = modes.size() > 1 ? dir / to_string(m) : dir;
        write_artifacts(d, runs.back());
        if (modes.size() == 1) std::cout << runs.back().summary;
    }
    if (modes.size() > 1) {
        std::string cmp = comparison_text(runs);
        std::ofstream(dir / "comparison.txt") << cmp;
        std::cout << cmp;
    }
    std::cerr << "wrote " << dir.string() << "\n";
    return 0;
}

struct SweepOptions {
    std::string scenario;
    Source src;
    std::vector<double> values;
    std::string modes;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned parallel = 1;
};

struct Scenario {
    const char* fixture;
    std::vector<std::string> key;  // path below workload/generate
    std::vector<double> values;
    std::vector<Mode> modes;
};

Scenario scenario(const std::string& name) {
    if (name == "subscriber")
        return {"roman", {"subscribers"}, {100, 200, 400, 800}, {Mode::Bid, Mode::Snr, Mode::Dnr}};
    if (name == "publisher")
        return {"roman", {"publishers"}, {5, 10, 20, 40}, {Mode::Bid, Mode::Snr, Mode::Dnr}};
    if (name == "stability")
        return {"stability", {"hrp", "rate_npm"}, {1000, 800, 600}, {Mode::Snr, Mode::Dnr}};
    throw ConfigError(
        fmt::format("unknown scenario '{}' (subscriber, publisher or stability)", name));
}

std::string number(double v) {
    return v == static_cast<double>(static_cast<long long>(v)) ? fmt::format("{}", static_cast<long long>(v))
                                                                : fmt::format("{}", v);
}

int cmd_sweep(const SweepOptions& o) {
    Scenario sc = scenario(o.scenario);
    nlohmann::json base;
    std::string origin;
    if (!o.src.config.empty()) {
        std::ifstream in(o.src.config);
        if (!in) throw ConfigError(fmt::format("{}: cannot open config", o.src.config));
        try {
            base = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& ex) {
            throw ConfigError(fmt::format("{}: malformed JSON: {}", o.src.config, ex.what()));
        }
        origin = o.src.config;
    } else {
        const std::string name = o.src.fixture.empty() ? sc.fixture : o.src.fixture;
        base = fixture(name);
        origin = "fixture:" + name;
    }
    if (!base.contains("workload") || !base["workload"].contains("generate"))
        throw ConfigError(fmt::format("{}: sweeps need a generated workload (workload/generate)", origin));
    std::vector<double> values = o.values.empty() ? sc.values : o.values;
    std::vector<Mode> modes = o.modes.empty() ? sc.modes : parse_modes(o.modes, Mode::Snr);

    struct Job {
        std::string point;
        Experiment experiment;
        Mode mode;
        fs::path dir;
        std::string row;
    };
    Experiment probe = parse_experiment(base, origin);
    fs::path root = fresh_dir(output_dir(o.out, probe) / o.scenario);
    std::string param = sc.key.back();

    std::vector<Job> jobs;
    for (double v : values) {
        nlohmann::json doc = base;
        nlohmann::json* slot = &doc["workload"]["generate"];
        for (const auto& k : sc.key) slot = &(*slot)[k];
        if (param == "rate_npm")
            *slot = v;
        else
            *slot = static_cast<long long>(v);
        Experiment e = parse_experiment(doc, origin);
        if (o.seed) e.reseed(*o.seed);
        const std::string point = fmt::format("{}={}", param, number(v));
        for (Mode m : modes)
            jobs.push_back({point, e, m, root / point / to_string(m), {}});
    }

    std::atomic<std::size_t> next{0};
    std::mutex failure_lock;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next++;
            if (i >= jobs.size()) return;
            try {
                Job& j = jobs[i];
                RunArtifacts a = run_experiment(j.experiment, j.mode);
                write_artifacts(j.dir, a);
                std::size_t max_queue = 0;
                for (const auto& l : a.result.links) max_queue = std::max(max_queue, l.max_queue);
                std::uint64_t delay = 0, n = 0;
                for (const auto& rec : a.result.notifications)
                    for (const auto& d : rec.deliveries) delay += d.delivered - rec.issued, ++n;
                j.row = fmt::format("{},{},{},{},{},{},{:.3f},{},{}\n", param,
                                    j.point.substr(param.size() + 1), to_string(j.mode),
                                    a.result.total_ims(), a.result.notification_ims,
                                    a.result.delivery_count(),
                                    n ? static_cast<double>(delay) / static_cast<double>(n) : 0.0,
                                    max_queue, a.result.quiescence);
            } catch (...) {
                std::lock_guard<std::mutex> g(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::max(1u, o.parallel); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::string csv =
        "parameter,value,mode,total_ims,notification_ims,deliveries,mean_notification_delay,"
        "max_queue,quiescence_tick\n";
    for (const auto& j : jobs) csv += j.row;
    std::ofstream(root / "sweep.csv") << csv;
    std::cout << csv;
    std::cerr << "wrote " << root.string() << "\n";
    return 0;
}

int cmd_fixtures(const std::string& name, bool list, const std::string& out) {
    if (list || name.empty()) {
        for (const auto& n : fixture_names()) std::cout << n << "\n";
        return 0;
    }
    std::string text = fixture(name).dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw Error(fmt::format("cannot write {}", out));
        f << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustered publish/subscribe overlay simulator"};
    app.require_subcommand(1);

    Source topo_src;
    bool dump = false;
    auto* topo = app.add_subcommand("topology", "Build and validate an overlay, print its counts");
    add_source(topo, topo_src);
    topo->add_flag("--dump", dump, "List brokers and links");

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment");
    add_source(run_cmd, run.src);
    run_cmd->add_option("--mode", run.mode, "bid, snr, dnr, a comma list, or all");
    run_cmd->add_option("--seed", run.seed, "Workload seed");
    run_cmd->add_option("--out", run.out, "Output directory (default $SCOT_OUT_DIR or scot-out)");
    run_cmd->add_flag("--trace", run.trace, "Write a per-broker routing trace");

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over a parameter grid");
    sweep_cmd->add_option("--scenario", sweep.scenario, "subscriber, publisher or stability")->required();
    add_source(sweep_cmd, sweep.src);
    sweep_cmd->add_option("--values", sweep.values, "Grid values for the swept parameter");
    sweep_cmd->add_option("--mode", sweep.modes, "Modes to run (comma list or all)");
    sweep_cmd->add_option("--seed", sweep.seed, "Workload seed");
    sweep_cmd->add_option("--out", sweep.out, "Output directory");
    sweep_cmd->add_option("--parallel", sweep.parallel, "Grid points run concurrently")
        ->check(CLI::PositiveNumber);

    std::string fixture_name, fixture_out;
    bool fixture_list = false;
    auto* fix = app.add_subcommand("fixtures", "Print a built-in config");
    fix->add_option("--name", fixture_name, "Fixture name");
    fix->add_flag("--list", fixture_list, "List fixture names");
    fix->add_option("--out", fixture_out, "Write to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (topo->parsed()) return cmd_topology(topo_src, dump);
        if (run_cmd->parsed()) return cmd_run(run);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep);
        if (fix->parsed()) return cmd_fixtures(fixture_name, fixture_list, fixture_out);
    } catch (const TimeoutError& e) {
        std::cerr << "timeout: " << e.what() << "\n";
        return kExitTimeout;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const TopologyError& e) {
        std::cerr << "topology error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GraphError& e) {
        std::cerr << "graph error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
