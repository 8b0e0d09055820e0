#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "cli.hpp"
#include "rooneysim/analysis/analysis.hpp"
#include "rooneysim/bounds/bounds.hpp"
#include "rooneysim/dynamics/dynamics.hpp"
#include "rooneysim/montecarlo/montecarlo.hpp"
#include "rooneysim/service/bots.hpp"
#include "rooneysim/service/http.hpp"

#ifndef ROONEYSIM_VERSION
#define ROONEYSIM_VERSION "dev"
#endif

namespace rooneysim::cli {

namespace fs = std::filesystem;

namespace {

// Verbosity comes from ROONEYSIM_LOG: quiet, warn, info (default), debug.
class Log {
public:
    explicit Log(std::ostream& err) : err_(err) {
        const char* env = std::getenv("ROONEYSIM_LOG");
        const std::string v = env ? env : "info";
        level_ = v == "quiet" ? 0 : v == "warn" ? 1 : v == "debug" ? 3 : 2;
    }
    void warn(const std::string& m) const { emit(1, "warning: ", m); }
    void info(const std::string& m) const { emit(2, "", m); }
    void debug(const std::string& m) const { emit(3, "debug: ", m); }

private:
    void emit(int level, const char* prefix, const std::string& m) const {
        if (level <= level_) err_ << prefix << m << '\n';
    }
    std::ostream& err_;
    int level_ = 2;
};

struct Context {
    RunConfig config;
    fs::path out_dir;
    std::ostream& out;
    const Log& log;
    std::vector<std::string> outputs;

    fs::path output(const std::string& name) {
        outputs.push_back(name);
        return out_dir / name;
    }
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
    if (!f.flush()) throw Error("write failed: " + path.string());
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    return row + '\n';
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }
std::string flag(bool v) { return v ? "1" : "0"; }

mc::Options mc_options(const RunConfig& c) {
    mc::Options o;
    o.parallelism = c.montecarlo.parallelism ? c.montecarlo.parallelism
                                             : std::max(1u, std::thread::hardware_concurrency());
    return o;
}

int cmd_simulate(Context& ctx) {
    const auto& c = ctx.config;
    std::vector<std::size_t> ells = c.simulate.ell_values;
    if (ells.empty()) ells.push_back(c.model.ell);
    for (std::size_t ell : ells) {
        ModelConfig m = c.resolved_model();
        m.ell = ell;
        const auto trajectory = run_trajectory(m);
        for (const auto& w : trajectory.warnings) ctx.log.warn("ell=" + std::to_string(ell) + ": " + w);

        std::string csv = csv_row({"t", "beta", "a_before", "a_after", "delta", "u_latent", "u_observed", "u_x", "u_y",
                                   "x_selected"});
        for (std::size_t t = 0; t < trajectory.rounds.size(); ++t) {
            const auto& r = trajectory.rounds[t];
            csv += csv_row({num(t + 1), num(r.beta), num(r.a_before), num(r.a_after), num(r.delta), num(r.u_latent),
                            num(r.u_observed), num(r.u_x), num(r.u_y), num(r.shortlist.count(Group::X))});
        }
        const std::string name = ells.size() > 1 ? "trajectory_ell" + std::to_string(ell) + ".csv" : "trajectory.csv";
        write_file(ctx.output(name), csv);
        const double final_a = trajectory.rounds.empty() ? m.a1 : trajectory.rounds.back().a_after;
        ctx.out << "ell=" << ell << " final_a=" << num(final_a) << " -> " << (ctx.out_dir / name).string() << '\n';
    }
    return exit_ok;
}

int cmd_sweep(Context& ctx) {
    const auto& c = ctx.config;
    if (c.sweep.values.empty()) throw ConfigError("sweep.values: list at least one value (--values)");
    const auto axis = mc::parse_axis(c.sweep.axis);
    const auto result = mc::sweep(c.resolved_model(), axis, c.sweep.values, c.montecarlo.replicates, mc_options(c));
    std::string csv = csv_row({"axis", "value", "t", "mean_beta", "ci_halfwidth", "replicates"});
    for (const auto& p : result.points) {
        for (const auto& e : p.estimates) {
            csv += csv_row({mc::to_string(axis), num(p.value), num(e.t), num(e.mean_beta), num(e.ci_halfwidth),
                            num(e.replicates)});
        }
        const auto& last = p.estimates.back();
        ctx.out << mc::to_string(axis) << "=" << num(p.value) << " E[beta^" << last.t << "]=" << num(last.mean_beta)
                << " +/- " << num(last.ci_halfwidth) << '\n';
    }
    write_file(ctx.output("sweep.csv"), csv);
    return exit_ok;
}

int cmd_verify_bounds(Context& ctx) {
    const auto& c = ctx.config;
    const auto model = c.resolved_model();
    const auto cmp = mc::compare_bounds(model, c.montecarlo.replicates, mc_options(c));
    std::string csv = csv_row(
        {"t", "mean_beta", "ci_halfwidth", "bound_lower", "bound_upper", "satisfied", "vacuous", "n0_ok", "checked"});
    std::size_t checked = 0;
    for (const auto& r : cmp.rows) {
        csv += csv_row({num(r.t), num(r.mean_beta), num(r.ci_halfwidth), opt(r.bound_lower), opt(r.bound_upper),
                        flag(r.satisfied), flag(r.vacuous), flag(r.n0_ok), flag(r.checked())});
        checked += r.checked();
    }
    write_file(ctx.output("bounds.csv"), csv);
    const auto violations = cmp.violations();
    ctx.out << (model.ell >= 1 ? "lower" : "upper") << " bound: " << violations << " violation(s) in " << checked
            << " checked of " << cmp.rows.size() << " iterations\n";
    int status = violations == 0 ? exit_ok : exit_check_failed;

    if (c.verify.assumptions) {
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(model.a1 * std::pow(1e4, i / 40.0));
        const auto family = bounds::assumption_check_bias_family(model.bias_dist, model.b, grid,
                                                                 {{model.k, model.ell}}, bounds::default_c3(model.b));
        const auto rule = bounds::check_update_rule(model.update_rule);
        write_file(ctx.output("assumptions.txt"), family.to_string() + "\n" + rule.to_string() + "\n");
        ctx.out << "bias family assumptions: " << (family.all_passed() ? "pass" : "FAIL") << '\n';
        ctx.out << "update rule assumptions: " << (rule.all_passed() ? "pass" : "FAIL") << '\n';
        if (!family.all_passed() || !rule.all_passed()) status = exit_check_failed;
    }
    return status;
}

int cmd_probe(Context& ctx) {
    const auto& c = ctx.config;
    const auto probe =
        mc::long_horizon_probe(c.resolved_model(), c.montecarlo.replicates, c.probe.checkpoints, mc_options(c));
    std::string csv = csv_row({"t", "mean_beta", "ci_halfwidth", "replicates"});
    for (const auto& e : probe.estimates) {
        csv += csv_row({num(e.t), num(e.mean_beta), num(e.ci_halfwidth), num(e.replicates)});
        ctx.out << "t=" << e.t << " E[beta^t]=" << num(e.mean_beta) << " +/- " << num(e.ci_halfwidth) << '\n';
    }
    write_file(ctx.output("probe.csv"), csv);
    const json summary = {{"strictly_increasing", probe.strictly_increasing},
                          {"trend_z", probe.trend_z},
                          {"first_last_disjoint", probe.first_last_disjoint}};
    write_file(ctx.output("probe_summary.json"), summary.dump(2) + "\n");
    ctx.out << "strictly_increasing=" << probe.strictly_increasing << " trend_z=" << num(probe.trend_z)
            << " first_last_disjoint=" << probe.first_last_disjoint << '\n';
    return exit_ok;
}

std::vector<service::SessionSummary> read_summaries(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("summaries file not found: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::vector<service::SessionSummary> out;
    try {
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '[') {
            for (const auto& s : json::parse(text)) out.push_back(service::summary_from_json(s));
        } else {
            std::istringstream lines(text);
            std::string line;
            while (std::getline(lines, line)) {
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                out.push_back(service::summary_from_json(json::parse(line)));
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": malformed JSON: " + e.what());
    }
    return out;
}

void write_report(Context& ctx, const std::vector<service::SessionSummary>& summaries, std::size_t late_window) {
    std::vector<analysis::SessionData> data;
    for (const auto& s : summaries) data.push_back(s.to_analysis());
    const auto report = analysis::session_report(data, late_window);
    write_file(ctx.output("report.txt"), report.to_text());
    write_file(ctx.output("metrics.csv"), report.metrics_csv());
    write_file(ctx.output("tests.csv"), report.tests_csv());
    write_file(ctx.output("regressions.csv"), report.regressions_csv());
    ctx.out << report.to_text();
}

int cmd_analyze(Context& ctx) {
    const auto& a = ctx.config.analyze;
    if (a.log.empty() == a.summaries.empty()) {
        throw ConfigError("analyze: give exactly one of analyze.log (--log) or analyze.summaries (--summaries)");
    }
    std::vector<service::SessionSummary> summaries;
    if (!a.log.empty()) {
        if (!fs::exists(a.log)) throw FileNotFound("log file not found: " + a.log);
        summaries = service::replay_log(a.log);
    } else {
        summaries = read_summaries(a.summaries);
    }
    const auto before = summaries.size();
    std::erase_if(summaries, [](const auto& s) { return !s.completed; });
    if (summaries.size() != before) {
        ctx.log.warn(std::to_string(before - summaries.size()) + " incomplete session(s) skipped");
    }
    ctx.log.info("analyzing " + std::to_string(summaries.size()) + " session(s)");
    write_report(ctx, summaries, a.late_window);
    return exit_ok;
}

std::pair<std::string, int> parse_url(std::string url) {
    if (url.rfind("http://", 0) == 0) url = url.substr(7);
    while (!url.empty() && url.back() == '/') url.pop_back();
    const auto colon = url.rfind(':');
    if (colon == std::string::npos || colon == 0) throw ConfigError("bots.url: expected host:port");
    try {
        return {url.substr(0, colon), std::stoi(url.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("bots.url: expected host:port");
    }
}

int cmd_bots(Context& ctx) {
    const auto& c = ctx.config;
    std::unique_ptr<service::ExperimentService> local;
    std::unique_ptr<service::SessionClient> client;
    if (c.bots.url.empty()) {
        service::ServiceConfig sc;
        sc.params = c.service.params;
        sc.seed = c.seed;
        sc.seeded_ids = true;
        local = std::make_unique<service::ExperimentService>(sc);
        client = std::make_unique<service::InProcessClient>(*local);
    } else {
        const auto [host, port] = parse_url(c.bots.url);
        client = std::make_unique<service::HttpClient>(host, port);
    }
    std::vector<service::SessionSummary> summaries;
    std::string lines;
    for (std::size_t i = 0; i < c.bots.sessions; ++i) {
        auto policy = service::make_policy(c.bots.policy);
        summaries.push_back(service::run_bot_session(*client, *policy, c.bots.condition));
        lines += service::to_json(summaries.back()).dump() + "\n";
        ctx.log.debug("session " + std::to_string(i + 1) + " done");
    }
    write_file(ctx.output("summaries.jsonl"), lines);
    write_report(ctx, summaries, c.analyze.late_window);
    return exit_ok;
}

int cmd_serve(const RunConfig& c, double max_seconds, std::ostream& out) {
    service::ServiceConfig sc;
    sc.params = c.service.params;
    sc.seed = c.seed;
    sc.log_path = c.service.log_path;
    service::ExperimentService svc(sc);
    service::HttpServer server(svc, c.service.static_dir);
    const int port = server.bind(c.service.host, c.service.port);

    // Signals go to sigwait below, not to the server threads.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::thread worker([&] { server.run(); });
    server.wait_until_ready();
    out << "listening on http://" << c.service.host << ":" << port << " (" << svc.session_ids().size()
        << " session(s) restored)" << std::endl;

    if (max_seconds > 0) {
        timespec limit{};
        limit.tv_sec = static_cast<time_t>(max_seconds);
        limit.tv_nsec = static_cast<long>((max_seconds - static_cast<double>(limit.tv_sec)) * 1e9);
        sigtimedwait(&signals, nullptr, &limit);
    } else {
        int sig = 0;
        sigwait(&signals, &sig);
    }
    server.stop();
    worker.join();
    pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    out << "stopped" << std::endl;
    return exit_ok;
}

using Command = int (*)(Context&);

Command find_command(const std::string& name) {
    if (name == "simulate") return cmd_simulate;
    if (name == "sweep") return cmd_sweep;
    if (name == "verify-bounds") return cmd_verify_bounds;
    if (name == "probe-asymptotic") return cmd_probe;
    if (name == "analyze") return cmd_analyze;
    if (name == "bots") return cmd_bots;
    return nullptr;
}

// Runs a file-producing subcommand and writes its manifest.
int execute(const std::string& name, const RunConfig& config, const fs::path& out_dir, std::ostream& out,
            const Log& log) {
    const auto command = find_command(name);
    if (!command) throw ConfigError("subcommand '" + name + "' cannot be run from a manifest");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());

    Context ctx{config, out_dir, out, log, {}};
    const auto start = std::chrono::steady_clock::now();
    const int status = command(ctx);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const json manifest = {{"subcommand", name},
                           {"config", config_to_json(config)},
                           {"seed", config.seed},
                           {"outputs", ctx.outputs},
                           {"version", ROONEYSIM_VERSION},
                           {"duration_seconds", seconds},
                           {"exit_status", status}};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    log.info("wrote " + (out_dir / "manifest.json").string());
    return status;
}

struct Flags {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t parallelism = 0, replicates = 0, horizon = 0, n = 0, k = 0;
    std::vector<std::size_t> ell;
    double rho = 0, a1 = 0, b = 0;
    std::string axis;
    std::vector<double> values;
    std::vector<std::size_t> checkpoints;
    bool assumptions = false;
    std::string log, summaries;
    std::size_t late_window = 0;
    std::string host, log_path, static_dir;
    int port = 0;
    double max_seconds = 0;
    std::size_t sessions = 0;
    std::string policy, condition, url;
    std::string manifest;
    // Options of every subcommand, by flag name.
    std::map<std::string, std::vector<CLI::Option*>> given;

    void track(const std::string& name, CLI::Option* option) { given[name].push_back(option); }
    bool has(const std::string& name) const {
        const auto it = given.find(name);
        if (it == given.end()) return false;
        return std::any_of(it->second.begin(), it->second.end(), [](const CLI::Option* o) { return o->count() > 0; });
    }
};

void add_common(CLI::App* app, Flags& f, bool model) {
    f.track("config", app->add_option("--config", f.config, "JSON config file"));
    f.track("out", app->add_option("--out", f.out, "Output directory (default out/<subcommand>)"));
    f.track("seed", app->add_option("--seed", f.seed, "Root seed"));
    if (!model) return;
    f.track("parallelism", app->add_option("--parallelism", f.parallelism, "Replicate workers (0 = all cores)"));
    f.track("replicates", app->add_option("--replicates", f.replicates, "Monte Carlo replicates"));
    f.track("horizon", app->add_option("--horizon", f.horizon, "Iterations T"));
    f.track("n", app->add_option("--n", f.n, "Candidates per iteration"));
    f.track("k", app->add_option("--k", f.k, "Shortlist size"));
    f.track("ell", app->add_option("--ell", f.ell, "Minimum X members; simulate accepts it repeatedly"));
    f.track("rho", app->add_option("--rho", f.rho, "Fraction of X candidates"));
    f.track("a1", app->add_option("--a1", f.a1, "Initial belief parameter a"));
    f.track("b", app->add_option("--b", f.b, "Belief parameter b"));
}

void apply_flags(const std::string& name, const Flags& f, RunConfig& c) {
    if (f.has("seed")) c.seed = f.seed;
    if (f.has("parallelism")) c.montecarlo.parallelism = f.parallelism;
    if (f.has("replicates")) c.montecarlo.replicates = f.replicates;
    if (f.has("horizon")) c.model.horizon = f.horizon;
    if (f.has("n")) c.model.n = f.n;
    if (f.has("k")) c.model.k = f.k;
    if (f.has("rho")) c.model.rho = f.rho;
    if (f.has("a1")) c.model.a1 = f.a1;
    if (f.has("b")) c.model.b = f.b;
    if (f.has("ell")) {
        if (f.ell.size() > 1 && name != "simulate") throw ConfigError("--ell: only simulate accepts several values");
        c.model.ell = f.ell.front();
        c.simulate.ell_values = f.ell.size() > 1 ? f.ell : std::vector<std::size_t>{};
    }
    if (f.has("axis")) c.sweep.axis = f.axis;
    if (f.has("values")) c.sweep.values = f.values;
    if (f.has("checkpoints")) c.probe.checkpoints = f.checkpoints;
    if (f.has("assumptions")) c.verify.assumptions = f.assumptions;
    if (f.has("log")) c.analyze.log = f.log;
    if (f.has("summaries")) c.analyze.summaries = f.summaries;
    if (f.has("late-window")) c.analyze.late_window = f.late_window;
    if (f.has("host")) c.service.host = f.host;
    if (f.has("port")) c.service.port = f.port;
    if (f.has("log-path")) c.service.log_path = f.log_path;
    if (f.has("static-dir")) c.service.static_dir = f.static_dir;
    if (f.has("sessions")) c.bots.sessions = f.sessions;
    if (f.has("policy")) c.bots.policy = f.policy;
    if (f.has("condition")) c.bots.condition = f.condition;
    if (f.has("url")) c.bots.url = f.url;
}

int dispatch(CLI::App& app, Flags& f, std::ostream& out, const Log& log) {
    if (auto* rerun = app.get_subcommand("rerun"); rerun->parsed()) {
        std::ifstream in(f.manifest);
        if (!in) throw FileNotFound("manifest not found: " + f.manifest);
        json manifest;
        try {
            manifest = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError(f.manifest + ": malformed JSON: " + e.what());
        }
        if (!manifest.contains("subcommand") || !manifest.contains("config")) {
            throw ConfigError(f.manifest + ": not a run manifest");
        }
        auto config = config_from_json(manifest["config"]);
        if (f.has("parallelism")) config.montecarlo.parallelism = f.parallelism;
        const fs::path out_dir = f.has("out") ? fs::path(f.out) : fs::path(f.manifest).parent_path() / "rerun";
        return execute(manifest["subcommand"].get<std::string>(), config, out_dir, out, log);
    }

    for (auto* sub : app.get_subcommands()) {
        const std::string name = sub->get_name();
        RunConfig config = f.has("config") ? load_config(f.config) : RunConfig{};
        apply_flags(name, f, config);
        config = config_from_json(config_to_json(config));  // validates the merged result
        if (name == "serve") return cmd_serve(config, f.max_seconds, out);
        const fs::path out_dir = f.has("out") ? fs::path(f.out) : fs::path("out") / name;
        return execute(name, config, out_dir, out, log);
    }
    return exit_invalid;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Log log(err);
    CLI::App app{"Iterated candidate selection under implicit bias: simulation, bounds and experiment service",
                 args.empty() ? "rooneysim" : args.front()};
    app.require_subcommand(1);
    app.set_version_flag("--version", ROONEYSIM_VERSION);
    Flags f;

    auto* simulate = app.add_subcommand("simulate", "Run one trajectory per ell value");
    add_common(simulate, f, true);

    auto* sweep = app.add_subcommand("sweep", "Estimate E[beta^t] across values of one parameter");
    add_common(sweep, f, true);
    f.track("axis", sweep->add_option("--axis", f.axis, "n, k, ell, rho, a1 or b"));
    f.track("values", sweep->add_option("--values", f.values, "Axis values"));

    auto* verify = app.add_subcommand("verify-bounds", "Compare Monte Carlo estimates with the analytic bound");
    add_common(verify, f, true);
    f.track("assumptions", verify->add_flag("--assumptions", f.assumptions, "Also check the sufficient conditions"));

    auto* probe = app.add_subcommand("probe-asymptotic", "Long-horizon estimates without the rule (ell = 0)");
    add_common(probe, f, true);
    f.track("checkpoints", probe->add_option("--checkpoints", f.checkpoints, "Ascending iterations to record"));

    auto* analyze = app.add_subcommand("analyze", "Report on completed experiment sessions");
    add_common(analyze, f, false);
    f.track("log", analyze->add_option("--log", f.log, "Service event log (JSONL)"));
    f.track("summaries", analyze->add_option("--summaries", f.summaries, "Session summaries (JSON array or JSONL)"));
    f.track("late-window", analyze->add_option("--late-window", f.late_window, "Rounds in the late window"));

    auto* serve = app.add_subcommand("serve", "Run the experiment service over HTTP");
    add_common(serve, f, false);
    f.track("host", serve->add_option("--host", f.host, "Bind address"));
    f.track("port", serve->add_option("--port", f.port, "Port (0 picks a free one)"));
    f.track("log-path", serve->add_option("--log-path", f.log_path, "Append-only event log"));
    f.track("static-dir", serve->add_option("--static-dir", f.static_dir, "Web UI assets served from /"));
    serve->add_option("--max-seconds", f.max_seconds, "Stop after this long (0 = until SIGINT/SIGTERM)");

    auto* bots = app.add_subcommand("bots", "Play sessions with scripted participants and report on them");
    add_common(bots, f, false);
    f.track("sessions", bots->add_option("--sessions", f.sessions, "Number of sessions"));
    f.track("policy", bots->add_option("--policy", f.policy, "greedy, learner or quota:<m>"));
    f.track("condition", bots->add_option("--condition", f.condition, "random, rooney or control"));
    f.track("url", bots->add_option("--url", f.url, "host:port of a running service (default: in process)"));
    f.track("late-window", bots->add_option("--late-window", f.late_window, "Rounds in the late window"));

    auto* rerun = app.add_subcommand("rerun", "Repeat a run from its manifest");
    rerun->add_option("--manifest", f.manifest, "manifest.json of the earlier run")->required();
    f.track("out", rerun->add_option("--out", f.out, "Output directory (default <manifest dir>/rerun)"));
    f.track("parallelism", rerun->add_option("--parallelism", f.parallelism, "Replicate workers"));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        return dispatch(app, f, out, log);
    } catch (const FileNotFound& e) {
        err << "error: not found: " << e.what() << '\n';
        return exit_not_found;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const NotApplicableError& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const ConstraintError& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace rooneysim::cli
