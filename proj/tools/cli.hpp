#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rooneysim/core/model.hpp"
#include "rooneysim/service/service.hpp"

namespace rooneysim::cli {

using json = nlohmann::json;

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_invalid = 2,
    exit_not_found = 3,
    exit_failure = 4,
};

struct SimulateSettings {
    // Several values produce one trajectory file each; empty uses model.ell.
    std::vector<std::size_t> ell_values;
};

struct MonteCarloSettings {
    std::size_t replicates = 1000;
    // 0: one worker per hardware thread.
    std::size_t parallelism = 0;
};

struct SweepSettings {
    std::string axis = "n";
    std::vector<double> values;
};

struct VerifySettings {
    bool assumptions = false;
};

struct ProbeSettings {
    std::vector<std::size_t> checkpoints{100, 1000, 10000};
};

struct AnalyzeSettings {
    std::string log;
    std::string summaries;
    std::size_t late_window = 15;
};

struct ServeSettings {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string log_path;
    std::string static_dir;
    service::ExperimentParams params;
};

struct BotSettings {
    std::size_t sessions = 40;
    std::string policy = "greedy";
    std::string condition = "random";
    // host:port of a running server; empty runs an in-process service.
    std::string url;
};

struct RunConfig {
    std::uint64_t seed = 1;
    ModelConfig model;
    SimulateSettings simulate;
    MonteCarloSettings montecarlo;
    SweepSettings sweep;
    VerifySettings verify;
    ProbeSettings probe;
    AnalyzeSettings analyze;
    ServeSettings service;
    BotSettings bots;

    // Model with the root seed applied.
    ModelConfig resolved_model() const;
};

// Every problem is reported with its field path ("model.k: ...").
// Throws ConfigError listing all of them.
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);  // FileNotFound if absent

class FileNotFound : public Error {
public:
    using Error::Error;
};

// Fixed 12-significant-digit formatting used by every CSV.
std::string format_number(double v);

// Full command line, argv[0] included. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rooneysim::cli
