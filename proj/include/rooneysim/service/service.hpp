#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "rooneysim/analysis/analysis.hpp"
#include "rooneysim/core/error.hpp"

namespace rooneysim::service {

using json = nlohmann::json;

struct ExperimentParams {
    std::size_t n = 100;
    std::size_t k = 10;
    double rho = 0.5;
    std::size_t total_rounds = 25;
    double latent_lo = 0.0;
    double latent_hi = 100.0;
    double noise_scale = 3.0;
    double beta = 2.0 / 3.0;
    double points_per_dollar = 15000.0;
    // Blue tiles required in the rooney condition.
    std::size_t rooney_ell = 1;

    std::size_t num_blue() const;
    // Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const ExperimentParams&, const ExperimentParams&) = default;
};

json params_to_json(const ExperimentParams& p);
// Missing fields keep their defaults; unknown fields are rejected.
ExperimentParams params_from_json(const json& j);

enum class Condition { control, rooney };
std::string to_string(Condition c);
Condition parse_condition(const std::string& s);

// Failure reported to API clients as {kind, message}.
// Kinds: count, constraint, duplicate, invalid, conflict, not-found, gone,
// precondition, bad-request, storage.
class ServiceError : public Error {
public:
    ServiceError(std::string kind, const std::string& message) : Error(message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Tiles of round t (1-based) for a session: ids are a random permutation of
// 1..n; the first num_blue() draws are blue. Latents are rounded uniform
// draws; observed = max(0, round(Normal(mean, noise))) with mean beta * latent
// for blue tiles and latent for red ones.
std::vector<analysis::Tile> generate_round(const ExperimentParams& params, std::uint64_t tile_seed,
                                           std::size_t round_index);

struct TileView {
    int id = 0;
    std::string color;
    double observed = 0.0;
};

struct RevealedTile {
    int id = 0;
    std::string color;
    double observed = 0.0;
    double latent = 0.0;
};

struct SessionDescriptor {
    std::string session_id;
    Condition condition = Condition::control;
    std::size_t total_rounds = 0;
    std::size_t k = 0;
    std::size_t ell = 0;
};

struct RoundView {
    std::size_t round_index = 0;
    // Sorted by observed descending, then id ascending.
    std::vector<TileView> tiles;
    long long cumulative_points = 0;
};

struct SubmitResult {
    std::vector<RevealedTile> revealed;
    long long round_score = 0;
    long long cumulative_points = 0;
    double bonus_dollars = 0.0;
    std::optional<std::size_t> next_round_index;
    bool completed = false;
};

struct RoundHistory {
    std::size_t round_index = 0;
    std::vector<analysis::Tile> tiles;
    std::vector<int> selected;
    long long round_score = 0;
};

struct SessionSummary {
    SessionDescriptor descriptor;
    ExperimentParams params;
    long long cumulative_points = 0;
    double bonus_dollars = 0.0;
    bool completed = false;
    std::vector<RoundHistory> rounds;

    analysis::SessionData to_analysis() const;
};

json to_json(const SessionDescriptor& d);
json to_json(const RoundView& v);
json to_json(const SubmitResult& r);
json to_json(const SessionSummary& s);
SessionSummary summary_from_json(const json& j);

struct DemoTile {
    int id = 0;
    double observed = 0.0;
    double latent = 0.0;
};

// Fixed all-red demonstration list; identical for every participant.
const std::vector<DemoTile>& demo_tiles();
std::string demo_payload();
// True iff tile_ids are exactly the three highest-latent demo tiles.
bool check_demo(const std::vector<int>& tile_ids);

// Line-delimited JSON, one record per event, flushed before returning.
// Single writer: appends are serialized by an internal mutex.
class EventLog {
public:
    EventLog() = default;  // in-memory only: records are kept but not written
    explicit EventLog(const std::filesystem::path& path);

    void append(const json& record);
    const std::vector<json>& records() const noexcept { return records_; }
    bool persistent() const noexcept { return out_.is_open(); }

    // Parses every record of a log file; throws ServiceError(storage) when the
    // file cannot be read and ConfigError on a malformed line.
    static std::vector<json> read(const std::filesystem::path& path);

private:
    std::mutex mutex_;
    std::ofstream out_;
    std::vector<json> records_;
};

struct ServiceConfig {
    ExperimentParams params;
    std::uint64_t seed = 1;
    // Empty: no durable log.
    std::filesystem::path log_path;
    // Session ids derived from the seed instead of the system entropy source.
    // Only for offline bot runs that must be reproducible; ids become guessable.
    bool seeded_ids = false;
};

// Session lifecycle, constraint enforcement, reveal-and-score and logging.
// Sessions are independent; operations on one session are serialized.
class ExperimentService {
public:
    // Replays an existing log at config.log_path before accepting requests,
    // then keeps appending to it.
    explicit ExperimentService(ServiceConfig config);
    ~ExperimentService();

    ExperimentService(const ExperimentService&) = delete;
    ExperimentService& operator=(const ExperimentService&) = delete;

    // assignment: "random", "rooney" or "control".
    SessionDescriptor create_session(const std::string& assignment);
    RoundView get_current_round(const std::string& session_id) const;
    // round_index, when given, must name the current round (else conflict).
    SubmitResult submit_selection(const std::string& session_id, const std::vector<int>& tile_ids,
                                  std::optional<std::size_t> round_index = std::nullopt);
    SessionSummary get_summary(const std::string& session_id) const;
    SessionDescriptor describe(const std::string& session_id) const;

    std::vector<std::string> session_ids() const;
    const ServiceConfig& config() const noexcept { return config_; }
    const EventLog& log() const noexcept { return *log_; }

private:
    struct Session;
    std::shared_ptr<Session> find(const std::string& session_id) const;
    void apply_created(const json& record);
    void apply_submitted(const json& record);

    ServiceConfig config_;
    std::unique_ptr<EventLog> log_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex create_mutex_;
    std::uint64_t next_ordinal_ = 0;
};

// Final state of every session recorded in a log, in creation order,
// reconstructed by regenerating tiles and re-applying each submission.
std::vector<SessionSummary> replay_log(const std::filesystem::path& path);
std::vector<SessionSummary> replay_records(const std::vector<json>& records);

}  // namespace rooneysim::service
