#include "rooneysim/service/service.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <random>
#include <set>
#include <sstream>

#include "rooneysim/core/rng.hpp"

namespace rooneysim::service {

std::size_t ExperimentParams::num_blue() const {
    return static_cast<std::size_t>(std::llround(rho * static_cast<double>(n)));
}

void ExperimentParams::validate() const {
    auto fail = [](const std::string& field, const std::string& msg) { throw ConfigError("params." + field + ": " + msg); };
    if (n < 2) fail("n", "at least 2 tiles are required");
    if (!(rho > 0.0 && rho < 1.0)) fail("rho", "must lie in (0, 1)");
    if (num_blue() == 0 || num_blue() == n) fail("rho", "both colors need at least one tile");
    if (k == 0 || k > n) fail("k", "must lie in [1, n]");
    if (rooney_ell > k || rooney_ell > num_blue()) fail("rooney_ell", "must not exceed k or the number of blue tiles");
    if (total_rounds == 0) fail("total_rounds", "must be at least 1");
    if (!(std::isfinite(latent_lo) && latent_lo >= 0.0)) fail("latent_lo", "must be finite and non-negative");
    if (!(std::isfinite(latent_hi) && latent_hi > latent_lo)) fail("latent_hi", "must exceed latent_lo");
    if (!(std::isfinite(noise_scale) && noise_scale >= 0.0)) fail("noise_scale", "must be non-negative");
    if (!(beta > 0.0 && beta <= 1.0)) fail("beta", "must lie in (0, 1]");
    if (!(points_per_dollar > 0.0)) fail("points_per_dollar", "must be positive");
}

json params_to_json(const ExperimentParams& p) {
    return {{"n", p.n},
            {"k", p.k},
            {"rho", p.rho},
            {"total_rounds", p.total_rounds},
            {"latent_lo", p.latent_lo},
            {"latent_hi", p.latent_hi},
            {"noise_scale", p.noise_scale},
            {"beta", p.beta},
            {"points_per_dollar", p.points_per_dollar},
            {"rooney_ell", p.rooney_ell}};
}

ExperimentParams params_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("params: expected an object");
    ExperimentParams p;
    for (const auto& [key, value] : j.items()) {
        auto count = [&](std::size_t& out) {
            const bool ok = value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0);
            if (!ok) throw ConfigError("params." + key + ": expected a non-negative integer");
            out = value.get<std::size_t>();
        };
        auto real = [&](double& out) {
            if (!value.is_number()) throw ConfigError("params." + key + ": expected a number");
            out = value.get<double>();
        };
        if (key == "n") count(p.n);
        else if (key == "k") count(p.k);
        else if (key == "rho") real(p.rho);
        else if (key == "total_rounds") count(p.total_rounds);
        else if (key == "latent_lo") real(p.latent_lo);
        else if (key == "latent_hi") real(p.latent_hi);
        else if (key == "noise_scale") real(p.noise_scale);
        else if (key == "beta") real(p.beta);
        else if (key == "points_per_dollar") real(p.points_per_dollar);
        else if (key == "rooney_ell") count(p.rooney_ell);
        else throw ConfigError("params." + key + ": unknown field");
    }
    p.validate();
    return p;
}

std::string to_string(Condition c) { return c == Condition::rooney ? "rooney" : "control"; }

Condition parse_condition(const std::string& s) {
    if (s == "rooney") return Condition::rooney;
    if (s == "control") return Condition::control;
    throw ServiceError("bad-request", "condition must be random, rooney or control");
}

namespace {

std::string color_of(Group g) { return g == Group::X ? "blue" : "red"; }

Group group_of(const std::string& color) {
    if (color == "blue") return Group::X;
    if (color == "red") return Group::Y;
    throw ConfigError("unknown tile color " + color);
}

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string random_token() {
    std::random_device rd;
    std::ostringstream os;
    os << std::hex;
    for (int i = 0; i < 4; ++i) {
        const std::uint32_t word = rd();
        os.width(8);
        os.fill('0');
        os << word;
    }
    return os.str();
}

std::string seeded_token(std::uint64_t seed, std::uint64_t ordinal, std::uint64_t attempt) {
    Rng rng(derive_seed(derive_seed(seed, Stream::session, ordinal), attempt + 1));
    std::ostringstream os;
    os << std::hex;
    for (int i = 0; i < 2; ++i) {
        os.width(16);
        os.fill('0');
        os << rng();
    }
    return os.str();
}

long long as_points(double v) { return std::llround(v); }

}  // namespace

std::vector<analysis::Tile> generate_round(const ExperimentParams& params, std::uint64_t tile_seed,
                                           std::size_t round_index) {
    Rng rng(derive_seed(tile_seed, Stream::round, round_index));
    std::vector<int> ids(params.n);
    for (std::size_t i = 0; i < params.n; ++i) ids[i] = static_cast<int>(i + 1);
    for (std::size_t i = params.n - 1; i > 0; --i) std::swap(ids[i], ids[rng.below(i + 1)]);

    const std::size_t blue = params.num_blue();
    std::vector<analysis::Tile> tiles(params.n);
    for (std::size_t i = 0; i < params.n; ++i) {
        auto& t = tiles[i];
        t.id = ids[i];
        t.group = i < blue ? Group::X : Group::Y;
        t.latent = std::round(params.latent_lo + (params.latent_hi - params.latent_lo) * rng.uniform());
        const double mean = t.group == Group::X ? params.beta * t.latent : t.latent;
        t.observed = std::max(0.0, std::round(mean + params.noise_scale * rng.normal()));
    }
    return tiles;
}

analysis::SessionData SessionSummary::to_analysis() const {
    analysis::SessionData s;
    s.session_id = descriptor.session_id;
    s.ell = descriptor.ell;
    s.k = descriptor.k;
    s.beta = params.beta;
    for (const auto& r : rounds) s.rounds.push_back({r.round_index, r.tiles, r.selected});
    return s;
}

json to_json(const SessionDescriptor& d) {
    return {{"session_id", d.session_id},
            {"condition", to_string(d.condition)},
            {"total_rounds", d.total_rounds},
            {"k", d.k},
            {"ell", d.ell}};
}

json to_json(const RoundView& v) {
    json tiles = json::array();
    for (const auto& t : v.tiles) tiles.push_back({{"id", t.id}, {"color", t.color}, {"observed", as_points(t.observed)}});
    return {{"round_index", v.round_index}, {"tiles", tiles}, {"cumulative_points", v.cumulative_points}};
}

json to_json(const SubmitResult& r) {
    json revealed = json::array();
    for (const auto& t : r.revealed) {
        revealed.push_back({{"id", t.id},
                            {"color", t.color},
                            {"observed", as_points(t.observed)},
                            {"latent", as_points(t.latent)}});
    }
    json out = {{"revealed", revealed},
                {"round_score", r.round_score},
                {"cumulative_points", r.cumulative_points},
                {"bonus_dollars", r.bonus_dollars},
                {"completed", r.completed}};
    out["next_round_index"] = r.next_round_index ? json(*r.next_round_index) : json(nullptr);
    return out;
}

json to_json(const SessionSummary& s) {
    json rounds = json::array();
    for (const auto& r : s.rounds) {
        json tiles = json::array();
        for (const auto& t : r.tiles) {
            tiles.push_back({{"id", t.id},
                             {"color", color_of(t.group)},
                             {"observed", as_points(t.observed)},
                             {"latent", as_points(t.latent)}});
        }
        rounds.push_back(
            {{"round_index", r.round_index}, {"tiles", tiles}, {"selected", r.selected}, {"round_score", r.round_score}});
    }
    json out = to_json(s.descriptor);
    out["params"] = params_to_json(s.params);
    out["beta"] = s.params.beta;
    out["cumulative_points"] = s.cumulative_points;
    out["bonus_dollars"] = s.bonus_dollars;
    out["completed"] = s.completed;
    out["rounds"] = rounds;
    return out;
}

SessionSummary summary_from_json(const json& j) {
    try {
        SessionSummary s;
        s.descriptor.session_id = j.at("session_id").get<std::string>();
        s.descriptor.condition = parse_condition(j.at("condition").get<std::string>());
        s.descriptor.total_rounds = j.at("total_rounds").get<std::size_t>();
        s.descriptor.k = j.at("k").get<std::size_t>();
        s.descriptor.ell = j.at("ell").get<std::size_t>();
        s.params = params_from_json(j.at("params"));
        s.cumulative_points = j.at("cumulative_points").get<long long>();
        s.bonus_dollars = j.at("bonus_dollars").get<double>();
        s.completed = j.at("completed").get<bool>();
        for (const auto& r : j.at("rounds")) {
            RoundHistory h;
            h.round_index = r.at("round_index").get<std::size_t>();
            h.selected = r.at("selected").get<std::vector<int>>();
            h.round_score = r.at("round_score").get<long long>();
            for (const auto& t : r.at("tiles")) {
                h.tiles.push_back({t.at("id").get<int>(), group_of(t.at("color").get<std::string>()),
                                   t.at("latent").get<double>(), t.at("observed").get<double>()});
            }
            s.rounds.push_back(std::move(h));
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("session summary: ") + e.what());
    }
}

const std::vector<DemoTile>& demo_tiles() {
    // Observed values are small distortions of the latents; tiles 3 and 4
    // swap places, so the observed top three is not the latent top three.
    static const std::vector<DemoTile> tiles = {
        {1, 80, 82}, {2, 78, 77}, {4, 60, 58}, {3, 59, 64}, {5, 47, 45}, {6, 36, 39}, {7, 25, 23}, {8, 10, 12},
    };
    return tiles;
}

std::string demo_payload() {
    static const std::string payload = [] {
        json tiles = json::array();
        for (const auto& t : demo_tiles()) {
            tiles.push_back(
                {{"id", t.id}, {"color", "red"}, {"observed", as_points(t.observed)}, {"latent", as_points(t.latent)}});
        }
        return json{{"tiles", tiles}, {"select", 3}}.dump();
    }();
    return payload;
}

bool check_demo(const std::vector<int>& tile_ids) {
    auto tiles = demo_tiles();
    std::sort(tiles.begin(), tiles.end(), [](const DemoTile& a, const DemoTile& b) { return a.latent > b.latent; });
    const std::set<int> best = {tiles[0].id, tiles[1].id, tiles[2].id};
    const std::set<int> chosen(tile_ids.begin(), tile_ids.end());
    return tile_ids.size() == 3 && chosen == best;
}

EventLog::EventLog(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    out_.open(path, std::ios::app);
    if (!out_) throw ServiceError("storage", "cannot open log " + path.string());
}

void EventLog::append(const json& record) {
    std::lock_guard lock(mutex_);
    if (out_.is_open()) {
        out_ << record.dump() << '\n';
        out_.flush();
        if (!out_) throw ServiceError("storage", "log write failed");
    }
    records_.push_back(record);
}

std::vector<json> EventLog::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ServiceError("storage", "cannot read log " + path.string());
    std::vector<json> records;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": malformed record: " + e.what());
        }
    }
    return records;
}

namespace {

// Everything about a session that the log determines.
struct SessionState {
    SessionDescriptor descriptor;
    ExperimentParams params;
    std::uint64_t tile_seed = 0;
    std::uint64_t ordinal = 0;
    std::string created_at;
    std::vector<analysis::Tile> tiles;  // current round
    std::vector<RoundHistory> history;
    long long cumulative = 0;

    static SessionState create(const std::string& id, Condition condition, const ExperimentParams& params,
                               std::uint64_t tile_seed, std::uint64_t ordinal) {
        SessionState s;
        s.descriptor = {id, condition, params.total_rounds, params.k,
                        condition == Condition::rooney ? params.rooney_ell : 0};
        s.params = params;
        s.tile_seed = tile_seed;
        s.ordinal = ordinal;
        s.tiles = generate_round(params, tile_seed, 1);
        return s;
    }

    bool completed() const { return history.size() >= params.total_rounds; }
    std::size_t current_round() const { return history.size() + 1; }

    void check(const std::vector<int>& ids) const {
        std::set<int> seen;
        for (int id : ids) {
            if (!seen.insert(id).second) throw ServiceError("duplicate", "tile " + std::to_string(id) + " selected twice");
        }
        if (ids.size() != params.k) {
            throw ServiceError("count", "select exactly " + std::to_string(params.k) + " tiles (got " +
                                            std::to_string(ids.size()) + ")");
        }
        std::size_t blue = 0;
        for (int id : ids) {
            const auto it = std::find_if(tiles.begin(), tiles.end(), [&](const analysis::Tile& t) { return t.id == id; });
            if (it == tiles.end()) throw ServiceError("invalid", "no tile with id " + std::to_string(id));
            blue += it->group == Group::X;
        }
        if (blue < descriptor.ell) {
            throw ServiceError("constraint", "at least " + std::to_string(descriptor.ell) + " blue tile(s) must be selected");
        }
    }

    SubmitResult apply(const std::vector<int>& ids) {
        SubmitResult r;
        for (int id : ids) {
            const auto& t = *std::find_if(tiles.begin(), tiles.end(), [&](const analysis::Tile& x) { return x.id == id; });
            r.revealed.push_back({t.id, color_of(t.group), t.observed, t.latent});
            r.round_score += as_points(t.latent);
        }
        history.push_back({current_round(), tiles, ids, r.round_score});
        cumulative += r.round_score;
        r.cumulative_points = cumulative;
        r.bonus_dollars = static_cast<double>(cumulative) / params.points_per_dollar;
        r.completed = completed();
        if (r.completed) {
            tiles.clear();
        } else {
            r.next_round_index = current_round();
            tiles = generate_round(params, tile_seed, current_round());
        }
        return r;
    }

    RoundView view() const {
        RoundView v;
        v.round_index = current_round();
        v.cumulative_points = cumulative;
        for (const auto& t : tiles) v.tiles.push_back({t.id, color_of(t.group), t.observed});
        std::sort(v.tiles.begin(), v.tiles.end(), [](const TileView& a, const TileView& b) {
            return a.observed != b.observed ? a.observed > b.observed : a.id < b.id;
        });
        return v;
    }

    SessionSummary summary() const {
        SessionSummary s;
        s.descriptor = descriptor;
        s.params = params;
        s.cumulative_points = cumulative;
        s.bonus_dollars = static_cast<double>(cumulative) / params.points_per_dollar;
        s.completed = completed();
        s.rounds = history;
        return s;
    }

    json created_record() const {
        return {{"event", "session-created"},
                {"session_id", descriptor.session_id},
                {"ordinal", ordinal},
                {"condition", to_string(descriptor.condition)},
                {"ell", descriptor.ell},
                {"tile_seed", tile_seed},
                {"params", params_to_json(params)},
                {"created_at", created_at}};
    }

    static SessionState from_record(const json& r) {
        auto s = create(r.at("session_id").get<std::string>(), parse_condition(r.at("condition").get<std::string>()),
                        params_from_json(r.at("params")), r.at("tile_seed").get<std::uint64_t>(),
                        r.at("ordinal").get<std::uint64_t>());
        s.created_at = r.value("created_at", "");
        return s;
    }

    // Re-applies a logged submission, checking it against the recorded score.
    void replay(const json& r) {
        const auto index = r.at("round_index").get<std::size_t>();
        if (completed() || index != current_round()) {
            throw InternalError("log replay: session " + descriptor.session_id + " round " + std::to_string(index) +
                                " is out of order");
        }
        const auto ids = r.at("tile_ids").get<std::vector<int>>();
        check(ids);
        const auto result = apply(ids);
        if (result.round_score != r.at("round_score").get<long long>() ||
            result.cumulative_points != r.at("cumulative_points").get<long long>()) {
            throw InternalError("log replay: session " + descriptor.session_id + " round " + std::to_string(index) +
                                " score differs from the recorded score");
        }
    }
};

}  // namespace

struct ExperimentService::Session {
    mutable std::mutex mutex;
    SessionState state;
};

ExperimentService::ExperimentService(ServiceConfig config) : config_(std::move(config)) {
    config_.params.validate();
    if (config_.log_path.empty()) {
        log_ = std::make_unique<EventLog>();
        return;
    }
    if (std::filesystem::is_regular_file(config_.log_path)) {
        for (const auto& record : EventLog::read(config_.log_path)) {
            const auto event = record.at("event").get<std::string>();
            if (event == "session-created") {
                apply_created(record);
            } else if (event == "round-submitted") {
                apply_submitted(record);
            } else {
                throw ConfigError("log: unknown event " + event);
            }
        }
    }
    log_ = std::make_unique<EventLog>(config_.log_path);
}

ExperimentService::~ExperimentService() = default;

void ExperimentService::apply_created(const json& record) {
    auto session = std::make_shared<Session>();
    session->state = SessionState::from_record(record);
    next_ordinal_ = std::max(next_ordinal_, session->state.ordinal + 1);
    sessions_[session->state.descriptor.session_id] = session;
}

void ExperimentService::apply_submitted(const json& record) {
    const auto id = record.at("session_id").get<std::string>();
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw InternalError("log replay: submission for unknown session " + id);
    it->second->state.replay(record);
}

SessionDescriptor ExperimentService::create_session(const std::string& assignment) {
    std::lock_guard create_lock(create_mutex_);
    const std::uint64_t ordinal = next_ordinal_;
    Condition condition;
    if (assignment == "random") {
        Rng rng(derive_seed(config_.seed, Stream::assignment, ordinal));
        condition = rng.below(2) == 1 ? Condition::rooney : Condition::control;
    } else {
        condition = parse_condition(assignment);
    }

    std::string id;
    {
        std::shared_lock lock(sessions_mutex_);
        std::uint64_t attempt = 0;
        do {
            id = config_.seeded_ids ? seeded_token(config_.seed, ordinal, attempt++) : random_token();
        } while (sessions_.count(id));
    }
    auto session = std::make_shared<Session>();
    session->state =
        SessionState::create(id, condition, config_.params, derive_seed(config_.seed, Stream::session, ordinal), ordinal);
    session->state.created_at = now_iso8601();
    log_->append(session->state.created_record());

    {
        std::unique_lock lock(sessions_mutex_);
        sessions_[id] = session;
    }
    ++next_ordinal_;
    return session->state.descriptor;
}

std::shared_ptr<ExperimentService::Session> ExperimentService::find(const std::string& session_id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw ServiceError("not-found", "no session " + session_id);
    return it->second;
}

RoundView ExperimentService::get_current_round(const std::string& session_id) const {
    const auto session = find(session_id);
    std::lock_guard lock(session->mutex);
    if (session->state.completed()) throw ServiceError("gone", "session " + session_id + " is complete");
    return session->state.view();
}

SubmitResult ExperimentService::submit_selection(const std::string& session_id, const std::vector<int>& tile_ids,
                                                 std::optional<std::size_t> round_index) {
    const auto session = find(session_id);
    std::lock_guard lock(session->mutex);
    auto& state = session->state;
    if (state.completed()) throw ServiceError("gone", "session " + session_id + " is complete");
    if (round_index && *round_index != state.current_round()) {
        throw ServiceError("conflict", "round " + std::to_string(*round_index) + " is not the current round (" +
                                           std::to_string(state.current_round()) + ")");
    }
    state.check(tile_ids);

    // Log first: a failed write leaves the session untouched.
    SessionState next = state;
    const std::size_t index = next.current_round();
    auto result = next.apply(tile_ids);
    log_->append({{"event", "round-submitted"},
                  {"session_id", session_id},
                  {"round_index", index},
                  {"tile_ids", tile_ids},
                  {"round_score", result.round_score},
                  {"cumulative_points", result.cumulative_points},
                  {"submitted_at", now_iso8601()}});
    state = std::move(next);
    return result;
}

SessionSummary ExperimentService::get_summary(const std::string& session_id) const {
    const auto session = find(session_id);
    std::lock_guard lock(session->mutex);
    if (!session->state.completed()) {
        throw ServiceError("precondition", "session " + session_id + " has not completed all rounds");
    }
    return session->state.summary();
}

SessionDescriptor ExperimentService::describe(const std::string& session_id) const {
    const auto session = find(session_id);
    std::lock_guard lock(session->mutex);
    return session->state.descriptor;
}

std::vector<std::string> ExperimentService::session_ids() const {
    std::shared_lock lock(sessions_mutex_);
    std::vector<std::pair<std::uint64_t, std::string>> ordered;
    for (const auto& [id, s] : sessions_) ordered.emplace_back(s->state.ordinal, id);
    std::sort(ordered.begin(), ordered.end());
    std::vector<std::string> ids;
    for (auto& [_, id] : ordered) ids.push_back(id);
    return ids;
}

std::vector<SessionSummary> replay_records(const std::vector<json>& records) {
    std::map<std::string, SessionState> states;
    std::vector<std::string> order;
    for (const auto& r : records) {
        const auto event = r.at("event").get<std::string>();
        const auto id = r.at("session_id").get<std::string>();
        if (event == "session-created") {
            states[id] = SessionState::from_record(r);
            order.push_back(id);
        } else if (event == "round-submitted") {
            const auto it = states.find(id);
            if (it == states.end()) throw InternalError("log replay: submission for unknown session " + id);
            it->second.replay(r);
        } else {
            throw ConfigError("log: unknown event " + event);
        }
    }
    std::vector<SessionSummary> out;
    for (const auto& id : order) out.push_back(states.at(id).summary());
    return out;
}

std::vector<SessionSummary> replay_log(const std::filesystem::path& path) { return replay_records(EventLog::read(path)); }

}  // namespace rooneysim::service
