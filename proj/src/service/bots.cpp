#include "rooneysim/service/bots.hpp"

#include <algorithm>

#include <httplib.h>

#include "rooneysim/core/selection.hpp"

namespace rooneysim::service {

SessionDescriptor InProcessClient::create_session(const std::string& condition) {
    return service_.create_session(condition);
}

RoundView InProcessClient::current_round(const std::string& session_id) {
    return service_.get_current_round(session_id);
}

SubmitResult InProcessClient::submit(const std::string& session_id, const std::vector<int>& tile_ids,
                                     std::size_t round_index) {
    return service_.submit_selection(session_id, tile_ids, round_index);
}

SessionSummary InProcessClient::summary(const std::string& session_id) { return service_.get_summary(session_id); }

SessionDescriptor descriptor_from_json(const json& j) {
    SessionDescriptor d;
    d.session_id = j.at("session_id").get<std::string>();
    d.condition = parse_condition(j.at("condition").get<std::string>());
    d.total_rounds = j.at("total_rounds").get<std::size_t>();
    d.k = j.at("k").get<std::size_t>();
    d.ell = j.at("ell").get<std::size_t>();
    return d;
}

RoundView round_view_from_json(const json& j) {
    RoundView v;
    v.round_index = j.at("round_index").get<std::size_t>();
    v.cumulative_points = j.at("cumulative_points").get<long long>();
    for (const auto& t : j.at("tiles")) {
        v.tiles.push_back({t.at("id").get<int>(), t.at("color").get<std::string>(), t.at("observed").get<double>()});
    }
    return v;
}

SubmitResult submit_result_from_json(const json& j) {
    SubmitResult r;
    for (const auto& t : j.at("revealed")) {
        r.revealed.push_back({t.at("id").get<int>(), t.at("color").get<std::string>(), t.at("observed").get<double>(),
                              t.at("latent").get<double>()});
    }
    r.round_score = j.at("round_score").get<long long>();
    r.cumulative_points = j.at("cumulative_points").get<long long>();
    r.bonus_dollars = j.at("bonus_dollars").get<double>();
    r.completed = j.at("completed").get<bool>();
    if (!j.at("next_round_index").is_null()) r.next_round_index = j["next_round_index"].get<std::size_t>();
    return r;
}

HttpClient::HttpClient(const std::string& host, int port) : client_(std::make_unique<httplib::Client>(host, port)) {
    client_->set_connection_timeout(5);
    client_->set_read_timeout(30);
}

HttpClient::~HttpClient() = default;

json HttpClient::request(const std::string& method, const std::string& path, const json& body) {
    httplib::Result res = method == "GET" ? client_->Get(path)
                                          : client_->Post(path, body.is_null() ? "{}" : body.dump(), "application/json");
    if (!res) throw Error("HTTP " + method + " " + path + " failed: " + httplib::to_string(res.error()));
    json out;
    try {
        out = json::parse(res->body);
    } catch (const json::exception&) {
        throw InternalError("HTTP " + method + " " + path + ": response is not JSON");
    }
    if (res->status >= 400) {
        throw ServiceError(out.value("kind", "internal"), out.value("message", "HTTP status " + std::to_string(res->status)));
    }
    return out;
}

SessionDescriptor HttpClient::create_session(const std::string& condition) {
    return descriptor_from_json(request("POST", "/api/sessions", {{"condition", condition}}));
}

RoundView HttpClient::current_round(const std::string& session_id) {
    return round_view_from_json(request("GET", "/api/sessions/" + session_id + "/round"));
}

SubmitResult HttpClient::submit(const std::string& session_id, const std::vector<int>& tile_ids,
                                std::size_t round_index) {
    return submit_result_from_json(request("POST", "/api/sessions/" + session_id + "/selection",
                                           {{"tile_ids", tile_ids}, {"round_index", round_index}}));
}

SessionSummary HttpClient::summary(const std::string& session_id) {
    return summary_from_json(request("GET", "/api/sessions/" + session_id + "/summary"));
}

namespace {

// Greedy selection with at least ell blue tiles, blue values scaled by
// 1 / blue_scale.
std::vector<int> select_ids(const RoundView& round, std::size_t k, std::size_t ell, double blue_scale) {
    std::vector<int> blue_ids, red_ids;
    std::vector<double> blue, red;
    auto sorted = round.tiles;
    std::sort(sorted.begin(), sorted.end(), [](const TileView& a, const TileView& b) { return a.id < b.id; });
    for (const auto& t : sorted) {
        if (t.color == "blue") {
            blue_ids.push_back(t.id);
            blue.push_back(t.observed / blue_scale);
        } else {
            red_ids.push_back(t.id);
            red.push_back(t.observed);
        }
    }
    const auto shortlist = select_shortlist(blue, red, k, ell);
    std::vector<int> ids;
    for (const auto& m : shortlist.members()) ids.push_back(m.group == Group::X ? blue_ids[m.index] : red_ids[m.index]);
    return ids;
}

}  // namespace

std::vector<int> GreedyPolicy::choose(const SessionDescriptor& session, const RoundView& round) {
    return select_ids(round, session.k, session.ell, 1.0);
}

std::vector<int> QuotaPolicy::choose(const SessionDescriptor& session, const RoundView& round) {
    const std::size_t want = std::max(blue_, session.ell);
    std::vector<TileView> blue, red;
    for (const auto& t : round.tiles) (t.color == "blue" ? blue : red).push_back(t);
    auto by_value = [](const TileView& a, const TileView& b) {
        return a.observed != b.observed ? a.observed > b.observed : a.id < b.id;
    };
    std::sort(blue.begin(), blue.end(), by_value);
    std::sort(red.begin(), red.end(), by_value);
    const std::size_t nb = std::min({want, blue.size(), session.k});
    const std::size_t nr = std::min(session.k - nb, red.size());
    std::vector<int> ids;
    for (std::size_t i = 0; i < nb; ++i) ids.push_back(blue[i].id);
    for (std::size_t i = 0; i < nr; ++i) ids.push_back(red[i].id);
    return ids;
}

std::vector<int> LearnerPolicy::choose(const SessionDescriptor& session, const RoundView& round) {
    const double b = std::clamp(estimate(), 1e-3, 1.0);
    return select_ids(round, session.k, session.ell, b);
}

void LearnerPolicy::observe(const SubmitResult& result) {
    for (const auto& t : result.revealed) {
        if (t.color != "blue") continue;
        observed_sum_ += t.observed;
        latent_sum_ += t.latent;
    }
}

std::unique_ptr<BotPolicy> make_policy(const std::string& spec) {
    if (spec == "greedy") return std::make_unique<GreedyPolicy>();
    if (spec == "learner") return std::make_unique<LearnerPolicy>();
    if (spec.rfind("quota:", 0) == 0) {
        const std::string digits = spec.substr(6);
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            return std::make_unique<QuotaPolicy>(std::stoul(digits));
        }
    }
    throw ConfigError("unknown bot policy '" + spec + "' (expected greedy, learner or quota:<m>)");
}

SessionSummary run_bot_session(SessionClient& client, BotPolicy& policy, const std::string& condition) {
    const auto session = client.create_session(condition);
    for (std::size_t t = 1; t <= session.total_rounds; ++t) {
        const auto round = client.current_round(session.session_id);
        const auto result = client.submit(session.session_id, policy.choose(session, round), round.round_index);
        policy.observe(result);
    }
    return client.summary(session.session_id);
}

}  // namespace rooneysim::service
