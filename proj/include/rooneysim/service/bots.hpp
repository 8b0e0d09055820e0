#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rooneysim/service/service.hpp"

namespace httplib {
class Client;
}

namespace rooneysim::service {

// The participant-facing operations, either in process or over HTTP.
class SessionClient {
public:
    virtual ~SessionClient() = default;
    virtual SessionDescriptor create_session(const std::string& condition) = 0;
    virtual RoundView current_round(const std::string& session_id) = 0;
    virtual SubmitResult submit(const std::string& session_id, const std::vector<int>& tile_ids,
                                std::size_t round_index) = 0;
    virtual SessionSummary summary(const std::string& session_id) = 0;
};

class InProcessClient : public SessionClient {
public:
    explicit InProcessClient(ExperimentService& service) : service_(service) {}
    SessionDescriptor create_session(const std::string& condition) override;
    RoundView current_round(const std::string& session_id) override;
    SubmitResult submit(const std::string& session_id, const std::vector<int>& tile_ids,
                        std::size_t round_index) override;
    SessionSummary summary(const std::string& session_id) override;

private:
    ExperimentService& service_;
};

// Error responses are rethrown as ServiceError with the server's kind.
class HttpClient : public SessionClient {
public:
    HttpClient(const std::string& host, int port);
    ~HttpClient() override;
    SessionDescriptor create_session(const std::string& condition) override;
    RoundView current_round(const std::string& session_id) override;
    SubmitResult submit(const std::string& session_id, const std::vector<int>& tile_ids,
                        std::size_t round_index) override;
    SessionSummary summary(const std::string& session_id) override;

private:
    json request(const std::string& method, const std::string& path, const json& body = nullptr);
    std::unique_ptr<httplib::Client> client_;
};

SessionDescriptor descriptor_from_json(const json& j);
RoundView round_view_from_json(const json& j);
SubmitResult submit_result_from_json(const json& j);

// A simulated participant.
class BotPolicy {
public:
    virtual ~BotPolicy() = default;
    virtual std::string name() const = 0;
    virtual std::vector<int> choose(const SessionDescriptor& session, const RoundView& round) = 0;
    virtual void observe(const SubmitResult&) {}
};

// Top k by observed value subject to the blue quota.
class GreedyPolicy : public BotPolicy {
public:
    std::string name() const override { return "greedy"; }
    std::vector<int> choose(const SessionDescriptor& session, const RoundView& round) override;
};

// Exactly max(blue, ell) blue tiles: the best blue ones, the rest red.
class QuotaPolicy : public BotPolicy {
public:
    explicit QuotaPolicy(std::size_t blue) : blue_(blue) {}
    std::string name() const override { return "quota:" + std::to_string(blue_); }
    std::vector<int> choose(const SessionDescriptor& session, const RoundView& round) override;

private:
    std::size_t blue_;
};

// Estimates the blue distortion as the ratio of revealed observed to latent
// blue totals and selects greedily on debiased values.
class LearnerPolicy : public BotPolicy {
public:
    std::string name() const override { return "learner"; }
    std::vector<int> choose(const SessionDescriptor& session, const RoundView& round) override;
    void observe(const SubmitResult& result) override;
    double estimate() const noexcept { return latent_sum_ > 0.0 ? observed_sum_ / latent_sum_ : 1.0; }

private:
    double observed_sum_ = 0.0;
    double latent_sum_ = 0.0;
};

// "greedy", "learner" or "quota:<m>". Throws ConfigError otherwise.
std::unique_ptr<BotPolicy> make_policy(const std::string& spec);

// Plays a full session and returns its summary.
SessionSummary run_bot_session(SessionClient& client, BotPolicy& policy, const std::string& condition);

}  // namespace rooneysim::service
