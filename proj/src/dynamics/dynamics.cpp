#include "rooneysim/dynamics/dynamics.hpp"

#include "rooneysim/core/error.hpp"

namespace rooneysim {

RoundRunner::RoundRunner(const ModelConfig& config)
    : config_(config), x_latent_(config.n_x()), y_latent_(config.n_y()), x_observed_(config.n_x()) {}

namespace {

RoundRecord resolve_into(const BeliefState& state, std::span<const double> x_latent, std::span<const double> y_latent,
                         double beta, const ModelConfig& config, std::vector<double>& x_observed) {
    x_observed.resize(x_latent.size());
    for (std::size_t i = 0; i < x_latent.size(); ++i) x_observed[i] = beta * x_latent[i];

    RoundRecord rec;
    rec.beta = beta;
    rec.shortlist = select_shortlist(x_observed, y_latent, config.k, config.ell);
    rec.u_latent = total_utility(rec.shortlist, x_latent, y_latent);
    rec.u_observed = total_utility(rec.shortlist, x_observed, y_latent);
    rec.u_x = group_utility(rec.shortlist, Group::X, x_latent);
    rec.u_y = group_utility(rec.shortlist, Group::Y, y_latent);
    rec.delta = compute_delta(beta, rec.u_x, rec.u_y);
    rec.a_before = state.a;
    rec.a_after = update_belief_ratio(state, 1.0 + rec.delta, config.update_rule).a;
    return rec;
}

}  // namespace

RoundRecord RoundRunner::step(const BeliefState& state, Rng& rng) {
    sample_latent(config_.utility_dist, x_latent_, rng);
    sample_latent(config_.utility_dist, y_latent_, rng);
    const double beta = sample_bias(state, config_.bias_dist, rng);
    return resolve_into(state, x_latent_, y_latent_, beta, config_, x_observed_);
}

RoundRecord resolve_round(const BeliefState& state, std::span<const double> x_latent,
                          std::span<const double> y_latent, double beta, const ModelConfig& config) {
    state.validate();
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("resolve_round: beta must lie in [0, 1]");
    std::vector<double> x_observed;
    return resolve_into(state, x_latent, y_latent, beta, config, x_observed);
}

RoundRecord run_round(const BeliefState& state, const ModelConfig& config, Rng& rng) {
    config.validate();
    state.validate();
    RoundRunner runner(config);
    return runner.step(state, rng);
}

namespace {

template <class E>
[[noreturn]] void rethrow_at(const E& e, std::size_t t) {
    throw E("iteration " + std::to_string(t) + ": " + e.what());
}

}  // namespace

Trajectory run_trajectory(const ModelConfig& config) {
    config.validate();
    Trajectory traj;
    traj.config = config;
    traj.rounds.reserve(config.horizon);

    RoundRunner runner(traj.config);
    BeliefState state = config.initial_belief();
    for (std::size_t t = 1; t <= config.horizon; ++t) {
        Rng rng = round_rng(config.seed, t);
        RoundRecord rec;
        try {
            rec = runner.step(state, rng);
        } catch (const DegenerateRoundError& e) {
            rethrow_at(e, t);
        } catch (const RuleError& e) {
            rethrow_at(e, t);
        } catch (const DomainError& e) {
            rethrow_at(e, t);
        }
        const bool was_capped = state.capped;
        state.a = rec.a_after;
        if (rec.a_after >= kBeliefCap) state.capped = true;
        if (state.capped && !was_capped) {
            traj.warnings.push_back("a-cap: belief parameter reached 1e12 at iteration " + std::to_string(t));
        }
        traj.rounds.push_back(std::move(rec));
    }
    return traj;
}

}  // namespace rooneysim
