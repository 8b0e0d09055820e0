#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rooneysim/core/model.hpp"
#include "rooneysim/core/rng.hpp"

namespace rooneysim {

struct Trajectory {
    ModelConfig config;
    // rounds[0] is iteration t = 1.
    std::vector<RoundRecord> rounds;
    std::vector<std::string> warnings;
};

// Executes one iteration: sample latents, sample beta, bias the X
// observations, select the constrained shortlist, measure U / U_obs / delta
// and update the belief. Validates the config.
RoundRecord run_round(const BeliefState& state, const ModelConfig& config, Rng& rng);

// Deterministic part of an iteration for given latents and bias: bias the X
// observations, select, measure and update.
RoundRecord resolve_round(const BeliefState& state, std::span<const double> x_latent,
                          std::span<const double> y_latent, double beta, const ModelConfig& config);

// T chained iterations; iteration t draws from the substream
// derive_seed(config.seed, Stream::round, t). Errors are rethrown with the
// (1-based) failing iteration in the message.
Trajectory run_trajectory(const ModelConfig& config);

// Reusable per-trajectory workspace for the Monte Carlo loops; avoids
// reallocating candidate buffers every round. Not thread-safe; use one per
// worker.
class RoundRunner {
public:
    explicit RoundRunner(const ModelConfig& config);

    const ModelConfig& config() const noexcept { return config_; }
    RoundRecord step(const BeliefState& state, Rng& rng);

private:
    const ModelConfig& config_;
    std::vector<double> x_latent_;
    std::vector<double> y_latent_;
    std::vector<double> x_observed_;
};

// Substream for iteration t (1-based) of the trajectory seeded with seed.
inline Rng round_rng(std::uint64_t seed, std::size_t t) { return Rng(derive_seed(seed, Stream::round, t)); }

}  // namespace rooneysim
