#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rooneysim/bounds/bounds.hpp"
#include "rooneysim/core/model.hpp"

namespace rooneysim::mc {

// 95% normal-approximation interval.
inline constexpr double kZ95 = 1.96;

struct BiasEstimate {
    std::size_t t = 0;
    double mean_beta = 0.0;
    double ci_halfwidth = 0.0;
    std::size_t replicates = 0;
};

struct Options {
    // Worker threads; results do not depend on this value.
    std::size_t parallelism = 1;
    // Order in which replicates are executed; empty means 0..R-1. Only
    // scheduling changes, never the result.
    std::vector<std::size_t> execution_order;
};

// Seed of replicate r under the root seed.
std::uint64_t replicate_seed(std::uint64_t root_seed, std::size_t replicate);

// Runs `replicates` independent trajectories of config.horizon rounds and
// records beta^t at every requested checkpoint (1-based, ascending).
// Returns a replicates x checkpoints matrix in replicate order.
std::vector<std::vector<double>> replicate_betas(const ModelConfig& config, std::size_t replicates,
                                                 const std::vector<std::size_t>& checkpoints,
                                                 const Options& options = {});

// Per-checkpoint mean and interval from a replicates x checkpoints matrix.
std::vector<BiasEstimate> summarize(const std::vector<std::vector<double>>& samples,
                                    const std::vector<std::size_t>& checkpoints);

// E[beta^t] for t = 1..horizon. Requires replicates >= 2.
std::vector<BiasEstimate> estimate_expected_bias(const ModelConfig& config, std::size_t replicates,
                                                 const Options& options = {});

struct ComparisonRow {
    std::size_t t = 0;
    double mean_beta = 0.0;
    double ci_halfwidth = 0.0;
    std::optional<double> bound_lower;
    std::optional<double> bound_upper;
    // mean + ci >= lower (ell >= 1), or mean - ci <= upper (ell == 0).
    bool satisfied = true;
    bool vacuous = false;
    bool n0_ok = true;
    // Rows that can count as violations: non-vacuous, and for the upper
    // bound also inside the large-n regime.
    bool checked() const { return !vacuous && n0_ok; }
};

struct Comparison {
    bounds::BoundCurve curve;
    std::vector<ComparisonRow> rows;
    std::size_t violations() const;
};

Comparison compare_bounds(const ModelConfig& config, std::size_t replicates, const Options& options = {});

enum class Axis { n, k, ell, rho, a1, b };
Axis parse_axis(const std::string& name);  // throws ConfigError
std::string to_string(Axis axis);

// Copy of base with the axis parameter set to value. Throws ConfigError
// naming the entry when the value is invalid for the axis.
ModelConfig with_axis_value(const ModelConfig& base, Axis axis, double value);

struct SweepPoint {
    double value = 0.0;
    std::vector<BiasEstimate> estimates;
};

struct SweepResult {
    Axis axis = Axis::n;
    std::vector<SweepPoint> points;
};

// One estimate series per value. Every series reuses base.seed, so
// replicate r sees the same substream keys at every sweep point.
SweepResult sweep(const ModelConfig& base, Axis axis, const std::vector<double>& values, std::size_t replicates,
                  const Options& options = {});

struct ProbeResult {
    std::vector<BiasEstimate> estimates;
    // Every checkpoint mean above the previous one.
    bool strictly_increasing = false;
    // (last - first) / sqrt(se_first^2 + se_last^2).
    double trend_z = 0.0;
    // The 95% intervals of the first and last checkpoints do not overlap and
    // the last mean is higher.
    bool first_last_disjoint = false;
};

// Estimates only at the checkpoints (memory stays O(replicates x checkpoints)).
// Requires ell == 0; runs to the last checkpoint regardless of config.horizon.
ProbeResult long_horizon_probe(const ModelConfig& config, std::size_t replicates,
                               const std::vector<std::size_t>& checkpoints, const Options& options = {});

}  // namespace rooneysim::mc
