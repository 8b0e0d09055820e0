#include "rooneysim/montecarlo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "rooneysim/core/error.hpp"
#include "rooneysim/dynamics/dynamics.hpp"

namespace rooneysim::mc {

std::uint64_t replicate_seed(std::uint64_t root_seed, std::size_t replicate) {
    return derive_seed(root_seed, Stream::replicate, replicate);
}

namespace {

void check_checkpoints(const std::vector<std::size_t>& checkpoints) {
    if (checkpoints.empty()) throw ConfigError("checkpoints: at least one iteration is required");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] == 0) throw ConfigError("checkpoints: iterations are 1-based");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
            throw ConfigError("checkpoints: must be strictly ascending");
        }
    }
}

void run_one(const ModelConfig& config, RoundRunner& runner, std::uint64_t seed,
             const std::vector<std::size_t>& checkpoints, std::vector<double>& out) {
    out.assign(checkpoints.size(), 0.0);
    BeliefState state = config.initial_belief();
    std::size_t next = 0;
    const std::size_t last = checkpoints.back();
    for (std::size_t t = 1; t <= last; ++t) {
        Rng rng = round_rng(seed, t);
        const RoundRecord rec = runner.step(state, rng);
        state.a = rec.a_after;
        if (t == checkpoints[next]) out[next++] = rec.beta;
    }
}

}  // namespace

std::vector<std::vector<double>> replicate_betas(const ModelConfig& config, std::size_t replicates,
                                                 const std::vector<std::size_t>& checkpoints,
                                                 const Options& options) {
    config.validate();
    check_checkpoints(checkpoints);

    std::vector<std::size_t> order = options.execution_order;
    if (order.empty()) {
        order.resize(replicates);
        std::iota(order.begin(), order.end(), std::size_t{0});
    } else {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != i || sorted.size() != replicates) {
                throw ConfigError("execution_order must be a permutation of the replicate indices");
            }
        }
    }

    std::vector<std::vector<double>> samples(replicates);
    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;
    std::size_t failed_replicate = replicates;
    std::string failure;

    auto worker = [&]() {
        RoundRunner runner(config);
        for (;;) {
            const std::size_t slot = cursor.fetch_add(1);
            if (slot >= order.size()) return;
            const std::size_t r = order[slot];
            try {
                run_one(config, runner, replicate_seed(config.seed, r), checkpoints, samples[r]);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                // Report the lowest failing id so the message does not depend on scheduling.
                if (r < failed_replicate) {
                    failed_replicate = r;
                    failure = e.what();
                }
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(options.parallelism, 1, std::max<std::size_t>(replicates, 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed_replicate < replicates) {
        throw Error("replicate " + std::to_string(failed_replicate) + " failed: " + failure);
    }
    return samples;
}

std::vector<BiasEstimate> summarize(const std::vector<std::vector<double>>& samples,
                                    const std::vector<std::size_t>& checkpoints) {
    const std::size_t r = samples.size();
    if (r < 2) throw ConfigError("replicates: at least 2 are required for an interval");
    std::vector<BiasEstimate> out;
    out.reserve(checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        double sum = 0.0;
        for (const auto& row : samples) sum += row[c];
        const double mean = sum / static_cast<double>(r);
        double ss = 0.0;
        for (const auto& row : samples) {
            const double d = row[c] - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(r - 1));
        out.push_back({checkpoints[c], mean, kZ95 * sd / std::sqrt(static_cast<double>(r)), r});
    }
    return out;
}

std::vector<BiasEstimate> estimate_expected_bias(const ModelConfig& config, std::size_t replicates,
                                                 const Options& options) {
    if (replicates < 2) throw ConfigError("replicates: at least 2 are required");
    if (config.horizon == 0) return {};
    std::vector<std::size_t> checkpoints(config.horizon);
    std::iota(checkpoints.begin(), checkpoints.end(), std::size_t{1});
    return summarize(replicate_betas(config, replicates, checkpoints, options), checkpoints);
}

std::size_t Comparison::violations() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.checked() && !r.satisfied; }));
}

Comparison compare_bounds(const ModelConfig& config, std::size_t replicates, const Options& options) {
    Comparison cmp;
    cmp.curve = bounds::bound_curve(config);
    const auto estimates = estimate_expected_bias(config, replicates, options);
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const auto& e = estimates[i];
        const auto& p = cmp.curve.points[i];
        ComparisonRow row;
        row.t = e.t;
        row.mean_beta = e.mean_beta;
        row.ci_halfwidth = e.ci_halfwidth;
        row.bound_lower = p.lower;
        row.bound_upper = p.upper;
        row.vacuous = p.vacuous;
        row.n0_ok = p.n0_ok;
        if (p.lower) {
            row.satisfied = e.mean_beta + e.ci_halfwidth >= *p.lower;
        } else {
            row.satisfied = row.vacuous || e.mean_beta - e.ci_halfwidth <= *p.upper;
        }
        cmp.rows.push_back(row);
    }
    return cmp;
}

Axis parse_axis(const std::string& name) {
    if (name == "n") return Axis::n;
    if (name == "k") return Axis::k;
    if (name == "ell") return Axis::ell;
    if (name == "rho") return Axis::rho;
    if (name == "a1") return Axis::a1;
    if (name == "b") return Axis::b;
    throw ConfigError("sweep.axis: unknown parameter '" + name + "' (expected n, k, ell, rho, a1 or b)");
}

std::string to_string(Axis axis) {
    switch (axis) {
    case Axis::n:
        return "n";
    case Axis::k:
        return "k";
    case Axis::ell:
        return "ell";
    case Axis::rho:
        return "rho";
    case Axis::a1:
        return "a1";
    case Axis::b:
        return "b";
    }
    return "?";
}

ModelConfig with_axis_value(const ModelConfig& base, Axis axis, double value) {
    std::ostringstream label;
    label.precision(12);
    label << "sweep.values entry " << value << " for axis " << to_string(axis);
    auto as_count = [&](double v) {
        if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
            throw ConfigError(label.str() + ": must be a non-negative integer");
        }
        return static_cast<std::size_t>(v);
    };
    ModelConfig cfg = base;
    switch (axis) {
    case Axis::n:
        cfg.n = as_count(value);
        break;
    case Axis::k:
        cfg.k = as_count(value);
        break;
    case Axis::ell:
        cfg.ell = as_count(value);
        break;
    case Axis::rho:
        cfg.rho = value;
        break;
    case Axis::a1:
        cfg.a1 = value;
        break;
    case Axis::b:
        cfg.b = value;
        break;
    }
    const auto problems = cfg.problems();
    if (!problems.empty()) {
        std::string msg = label.str() + ":";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }
    return cfg;
}

SweepResult sweep(const ModelConfig& base, Axis axis, const std::vector<double>& values, std::size_t replicates,
                  const Options& options) {
    if (values.empty()) throw ConfigError("sweep.values: at least one value is required");
    std::vector<ModelConfig> configs;
    configs.reserve(values.size());
    for (double v : values) configs.push_back(with_axis_value(base, axis, v));

    SweepResult result;
    result.axis = axis;
    for (std::size_t i = 0; i < values.size(); ++i) {
        result.points.push_back({values[i], estimate_expected_bias(configs[i], replicates, options)});
    }
    return result;
}

ProbeResult long_horizon_probe(const ModelConfig& config, std::size_t replicates,
                               const std::vector<std::size_t>& checkpoints, const Options& options) {
    if (config.ell != 0) throw NotApplicableError("the long-horizon probe studies the unconstrained case (ell == 0)");
    if (replicates < 2) throw ConfigError("replicates: at least 2 are required");
    check_checkpoints(checkpoints);
    ModelConfig cfg = config;
    cfg.horizon = checkpoints.back();

    ProbeResult result;
    result.estimates = summarize(replicate_betas(cfg, replicates, checkpoints, options), checkpoints);
    result.strictly_increasing = true;
    for (std::size_t i = 1; i < result.estimates.size(); ++i) {
        if (!(result.estimates[i].mean_beta > result.estimates[i - 1].mean_beta)) result.strictly_increasing = false;
    }
    const auto& first = result.estimates.front();
    const auto& last = result.estimates.back();
    const double se_first = first.ci_halfwidth / kZ95;
    const double se_last = last.ci_halfwidth / kZ95;
    const double pooled = std::sqrt(se_first * se_first + se_last * se_last);
    const double diff = last.mean_beta - first.mean_beta;
    result.trend_z = pooled > 0.0 ? diff / pooled : (diff > 0.0 ? INFINITY : (diff < 0.0 ? -INFINITY : 0.0));
    result.first_last_disjoint = last.mean_beta - last.ci_halfwidth > first.mean_beta + first.ci_halfwidth;
    return result;
}

}  // namespace rooneysim::mc
