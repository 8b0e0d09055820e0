#include "rooneysim/dynamics/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "rooneysim/core/error.hpp"

using namespace rooneysim;

namespace {

void expect_record_invariants(const RoundRecord& r, const ModelConfig& c) {
    EXPECT_EQ(r.shortlist.size(), c.k);
    EXPECT_GE(r.shortlist.count(Group::X), c.ell);
    EXPECT_GE(r.u_latent, r.u_observed);
    EXPECT_GE(r.delta, 0.0);
    EXPECT_NEAR((1.0 + r.delta) * r.u_observed, r.u_latent, 1e-9 * r.u_latent);
    EXPECT_GE(r.a_after, r.a_before);
    EXPECT_GE(r.beta, 0.0);
    EXPECT_LE(r.beta, 1.0);
}

}  // namespace

TEST(RunRound, EllEqualsKForcesAllX) {
    ModelConfig c;
    c.k = 4;
    c.ell = 4;
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto r = run_round(c.initial_belief(), c, rng);
        EXPECT_EQ(r.shortlist.count(Group::X), 4u);
        expect_record_invariants(r, c);
    }
}

TEST(RunRound, DeterministicForIdenticalInputs) {
    ModelConfig c;
    Rng a(17);
    Rng b(17);
    EXPECT_EQ(run_round({2.5, 2.0}, c, a), run_round({2.5, 2.0}, c, b));
}

TEST(RunRound, ForcedUnbiasedPanelKeepsBelief) {
    ModelConfig c;
    c.bias_dist = BiasDistributionSpec::fixed(1.0);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto r = run_round({3.0, 2.0}, c, rng);
        EXPECT_EQ(r.delta, 0.0);
        EXPECT_EQ(r.a_after, r.a_before);
        EXPECT_EQ(r.u_latent, r.u_observed);
    }
}

TEST(RunRound, RejectsInvalidInputs) {
    ModelConfig c;
    Rng rng(1);
    EXPECT_THROW(run_round({1.0, 2.0}, c, rng), DomainError);
    c.k = 1000;
    EXPECT_THROW(run_round({2.0, 2.0}, c, rng), ConfigError);
}

TEST(RunTrajectory, ZeroHorizonIsEmpty) {
    ModelConfig c;
    c.horizon = 0;
    EXPECT_TRUE(run_trajectory(c).rounds.empty());
}

TEST(RunTrajectory, ChainedAndMonotone) {
    ModelConfig c;
    c.horizon = 100;
    c.ell = 1;
    c.seed = 404;
    const auto traj = run_trajectory(c);
    ASSERT_EQ(traj.rounds.size(), 100u);
    EXPECT_EQ(traj.rounds.front().a_before, c.a1);
    for (std::size_t i = 0; i < traj.rounds.size(); ++i) {
        expect_record_invariants(traj.rounds[i], c);
        if (i + 1 < traj.rounds.size()) {
            EXPECT_EQ(traj.rounds[i].a_after, traj.rounds[i + 1].a_before);
        }
    }
    EXPECT_GE(traj.rounds.back().a_after, c.a1);
}

TEST(RunTrajectory, ReproducibleFromConfig) {
    ModelConfig c;
    c.horizon = 40;
    c.seed = 8;
    c.update_rule = UpdateRuleSpec::power(0.7);
    c.utility_dist = UtilityDistribution::truncated_power_law(1.5, 1.0, 20.0);
    const auto first = run_trajectory(c);
    const auto second = run_trajectory(c);
    EXPECT_EQ(first.rounds, second.rounds);
    c.seed = 9;
    EXPECT_NE(first.rounds, run_trajectory(c).rounds);
}

TEST(RunTrajectory, RoundsAreSubstreamsOfTheSeed) {
    ModelConfig c;
    c.horizon = 5;
    c.seed = 21;
    const auto traj = run_trajectory(c);
    BeliefState state = c.initial_belief();
    for (std::size_t t = 1; t <= c.horizon; ++t) {
        Rng rng = round_rng(c.seed, t);
        const auto r = run_round(state, c, rng);
        EXPECT_EQ(r, traj.rounds[t - 1]);
        state.a = r.a_after;
    }
}

TEST(RunTrajectory, ReportsFailingIteration) {
    ModelConfig c;
    c.bias_dist = BiasDistributionSpec::fixed(1e-300);
    c.ell = c.k;
    c.horizon = 3;
    // All-X shortlist with beta ~ 0: observed utility underflows to zero.
    c.utility_dist = UtilityDistribution::uniform(0.0, 1e-30);
    try {
        run_trajectory(c);
        FAIL() << "expected a degenerate round";
    } catch (const DegenerateRoundError& e) {
        EXPECT_NE(std::string(e.what()).find("iteration 1"), std::string::npos) << e.what();
    }
}

TEST(RunTrajectory, CapWarningRaisedOnce) {
    ModelConfig c;
    c.bias_dist = BiasDistributionSpec::fixed(0.01);
    c.ell = c.k;
    c.horizon = 30;
    const auto traj = run_trajectory(c);
    ASSERT_EQ(traj.warnings.size(), 1u);
    EXPECT_EQ(traj.warnings[0].rfind("a-cap", 0), 0u);
    EXPECT_EQ(traj.rounds.back().a_after, kBeliefCap);
}

// Fixed latents and beta: rescaling every utility by 100 changes nothing.
// Integer latents keep the product exact.
TEST(ResolveRound, ScaleInvariance) {
    ModelConfig c;
    c.n = 20;
    c.k = 4;
    c.ell = 1;
    c.rho = 0.3;
    Rng rng(64);
    BeliefState state = c.initial_belief();
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x(c.n_x());
        std::vector<double> y(c.n_y());
        for (double& v : x) v = static_cast<double>(1 + rng.below(1000));
        for (double& v : y) v = static_cast<double>(1 + rng.below(1000));
        const double beta = static_cast<double>(1 + rng.below(64)) / 64.0;
        std::vector<double> x100(x);
        std::vector<double> y100(y);
        for (double& v : x100) v *= 100.0;
        for (double& v : y100) v *= 100.0;
        const auto base = resolve_round(state, x, y, beta, c);
        const auto scaled = resolve_round(state, x100, y100, beta, c);
        ASSERT_EQ(base.shortlist, scaled.shortlist);
        ASSERT_EQ(base.delta, scaled.delta);
        ASSERT_EQ(base.a_after, scaled.a_after);
        state.a = base.a_after;
    }
}

// With no constraint and a heavily biased panel, X candidates rarely make
// the shortlist, so most rounds carry no learning signal.
TEST(RunTrajectory, SmallBiasWithoutConstraintRarelyLearns) {
    ModelConfig c;
    c.n = 1000;
    c.k = 5;
    c.ell = 0;
    c.rho = 0.5;
    c.bias_dist = BiasDistributionSpec::fixed(0.01);
    c.horizon = 200;
    const auto traj = run_trajectory(c);
    std::size_t silent = 0;
    for (const auto& r : traj.rounds) {
        if (r.u_x == 0.0) {
            EXPECT_EQ(r.delta, 0.0);
            ++silent;
        }
    }
    EXPECT_GE(silent, 190u);
}
