#include "rooneysim/core/model.hpp"

#include <gtest/gtest.h>

#include "rooneysim/core/error.hpp"

using namespace rooneysim;

TEST(ComputeDelta, Examples) {
    EXPECT_EQ(compute_delta(1.0, 7.0, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(compute_delta(0.5, 10.0, 5.0), 0.5);
    EXPECT_EQ(compute_delta(0.4, 0.0, 6.0), 0.0);
    // No Y selected: U / U_obs = 1 / beta.
    EXPECT_DOUBLE_EQ(compute_delta(0.25, 4.0, 0.0), 3.0);
}

TEST(ComputeDelta, DegenerateDenominator) {
    EXPECT_THROW(compute_delta(0.0, 3.0, 0.0), DegenerateRoundError);
    EXPECT_THROW(compute_delta(0.5, 0.0, 0.0), DegenerateRoundError);
    EXPECT_THROW(compute_delta(1.5, 1.0, 1.0), DomainError);
    EXPECT_THROW(compute_delta(0.5, -1.0, 1.0), DomainError);
}

TEST(ComputeDelta, EqualsRatioIdentity) {
    for (double beta : {0.1, 0.37, 0.8}) {
        for (double ux : {0.5, 2.0, 9.0}) {
            for (double uy : {0.0, 1.0, 4.0}) {
                const double u = ux + uy;
                const double u_obs = beta * ux + uy;
                EXPECT_NEAR((1.0 + compute_delta(beta, ux, uy)) * u_obs, u, 1e-12 * u);
            }
        }
    }
}

TEST(ModelConfig, GroupSizesRoundRhoTimesN) {
    ModelConfig c;
    c.n = 101;
    c.rho = 0.5;
    EXPECT_EQ(c.n_x(), 51u);
    EXPECT_EQ(c.n_y(), 50u);
    c.n = 100;
    c.rho = 0.25;
    EXPECT_EQ(c.n_x(), 25u);
}

TEST(ModelConfig, ValidationListsEveryProblem) {
    ModelConfig c;
    EXPECT_NO_THROW(c.validate());
    c.k = 200;
    c.a1 = 1.0;
    const auto problems = c.problems();
    EXPECT_EQ(problems.size(), 2u);
    EXPECT_THROW(c.validate(), ConfigError);

    ModelConfig d;
    d.n = 10;
    d.rho = 0.1;
    d.ell = 2;
    d.k = 3;
    ASSERT_EQ(d.problems().size(), 1u);
    EXPECT_EQ(d.problems()[0].rfind("ell:", 0), 0u);

    ModelConfig e;
    e.n = 10;
    e.rho = 0.01;
    e.ell = 0;
    EXPECT_FALSE(e.problems().empty());
}
