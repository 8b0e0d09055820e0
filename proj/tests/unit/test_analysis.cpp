#include "rooneysim/analysis/analysis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "rooneysim/core/error.hpp"
#include "rooneysim/core/rng.hpp"

using namespace rooneysim;
using namespace rooneysim::analysis;

namespace {

double oracle_p(double t, double df) {
    using HP = boost::multiprecision::cpp_bin_float_50;
    boost::math::students_t_distribution<HP> dist{HP(df)};
    return static_cast<double>(2 * boost::math::cdf(boost::math::complement(dist, abs(HP(t)))));
}

// Round with 4 blue tiles (ids 1-4) and 4 red tiles (ids 5-8).
RoundData small_round(std::vector<int> selected) {
    RoundData r;
    r.index = 1;
    const double blue_latent[] = {60, 30, 90, 10};
    const double red_latent[] = {70, 20, 50, 40};
    for (int i = 0; i < 4; ++i) {
        r.tiles.push_back({i + 1, Group::X, blue_latent[i], std::round(0.5 * blue_latent[i])});
        r.tiles.push_back({i + 5, Group::Y, red_latent[i], red_latent[i]});
    }
    r.selected = std::move(selected);
    return r;
}

}  // namespace

TEST(Welch, HandFixture) {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{2, 4, 6};
    const auto r = welch_t_test(a, b);
    // t = -2 / sqrt(1/3 + 4/3), df = (5/3)^2 / ((1/3)^2/2 + (4/3)^2/2).
    EXPECT_NEAR(r.statistic, -1.5491933384829668, 1e-12);
    EXPECT_NEAR(r.degrees_of_freedom, 2.9411764705882353, 1e-12);
    EXPECT_NEAR(r.p_value, oracle_p(r.statistic, r.degrees_of_freedom), 1e-10);
    EXPECT_DOUBLE_EQ(r.means.first, 2.0);
    EXPECT_DOUBLE_EQ(r.sds.second, 2.0);
}

TEST(Welch, IdenticalSamples) {
    const std::vector<double> a{1.5, 2.5, 7.0, 3.0};
    const auto r = welch_t_test(a, a);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(Welch, SwappingNegatesStatistic) {
    const std::vector<double> a{0.2, 0.9, 0.4, 0.4, 0.1};
    const std::vector<double> b{1.2, 0.3, 2.2};
    const auto ab = welch_t_test(a, b);
    const auto ba = welch_t_test(b, a);
    EXPECT_DOUBLE_EQ(ab.statistic, -ba.statistic);
    EXPECT_DOUBLE_EQ(ab.degrees_of_freedom, ba.degrees_of_freedom);
    EXPECT_DOUBLE_EQ(ab.p_value, ba.p_value);
}

TEST(Welch, Errors) {
    const std::vector<double> one{1.0};
    const std::vector<double> flat{2.0, 2.0, 2.0};
    const std::vector<double> flat2{3.0, 3.0};
    EXPECT_THROW(welch_t_test(one, flat), DomainError);
    EXPECT_THROW(welch_t_test(flat, flat2), StatisticsError);
}

// Under the null, p-values are uniform: about 5% fall below 0.05.
TEST(Welch, NullPValuesAreNotOverconfident) {
    Rng rng(42);
    const int runs = 2000;
    int below = 0;
    double sum = 0.0;
    for (int i = 0; i < runs; ++i) {
        std::vector<double> a(30);
        std::vector<double> b(40);
        for (double& v : a) v = rng.normal();
        for (double& v : b) v = rng.normal();
        const double p = welch_t_test(a, b).p_value;
        below += p < 0.05;
        sum += p;
    }
    EXPECT_NEAR(below / double(runs), 0.05, 3 * std::sqrt(0.05 * 0.95 / runs));
    EXPECT_NEAR(sum / runs, 0.5, 3 * std::sqrt(1.0 / 12.0 / runs));
}

TEST(Ols, ExactLine) {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 1; i <= 10; ++i) {
        x.push_back(i);
        y.push_back(2.0 * i);
    }
    const auto f = ols_fit(x, y);
    EXPECT_EQ(f.slope, 2.0);
    EXPECT_EQ(f.intercept, 0.0);
    EXPECT_EQ(f.residual_se, 0.0);
    EXPECT_EQ(f.slope_p, 0.0);
    EXPECT_EQ(f.df, 8.0);
}

TEST(Ols, RecoversSlopeUnderNoise) {
    Rng rng(10);
    std::vector<double> x(10'000);
    std::vector<double> y(10'000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = 10.0 * rng.uniform();
        y[i] = x[i] + (rng.uniform() - 0.5);
    }
    const auto f = ols_fit(x, y);
    EXPECT_NEAR(f.slope, 1.0, 3 * f.slope_se);
    EXPECT_NEAR(f.intercept, 0.0, 3 * f.intercept_se);
}

TEST(Ols, ClassicalStandardErrors) {
    // Hand computation: x = 1..5, y = {1, 3, 2, 5, 4}: slope 0.8, intercept 0.6,
    // SSE = 3.6, s^2 = 1.2, Sxx = 10.
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{1, 3, 2, 5, 4};
    const auto f = ols_fit(x, y);
    EXPECT_NEAR(f.slope, 0.8, 1e-14);
    EXPECT_NEAR(f.intercept, 0.6, 1e-14);
    EXPECT_NEAR(f.slope_se, std::sqrt(0.12), 1e-14);
    EXPECT_NEAR(f.intercept_se, std::sqrt(1.2 * (0.2 + 9.0 / 10.0)), 1e-14);
    EXPECT_NEAR(f.slope_p, oracle_p(0.8 / std::sqrt(0.12), 3.0), 1e-10);
    EXPECT_NEAR(f.r_squared, 0.64, 1e-14);
}

TEST(Ols, DuplicatedDataKeepsCoefficients) {
    const std::vector<double> x{0.5, 1.7, 2.2, 3.9, 4.4, 6.0};
    const std::vector<double> y{1.1, 0.4, 2.9, 3.3, 5.0, 4.1};
    std::vector<double> x2(x);
    std::vector<double> y2(y);
    x2.insert(x2.end(), x.begin(), x.end());
    y2.insert(y2.end(), y.begin(), y.end());
    const auto f = ols_fit(x, y);
    const auto g = ols_fit(x2, y2);
    EXPECT_NEAR(f.slope, g.slope, 1e-13);
    EXPECT_NEAR(f.intercept, g.intercept, 1e-13);
}

TEST(Ols, Errors) {
    const std::vector<double> flat{3, 3, 3};
    const std::vector<double> y{1, 2, 3};
    EXPECT_THROW(ols_fit(flat, y), StatisticsError);
    EXPECT_THROW(ols_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DomainError);
}

TEST(OptimalStrategy, DebiasesBlueObservations) {
    const std::vector<double> x{4, 1};
    const std::vector<double> y{5, 3};
    const auto s = optimal_strategy_set(x, y, 0.5, 2);
    EXPECT_EQ(s, Shortlist({{Group::X, 0}, {Group::Y, 0}}));
    EXPECT_THROW(optimal_strategy_set(x, y, 0.0, 2), DomainError);
}

TEST(OptimalStrategy, UnbiasedEqualsUnconstrainedSelection) {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> x(6);
        std::vector<double> y(7);
        for (double& v : x) v = static_cast<double>(rng.below(10));
        for (double& v : y) v = static_cast<double>(rng.below(10));
        EXPECT_EQ(optimal_strategy_set(x, y, 1.0, 4), select_shortlist(x, y, 4, 0));
    }
    const std::vector<double> x{1, 2};
    const std::vector<double> y{3};
    EXPECT_EQ(optimal_strategy_set(x, y, 0.7, 3).size(), 3u);
}

TEST(SelectionMetrics, OptimalSelectionScoresOne) {
    // beta = 0.5: debiased blue {60, 30, 90, 10} (even latents); top 3 of
    // {60, 30, 90, 10, 70, 20, 50, 40} = tiles 3, 5, 1.
    const auto m = compute_selection_metrics(small_round({3, 5, 1}), 0, 3, 0.5);
    EXPECT_DOUBLE_EQ(m.latent_fraction_total, 1.0);
    EXPECT_DOUBLE_EQ(m.overlap_total, 1.0);
    EXPECT_DOUBLE_EQ(m.overlap_blue, 1.0);
    EXPECT_DOUBLE_EQ(m.overlap_red, 1.0);
    EXPECT_EQ(m.optimal_utility, 220.0);
    EXPECT_EQ(m.num_blue_selected, 2u);
    EXPECT_FALSE(m.exceeds_optimal);
}

TEST(SelectionMetrics, AllRedSelection) {
    const auto m = compute_selection_metrics(small_round({5, 7, 8}), 1, 3, 0.5);
    EXPECT_EQ(m.num_blue_selected, 0u);
    EXPECT_EQ(m.num_blue_over_required, -1.0);
    EXPECT_EQ(m.overlap_blue, 0.0);
    EXPECT_EQ(m.overlap_count_red, 1u);
    EXPECT_DOUBLE_EQ(m.overlap_red, 1.0);
    EXPECT_DOUBLE_EQ(m.latent_fraction_total, 160.0 / 220.0);
    EXPECT_EQ(m.latent_fraction_blue, 0.0);
}

TEST(SelectionMetrics, DecompositionSumsToTotals) {
    Rng rng(8);
    for (int trial = 0; trial < 500; ++trial) {
        RoundData r;
        for (int i = 0; i < 20; ++i) {
            const double latent = static_cast<double>(rng.below(101));
            const Group g = i < 10 ? Group::X : Group::Y;
            const double obs = g == Group::X ? std::round(latent * 2.0 / 3.0 + 3 * rng.normal())
                                             : std::round(latent + 3 * rng.normal());
            r.tiles.push_back({i + 1, g, latent, std::max(0.0, obs)});
        }
        std::vector<int> ids(20);
        for (int i = 0; i < 20; ++i) ids[i] = i + 1;
        for (int i = 19; i > 0; --i) std::swap(ids[i], ids[rng.below(i + 1)]);
        r.selected.assign(ids.begin(), ids.begin() + 5);
        const auto m = compute_selection_metrics(r, 0, 5, 2.0 / 3.0);
        EXPECT_NEAR(m.latent_fraction_blue + m.latent_fraction_red, m.latent_fraction_total, 1e-9);
        EXPECT_EQ(static_cast<double>(m.overlap_count_blue + m.overlap_count_red) / 5.0, m.overlap_total);
    }
}

TEST(SelectionMetrics, Errors) {
    EXPECT_THROW(compute_selection_metrics(small_round({1, 2}), 0, 3, 0.5), DomainError);
    EXPECT_THROW(compute_selection_metrics(small_round({1, 2, 99}), 0, 3, 0.5), DomainError);
    RoundData zero = small_round({1, 2, 3});
    for (auto& t : zero.tiles) t.latent = 0.0;
    EXPECT_THROW(compute_selection_metrics(zero, 0, 3, 0.5), DegenerateRoundError);
}

namespace {

SessionData constructed_session(std::size_t ell, int blue_to_pick, std::size_t rounds, Rng& rng) {
    SessionData s;
    s.ell = ell;
    s.k = 3;
    s.beta = 0.5;
    for (std::size_t t = 1; t <= rounds; ++t) {
        RoundData r;
        r.index = t;
        for (int i = 0; i < 8; ++i) {
            const double latent = 1.0 + static_cast<double>(rng.below(100));
            const Group g = i < 4 ? Group::X : Group::Y;
            r.tiles.push_back({i + 1, g, latent, g == Group::X ? std::round(latent / 2) : latent});
        }
        for (int i = 0; i < blue_to_pick; ++i) r.selected.push_back(i + 1);
        for (int i = blue_to_pick; i < 3; ++i) r.selected.push_back(5 + i);
        s.rounds.push_back(r);
    }
    return s;
}

}  // namespace

TEST(SessionReport, ExactlyRequiredBlueDiffersByEll) {
    Rng rng(2);
    std::vector<SessionData> sessions;
    for (int i = 0; i < 6; ++i) sessions.push_back(constructed_session(1, 1, 25, rng));
    for (int i = 0; i < 6; ++i) sessions.push_back(constructed_session(0, 0, 25, rng));
    const auto report = session_report(sessions, 15);
    EXPECT_EQ(report.sessions_per_condition.at("rooney"), 6u);
    EXPECT_EQ(report.window_bounds.at("rooney"), (std::pair<std::size_t, std::size_t>{11, 25}));

    auto mean_of = [&](const std::string& cond, const std::string& metric) {
        for (const auto& r : report.metrics) {
            if (r.condition == cond && r.metric == metric && r.pooling == Pooling::rounds) return r.summary->mean;
        }
        return -1.0;
    };
    EXPECT_EQ(mean_of("rooney", "num_blue_selected") - mean_of("control", "num_blue_selected"), 1.0);
    EXPECT_EQ(mean_of("rooney", "num_blue_over_required"), mean_of("control", "num_blue_over_required"));
    for (const auto& r : report.metrics) {
        if (r.metric == "num_blue_selected" && r.condition == "rooney") {
            EXPECT_EQ(r.summary->n, r.pooling == Pooling::rounds ? 90u : 6u);
        }
    }
    ASSERT_EQ(report.regressions.size(), 4u);
    EXPECT_TRUE(report.regressions[0].fit.has_value());
    const auto text = report.to_text();
    for (const auto& name : metric_names()) EXPECT_NE(text.find(name), std::string::npos) << name;
    EXPECT_NE(report.metrics_csv().find("rooney,participants,overlap_blue"), std::string::npos);
}

TEST(SessionReport, EmptyConditionGivesAbsentEntries) {
    Rng rng(5);
    std::vector<SessionData> sessions{constructed_session(0, 1, 10, rng), constructed_session(0, 2, 10, rng)};
    const auto report = session_report(sessions, 15);
    EXPECT_EQ(report.window_bounds.at("control"), (std::pair<std::size_t, std::size_t>{1, 10}));
    for (const auto& r : report.metrics) {
        if (r.condition == "rooney") {
            EXPECT_FALSE(r.summary.has_value());
        }
    }
    for (const auto& t : report.tests) {
        EXPECT_FALSE(t.test.has_value());
        EXPECT_FALSE(t.note.empty());
    }
    EXPECT_FALSE(report.regressions[2].fit.has_value());
    EXPECT_NO_THROW(report.to_text());
}
