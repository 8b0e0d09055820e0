#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rooneysim/core/selection.hpp"

namespace rooneysim::analysis {

struct TestResult {
    double statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
    std::pair<double, double> means;
    std::pair<double, double> sds;
    std::pair<std::size_t, std::size_t> sizes;
};

// Welch's unequal-variance t-test, two-sided. Throws DomainError when a
// sample has fewer than 2 values and StatisticsError when both variances are
// zero.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    double slope_t = 0.0;
    double intercept_t = 0.0;
    double slope_p = 1.0;
    double intercept_p = 1.0;
    double residual_se = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
    double df = 0.0;
};

// y = intercept + slope x by ordinary least squares with classical standard
// errors (df = n - 2). Throws DomainError for n < 3 or mismatched lengths and
// StatisticsError for a constant regressor.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

// One tile of an experiment round. Blue tiles are group X.
struct Tile {
    int id = 0;
    Group group = Group::X;
    double latent = 0.0;
    double observed = 0.0;
};

struct RoundData {
    std::size_t index = 0;  // 1-based
    std::vector<Tile> tiles;
    std::vector<int> selected;
};

// Analysis view of one participant's session.
struct SessionData {
    std::string session_id;
    std::size_t ell = 0;
    std::size_t k = 10;
    double beta = 2.0 / 3.0;
    std::vector<RoundData> rounds;
};

// Top k of {x_obs / beta} and {y_obs} under the usual tie-break.
// Throws DomainError unless beta lies in (0, 1].
Shortlist optimal_strategy_set(std::span<const double> x_observed, std::span<const double> y_observed,
                               double beta_true, std::size_t k);

struct SelectionMetrics {
    std::size_t num_blue_selected = 0;
    // num_blue_selected - ell; negative only for a non-compliant selection.
    double num_blue_over_required = 0.0;
    double latent_fraction_total = 0.0;
    double latent_fraction_blue = 0.0;
    double latent_fraction_red = 0.0;
    // |selection ∩ optimal| / k.
    double overlap_total = 0.0;
    // Selected blue (red) tiles in the optimal set over the blue (red) tiles
    // in the optimal set; NaN when the optimal set holds none of that color.
    double overlap_blue = 0.0;
    double overlap_red = 0.0;
    std::size_t overlap_count_blue = 0;
    std::size_t overlap_count_red = 0;
    double optimal_utility = 0.0;
    // Noise can push a selection above the optimal strategy utility.
    bool exceeds_optimal = false;
};

// Metrics of the round's selection against its optimal strategy set. Within a
// group, tiles are ranked by ascending id for tie-breaking. Throws
// DomainError when the selection size is not k or names an unknown tile and
// DegenerateRoundError when the optimal strategy utility is zero.
SelectionMetrics compute_selection_metrics(const RoundData& round, std::size_t ell, std::size_t k, double beta);

// Metric names in report order, and accessor by name.
const std::vector<std::string>& metric_names();
double metric_value(const SelectionMetrics& m, const std::string& name);

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
};

// How late-window values are aggregated before comparing conditions.
enum class Pooling { rounds, participants };
std::string to_string(Pooling pooling);

struct MetricRow {
    std::string condition;
    Pooling pooling = Pooling::rounds;
    std::string metric;
    std::optional<Summary> summary;
};

struct WelchRow {
    Pooling pooling = Pooling::rounds;
    std::string metric;
    std::optional<TestResult> test;
    std::string note;
};

struct RegressionRow {
    std::string condition;
    std::string outcome;
    std::optional<OlsFit> fit;
    std::string note;
};

struct SessionReport {
    std::size_t late_window = 15;
    std::map<std::string, std::size_t> sessions_per_condition;
    // Round indices (per condition) that fell inside the late window.
    std::map<std::string, std::pair<std::size_t, std::size_t>> window_bounds;
    std::vector<MetricRow> metrics;
    std::vector<WelchRow> tests;
    std::vector<RegressionRow> regressions;
    std::size_t rounds_exceeding_optimal = 0;

    std::string to_text() const;
    std::string metrics_csv() const;
    std::string tests_csv() const;
    std::string regressions_csv() const;
};

// "control" for ell == 0, "rooney" otherwise.
std::string condition_name(std::size_t ell);

// Late-window comparison of conditions (means/SDs of every metric for both
// poolings, Welch tests on every metric, rooney vs control) plus per-condition
// OLS of latent_fraction_total and overlap_total on the iteration over all
// rounds. A condition with no sessions yields absent entries.
SessionReport session_report(const std::vector<SessionData>& sessions, std::size_t late_window = 15);

}  // namespace rooneysim::analysis
