// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all
// selected criteria pass. Arguments restrict the run to the given numbers.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <httplib.h>

#include "rooneysim/analysis/analysis.hpp"
#include "rooneysim/bounds/bounds.hpp"
#include "rooneysim/core/special.hpp"
#include "rooneysim/dynamics/dynamics.hpp"
#include "rooneysim/montecarlo/montecarlo.hpp"
#include "rooneysim/service/bots.hpp"
#include "rooneysim/service/http.hpp"

using namespace rooneysim;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

mc::Options parallel() {
    mc::Options o;
    o.parallelism = workers();
    return o;
}

Outcome selection_oracle() {
    const auto start = Clock::now();
    Rng rng(derive_seed(20240601, 1));
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 2 + rng.below(11);
        const std::size_t nx = 1 + rng.below(n - 1);
        const std::size_t k = 1 + rng.below(std::min<std::size_t>(5, n));
        const std::size_t ell = rng.below(std::min(k, nx) + 1);
        std::vector<double> x(nx), y(n - nx);
        for (auto& v : x) v = rng.uniform();
        for (auto& v : y) v = rng.uniform();
        mismatches += !(select_shortlist(x, y, k, ell) == brute_force_shortlist(x, y, k, ell));
    }
    const double elapsed = seconds_since(start);
    return {mismatches == 0 && elapsed < 10.0,
            "1000 instances, " + std::to_string(mismatches) + " mismatches, " + fmt(elapsed, 3) + " s (limit 10 s)"};
}

ModelConfig random_config(Rng& rng, std::uint64_t seed) {
    ModelConfig c;
    c.n = 2 + rng.below(199);
    c.rho = 0.05 + 0.9 * rng.uniform();
    if (c.n_x() < 1 || c.n_y() < 1) c.rho = 0.5;
    c.k = 1 + rng.below(std::min<std::size_t>(c.n, 12));
    c.ell = rng.below(std::min(c.k, c.n_x()) + 1);
    c.a1 = 1.05 + 9.0 * rng.uniform();
    c.b = 1.05 + 9.0 * rng.uniform();
    switch (rng.below(3)) {
        case 0: c.utility_dist = UtilityDistribution::uniform(0.0, 1.0 + 99.0 * rng.uniform()); break;
        case 1: c.utility_dist = UtilityDistribution::truncated_normal(0.5, 0.05 + 0.5 * rng.uniform(), 0.0, 1.0); break;
        default: c.utility_dist = UtilityDistribution::truncated_power_law(1.0 + 2.0 * rng.uniform(), 1.0, 50.0); break;
    }
    switch (rng.below(3)) {
        case 0: c.update_rule = UpdateRuleSpec::ratio(); break;
        case 1: c.update_rule = UpdateRuleSpec::affine(0.1 + 0.9 * rng.uniform()); break;
        default: c.update_rule = UpdateRuleSpec::power(0.1 + 0.9 * rng.uniform()); break;
    }
    c.horizon = 100;
    c.seed = seed;
    return c;
}

Outcome dynamics_invariants() {
    Rng rng(derive_seed(20240601, 2));
    std::size_t rounds = 0, violations = 0, configs = 0;
    double worst = 0.0;
    while (rounds < 100000) {
        const auto config = random_config(rng, derive_seed(20240601, 1000 + configs++));
        const auto trajectory = run_trajectory(config);
        double previous_a = config.a1;
        for (const auto& r : trajectory.rounds) {
            ++rounds;
            const double rel = std::abs((1.0 + r.delta) * r.u_observed - r.u_latent) / r.u_latent;
            worst = std::max(worst, rel);
            const bool ok = r.u_latent >= r.u_observed && r.delta >= 0.0 && rel <= 1e-9 &&
                            r.a_before == previous_a && r.a_after >= r.a_before;
            violations += !ok;
            previous_a = r.a_after;
        }
    }
    return {violations == 0, std::to_string(rounds) + " rounds over " + std::to_string(configs) + " configs, " +
                                 std::to_string(violations) + " violations, max |(1+delta)U_obs - U|/U = " +
                                 fmt(worst, 3)};
}

ModelConfig lower_bound_config(std::size_t n) {
    ModelConfig c;
    c.a1 = 2.0;
    c.b = 2.0;
    c.rho = 0.25;
    c.k = 5;
    c.ell = 1;
    c.n = n;
    c.horizon = 50;
    c.seed = 31;
    return c;
}

Outcome lower_bound_validity() {
    const auto start = Clock::now();
    mc::Options single;
    single.parallelism = 1;
    const auto cmp = mc::compare_bounds(lower_bound_config(100), 5000, single);
    const double elapsed = seconds_since(start);
    std::size_t unsatisfied = 0;
    double slack = INFINITY;
    for (const auto& r : cmp.rows) {
        unsatisfied += !r.satisfied;
        if (r.bound_lower) slack = std::min(slack, r.mean_beta + r.ci_halfwidth - *r.bound_lower);
    }
    return {unsatisfied == 0 && cmp.rows.size() == 50 && elapsed < 300.0,
            std::to_string(cmp.rows.size() - unsatisfied) + "/" + std::to_string(cmp.rows.size()) +
                " iterations satisfied, min(mean + CI - lower) = " + fmt(slack, 4) + ", " + fmt(elapsed, 3) +
                " s single-threaded (limit 300 s)"};
}

Outcome lower_bound_n_independence() {
    const auto sweep = mc::sweep(lower_bound_config(100), mc::Axis::n, {50, 200, 1000}, 2000, parallel());
    std::vector<mc::BiasEstimate> last;
    for (const auto& p : sweep.points) last.push_back(p.estimates.back());
    bool overlap = true;
    for (std::size_t i = 0; i < last.size(); ++i) {
        for (std::size_t j = i + 1; j < last.size(); ++j) {
            overlap &= std::abs(last[i].mean_beta - last[j].mean_beta) <= last[i].ci_halfwidth + last[j].ci_halfwidth;
        }
    }
    std::string detail = "t=50:";
    for (std::size_t i = 0; i < last.size(); ++i) {
        detail += " n=" + fmt(sweep.points[i].value) + " " + fmt(last[i].mean_beta, 4) + "+/-" +
                  fmt(last[i].ci_halfwidth, 3);
    }
    return {overlap && last.size() == 3, detail};
}

Outcome upper_bound_contrast() {
    ModelConfig base;
    base.ell = 0;
    base.a1 = 2.0;
    base.b = 2.0;
    base.rho = 0.5;
    base.k = 5;
    base.horizon = 25;
    base.seed = 47;
    std::vector<mc::Comparison> comparisons;
    std::size_t checked = 0, violations = 0;
    for (std::size_t n : {100, 2000}) {
        ModelConfig c = base;
        c.n = n;
        comparisons.push_back(mc::compare_bounds(c, 2000, parallel()));
        for (const auto& r : comparisons.back().rows) checked += r.checked();
        violations += comparisons.back().violations();
    }
    const auto& small = comparisons[0].rows.back();
    const auto& large = comparisons[1].rows.back();
    const bool disjoint = large.mean_beta + large.ci_halfwidth < small.mean_beta - small.ci_halfwidth;
    return {disjoint && violations == 0,
            "t=25: n=2000 " + fmt(large.mean_beta, 4) + "+/-" + fmt(large.ci_halfwidth, 3) + " vs n=100 " +
                fmt(small.mean_beta, 4) + "+/-" + fmt(small.ci_halfwidth, 3) +
                (disjoint ? " (disjoint)" : " (intervals overlap)") + "; upper bound checked at " +
                std::to_string(checked) + " (n, t) points, " + std::to_string(violations) + " violations"};
}

Outcome asymptotic_probe() {
    const auto start = Clock::now();
    ModelConfig c;
    c.ell = 0;
    c.n = 20;
    c.k = 2;
    c.rho = 0.5;
    c.a1 = 2.0;
    c.b = 2.0;
    c.seed = 53;
    const auto probe = mc::long_horizon_probe(c, 200, {100, 10000}, parallel());
    const double elapsed = seconds_since(start);
    const auto& a = probe.estimates.front();
    const auto& b = probe.estimates.back();
    return {probe.first_last_disjoint && b.mean_beta > a.mean_beta && elapsed < 600.0,
            "t=100 " + fmt(a.mean_beta, 4) + "+/-" + fmt(a.ci_halfwidth, 3) + ", t=10000 " + fmt(b.mean_beta, 4) +
                "+/-" + fmt(b.ci_halfwidth, 3) + ", " + fmt(elapsed, 3) + " s (limit 600 s)"};
}

Outcome distribution_fidelity() {
    constexpr std::size_t draws = 1000000;
    const auto spec = BiasDistributionSpec::beta();
    Rng rng(derive_seed(20240601, 7));
    std::vector<double> samples(draws);
    const BeliefState b23{2.0, 3.0, false};
    for (auto& s : samples) s = spec.sample(b23, rng);
    double sum = 0.0;
    for (double s : samples) sum += s;
    const double mean = sum / draws;
    std::nth_element(samples.begin(), samples.begin() + draws / 2, samples.end());
    const double median = samples[draws / 2];

    const BeliefState b32{3.0, 2.0, false};
    double inv = 0.0;
    for (std::size_t i = 0; i < draws; ++i) inv += 1.0 / spec.sample(b32, rng);
    inv /= draws;
    const bool ok = std::abs(mean - 0.4) < 0.002 && median <= 0.405 && std::abs(inv - 2.0) < 0.01;
    return {ok, "Beta(2,3) mean " + fmt(mean, 6) + ", median " + fmt(median, 6) + "; E[1/beta] at (3,2) " +
                    fmt(inv, 6) + " (closed form " + fmt(spec.inverse_moment(b32), 6) + ")"};
}

Outcome scale_invariance() {
    // Integer-valued latents make the x100 rescaling exact, so any difference
    // would come from the computation rather than from rounding the inputs.
    ModelConfig c;
    c.n = 100;
    c.k = 5;
    c.ell = 1;
    c.rho = 0.25;
    Rng rng(derive_seed(20240601, 8));
    std::size_t identical = 0;
    double generic_worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const BeliefState state{1.5 + 8.0 * rng.uniform(), 2.0, false};
        std::vector<double> x(c.n_x()), y(c.n_y());
        for (auto& v : x) v = static_cast<double>(rng.below(1u << 20));
        for (auto& v : y) v = static_cast<double>(rng.below(1u << 20));
        const double beta = sample_beta(2.0, 2.0, rng);
        const auto base = resolve_round(state, x, y, beta, c);
        auto xs = x, ys = y;
        for (auto& v : xs) v *= 100.0;
        for (auto& v : ys) v *= 100.0;
        const auto scaled = resolve_round(state, xs, ys, beta, c);
        identical += base.shortlist == scaled.shortlist && base.delta == scaled.delta && base.a_after == scaled.a_after;

        // Same round with non-integer latents, where x100 itself rounds.
        std::vector<double> xf(x.size()), yf(y.size());
        for (auto& v : xf) v = rng.uniform();
        for (auto& v : yf) v = rng.uniform();
        const auto fb = resolve_round(state, xf, yf, beta, c);
        for (auto& v : xf) v *= 100.0;
        for (auto& v : yf) v *= 100.0;
        const auto fs = resolve_round(state, xf, yf, beta, c);
        if (fb.delta > 0) generic_worst = std::max(generic_worst, std::abs(fb.delta - fs.delta) / fb.delta);
    }
    return {identical == 100, std::to_string(identical) +
                                  "/100 rounds bit-identical (shortlist, delta, a'); with non-integer latents the "
                                  "largest relative delta change is " +
                                  fmt(generic_worst, 3)};
}

Outcome statistics_fixtures() {
    const std::vector<double> a{1, 2, 3}, b{2, 4, 6};
    const auto w = analysis::welch_t_test(a, b);
    const double t_ref = -2.0 / std::sqrt(5.0 / 3.0);
    const double df_ref = 50.0 / 17.0;
    const bool welch_ok = std::abs(w.statistic - t_ref) < 1e-6 && std::abs(w.degrees_of_freedom - df_ref) < 1e-6;

    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(i);
        y.push_back(2.0 * i);
    }
    const auto fit = analysis::ols_fit(x, y);
    const bool ols_ok = fit.slope == 2.0 && fit.intercept == 0.0;

    using HP = boost::multiprecision::cpp_bin_float_50;
    const std::vector<std::pair<double, double>> points{{0.5, 1},  {-1.549193338482967, 2.9411764705882353},
                                                        {2.0, 3},  {1.96, 10},
                                                        {3.5, 5.5}, {-0.1, 30},
                                                        {8.2, 1800}, {9.5, 1151},
                                                        {2.5, 120}, {0.0, 7}};
    double worst = 0.0;
    for (const auto& [t, df] : points) {
        boost::math::students_t_distribution<HP> dist{HP(df)};
        const HP p = 2 * boost::math::cdf(dist, HP(-std::abs(t)));
        worst = std::max(worst, std::abs(special::student_t_two_sided_p(t, df) - static_cast<double>(p)));
    }
    return {welch_ok && ols_ok && worst <= 1e-8,
            "Welch t " + fmt(w.statistic, 10) + " df " + fmt(w.degrees_of_freedom, 10) + "; OLS slope " +
                fmt(fit.slope, 17) + " intercept " + fmt(fit.intercept, 17) + "; max p-value error " +
                fmt(worst, 3) + " over 10 points"};
}

Outcome service_contract() {
    namespace fs = std::filesystem;
    const fs::path log = fs::temp_directory_path() / "rooneysim_acceptance_service.jsonl";
    fs::remove(log);
    std::vector<std::string> failures;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    };

    service::ServiceConfig config;
    config.seed = 2024;
    config.log_path = log;
    service::ExperimentService svc(config);
    require(svc.config().params == service::ExperimentParams{}, "defaults");
    service::HttpServer server(svc);
    const int port = server.bind("127.0.0.1", 0);
    std::thread thread([&] { server.run(); });
    server.wait_until_ready();
    httplib::Client http("127.0.0.1", port);

    std::size_t payloads = 0, leaks = 0;
    auto fetch = [&](const httplib::Result& res) {
        if (!res) throw Error("HTTP request failed");
        return service::json::parse(res->body);
    };

    // A scripted bot plays a rooney session over HTTP.
    const auto created = http.Post("/api/sessions", R"({"condition":"rooney"})", "application/json");
    ++payloads;
    leaks += created->body.find("latent") != std::string::npos;
    const auto descriptor = service::descriptor_from_json(fetch(created));
    const std::string base = "/api/sessions/" + descriptor.session_id;
    require(descriptor.total_rounds == 25 && descriptor.ell == 1 && descriptor.k == 10, "descriptor");

    // All-red submission is rejected without touching state.
    {
        const auto before = http.Get(base + "/round");
        const auto view = service::round_view_from_json(fetch(before));
        std::vector<int> red;
        for (const auto& t : view.tiles) {
            if (t.color == "red" && red.size() < 10) red.push_back(t.id);
        }
        const auto records = svc.log().records().size();
        const auto rejected =
            http.Post(base + "/selection", service::json{{"tile_ids", red}}.dump(), "application/json");
        const auto error = fetch(rejected);
        require(rejected->status == 422 && error.value("kind", "") == "constraint", "constraint rejection");
        require(http.Get(base + "/round")->body == before->body, "state unchanged after rejection");
        require(svc.log().records().size() == records, "no log record for rejection");
    }

    service::GreedyPolicy bot;
    long long cumulative = 0;
    for (std::size_t t = 1; t <= 25; ++t) {
        const auto res = http.Get(base + "/round");
        ++payloads;
        leaks += res->body.find("latent") != std::string::npos;
        const auto view = service::round_view_from_json(fetch(res));
        const auto ids = bot.choose(descriptor, view);
        const auto submitted = http.Post(base + "/selection",
                                         service::json{{"tile_ids", ids}, {"round_index", t}}.dump(), "application/json");
        require(submitted->status == 200, "round " + std::to_string(t) + " accepted");
        cumulative = service::submit_result_from_json(fetch(submitted)).cumulative_points;
    }
    const auto summary = service::summary_from_json(fetch(http.Get(base + "/summary")));
    require(summary.completed && summary.rounds.size() == 25, "25-round session completed");
    require(summary.cumulative_points == cumulative, "summary score");
    require(leaks == 0, std::to_string(leaks) + " pre-submit payloads with latent values");

    // Forty more sessions with random assignment, then the report.
    service::InProcessClient local(svc);
    std::vector<analysis::SessionData> sessions;
    for (int i = 0; i < 40; ++i) {
        service::LearnerPolicy learner;
        sessions.push_back(service::run_bot_session(local, learner, "random").to_analysis());
    }
    server.stop();
    thread.join();

    const auto replayed = service::replay_log(log);
    const auto it = std::find_if(replayed.begin(), replayed.end(), [&](const auto& s) {
        return s.descriptor.session_id == descriptor.session_id;
    });
    require(replayed.size() == 41, "log holds 41 sessions");
    require(it != replayed.end() && it->cumulative_points == cumulative, "replayed score matches");

    const auto report = analysis::session_report(sessions);
    std::size_t metric_cells = 0, test_cells = 0, fits = 0;
    for (const auto& row : report.metrics) metric_cells += row.summary.has_value();
    for (const auto& row : report.tests) test_cells += row.test.has_value() || !row.note.empty();
    for (const auto& row : report.regressions) fits += row.fit.has_value();
    const std::size_t metrics = analysis::metric_names().size();
    require(metric_cells == 2 * 2 * metrics, "summaries for every metric, condition and pooling");
    require(test_cells == 2 * metrics, "Welch row for every metric and pooling");
    require(fits == 4, "OLS trends for both conditions");
    fs::remove(log);

    std::string detail = "25-round HTTP session score " + std::to_string(cumulative) + ", " +
                         std::to_string(payloads) + " pre-submit payloads checked, replay matches; report on " +
                         std::to_string(sessions.size()) + " bot sessions (control " +
                         std::to_string(report.sessions_per_condition.count("control")
                                            ? report.sessions_per_condition.at("control")
                                            : 0) +
                         ", rooney " +
                         std::to_string(report.sessions_per_condition.count("rooney")
                                            ? report.sessions_per_condition.at("rooney")
                                            : 0) +
                         ") covers " + std::to_string(metrics) + " metrics";
    for (const auto& f : failures) detail += "; failed: " + f;
    return {failures.empty(), detail};
}

struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "selection oracle equivalence", selection_oracle},
        {2, "dynamics invariants", dynamics_invariants},
        {3, "rooney lower bound holds", lower_bound_validity},
        {4, "rooney bound n-independence", lower_bound_n_independence},
        {5, "no-rooney contrast and upper bound", upper_bound_contrast},
        {6, "asymptotic learning probe", asymptotic_probe},
        {7, "distribution fidelity", distribution_fidelity},
        {8, "scale invariance", scale_invariance},
        {9, "statistics fixtures", statistics_fixtures},
        {10, "service contract", service_contract},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.number)) continue;
        const auto start = Clock::now();
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failed += !outcome.passed;
        std::cout << (outcome.passed ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.name
                  << "): " << outcome.detail << " [" << fmt(seconds_since(start), 3) << " s]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
