#include "rooneysim/analysis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "rooneysim/core/error.hpp"
#include "rooneysim/core/special.hpp"

namespace rooneysim::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

double t_of(double coef, double se) {
    if (se > 0.0) return coef / se;
    return coef == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), coef);
}

}  // namespace

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw DomainError("welch_t_test: each sample needs at least 2 values");
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = variance_of(a, ma);
    const double vb = variance_of(b, mb);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double qa = va / na;
    const double qb = vb / nb;
    if (!(qa + qb > 0.0)) throw StatisticsError("welch_t_test: both samples have zero variance");

    TestResult r;
    r.statistic = (ma - mb) / std::sqrt(qa + qb);
    r.degrees_of_freedom = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    r.p_value = special::student_t_two_sided_p(r.statistic, r.degrees_of_freedom);
    r.means = {ma, mb};
    r.sds = {std::sqrt(va), std::sqrt(vb)};
    r.sizes = {a.size(), b.size()};
    return r;
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("ols_fit: x and y differ in length");
    if (x.size() < 3) throw DomainError("ols_fit: at least 3 points are required");
    const double n = static_cast<double>(x.size());
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw StatisticsError("ols_fit: the regressor is constant (singular design)");

    OlsFit f;
    f.n = x.size();
    f.df = n - 2.0;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        sse += e * e;
    }
    const double s2 = sse / f.df;
    f.residual_se = std::sqrt(s2);
    f.slope_se = std::sqrt(s2 / sxx);
    f.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    f.slope_t = t_of(f.slope, f.slope_se);
    f.intercept_t = t_of(f.intercept, f.intercept_se);
    f.slope_p = special::student_t_two_sided_p(f.slope_t, f.df);
    f.intercept_p = special::student_t_two_sided_p(f.intercept_t, f.df);
    f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return f;
}

Shortlist optimal_strategy_set(std::span<const double> x_observed, std::span<const double> y_observed,
                               double beta_true, std::size_t k) {
    if (!(beta_true > 0.0 && beta_true <= 1.0)) throw DomainError("optimal_strategy_set: beta must lie in (0, 1]");
    std::vector<double> debiased(x_observed.begin(), x_observed.end());
    for (double& v : debiased) v /= beta_true;
    return select_shortlist(debiased, y_observed, k, 0);
}

SelectionMetrics compute_selection_metrics(const RoundData& round, std::size_t ell, std::size_t k, double beta) {
    if (round.selected.size() != k) throw DomainError("selection metrics: selection size differs from k");

    // Rank within each group by tile id so equal values resolve to lower ids.
    std::vector<const Tile*> blue;
    std::vector<const Tile*> red;
    for (const auto& t : round.tiles) (t.group == Group::X ? blue : red).push_back(&t);
    auto by_id = [](const Tile* a, const Tile* b) { return a->id < b->id; };
    std::sort(blue.begin(), blue.end(), by_id);
    std::sort(red.begin(), red.end(), by_id);

    std::unordered_map<int, CandidateRef> ref_of;
    std::vector<double> x_obs;
    std::vector<double> y_obs;
    std::vector<double> x_lat;
    std::vector<double> y_lat;
    for (std::size_t i = 0; i < blue.size(); ++i) {
        ref_of[blue[i]->id] = {Group::X, i};
        x_obs.push_back(blue[i]->observed);
        x_lat.push_back(blue[i]->latent);
    }
    for (std::size_t i = 0; i < red.size(); ++i) {
        ref_of[red[i]->id] = {Group::Y, i};
        y_obs.push_back(red[i]->observed);
        y_lat.push_back(red[i]->latent);
    }

    std::vector<CandidateRef> chosen;
    for (int id : round.selected) {
        const auto it = ref_of.find(id);
        if (it == ref_of.end()) throw DomainError("selection metrics: unknown tile id " + std::to_string(id));
        chosen.push_back(it->second);
    }
    const Shortlist selection(chosen);
    const Shortlist optimal = optimal_strategy_set(x_obs, y_obs, beta, k);

    SelectionMetrics m;
    m.optimal_utility = total_utility(optimal, x_lat, y_lat);
    if (!(m.optimal_utility > 0.0)) throw DegenerateRoundError("selection metrics: optimal strategy utility is zero");

    m.num_blue_selected = selection.count(Group::X);
    m.num_blue_over_required = static_cast<double>(m.num_blue_selected) - static_cast<double>(ell);
    const double lat_blue = group_utility(selection, Group::X, x_lat);
    const double lat_red = group_utility(selection, Group::Y, y_lat);
    m.latent_fraction_blue = lat_blue / m.optimal_utility;
    m.latent_fraction_red = lat_red / m.optimal_utility;
    m.latent_fraction_total = (lat_blue + lat_red) / m.optimal_utility;
    m.exceeds_optimal = lat_blue + lat_red > m.optimal_utility;

    for (const auto& ref : selection.members()) {
        if (!optimal.contains(ref)) continue;
        ++(ref.group == Group::X ? m.overlap_count_blue : m.overlap_count_red);
    }
    m.overlap_total = static_cast<double>(m.overlap_count_blue + m.overlap_count_red) / static_cast<double>(k);
    const std::size_t opt_blue = optimal.count(Group::X);
    const std::size_t opt_red = optimal.count(Group::Y);
    m.overlap_blue = opt_blue ? static_cast<double>(m.overlap_count_blue) / static_cast<double>(opt_blue) : kNaN;
    m.overlap_red = opt_red ? static_cast<double>(m.overlap_count_red) / static_cast<double>(opt_red) : kNaN;
    return m;
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {
        "num_blue_selected",   "num_blue_over_required", "latent_fraction_total", "latent_fraction_blue",
        "latent_fraction_red", "overlap_total",          "overlap_blue",          "overlap_red",
    };
    return names;
}

double metric_value(const SelectionMetrics& m, const std::string& name) {
    if (name == "num_blue_selected") return static_cast<double>(m.num_blue_selected);
    if (name == "num_blue_over_required") return m.num_blue_over_required;
    if (name == "latent_fraction_total") return m.latent_fraction_total;
    if (name == "latent_fraction_blue") return m.latent_fraction_blue;
    if (name == "latent_fraction_red") return m.latent_fraction_red;
    if (name == "overlap_total") return m.overlap_total;
    if (name == "overlap_blue") return m.overlap_blue;
    if (name == "overlap_red") return m.overlap_red;
    throw DomainError("unknown metric " + name);
}

std::string to_string(Pooling pooling) { return pooling == Pooling::rounds ? "rounds" : "participants"; }

std::string condition_name(std::size_t ell) { return ell == 0 ? "control" : "rooney"; }

namespace {

std::optional<Summary> summarize(const std::vector<double>& values) {
    std::vector<double> v;
    for (double x : values) {
        if (!std::isnan(x)) v.push_back(x);
    }
    if (v.empty()) return std::nullopt;
    Summary s;
    s.n = v.size();
    s.mean = mean_of(v);
    s.sd = v.size() > 1 ? std::sqrt(variance_of(v, s.mean)) : 0.0;
    return s;
}

std::vector<double> finite_only(const std::vector<double>& values) {
    std::vector<double> v;
    for (double x : values) {
        if (!std::isnan(x)) v.push_back(x);
    }
    return v;
}

std::string num(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// Per condition, per pooling, per metric: the late-window values.
using Values = std::map<std::string, std::map<Pooling, std::map<std::string, std::vector<double>>>>;

}  // namespace

SessionReport session_report(const std::vector<SessionData>& sessions, std::size_t late_window) {
    if (late_window == 0) throw DomainError("session_report: late window must be at least 1 round");
    SessionReport report;
    report.late_window = late_window;
    const std::vector<std::string> conditions = {"control", "rooney"};
    for (const auto& c : conditions) report.sessions_per_condition[c] = 0;

    Values late;
    std::map<std::string, std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>> series;

    for (const auto& s : sessions) {
        const std::string cond = condition_name(s.ell);
        ++report.sessions_per_condition[cond];
        const std::size_t total = s.rounds.size();
        const std::size_t first_late = total > late_window ? total - late_window + 1 : 1;
        auto& bounds = report.window_bounds[cond];
        if (bounds.first == 0 || first_late < bounds.first) bounds.first = first_late;
        bounds.second = std::max(bounds.second, total);

        std::map<std::string, std::vector<double>> per_session;
        for (std::size_t i = 0; i < total; ++i) {
            const auto& round = s.rounds[i];
            const auto m = compute_selection_metrics(round, s.ell, s.k, s.beta);
            if (m.exceeds_optimal) ++report.rounds_exceeding_optimal;
            const double t = static_cast<double>(i + 1);
            for (const char* outcome : {"latent_fraction_total", "overlap_total"}) {
                auto& [xs, ys] = series[cond][outcome];
                xs.push_back(t);
                ys.push_back(metric_value(m, outcome));
            }
            if (i + 1 < first_late) continue;
            for (const auto& name : metric_names()) {
                const double v = metric_value(m, name);
                late[cond][Pooling::rounds][name].push_back(v);
                per_session[name].push_back(v);
            }
        }
        for (const auto& name : metric_names()) {
            const auto avg = summarize(per_session[name]);
            late[cond][Pooling::participants][name].push_back(avg ? avg->mean : kNaN);
        }
    }

    for (Pooling pooling : {Pooling::rounds, Pooling::participants}) {
        for (const auto& cond : conditions) {
            for (const auto& name : metric_names()) {
                report.metrics.push_back({cond, pooling, name, summarize(late[cond][pooling][name])});
            }
        }
        for (const auto& name : metric_names()) {
            WelchRow row{pooling, name, std::nullopt, ""};
            const auto rooney = finite_only(late["rooney"][pooling][name]);
            const auto control = finite_only(late["control"][pooling][name]);
            try {
                row.test = welch_t_test(rooney, control);
            } catch (const Error& e) {
                row.note = e.what();
            }
            report.tests.push_back(row);
        }
    }

    for (const auto& cond : conditions) {
        for (const char* outcome : {"latent_fraction_total", "overlap_total"}) {
            RegressionRow row{cond, outcome, std::nullopt, ""};
            const auto& [xs, ys] = series[cond][outcome];
            try {
                row.fit = ols_fit(xs, ys);
            } catch (const Error& e) {
                row.note = e.what();
            }
            report.regressions.push_back(row);
        }
    }
    return report;
}

std::string SessionReport::metrics_csv() const {
    std::ostringstream os;
    os << "condition,pooling,metric,n,mean,sd\n";
    for (const auto& r : metrics) {
        os << r.condition << ',' << to_string(r.pooling) << ',' << r.metric << ',';
        if (r.summary) {
            os << r.summary->n << ',' << num(r.summary->mean) << ',' << num(r.summary->sd);
        } else {
            os << "0,,";
        }
        os << '\n';
    }
    return os.str();
}

std::string SessionReport::tests_csv() const {
    std::ostringstream os;
    os << "pooling,metric,n_rooney,n_control,mean_rooney,mean_control,sd_rooney,sd_control,t,df,p_value,note\n";
    for (const auto& r : tests) {
        os << to_string(r.pooling) << ',' << r.metric << ',';
        if (r.test) {
            const auto& t = *r.test;
            os << t.sizes.first << ',' << t.sizes.second << ',' << num(t.means.first) << ',' << num(t.means.second)
               << ',' << num(t.sds.first) << ',' << num(t.sds.second) << ',' << num(t.statistic) << ','
               << num(t.degrees_of_freedom) << ',' << num(t.p_value) << ',';
        } else {
            os << ",,,,,,,,,";
        }
        os << '"' << r.note << "\"\n";
    }
    return os.str();
}

std::string SessionReport::regressions_csv() const {
    std::ostringstream os;
    os << "condition,outcome,n,slope,slope_se,slope_t,slope_p,intercept,intercept_se,intercept_t,intercept_p,"
          "r_squared,note\n";
    for (const auto& r : regressions) {
        os << r.condition << ',' << r.outcome << ',';
        if (r.fit) {
            const auto& f = *r.fit;
            os << f.n << ',' << num(f.slope) << ',' << num(f.slope_se) << ',' << num(f.slope_t) << ','
               << num(f.slope_p) << ',' << num(f.intercept) << ',' << num(f.intercept_se) << ','
               << num(f.intercept_t) << ',' << num(f.intercept_p) << ',' << num(f.r_squared) << ',';
        } else {
            os << "0,,,,,,,,,,";
        }
        os << '"' << r.note << "\"\n";
    }
    return os.str();
}

namespace {

std::string fixed(double v, int digits = 4) {
    if (std::isnan(v)) return "-";
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string SessionReport::to_text() const {
    std::ostringstream os;
    os << "Sessions: control " << sessions_per_condition.at("control") << ", rooney "
       << sessions_per_condition.at("rooney") << "\n";
    os << "Late window: last " << late_window << " rounds";
    for (const auto& [cond, b] : window_bounds) os << "; " << cond << " rounds " << b.first << "-" << b.second;
    os << "\n";
    if (rounds_exceeding_optimal > 0) {
        os << "Rounds whose latent utility exceeds the optimal strategy utility: " << rounds_exceeding_optimal
           << " (not clamped)\n";
    }

    for (Pooling pooling : {Pooling::rounds, Pooling::participants}) {
        os << "\nMean (SD), pooled over " << (pooling == Pooling::rounds ? "(participant, round) pairs" : "participant averages")
           << "\n";
        os << pad("metric", 26) << pad("control", 22) << pad("rooney", 22) << "Welch t (df), p\n";
        for (const auto& name : metric_names()) {
            os << pad(name, 26);
            for (const char* cond : {"control", "rooney"}) {
                std::string cell = "-";
                for (const auto& r : metrics) {
                    if (r.pooling == pooling && r.metric == name && r.condition == cond && r.summary) {
                        cell = fixed(r.summary->mean) + " (" + fixed(r.summary->sd) + ")";
                    }
                }
                os << pad(cell, 22);
            }
            for (const auto& t : tests) {
                if (t.pooling != pooling || t.metric != name) continue;
                if (t.test) {
                    os << fixed(t.test->statistic, 2) << " (" << fixed(t.test->degrees_of_freedom, 1) << "), "
                       << (t.test->p_value < 0.001 ? std::string("<0.001") : fixed(t.test->p_value, 3));
                } else {
                    os << "n/a";
                }
            }
            os << "\n";
        }
    }

    os << "\nOLS on iteration t (all rounds)\n";
    os << pad("condition", 10) << pad("outcome", 24) << pad("slope", 12) << pad("SE", 12) << pad("t", 10) << "p\n";
    for (const auto& r : regressions) {
        os << pad(r.condition, 10) << pad(r.outcome, 24);
        if (r.fit) {
            os << pad(fixed(r.fit->slope, 5), 12) << pad(fixed(r.fit->slope_se, 5), 12)
               << pad(fixed(r.fit->slope_t, 2), 10) << fixed(r.fit->slope_p, 4);
        } else {
            os << "n/a";
        }
        os << "\n";
    }
    os << "\nMixed-effects models are not fitted; only OLS and Welch tests are reported.\n";
    return os.str();
}

}  // namespace rooneysim::analysis
