#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <variant>

#include "cli.hpp"
#include "rooneysim/montecarlo/montecarlo.hpp"
#include "rooneysim/service/bots.hpp"

namespace rooneysim::cli {

namespace {

bool non_negative_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

// Reads one JSON object, recording problems under its path instead of
// stopping at the first one.
class Reader {
public:
    Reader(const json* j, std::string path, std::vector<std::string>& problems)
        : j_(j), path_(std::move(path)), problems_(problems) {
        if (j_ && !j_->is_object()) {
            fail("", "expected an object");
            j_ = nullptr;
        }
    }

    ~Reader() {
        if (!j_) return;
        for (const auto& [key, _] : j_->items()) {
            if (!seen_.count(key)) fail(key, "unknown field");
        }
    }

    std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void fail(const std::string& key, const std::string& msg) {
        problems_.push_back((key.empty() ? path_ : path(key)) + ": " + msg);
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        if (!j_) return nullptr;
        const auto it = j_->find(key);
        return it == j_->end() ? nullptr : &*it;
    }

    Reader child(const std::string& key) { return Reader(find(key), path(key), problems_); }

    template <class T>
    void count(const std::string& key, T& out) {
        if (const auto* v = find(key)) {
            if (non_negative_integer(*v) && v->get<std::uint64_t>() <= std::numeric_limits<T>::max()) {
                out = static_cast<T>(v->get<std::uint64_t>());
            } else {
                fail(key, "expected a non-negative integer");
            }
        }
    }

    void integer(const std::string& key, int& out) {
        if (const auto* v = find(key)) {
            if (v->is_number_integer()) {
                out = v->get<int>();
            } else {
                fail(key, "expected an integer");
            }
        }
    }

    void real(const std::string& key, double& out) {
        if (const auto* v = find(key)) {
            if (v->is_number()) {
                out = v->get<double>();
            } else {
                fail(key, "expected a number");
            }
        }
    }

    void text(const std::string& key, std::string& out) {
        if (const auto* v = find(key)) {
            if (v->is_string()) {
                out = v->get<std::string>();
            } else {
                fail(key, "expected a string");
            }
        }
    }

    void flag(const std::string& key, bool& out) {
        if (const auto* v = find(key)) {
            if (v->is_boolean()) {
                out = v->get<bool>();
            } else {
                fail(key, "expected true or false");
            }
        }
    }

    template <class T>
    void list(const std::string& key, std::vector<T>& out) {
        const auto* v = find(key);
        if (!v) return;
        if (!v->is_array()) {
            fail(key, "expected an array");
            return;
        }
        std::vector<T> values;
        for (std::size_t i = 0; i < v->size(); ++i) {
            const auto& e = (*v)[i];
            const bool ok = std::is_floating_point_v<T> ? e.is_number() : non_negative_integer(e);
            if (!ok) {
                fail(key + "[" + std::to_string(i) + "]",
                     std::is_floating_point_v<T> ? "expected a number" : "expected a non-negative integer");
                return;
            }
            values.push_back(e.get<T>());
        }
        out = std::move(values);
    }

    bool present() const { return j_ != nullptr; }

private:
    const json* j_;
    std::string path_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

void read_utility(Reader r, UtilityDistribution& out) {
    if (!r.present()) return;
    std::string family = "uniform";
    r.text("family", family);
    try {
        if (family == "uniform") {
            double lo = 0.0, hi = 1.0;
            r.real("lo", lo);
            r.real("hi", hi);
            out = UtilityDistribution::uniform(lo, hi);
        } else if (family == "truncated_normal") {
            UtilityDistribution::TruncatedNormal p;
            r.real("location", p.location);
            r.real("scale", p.scale);
            r.real("lo", p.lo);
            r.real("hi", p.hi);
            out = UtilityDistribution(p);
        } else if (family == "truncated_power_law") {
            UtilityDistribution::TruncatedPowerLaw p;
            r.real("exponent", p.exponent);
            r.real("lo", p.lo);
            r.real("hi", p.hi);
            out = UtilityDistribution(p);
        } else {
            r.fail("family", "expected uniform, truncated_normal or truncated_power_law");
        }
    } catch (const ConfigError& e) {
        r.fail("", e.what());
    }
}

void read_bias(Reader r, BiasDistributionSpec& out) {
    if (!r.present()) return;
    std::string family = "beta";
    r.text("family", family);
    if (family == "beta") {
        out = BiasDistributionSpec::beta();
    } else if (family == "truncated_normal") {
        double scale = 0.1;
        r.real("scale", scale);
        try {
            out = BiasDistributionSpec::truncated_normal(scale);
        } catch (const ConfigError& e) {
            r.fail("scale", e.what());
        }
    } else {
        r.fail("family", "expected beta or truncated_normal");
    }
}

void read_update(Reader r, UpdateRuleSpec& out) {
    if (!r.present()) return;
    std::string rule = "ratio";
    r.text("rule", rule);
    double parameter = 1.0;
    r.real("parameter", parameter);
    try {
        if (rule == "ratio") {
            out = UpdateRuleSpec::ratio();
        } else if (rule == "affine") {
            out = UpdateRuleSpec::affine(parameter);
        } else if (rule == "power") {
            out = UpdateRuleSpec::power(parameter);
        } else {
            r.fail("rule", "expected ratio, affine or power");
        }
    } catch (const Error& e) {
        r.fail("parameter", e.what());
    }
}

json utility_to_json(const UtilityDistribution& d) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, UtilityDistribution::Uniform>) {
                return {{"family", "uniform"}, {"lo", p.lo}, {"hi", p.hi}};
            } else if constexpr (std::is_same_v<T, UtilityDistribution::TruncatedNormal>) {
                return {{"family", "truncated_normal"},
                        {"location", p.location},
                        {"scale", p.scale},
                        {"lo", p.lo},
                        {"hi", p.hi}};
            } else {
                return {{"family", "truncated_power_law"}, {"exponent", p.exponent}, {"lo", p.lo}, {"hi", p.hi}};
            }
        },
        d.kind());
}

json bias_to_json(const BiasDistributionSpec& s) {
    if (s.family() == BiasDistributionSpec::Family::truncated_normal) {
        return {{"family", "truncated_normal"}, {"scale", s.scale()}};
    }
    return {{"family", "beta"}};
}

json update_to_json(const UpdateRuleSpec& u) {
    switch (u.kind()) {
        case UpdateRuleSpec::Kind::affine:
            return {{"rule", "affine"}, {"parameter", u.parameter()}};
        case UpdateRuleSpec::Kind::power:
            return {{"rule", "power"}, {"parameter", u.parameter()}};
        default:
            return {{"rule", "ratio"}};
    }
}

void check_settings(const RunConfig& c, std::vector<std::string>& problems) {
    for (const auto& p : c.model.problems()) problems.push_back("model." + p);
    if (c.model.horizon == 0) problems.emplace_back("model.horizon: must be at least 1");
    for (std::size_t ell : c.simulate.ell_values) {
        ModelConfig m = c.model;
        m.ell = ell;
        if (!m.problems().empty()) problems.push_back("simulate.ell_values: " + std::to_string(ell) + " is not valid");
    }
    if (c.montecarlo.replicates < 2) problems.emplace_back("montecarlo.replicates: must be at least 2");
    try {
        mc::parse_axis(c.sweep.axis);
    } catch (const ConfigError& e) {
        problems.push_back(std::string("sweep.axis: ") + e.what());
    }
    for (std::size_t i = 0; i < c.probe.checkpoints.size(); ++i) {
        if (c.probe.checkpoints[i] == 0 || (i > 0 && c.probe.checkpoints[i] <= c.probe.checkpoints[i - 1])) {
            problems.emplace_back("probe.checkpoints: must be positive and strictly ascending");
            break;
        }
    }
    if (c.analyze.late_window == 0) problems.emplace_back("analyze.late_window: must be at least 1");
    if (c.service.port < 0 || c.service.port > 65535) problems.emplace_back("service.port: must lie in [0, 65535]");
    try {
        c.service.params.validate();
    } catch (const ConfigError& e) {
        problems.push_back(std::string("service.") + e.what());
    }
    if (c.bots.sessions == 0) problems.emplace_back("bots.sessions: must be at least 1");
    try {
        service::make_policy(c.bots.policy);
    } catch (const ConfigError& e) {
        problems.push_back(std::string("bots.policy: ") + e.what());
    }
    if (c.bots.condition != "random" && c.bots.condition != "rooney" && c.bots.condition != "control") {
        problems.emplace_back("bots.condition: expected random, rooney or control");
    }
}

}  // namespace

ModelConfig RunConfig::resolved_model() const {
    ModelConfig m = model;
    m.seed = seed;
    return m;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    std::vector<std::string> problems;
    {
        Reader root(&j, "", problems);
        root.count("seed", c.seed);
        {
            auto m = root.child("model");
            m.count("n", c.model.n);
            m.count("k", c.model.k);
            m.count("ell", c.model.ell);
            m.real("rho", c.model.rho);
            m.real("a1", c.model.a1);
            m.real("b", c.model.b);
            m.count("horizon", c.model.horizon);
            read_utility(m.child("utility"), c.model.utility_dist);
            read_bias(m.child("bias"), c.model.bias_dist);
            read_update(m.child("update"), c.model.update_rule);
        }
        root.child("simulate").list("ell_values", c.simulate.ell_values);
        {
            auto r = root.child("montecarlo");
            r.count("replicates", c.montecarlo.replicates);
            r.count("parallelism", c.montecarlo.parallelism);
        }
        {
            auto r = root.child("sweep");
            r.text("axis", c.sweep.axis);
            r.list("values", c.sweep.values);
        }
        root.child("verify").flag("assumptions", c.verify.assumptions);
        root.child("probe").list("checkpoints", c.probe.checkpoints);
        {
            auto r = root.child("analyze");
            r.text("log", c.analyze.log);
            r.text("summaries", c.analyze.summaries);
            r.count("late_window", c.analyze.late_window);
        }
        {
            auto r = root.child("service");
            r.text("host", c.service.host);
            r.integer("port", c.service.port);
            r.text("log_path", c.service.log_path);
            r.text("static_dir", c.service.static_dir);
            if (const auto* p = r.find("params")) {
                try {
                    c.service.params = service::params_from_json(*p);
                } catch (const ConfigError& e) {
                    problems.push_back(std::string("service.") + e.what());
                }
            }
        }
        {
            auto r = root.child("bots");
            r.count("sessions", c.bots.sessions);
            r.text("policy", c.bots.policy);
            r.text("condition", c.bots.condition);
            r.text("url", c.bots.url);
        }
    }
    check_settings(c, problems);
    if (!problems.empty()) {
        std::ostringstream os;
        os << "invalid configuration:";
        for (const auto& p : problems) os << "\n  " << p;
        throw ConfigError(os.str());
    }
    return c;
}

json config_to_json(const RunConfig& c) {
    return {
        {"seed", c.seed},
        {"model",
         {{"n", c.model.n},
          {"k", c.model.k},
          {"ell", c.model.ell},
          {"rho", c.model.rho},
          {"a1", c.model.a1},
          {"b", c.model.b},
          {"horizon", c.model.horizon},
          {"utility", utility_to_json(c.model.utility_dist)},
          {"bias", bias_to_json(c.model.bias_dist)},
          {"update", update_to_json(c.model.update_rule)}}},
        {"simulate", {{"ell_values", c.simulate.ell_values}}},
        {"montecarlo", {{"replicates", c.montecarlo.replicates}, {"parallelism", c.montecarlo.parallelism}}},
        {"sweep", {{"axis", c.sweep.axis}, {"values", c.sweep.values}}},
        {"verify", {{"assumptions", c.verify.assumptions}}},
        {"probe", {{"checkpoints", c.probe.checkpoints}}},
        {"analyze", {{"log", c.analyze.log}, {"summaries", c.analyze.summaries}, {"late_window", c.analyze.late_window}}},
        {"service",
         {{"host", c.service.host},
          {"port", c.service.port},
          {"log_path", c.service.log_path},
          {"static_dir", c.service.static_dir},
          {"params", service::params_to_json(c.service.params)}}},
        {"bots",
         {{"sessions", c.bots.sessions},
          {"policy", c.bots.policy},
          {"condition", c.bots.condition},
          {"url", c.bots.url}}},
    };
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("config file not found: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": malformed JSON: " + e.what());
    }
    return config_from_json(j);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace rooneysim::cli
