#include "rooneysim/service/http.hpp"

#include <httplib.h>

namespace rooneysim::service {

int http_status(const std::string& kind) {
    if (kind == "count" || kind == "constraint" || kind == "duplicate" || kind == "invalid") return 422;
    if (kind == "bad-request") return 400;
    if (kind == "conflict" || kind == "precondition") return 409;
    if (kind == "not-found") return 404;
    if (kind == "gone") return 410;
    return 500;
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, const std::string& kind, const std::string& message) {
    reply(res, http_status(kind), {{"kind", kind}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        auto body = json::parse(req.body);
        if (!body.is_object()) throw ServiceError("bad-request", "request body must be a JSON object");
        return body;
    } catch (const json::exception& e) {
        throw ServiceError("bad-request", std::string("malformed JSON: ") + e.what());
    }
}

std::vector<int> tile_ids_of(const json& body) {
    const auto it = body.find("tile_ids");
    if (it == body.end() || !it->is_array()) throw ServiceError("bad-request", "tile_ids must be an array of integers");
    std::vector<int> ids;
    for (const auto& v : *it) {
        if (!v.is_number_integer()) throw ServiceError("bad-request", "tile_ids must be an array of integers");
        ids.push_back(v.get<int>());
    }
    return ids;
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const ServiceError& e) {
            reply_error(res, e.kind(), e.what());
        } catch (const ConfigError& e) {
            reply_error(res, "bad-request", e.what());
        } catch (const std::exception& e) {
            reply_error(res, "internal", e.what());
        }
    };
}

}  // namespace

HttpServer::HttpServer(ExperimentService& service, std::filesystem::path static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto& s = *server_;

    s.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
               const auto body = parse_body(req);
               std::string condition = "random";
               if (body.contains("condition")) {
                   if (!body["condition"].is_string()) throw ServiceError("bad-request", "condition must be a string");
                   condition = body["condition"].get<std::string>();
               }
               reply(res, 201, to_json(service_.create_session(condition)));
           }));

    s.Get(R"(/api/sessions/([0-9a-f]+)/round)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              reply(res, 200, to_json(service_.get_current_round(req.matches[1])));
          }));

    s.Post(R"(/api/sessions/([0-9a-f]+)/selection)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
               const auto body = parse_body(req);
               std::optional<std::size_t> round;
               if (body.contains("round_index") && !body["round_index"].is_null()) {
                   if (!body["round_index"].is_number_unsigned()) {
                       throw ServiceError("bad-request", "round_index must be a positive integer");
                   }
                   round = body["round_index"].get<std::size_t>();
               }
               const std::string id = req.matches[1];
               reply(res, 200, to_json(service_.submit_selection(id, tile_ids_of(body), round)));
           }));

    s.Get(R"(/api/sessions/([0-9a-f]+)/summary)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              reply(res, 200, to_json(service_.get_summary(req.matches[1])));
          }));

    s.Get("/api/demo", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(demo_payload(), "application/json");
    });

    s.Post("/api/demo/check", guarded([](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, {{"passed", check_demo(tile_ids_of(parse_body(req)))}});
           }));

    if (!static_dir.empty() && !s.set_mount_point("/", static_dir.string())) {
        throw ConfigError("static_dir: " + static_dir.string() + " is not a directory");
    }

    // Unmatched /api paths and missing static files.
    s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.status == 404 && res.body.empty()) reply_error(res, "not-found", "no such resource");
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = server_->bind_to_any_port(host);
        if (bound < 0) throw ConfigError("cannot bind " + host);
        return bound;
    }
    if (!server_->bind_to_port(host, port)) {
        throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace rooneysim::service
