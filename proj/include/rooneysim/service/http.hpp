#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "rooneysim/service/service.hpp"

namespace httplib {
class Server;
}

namespace rooneysim::service {

// HTTP status for a ServiceError kind.
int http_status(const std::string& kind);

// JSON API over an ExperimentService:
//   POST /api/sessions                    {"condition": "random"|"rooney"|"control"}
//   GET  /api/sessions/{id}/round
//   POST /api/sessions/{id}/selection     {"tile_ids": [...], "round_index": t}
//   GET  /api/sessions/{id}/summary
//   GET  /api/demo
//   POST /api/demo/check                  {"tile_ids": [...]}
// Errors are {"kind", "message"}. When static_dir is set its files are
// served from "/".
class HttpServer {
public:
    HttpServer(ExperimentService& service, std::filesystem::path static_dir = {});
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void run();
    void stop();
    void wait_until_ready() const;

private:
    ExperimentService& service_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace rooneysim::service
