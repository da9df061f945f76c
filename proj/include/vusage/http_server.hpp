#pragma once

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "vusage/config.hpp"
#include "vusage/service.hpp"

namespace httplib {
class Server;
}

namespace vusage {

/// HTTP front end for HeatmapService:
///
///   POST /api/v1/videos/{id}/events     202 {accepted, rejected}
///   GET  /api/v1/videos/{id}/heatmap    200 {video, duration_s, as_of, scores}
///   GET  /api/v1/videos                 200 [VideoMeta...]
///   POST /api/v1/recompute?as_of=DATE   200 {as_of, videos}
///
/// plus CORS headers, per-address rate limiting (429) and, optionally, static
/// UI assets mounted at `/`.
class HttpServer {
public:
    HttpServer(HeatmapService& service, ServiceSettings settings);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and returns the port (port 0 picks a free one).
    int bind(const std::string& host, int port);
    /// Serves until stop(); blocks.
    void serve();
    /// bind + serve on a background thread; returns the bound port.
    int start(const std::string& host, int port);
    void stop();
    /// Makes serve() return; safe to call from a signal handler context.
    void interrupt();

    /// Recompute at every local midnight (in the service's zone) for the day
    /// that just ended.
    void start_midnight_scheduler();

private:
    void install_routes();

    HeatmapService& service_;
    ServiceSettings settings_;
    std::unique_ptr<httplib::Server> server_;
    RateLimiter limiter_;
    std::thread serve_thread_;

    std::mutex scheduler_mutex_;
    std::condition_variable scheduler_cv_;
    bool stopping_ = false;
    std::thread scheduler_thread_;
};

}  // namespace vusage
