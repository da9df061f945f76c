#include "vusage/http_server.hpp"

#include <httplib.h>

#include <spdlog/spdlog.h>

namespace vusage {

using nlohmann::json;

namespace {

void send(httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(HeatmapService& service, ServiceSettings settings)
    : service_(service),
      settings_(std::move(settings)),
      server_(std::make_unique<httplib::Server>()),
      limiter_(settings_.rate_limit_per_s, settings_.rate_limit_burst) {
    install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
    httplib::Server& svr = *server_;

    svr.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        if (!limiter_.allow(req.remote_addr)) {
            res.status = 429;
            res.set_content(json{{"error", "rate limit exceeded"}}.dump(), "application/json");
            return httplib::Server::HandlerResponse::Handled;
        }
        return httplib::Server::HandlerResponse::Unhandled;
    });
    svr.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", settings_.cors_origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    svr.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    svr.Post(R"(/api/v1/videos/([A-Za-z0-9._-]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, service_.ingest(req.matches[1], req.body));
    });
    svr.Get(R"(/api/v1/videos/([A-Za-z0-9._-]+)/heatmap)", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, service_.heatmap(req.matches[1]));
    });
    svr.Get("/api/v1/videos", [this](const httplib::Request&, httplib::Response& res) {
        send(res, service_.list_videos());
    });
    svr.Post("/api/v1/recompute", [this](const httplib::Request& req, httplib::Response& res) {
        Date as_of = service_.zone().local_date(std::chrono::time_point_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now()));
        if (req.has_param("as_of")) {
            try {
                as_of = parse_date(req.get_param_value("as_of"));
            } catch (const std::invalid_argument& e) {
                send(res, {400, json{{"error", e.what()}}});
                return;
            }
        }
        json videos = json::array();
        for (const auto& o : service_.nightly_recompute(as_of)) {
            json entry{{"video", o.video_id}, {"ok", o.ok}, {"events", o.events}};
            if (!o.ok) entry["error"] = o.error;
            videos.push_back(std::move(entry));
        }
        send(res, {200, json{{"as_of", format_date(as_of)}, {"videos", videos}}});
    });

    if (settings_.static_dir) {
        if (!svr.set_mount_point("/", settings_.static_dir->string())) {
            spdlog::warn("static directory {} not found; UI assets not served", settings_.static_dir->string());
        }
    }
}

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = server_->bind_to_any_port(host);
        if (bound < 0) throw std::runtime_error("could not bind " + host);
        return bound;
    }
    if (!server_->bind_to_port(host, port)) {
        throw std::runtime_error("could not bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

int HttpServer::start(const std::string& host, int port) {
    const int bound = bind(host, port);
    serve_thread_ = std::thread([this] { serve(); });
    server_->wait_until_ready();
    return bound;
}

void HttpServer::stop() {
    {
        std::lock_guard lock(scheduler_mutex_);
        stopping_ = true;
    }
    scheduler_cv_.notify_all();
    if (scheduler_thread_.joinable()) scheduler_thread_.join();
    if (server_) server_->stop();
    if (serve_thread_.joinable()) serve_thread_.join();
}

void HttpServer::interrupt() { server_->stop(); }

void HttpServer::start_midnight_scheduler() {
    scheduler_thread_ = std::thread([this] {
        using namespace std::chrono;
        std::unique_lock lock(scheduler_mutex_);
        while (!stopping_) {
            const auto now = time_point_cast<milliseconds>(system_clock::now());
            const Date today = service_.zone().local_date(now);
            const Timestamp next_midnight = service_.zone().start_of_day(today + days{1});
            spdlog::info("next scheduled recompute at {}", format_rfc3339(next_midnight));
            if (scheduler_cv_.wait_until(lock, next_midnight, [this] { return stopping_; })) break;
            lock.unlock();
            service_.nightly_recompute(today);
            lock.lock();
        }
    });
}

}  // namespace vusage
