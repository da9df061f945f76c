// vusage: drive the usage-heatmap pipeline from the command line.
//
//   vusage [--data-dir DIR] [--config FILE] [--seed N] [--tz ZONE] <command>
//
//   simulate   generate a synthetic cohort into the data directory
//   recompute  rebuild every video's snapshot as of a date
//   stats      usage summary over the stored logs
//   export     write one video's scores as CSV or JSON
//   serve      run the HTTP service

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "vusage/config.hpp"
#include "vusage/export.hpp"
#include "vusage/http_server.hpp"
#include "vusage/recompute.hpp"
#include "vusage/simulator.hpp"
#include "vusage/stats.hpp"
#include "vusage/store.hpp"

namespace {

using namespace vusage;

std::atomic<HttpServer*> g_server{nullptr};

void on_signal(int) {
    if (auto* s = g_server.load()) s->interrupt();
}

Date today_in(const ReportingZone& zone) {
    return zone.local_date(std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Usage-based heatmaps for learning videos"};
    app.require_subcommand(1);

    std::string data_dir = "data";
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> tz;
    app.add_option("--data-dir", data_dir, "Data directory")->capture_default_str();
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "Simulator seed");
    app.add_option("--tz", tz, "Reporting time zone (UTC, +HH:MM or IANA name)");

    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic cohort");
    std::optional<int> students, days;
    std::optional<std::string> start_date;
    int sync_videos = 11, async_videos = 53;
    simulate_cmd->add_option("--students", students, "Number of students");
    simulate_cmd->add_option("--days", days, "Number of days");
    simulate_cmd->add_option("--start-date", start_date, "First simulated day (YYYY-MM-DD)");
    simulate_cmd->add_option("--sync-videos", sync_videos, "Lecture recordings in a generated catalog")
        ->capture_default_str();
    simulate_cmd->add_option("--async-videos", async_videos, "Screencasts in a generated catalog")
        ->capture_default_str();

    auto* recompute_cmd = app.add_subcommand("recompute", "Recompute all snapshots");
    std::optional<std::string> as_of;
    recompute_cmd->add_option("--as-of", as_of, "Include events up to this date (default: today)");

    auto* stats_cmd = app.add_subcommand("stats", "Usage statistics over stored logs");
    std::optional<std::string> stats_up_to;
    stats_cmd->add_option("--up-to", stats_up_to, "Only events up to this date");

    auto* export_cmd = app.add_subcommand("export", "Export a video's latest snapshot");
    std::string export_video, export_format = "csv", export_which = "normalized", export_out;
    export_cmd->add_option("--video", export_video, "Video id")->required();
    export_cmd->add_option("--format", export_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    export_cmd->add_option("--which", export_which, "raw or normalized")
        ->check(CLI::IsMember({"raw", "normalized"}))
        ->capture_default_str();
    export_cmd->add_option("--out", export_out, "Output file (default: stdout)");

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    std::optional<int> port;
    std::optional<std::string> static_dir;
    std::string host = "0.0.0.0";
    bool no_scheduler = false;
    serve_cmd->add_option("--port", port, "Listen port (default 8080)");
    serve_cmd->add_option("--host", host, "Listen address")->capture_default_str();
    serve_cmd->add_option("--static-dir", static_dir, "Directory of UI assets to serve at /");
    serve_cmd->add_flag("--no-scheduler", no_scheduler, "Disable the midnight recompute");

    CLI11_PARSE(app, argc, argv);

    try {
        AppConfig cfg = config_path.empty() ? AppConfig{} : load_app_config(config_path);
        if (seed) cfg.simulation.seed = *seed;
        if (tz) cfg.service.tz = *tz;
        const ReportingZone zone = ReportingZone::parse(cfg.service.tz);
        Store store(data_dir);

        if (*simulate_cmd) {
            SimulationParams params = cfg.simulation;
            if (students) params.students = *students;
            if (days) params.days = *days;
            if (start_date) params.start_date = parse_date(*start_date);
            auto catalog = store.catalog();
            if (catalog.empty()) {
                catalog = course_catalog(sync_videos, async_videos, params.start_date);
                store.put_videos(catalog);
            }
            const auto events = simulate(catalog, params);
            store.append_events(events);
            std::cout << "simulated " << events.size() << " events for " << params.students << " students over "
                      << params.days << " days (" << catalog.size() << " videos)\n";
        } else if (*recompute_cmd) {
            const Date date = as_of ? parse_date(*as_of) : today_in(zone);
            const auto t0 = std::chrono::steady_clock::now();
            const auto outcomes = recompute_all(store, cfg.scoring, zone, date);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::size_t failed = 0, events = 0;
            for (const auto& o : outcomes) {
                events += o.events;
                if (!o.ok) ++failed;
            }
            std::cout << "recomputed " << outcomes.size() - failed << "/" << outcomes.size() << " videos ("
                      << events << " events) as of " << format_date(date) << " in " << secs << " s\n";
            return failed == 0 ? 0 : 1;
        } else if (*stats_cmd) {
            const auto catalog = store.catalog();
            std::vector<PlaybackEvent> events;
            std::optional<Date> up_to;
            if (stats_up_to) up_to = parse_date(*stats_up_to);
            for (const auto& meta : catalog) {
                auto v = store.load_events(meta.video_id, up_to, zone);
                std::move(v.begin(), v.end(), std::back_inserter(events));
            }
            std::cout << stats_to_json(compute_stats(events, catalog)).dump(2) << "\n";
        } else if (*export_cmd) {
            if (!store.find_video(export_video)) throw std::runtime_error("unknown video '" + export_video + "'");
            const Snapshot snap = store.load_snapshot(export_video);
            const std::string text =
                export_scores(snap, export_format == "csv" ? ExportFormat::csv : ExportFormat::json,
                              export_which == "raw" ? ScoreSeries::raw : ScoreSeries::normalized);
            if (export_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream(export_out) << text;
            }
        } else if (*serve_cmd) {
            ServiceSettings settings = cfg.service;
            if (port) settings.port = *port;
            if (static_dir) settings.static_dir = *static_dir;
            HeatmapService service(store, cfg.scoring, zone, settings.max_batch);
            HttpServer server(service, settings);
            const int bound = server.bind(host, settings.port);
            if (!no_scheduler) server.start_midnight_scheduler();
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            spdlog::info("listening on {}:{} (data dir {}, zone {})", host, bound, data_dir, zone.name());
            server.serve();
            g_server = nullptr;
            server.stop();
        }
    } catch (const NoSnapshot& e) {
        std::cerr << "error: " << e.what() << " (run `vusage recompute` first)\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
