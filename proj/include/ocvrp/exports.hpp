#ifndef OCVRP_EXPORTS_HPP
#define OCVRP_EXPORTS_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocvrp/errors.hpp"
#include "ocvrp/experiment.hpp"
#include "ocvrp/json_util.hpp"
#include "ocvrp/model.hpp"
#include "ocvrp/trace.hpp"

namespace ocvrp {

inline nlohmann::json solution_to_json(const Solution& sol) {
    nlohmann::json jroutes = nlohmann::json::array();
    for (const auto& r : sol.routes) {
        jroutes.push_back({{"vehicle", r.vehicle_id},
                           {"stops", r.stops},
                           {"load", r.load},
                           {"distance_km", r.distance}});
    }
    return {{"instance", sol.meta.instance},
            {"solver", sol.meta.solver},
            {"params", sol.meta.params},
            {"seed", sol.meta.seed},
            {"routes", std::move(jroutes)},
            {"total_distance_km", sol.total_distance},
            {"wall_time_s", sol.meta.wall_time_s}};
}

inline Solution solution_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw FormatError("solution document must be a JSON object");
    Solution sol;
    try {
        sol.meta.instance = doc.at("instance").get<std::string>();
        sol.meta.solver = doc.at("solver").get<std::string>();
        sol.meta.params = doc.at("params");
        sol.meta.seed = doc.at("seed").get<std::uint64_t>();
        sol.meta.wall_time_s = doc.at("wall_time_s").get<double>();
        sol.total_distance = doc.at("total_distance_km").get<double>();
        for (const auto& jr : doc.at("routes")) {
            Route r;
            r.vehicle_id = jr.at("vehicle").get<int>();
            r.stops = jr.at("stops").get<std::vector<int>>();
            r.load = jr.at("load").get<double>();
            r.distance = jr.at("distance_km").get<double>();
            sol.routes.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("solution JSON invalid: " + std::string(e.what()));
    }
    return sol;
}

inline Solution load_solution(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open solution file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("solution JSON parse failed: " + std::string(e.what()));
    }
    return solution_from_json(doc);
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detail

inline void export_solution(const Solution& sol, const std::filesystem::path& path) {
    detail::write_text(path, canonical_json(solution_to_json(sol)));
}

// GeoJSON FeatureCollection: one LineString per route, starting at the depot
// and ending at the route's last customer (open path — no closing segment),
// plus one Point per location (depot included). Coordinates are [lon, lat].
inline nlohmann::json geojson_for(const Instance& inst, const Solution& sol) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& r : sol.routes) {
        nlohmann::json coords = nlohmann::json::array();
        coords.push_back({inst.locations[0].lon, inst.locations[0].lat});
        for (int s : r.stops) {
            const auto& loc = inst.locations[static_cast<std::size_t>(s)];
            coords.push_back({loc.lon, loc.lat});
        }
        features.push_back(
            {{"type", "Feature"},
             {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
             {"properties",
              {{"vehicle", r.vehicle_id}, {"load", r.load}, {"distance_km", r.distance}}}});
    }
    for (std::size_t t = 0; t < inst.locations.size(); ++t) {
        const auto& loc = inst.locations[t];
        features.push_back(
            {{"type", "Feature"},
             {"geometry", {{"type", "Point"}, {"coordinates", {loc.lon, loc.lat}}}},
             {"properties",
              {{"id", loc.id}, {"role", t == 0 ? "depot" : "stop"}, {"demand", loc.demand}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

inline void export_geojson(const Instance& inst, const Solution& sol,
                           const std::filesystem::path& path) {
    detail::write_text(path, canonical_json(geojson_for(inst, sol)));
}

inline std::string trace_csv(const Trace& trace) {
    std::string out = "iteration,iteration_best_km,global_best_km\n";
    char buf[96];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f\n", row.iteration, row.iteration_best_km,
                      row.global_best_km);
        out += buf;
    }
    return out;
}

inline void export_trace(const Trace& trace, const std::filesystem::path& path) {
    detail::write_text(path, trace_csv(trace));
}

inline std::string format_mean_std(double mean, double stddev) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.1f ± %.1f", mean, stddev);
    return buf;
}

// Plain-text comparison table: one column per report, rows "Dist. (km)" and
// "Time (s)", cells mean ± sample std to one decimal.
inline std::string format_table(const std::vector<RunReport>& reports) {
    std::vector<std::string> headers{"Metric"};
    std::vector<std::string> dist_row{"Dist. (km)"};
    std::vector<std::string> time_row{"Time (s)"};
    for (const auto& rep : reports) {
        headers.push_back(rep.label.empty() ? rep.solver : rep.label);
        dist_row.push_back(format_mean_std(rep.distance_km.mean, rep.distance_km.stddev));
        time_row.push_back(format_mean_std(rep.time_s.mean, rep.time_s.stddev));
    }

    // Column widths are computed in code points; the only multibyte character
    // used is ±, which occupies two bytes.
    const auto display_width = [](const std::string& s) {
        std::size_t w = 0;
        for (unsigned char ch : s)
            if ((ch & 0xC0) != 0x80) ++w;
        return w;
    };
    std::vector<std::size_t> width(headers.size(), 0);
    for (std::size_t c = 0; c < headers.size(); ++c)
        width[c] = std::max({display_width(headers[c]), display_width(dist_row[c]),
                             display_width(time_row[c])});

    const auto emit_row = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            line += "| ";
            line += cells[c];
            line.append(width[c] - display_width(cells[c]) + 1, ' ');
        }
        line += "|\n";
        return line;
    };
    std::string sep;
    for (std::size_t c = 0; c < width.size(); ++c) {
        sep += '|';
        sep.append(width[c] + 2, '-');
    }
    sep += "|\n";

    std::string out = emit_row(headers);
    out += sep;
    out += emit_row(dist_row);
    out += emit_row(time_row);
    return out;
}

inline void export_table(const std::vector<RunReport>& reports,
                         const std::filesystem::path& path) {
    detail::write_text(path, format_table(reports));
}

inline nlohmann::json report_to_json(const RunReport& rep) {
    nlohmann::json jruns = nlohmann::json::array();
    for (const auto& rec : rep.records)
        jruns.push_back({{"seed", rec.seed},
                         {"distance_km", rec.distance_km},
                         {"wall_time_s", rec.wall_time_s}});
    return {{"instance", rep.instance},
            {"solver", rep.solver},
            {"label", rep.label},
            {"seed_base", rep.seed_base},
            {"runs", rep.runs},
            {"protocol_timing", rep.protocol_timing},
            {"records", std::move(jruns)},
            {"distance_km", {{"mean", rep.distance_km.mean}, {"std", rep.distance_km.stddev}}},
            {"time_s", {{"mean", rep.time_s.mean}, {"std", rep.time_s.stddev}}}};
}

inline void export_report(const RunReport& rep, const std::filesystem::path& path) {
    detail::write_text(path, canonical_json(report_to_json(rep)));
}

}  // namespace ocvrp

#endif
