#ifndef OCVRP_INSTANCE_IO_HPP
#define OCVRP_INSTANCE_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocvrp/errors.hpp"
#include "ocvrp/json_util.hpp"
#include "ocvrp/matrix.hpp"
#include "ocvrp/model.hpp"

namespace ocvrp {

inline constexpr double kKmPerDegLat = kEarthRadiusKm * std::numbers::pi / 180.0;

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                           const char* where) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw FormatError(std::string(where) + " is missing required field \"" + key + "\"");
    return *it;
}

inline double require_number(const nlohmann::json& obj, const char* key, const char* where) {
    const auto& v = require_field(obj, key, where);
    if (!v.is_number()) throw FormatError(std::string(where) + "." + key + " must be a number");
    return v.get<double>();
}

inline int require_int(const nlohmann::json& obj, const char* key, const char* where) {
    const auto& v = require_field(obj, key, where);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw FormatError(std::string(where) + "." + key + " must be an integer");
    return v.get<int>();
}

inline std::optional<TimeWindow> optional_time_window(const nlohmann::json& obj,
                                                      const char* where) {
    const auto it = obj.find("time_window");
    if (it == obj.end()) return std::nullopt;
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        throw FormatError(std::string(where) + ".time_window must be [start, end]");
    TimeWindow tw{(*it)[0].get<double>(), (*it)[1].get<double>()};
    if (tw.start_s > tw.end_s)
        throw FormatError(std::string(where) + ".time_window start exceeds end");
    return tw;
}

inline void check_coordinate(double lat, double lon, const char* where) {
    if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0)
        throw InvalidCoordinate(std::string(where) + ": latitude " + std::to_string(lat) +
                                " out of [-90, 90]");
    if (!std::isfinite(lon) || lon < -180.0 || lon > 180.0)
        throw InvalidCoordinate(std::string(where) + ": longitude " + std::to_string(lon) +
                                " out of [-180, 180]");
}

}  // namespace detail

// Builds an Instance from the instance JSON document. The first location is
// the depot and becomes matrix index 0; external ids are kept as labels
// only. base_dir anchors a relative matrix_file reference.
inline Instance parse_instance_json(const nlohmann::json& doc,
                                    const std::filesystem::path& base_dir,
                                    std::vector<std::string>* warnings = nullptr) {
    if (!doc.is_object()) throw FormatError("instance document must be a JSON object");
    Instance inst;
    const auto& jname = detail::require_field(doc, "name", "instance");
    if (!jname.is_string()) throw FormatError("instance.name must be a string");
    inst.name = jname.get<std::string>();

    const auto& jlocs = detail::require_field(doc, "locations", "instance");
    if (!jlocs.is_array() || jlocs.size() < 2)
        throw FormatError("instance.locations must be an array with a depot and >= 1 customer");
    std::set<int> loc_ids;
    for (std::size_t t = 0; t < jlocs.size(); ++t) {
        const auto& jl = jlocs[t];
        const std::string where = "locations[" + std::to_string(t) + "]";
        if (!jl.is_object()) throw FormatError(where + " must be an object");
        Location loc;
        loc.id = detail::require_int(jl, "id", where.c_str());
        loc.lat = detail::require_number(jl, "lat", where.c_str());
        loc.lon = detail::require_number(jl, "lon", where.c_str());
        loc.demand = detail::require_number(jl, "demand", where.c_str());
        if (loc.demand < 0.0) throw FormatError(where + ".demand must be >= 0");
        loc.time_window = detail::optional_time_window(jl, where.c_str());
        detail::check_coordinate(loc.lat, loc.lon, where.c_str());
        if (!loc_ids.insert(loc.id).second)
            throw ConsistencyError("duplicate location id " + std::to_string(loc.id));
        inst.locations.push_back(std::move(loc));
    }
    if (inst.locations.front().demand != 0.0)
        throw ConsistencyError("depot (first location) must have demand 0");

    const auto& jvehs = detail::require_field(doc, "vehicles", "instance");
    if (!jvehs.is_array()) throw FormatError("instance.vehicles must be an array");
    std::set<int> veh_ids;
    for (std::size_t t = 0; t < jvehs.size(); ++t) {
        const auto& jv = jvehs[t];
        const std::string where = "vehicles[" + std::to_string(t) + "]";
        if (!jv.is_object()) throw FormatError(where + " must be an object");
        Vehicle veh;
        veh.id = detail::require_int(jv, "id", where.c_str());
        veh.capacity = detail::require_number(jv, "capacity", where.c_str());
        if (!(veh.capacity > 0.0)) throw FormatError(where + ".capacity must be > 0");
        if (jv.contains("fixed_cost")) {
            veh.fixed_cost = detail::require_number(jv, "fixed_cost", where.c_str());
            if (*veh.fixed_cost < 0.0) throw FormatError(where + ".fixed_cost must be >= 0");
        }
        veh.time_window = detail::optional_time_window(jv, where.c_str());
        if (!veh_ids.insert(veh.id).second)
            throw ConsistencyError("duplicate vehicle id " + std::to_string(veh.id));
        inst.vehicles.push_back(std::move(veh));
    }

    if (const auto it = doc.find("matrix_file"); it != doc.end()) {
        if (!it->is_string()) throw FormatError("instance.matrix_file must be a string");
        inst.matrix_file = it->get<std::string>();
        const std::filesystem::path mpath = base_dir / inst.matrix_file;
        inst.matrix = mpath.extension() == ".csv" ? load_matrix_csv(mpath) : load_matrix(mpath);
        if (inst.matrix.order() != inst.locations.size())
            throw ConsistencyError("matrix order " + std::to_string(inst.matrix.order()) +
                                   " does not match location count " +
                                   std::to_string(inst.locations.size()));
    } else {
        inst.matrix = build_matrix(inst.locations, DistanceMode::Haversine);
    }

    if (warnings && inst.customer_count() > 0 && !inst.feasible_totals())
        warnings->push_back("total demand " + std::to_string(inst.total_demand()) +
                            " exceeds fleet capacity " + std::to_string(inst.total_capacity()));
    return inst;
}

inline Instance load_instance(const std::filesystem::path& path,
                              std::vector<std::string>* warnings = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open instance file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("instance JSON parse failed: " + std::string(e.what()));
    }
    return parse_instance_json(doc, path.has_parent_path() ? path.parent_path() : ".", warnings);
}

inline nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json jlocs = nlohmann::json::array();
    for (const auto& l : inst.locations) {
        nlohmann::json jl{{"id", l.id}, {"lat", l.lat}, {"lon", l.lon}, {"demand", l.demand}};
        if (l.time_window)
            jl["time_window"] =
                nlohmann::json::array({l.time_window->start_s, l.time_window->end_s});
        jlocs.push_back(std::move(jl));
    }
    nlohmann::json jvehs = nlohmann::json::array();
    for (const auto& v : inst.vehicles) {
        nlohmann::json jv{{"id", v.id}, {"capacity", v.capacity}};
        if (v.fixed_cost) jv["fixed_cost"] = *v.fixed_cost;
        if (v.time_window)
            jv["time_window"] =
                nlohmann::json::array({v.time_window->start_s, v.time_window->end_s});
        jvehs.push_back(std::move(jv));
    }
    nlohmann::json doc{{"name", inst.name}, {"locations", std::move(jlocs)},
                       {"vehicles", std::move(jvehs)}};
    if (!inst.matrix_file.empty()) doc["matrix_file"] = inst.matrix_file;
    return doc;
}

inline void save_instance(const Instance& inst, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write instance file " + path.string());
    out << canonical_json(instance_to_json(inst));
    if (!out) throw IoError("write failed for " + path.string());
}

struct GeneratorSpec {
    int n = 50;             // customers, unit demand each
    int vehicles = 5;
    double capacity = 10.0;
    int clusters = 0;       // 0 = uniform layout
    double spread_km = 2.0; // Gaussian scatter around each cluster center
    double lat1 = 29.9, lon1 = 31.1, lat2 = 30.2, lon2 = 31.5;  // bounding box corners
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw Error("generator: n must be >= 1");
        if (vehicles < 1) throw Error("generator: vehicles must be >= 1");
        if (!(capacity > 0.0)) throw Error("generator: capacity must be > 0");
        if (clusters < 0) throw Error("generator: clusters must be >= 0");
        if (clusters > 0 && !(spread_km > 0.0)) throw Error("generator: spread must be > 0");
        detail::check_coordinate(lat1, lon1, "bbox corner 1");
        detail::check_coordinate(lat2, lon2, "bbox corner 2");
        if (!(lat1 < lat2) || !(lon1 < lon2))
            throw InvalidCoordinate("bbox must be LAT1,LON1,LAT2,LON2 with LAT1<LAT2, LON1<LON2");
        if (static_cast<double>(vehicles) * capacity < static_cast<double>(n))
            throw Infeasible("generator: vehicles x capacity < n with unit demands");
    }
};

// Synthetic instance: depot at the box center, unit demands, identical
// fleet. Clustered layout draws cluster centers uniformly, then scatters
// member i around center i mod k with an isotropic Gaussian of spread_km.
// Coordinates are quantized to 1e-6 degrees so files round-trip exactly.
inline Instance generate_instance(const GeneratorSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> ulat(spec.lat1, spec.lat2);
    std::uniform_real_distribution<double> ulon(spec.lon1, spec.lon2);
    const auto quant = [](double x) { return std::round(x * 1e6) / 1e6; };

    Instance inst;
    {
        std::ostringstream name;
        name << "gen-n" << spec.n << "-v" << spec.vehicles << "-c" << spec.capacity;
        if (spec.clusters > 0) name << "-k" << spec.clusters << "-s" << spec.spread_km;
        name << "-seed" << spec.seed;
        inst.name = name.str();
    }

    Location depot;
    depot.id = 0;
    depot.lat = quant((spec.lat1 + spec.lat2) / 2.0);
    depot.lon = quant((spec.lon1 + spec.lon2) / 2.0);
    depot.demand = 0.0;
    inst.locations.push_back(depot);

    if (spec.clusters > 0) {
        std::vector<GeoPoint> centers;
        centers.reserve(static_cast<std::size_t>(spec.clusters));
        for (int k = 0; k < spec.clusters; ++k) centers.push_back({ulat(rng), ulon(rng)});
        std::normal_distribution<double> scatter(0.0, spec.spread_km);
        for (int i = 0; i < spec.n; ++i) {
            const auto& c = centers[static_cast<std::size_t>(i % spec.clusters)];
            const double dlat = scatter(rng) / kKmPerDegLat;
            const double km_per_deg_lon =
                kKmPerDegLat * std::max(std::cos(c.lat * std::numbers::pi / 180.0), 1e-6);
            const double dlon = scatter(rng) / km_per_deg_lon;
            Location loc;
            loc.id = i + 1;
            loc.lat = quant(std::clamp(c.lat + dlat, spec.lat1, spec.lat2));
            loc.lon = quant(std::clamp(c.lon + dlon, spec.lon1, spec.lon2));
            loc.demand = 1.0;
            inst.locations.push_back(loc);
        }
    } else {
        for (int i = 0; i < spec.n; ++i) {
            Location loc;
            loc.id = i + 1;
            loc.lat = quant(ulat(rng));
            loc.lon = quant(ulon(rng));
            loc.demand = 1.0;
            inst.locations.push_back(loc);
        }
    }

    for (int v = 0; v < spec.vehicles; ++v) {
        Vehicle veh;
        veh.id = v + 1;
        veh.capacity = spec.capacity;
        inst.vehicles.push_back(veh);
    }
    inst.matrix = build_matrix(inst.locations, DistanceMode::Haversine);
    return inst;
}

}  // namespace ocvrp

#endif
