#ifndef OCVRP_MATRIX_HPP
#define OCVRP_MATRIX_HPP

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ocvrp/errors.hpp"

namespace ocvrp {

// Mean Earth radius (IUGG R1), km.
inline constexpr double kEarthRadiusKm = 6371.0088;

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

inline double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    auto check = [](const GeoPoint& p) {
        if (!(p.lat >= -90.0 && p.lat <= 90.0) || !(p.lon >= -180.0 && p.lon <= 180.0)) {
            throw InvalidCoordinate("coordinate out of range: lat=" + std::to_string(p.lat) +
                                    " lon=" + std::to_string(p.lon));
        }
    };
    check(a);
    check(b);
    const double to_rad = std::numbers::pi / 180.0;
    const double lat1 = a.lat * to_rad;
    const double lat2 = b.lat * to_rad;
    const double dlat = (b.lat - a.lat) * to_rad;
    const double dlon = (b.lon - a.lon) * to_rad;
    const double sa = std::sin(dlat / 2.0);
    const double sb = std::sin(dlon / 2.0);
    double h = sa * sa + std::cos(lat1) * std::cos(lat2) * sb * sb;
    if (h > 1.0) h = 1.0;  // guard the asin against rounding
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

// Dense n x n distance matrix in km, row-major. Asymmetry is permitted
// (road networks are directed); the symmetric flag records which case this is.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n, bool symmetric = false)
        : n_(n), symmetric_(symmetric), values_(n * n, 0.0) {}

    std::size_t order() const { return n_; }
    bool symmetric() const { return symmetric_; }
    void set_symmetric(bool s) { symmetric_ = s; }

    double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) { values_[i * n_ + j] = v; }

    const std::vector<double>& values() const { return values_; }

    bool operator==(const DistanceMatrix& o) const {
        return n_ == o.n_ && symmetric_ == o.symmetric_ && values_ == o.values_;
    }

    // Throws CorruptMatrix if an entry is negative, non-finite, the diagonal
    // is nonzero, or the symmetric flag contradicts the data.
    void validate() const {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = at(i, j);
                if (!std::isfinite(v))
                    throw CorruptMatrix("non-finite distance at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
                if (v < 0.0)
                    throw CorruptMatrix("negative distance at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
            }
            if (at(i, i) != 0.0)
                throw CorruptMatrix("nonzero diagonal at " + std::to_string(i));
        }
        if (symmetric_) {
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = i + 1; j < n_; ++j)
                    if (at(i, j) != at(j, i))
                        throw CorruptMatrix("matrix flagged symmetric but entry (" +
                                            std::to_string(i) + "," + std::to_string(j) +
                                            ") differs from its mirror");
        }
    }

private:
    std::size_t n_ = 0;
    bool symmetric_ = false;
    std::vector<double> values_;
};

enum class DistanceMode {
    Haversine,       // great-circle km from lat/lon degrees
    EuclideanPlane,  // coordinates interpreted directly as km offsets
};

inline DistanceMatrix build_matrix(std::span<const GeoPoint> points, DistanceMode mode) {
    if (points.size() < 2) throw Error("build_matrix needs at least 2 locations");
    const std::size_t n = points.size();
    DistanceMatrix m(n, /*symmetric=*/true);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = 0.0;
            if (mode == DistanceMode::Haversine) {
                d = haversine_km(points[i], points[j]);
            } else {
                const double dx = points[i].lat - points[j].lat;
                const double dy = points[i].lon - points[j].lon;
                d = std::sqrt(dx * dx + dy * dy);
            }
            m.set(i, j, d);
            m.set(j, i, d);
        }
    }
    return m;
}

// --- OCVRP-DMX v1 ------------------------------------------------------
// 8-byte ASCII magic "OCVRPDMX", 1-byte version (=1), 1-byte flags
// (bit0 = symmetric), 4-byte little-endian unsigned n, then n*n 8-byte
// little-endian IEEE-754 doubles, row-major, in km.

namespace detail {

inline constexpr char kDmxMagic[8] = {'O', 'C', 'V', 'R', 'P', 'D', 'M', 'X'};

inline void put_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64_le(std::string& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline double get_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

}  // namespace detail

inline void save_matrix(const DistanceMatrix& m, const std::filesystem::path& path) {
    std::string buf;
    buf.reserve(14 + 8 * m.order() * m.order());
    buf.append(detail::kDmxMagic, 8);
    buf.push_back(static_cast<char>(1));                       // version
    buf.push_back(static_cast<char>(m.symmetric() ? 1 : 0));   // flags
    detail::put_u32_le(buf, static_cast<std::uint32_t>(m.order()));
    for (std::size_t i = 0; i < m.order(); ++i)
        for (std::size_t j = 0; j < m.order(); ++j) detail::put_f64_le(buf, m.at(i, j));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

inline DistanceMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 14) throw FormatError("truncated OCVRP-DMX header: " + path.string());
    if (std::memcmp(buf.data(), detail::kDmxMagic, 8) != 0)
        throw FormatError("bad magic in " + path.string());
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    if (p[8] != 1)
        throw FormatError("unsupported OCVRP-DMX version " + std::to_string(int(p[8])));
    const bool symmetric = (p[9] & 1) != 0;
    const std::uint32_t n = detail::get_u32_le(p + 10);

    const std::size_t expected = 14 + 8ull * n * n;
    if (buf.size() != expected)
        throw CorruptMatrix("payload size mismatch in " + path.string() + ": declared n=" +
                            std::to_string(n) + ", got " + std::to_string((buf.size() - 14) / 8) +
                            " doubles");

    DistanceMatrix m(n, symmetric);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m.set(i, j, detail::get_f64_le(p + 14 + 8 * (i * n + j)));
    m.validate();
    return m;
}

// CSV fixture import: n lines of n comma-separated decimals. The symmetric
// flag is detected from the data.
inline DistanceMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FormatError("bad CSV cell '" + cell + "' in " + path.string());
            }
        }
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw FormatError("empty CSV matrix: " + path.string());
    for (const auto& r : rows)
        if (r.size() != n)
            throw CorruptMatrix("CSV matrix is not square in " + path.string());

    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, rows[i][j]);
    bool sym = true;
    for (std::size_t i = 0; i < n && sym; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m.at(i, j) != m.at(j, i)) {
                sym = false;
                break;
            }
    m.set_symmetric(sym);
    m.validate();
    return m;
}

}  // namespace ocvrp

#endif
