#pragma once

// Metric space over clients P and facilities F with two backends: Euclidean
// coordinates and an explicit distance matrix over P then F. Immutable after
// construction; every query is a pure function, safe for concurrent readers.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace hybridkc {

using ClientIndex = std::uint32_t;
using FacilityIndex = std::uint32_t;

// A point of P ∪ F.
struct PointRef {
    enum class Kind : std::uint8_t { Client, Facility };

    Kind kind;
    std::uint32_t index;

    static PointRef client(std::uint32_t i) { return {Kind::Client, i}; }
    static PointRef facility(std::uint32_t i) { return {Kind::Facility, i}; }

    auto operator<=>(const PointRef&) const = default;
};

enum class MetricBackend { Euclidean, Matrix };

class MetricSpace {
public:
    // Placeholder space; build real ones through the factories below.
    MetricSpace() = default;

    // Euclidean backend: facilities may be empty, in which case the facility
    // set is the whole of R^dim (continuous mode) and only discrete client
    // geometry is stored.
    static MetricSpace euclidean(std::size_t dim, std::vector<double> client_coords,
                                 std::vector<double> facility_coords);

    // Matrix backend over clients then facilities; validates symmetry,
    // zero diagonal and nonnegativity (absolute tolerance 1e-9) and, when
    // check_triangle is set, the triangle inequality (O(s^3)).
    static MetricSpace matrix(std::size_t n_clients, std::size_t n_facilities,
                              std::vector<double> dist, bool check_triangle = true);

    MetricBackend backend() const { return backend_; }
    std::size_t client_count() const { return n_; }
    std::size_t facility_count() const { return m_; }
    std::size_t dim() const { return dim_; }

    // Euclidean backend with no explicit facilities: centers range over R^dim.
    bool continuous() const { return backend_ == MetricBackend::Euclidean && m_ == 0; }
    bool discrete() const { return !continuous(); }

    double distance(PointRef a, PointRef b) const;

    // Euclidean only: distance from a stored point to free coordinates.
    double distance_to_coords(PointRef a, std::span<const double> x) const;

    // Batched distances from one point to every client (out.size() == n).
    void client_distances(PointRef from, std::span<double> out) const;
    // ... and to every facility (out.size() == m).
    void facility_distances(PointRef from, std::span<double> out) const;
    // Euclidean only: distances from free coordinates to every client.
    void client_distances_from_coords(std::span<const double> x, std::span<double> out) const;

    // Closed ball: clients q with d(from, q) <= radius, ascending index.
    std::vector<ClientIndex> ball(PointRef from, double radius) const;

    std::span<const double> client_coords(ClientIndex i) const;
    std::span<const double> facility_coords(FacilityIndex i) const;

    // Largest client-to-client distance (0 when n == 1).
    double client_diameter() const;

private:
    void check_point(PointRef p) const;
    const double* coords_of(PointRef p) const;
    std::size_t matrix_index(PointRef p) const;

    MetricBackend backend_ = MetricBackend::Euclidean;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> client_coords_;
    std::vector<double> facility_coords_;
    std::vector<double> dist_; // (n+m)^2 row-major, matrix backend only
};

} // namespace hybridkc
