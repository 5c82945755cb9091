#include "hybridkc/metric_space.hpp"

#include "hybridkc/errors.hpp"
#include "hybridkc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace hybridkc {

namespace {
constexpr double kMetricTolerance = 1e-9;
}

MetricSpace MetricSpace::euclidean(std::size_t dim, std::vector<double> client_coords,
                                   std::vector<double> facility_coords) {
    if (dim == 0) throw ValidationError("euclidean space needs dim >= 1");
    if (client_coords.empty() || client_coords.size() % dim != 0)
        throw ValidationError("client coordinate array is not a multiple of dim");
    if (facility_coords.size() % dim != 0)
        throw ValidationError("facility coordinate array is not a multiple of dim");

    MetricSpace space;
    space.backend_ = MetricBackend::Euclidean;
    space.dim_ = dim;
    space.n_ = client_coords.size() / dim;
    space.m_ = facility_coords.size() / dim;
    space.client_coords_ = std::move(client_coords);
    space.facility_coords_ = std::move(facility_coords);
    return space;
}

MetricSpace MetricSpace::matrix(std::size_t n_clients, std::size_t n_facilities,
                                std::vector<double> dist, bool check_triangle) {
    const std::size_t s = n_clients + n_facilities;
    if (n_clients == 0) throw ValidationError("matrix space needs at least one client");
    if (dist.size() != s * s) throw ValidationError("distance matrix size is not (n+m)^2");

    for (std::size_t i = 0; i < s; ++i) {
        if (std::abs(dist[i * s + i]) > kMetricTolerance)
            throw ValidationError("distance matrix diagonal entry exceeds tolerance at " +
                                  std::to_string(i));
        dist[i * s + i] = 0.0;
        for (std::size_t j = i + 1; j < s; ++j) {
            const double a = dist[i * s + j];
            const double b = dist[j * s + i];
            if (a < -kMetricTolerance || b < -kMetricTolerance)
                throw ValidationError("negative distance matrix entry");
            if (std::abs(a - b) > kMetricTolerance)
                throw ValidationError("distance matrix is not symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            // store the upper entry on both sides so lookups are exactly symmetric
            const double v = a < 0.0 ? 0.0 : a;
            dist[i * s + j] = v;
            dist[j * s + i] = v;
        }
    }

    if (check_triangle) {
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j) {
                const double dij = dist[i * s + j];
                for (std::size_t l = 0; l < s; ++l) {
                    if (dij > dist[i * s + l] + dist[l * s + j] + kMetricTolerance)
                        throw ValidationError("triangle inequality violated at (" +
                                              std::to_string(i) + "," + std::to_string(j) + "," +
                                              std::to_string(l) + ")");
                }
            }
        }
    }

    MetricSpace space;
    space.backend_ = MetricBackend::Matrix;
    space.n_ = n_clients;
    space.m_ = n_facilities;
    space.dist_ = std::move(dist);
    return space;
}

void MetricSpace::check_point(PointRef p) const {
    const std::size_t bound = p.kind == PointRef::Kind::Client ? n_ : m_;
    if (p.index >= bound)
        throw InvalidPointError("point index " + std::to_string(p.index) + " out of range");
}

const double* MetricSpace::coords_of(PointRef p) const {
    return p.kind == PointRef::Kind::Client ? client_coords_.data() + std::size_t(p.index) * dim_
                                            : facility_coords_.data() + std::size_t(p.index) * dim_;
}

std::size_t MetricSpace::matrix_index(PointRef p) const {
    return p.kind == PointRef::Kind::Client ? p.index : n_ + p.index;
}

double MetricSpace::distance(PointRef a, PointRef b) const {
    check_point(a);
    check_point(b);
    if (backend_ == MetricBackend::Matrix) {
        const std::size_t s = n_ + m_;
        return dist_[matrix_index(a) * s + matrix_index(b)];
    }
    double out;
    kernels::euclidean_distances(coords_of(a), 1, dim_, coords_of(b), &out);
    return out;
}

double MetricSpace::distance_to_coords(PointRef a, std::span<const double> x) const {
    check_point(a);
    if (backend_ != MetricBackend::Euclidean)
        throw InvalidPointError("coordinate distance queried on a matrix space");
    if (x.size() != dim_) throw InvalidPointError("coordinate dimension mismatch");
    double out;
    kernels::euclidean_distances(coords_of(a), 1, dim_, x.data(), &out);
    return out;
}

void MetricSpace::client_distances(PointRef from, std::span<double> out) const {
    check_point(from);
    if (out.size() != n_) throw InvalidPointError("output span size mismatch");
    if (backend_ == MetricBackend::Matrix) {
        const std::size_t s = n_ + m_;
        std::memcpy(out.data(), dist_.data() + matrix_index(from) * s, n_ * sizeof(double));
        return;
    }
    kernels::euclidean_distances(client_coords_.data(), n_, dim_, coords_of(from), out.data());
}

void MetricSpace::facility_distances(PointRef from, std::span<double> out) const {
    check_point(from);
    if (out.size() != m_) throw InvalidPointError("output span size mismatch");
    if (m_ == 0) return;
    if (backend_ == MetricBackend::Matrix) {
        const std::size_t s = n_ + m_;
        std::memcpy(out.data(), dist_.data() + matrix_index(from) * s + n_, m_ * sizeof(double));
        return;
    }
    kernels::euclidean_distances(facility_coords_.data(), m_, dim_, coords_of(from), out.data());
}

void MetricSpace::client_distances_from_coords(std::span<const double> x,
                                               std::span<double> out) const {
    if (backend_ != MetricBackend::Euclidean)
        throw InvalidPointError("coordinate distance queried on a matrix space");
    if (x.size() != dim_ || out.size() != n_)
        throw InvalidPointError("coordinate or output span size mismatch");
    kernels::euclidean_distances(client_coords_.data(), n_, dim_, x.data(), out.data());
}

std::vector<ClientIndex> MetricSpace::ball(PointRef from, double radius) const {
    std::vector<double> dists(n_);
    client_distances(from, dists);
    std::vector<ClientIndex> members;
    for (std::size_t i = 0; i < n_; ++i) {
        if (dists[i] <= radius) members.push_back(static_cast<ClientIndex>(i));
    }
    return members;
}

std::span<const double> MetricSpace::client_coords(ClientIndex i) const {
    check_point(PointRef::client(i));
    if (backend_ != MetricBackend::Euclidean)
        throw InvalidPointError("matrix space has no coordinates");
    return {client_coords_.data() + std::size_t(i) * dim_, dim_};
}

std::span<const double> MetricSpace::facility_coords(FacilityIndex i) const {
    check_point(PointRef::facility(i));
    if (backend_ != MetricBackend::Euclidean)
        throw InvalidPointError("matrix space has no coordinates");
    return {facility_coords_.data() + std::size_t(i) * dim_, dim_};
}

double MetricSpace::client_diameter() const {
    double best = 0.0;
    std::vector<double> dists(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        client_distances(PointRef::client(static_cast<std::uint32_t>(i)), dists);
        const double row_max = kernels::max_value(dists.data(), n_);
        if (row_max > best) best = row_max;
    }
    return best;
}

} // namespace hybridkc
