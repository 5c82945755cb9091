#include "hybridkc/instance.hpp"

#include "hybridkc/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace hybridkc {

using nlohmann::json;

namespace {

double finite_number(const json& v, const char* what) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + " is not finite");
    return x;
}

std::vector<double> parse_coord_rows(const json& rows, std::size_t dim, const char* what) {
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != dim)
            throw ValidationError(std::string(what) + " row does not match dim");
        for (const auto& v : row) flat.push_back(finite_number(v, what));
    }
    return flat;
}

Instance parse(const json& doc, bool check_triangle) {
    if (!doc.is_object()) throw ValidationError("instance file is not a JSON object");

    Instance inst;
    const std::string kind = doc.at("kind").get<std::string>();
    inst.k = doc.at("k").get<std::uint32_t>();
    inst.r = finite_number(doc.at("r"), "r");
    inst.z = doc.contains("z") ? finite_number(doc.at("z"), "z") : 1.0;
    if (inst.k < 1) throw ValidationError("k must be >= 1");
    if (inst.r < 0.0) throw ValidationError("r must be >= 0");
    if (inst.z < 1.0) throw ValidationError("z must be >= 1");

    if (kind == "euclidean") {
        const auto dim = doc.at("dim").get<std::size_t>();
        auto clients = parse_coord_rows(doc.at("clients"), dim, "clients");
        auto facilities = parse_coord_rows(doc.value("facilities", json::array()), dim, "facilities");
        inst.space = MetricSpace::euclidean(dim, std::move(clients), std::move(facilities));
    } else if (kind == "matrix") {
        const auto& dist_rows = doc.at("dist");
        const std::size_t s = dist_rows.size();
        std::vector<double> dist;
        dist.reserve(s * s);
        for (const auto& row : dist_rows) {
            if (!row.is_array() || row.size() != s)
                throw ValidationError("dist matrix is not square");
            for (const auto& v : row) dist.push_back(finite_number(v, "dist entry"));
        }

        const auto clients = doc.at("clients").get<std::vector<std::size_t>>();
        const auto facilities = doc.at("facilities").get<std::vector<std::size_t>>();
        std::unordered_set<std::size_t> seen;
        for (std::size_t idx : clients) {
            if (idx >= s || !seen.insert(idx).second)
                throw ValidationError("bad client index into dist matrix");
        }
        for (std::size_t idx : facilities) {
            if (idx >= s || !seen.insert(idx).second)
                throw ValidationError("bad facility index into dist matrix");
        }

        // submatrix in listed order, clients first
        std::vector<std::size_t> order;
        order.reserve(clients.size() + facilities.size());
        order.insert(order.end(), clients.begin(), clients.end());
        order.insert(order.end(), facilities.begin(), facilities.end());
        std::vector<double> sub(order.size() * order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (std::size_t j = 0; j < order.size(); ++j) {
                sub[i * order.size() + j] = dist[order[i] * s + order[j]];
            }
        }
        inst.space = MetricSpace::matrix(clients.size(), facilities.size(), std::move(sub),
                                         check_triangle);
    } else {
        throw ValidationError("unknown instance kind: " + kind);
    }
    return inst;
}

} // namespace

Instance parse_instance(const std::string& json_text, bool check_triangle) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("instance JSON parse error: ") + e.what());
    }
    return parse(doc, check_triangle);
}

Instance load_instance(const std::filesystem::path& path, bool check_triangle) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str(), check_triangle);
}

std::string instance_to_json(const Instance& inst) {
    json doc;
    const auto& space = inst.space;
    if (space.backend() == MetricBackend::Euclidean) {
        doc["kind"] = "euclidean";
        doc["dim"] = space.dim();
        json clients = json::array();
        for (std::size_t i = 0; i < space.client_count(); ++i) {
            const auto c = space.client_coords(static_cast<ClientIndex>(i));
            clients.push_back(std::vector<double>(c.begin(), c.end()));
        }
        doc["clients"] = std::move(clients);
        json facilities = json::array();
        for (std::size_t i = 0; i < space.facility_count(); ++i) {
            const auto c = space.facility_coords(static_cast<FacilityIndex>(i));
            facilities.push_back(std::vector<double>(c.begin(), c.end()));
        }
        doc["facilities"] = std::move(facilities);
    } else {
        doc["kind"] = "matrix";
        const std::size_t n = space.client_count();
        const std::size_t m = space.facility_count();
        std::vector<std::size_t> clients(n), facilities(m);
        for (std::size_t i = 0; i < n; ++i) clients[i] = i;
        for (std::size_t i = 0; i < m; ++i) facilities[i] = n + i;
        doc["clients"] = clients;
        doc["facilities"] = facilities;
        json dist = json::array();
        auto ref = [&](std::size_t i) {
            return i < n ? PointRef::client(static_cast<std::uint32_t>(i))
                         : PointRef::facility(static_cast<std::uint32_t>(i - n));
        };
        for (std::size_t i = 0; i < n + m; ++i) {
            std::vector<double> row(n + m);
            for (std::size_t j = 0; j < n + m; ++j) row[j] = space.distance(ref(i), ref(j));
            dist.push_back(std::move(row));
        }
        doc["dist"] = std::move(dist);
    }
    doc["k"] = inst.k;
    doc["r"] = inst.r;
    doc["z"] = inst.z;
    return doc.dump(2) + "\n";
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + tmp + " -> " + path.string());
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    atomic_write_file(path, instance_to_json(inst));
}

} // namespace hybridkc
