#pragma once

// A clustering instance: metric space, cluster budget k, radius r, power z.
// Instance files are UTF-8 JSON:
//   { "kind": "euclidean"|"matrix", "dim": int (euclidean),
//     "clients": [[coords]] (euclidean) or [indices] (matrix),
//     "facilities": [[coords]] or [indices],
//     "dist": [[...]] (matrix only, over clients then facilities),
//     "k": int, "r": float, "z": float (optional, default 1.0) }
// A euclidean instance with an empty facility list is continuous: centers
// range over all of R^dim.

#include "hybridkc/metric_space.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace hybridkc {

struct Instance {
    MetricSpace space;
    std::uint32_t k = 1;
    double r = 0.0;
    double z = 1.0;
};

Instance load_instance(const std::filesystem::path& path, bool check_triangle = true);
Instance parse_instance(const std::string& json_text, bool check_triangle = true);

std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);

// Write-then-rename so concurrent readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

} // namespace hybridkc
