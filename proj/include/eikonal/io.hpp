#pragma once

#include <string>
#include <vector>

#include "eikonal/measure.hpp"
#include "json.hpp"

namespace eikonal::io {

/// "%.12e"
std::string format_real(double v);

/// Column-major table; every column must have the same length.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

std::string to_csv(const Table& table);

/// Writes `contents` to `path + ".tmp"` and renames it over `path`.
void write_atomic(const std::string& path, const std::string& contents);
void write_csv(const std::string& path, const Table& table);
void write_json(const std::string& path, const nlohmann::json& j);

/// Measures serialize as [[loc, w], ...] with loc a number or [re, im].
/// A bare list of real locations gets equal weights.
SpectralMeasure measure_from_json(const nlohmann::json& j, const std::string& field = "initial");
nlohmann::json measure_to_json(const SpectralMeasure& m);

nlohmann::json read_json_file(const std::string& path, const std::string& field);

}  // namespace eikonal::io
