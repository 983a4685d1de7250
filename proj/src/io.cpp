#include "eikonal/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace eikonal::io {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string to_csv(const Table& table) {
    if (table.header.size() != table.columns.size()) fail(ErrorKind::InvalidParameter, "header/column count mismatch");
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
    for (const auto& c : table.columns)
        if (c.size() != rows) fail(ErrorKind::InvalidParameter, "ragged table");
    std::string out;
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        if (k) out += ',';
        out += table.header[k];
    }
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < table.columns.size(); ++k) {
            if (k) out += ',';
            out += format_real(table.columns[k][r]);
        }
        out += '\n';
    }
    return out;
}

void write_atomic(const std::string& path, const std::string& contents) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("out", "cannot open '" + tmp + "' for writing");
        f << contents;
        if (!f.flush()) throw ConfigError("out", "write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, target);
}

void write_csv(const std::string& path, const Table& table) { write_atomic(path, to_csv(table)); }

void write_json(const std::string& path, const nlohmann::json& j) { write_atomic(path, j.dump(2) + "\n"); }

namespace {

Complex location_from_json(const nlohmann::json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(field, "atom location must be a number or [re, im]");
}

}  // namespace

SpectralMeasure measure_from_json(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty list of atoms");
    try {
        // [[loc, w], ...] with loc a number or [re, im]; otherwise a bare list of locations
        const bool weighted = j[0].is_array();
        if (weighted) {
            std::vector<Atom> atoms;
            for (const auto& a : j) {
                if (!a.is_array() || a.size() != 2 || !a[1].is_number())
                    throw ConfigError(field, "atoms must be [location, weight] pairs");
                atoms.push_back({location_from_json(a[0], field), a[1].get<double>()});
            }
            return SpectralMeasure(std::move(atoms));
        }
        std::vector<Complex> locs;
        for (const auto& a : j) locs.push_back(location_from_json(a, field));
        return SpectralMeasure::uniform(locs);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(field, e.what());
    }
}

nlohmann::json measure_to_json(const SpectralMeasure& m) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& a : m.atoms()) {
        nlohmann::json loc = a.location.imag() == 0.0 ? nlohmann::json(a.location.real())
                                                      : nlohmann::json::array({a.location.real(), a.location.imag()});
        out.push_back(nlohmann::json::array({loc, a.weight}));
    }
    return out;
}

nlohmann::json read_json_file(const std::string& path, const std::string& field) {
    std::ifstream f(path);
    if (!f) throw ConfigError(field, "cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(field, std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace eikonal::io
