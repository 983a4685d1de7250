#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "eikonal/characteristics.hpp"
#include "eikonal/error.hpp"
#include "eikonal/hciz.hpp"
#include "eikonal/io.hpp"
#include "eikonal/mc.hpp"
#include "eikonal/spectra.hpp"
#include "eikonal/unitary_flow.hpp"
#include "eikonal/validate.hpp"

using namespace eikonal;
using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Grid1D {
    double min, max;
    std::size_t points;
};

struct Box {
    double xmin, xmax, ymin, ymax;
    std::size_t points;
};

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double to_real(const json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(v)) return v;
    }
    throw ConfigError(field, "expected a real number, got " + j.dump());
}

long long to_int(const json& j, const std::string& field) {
    const double v = to_real(j, field);
    if (v != std::floor(v)) throw ConfigError(field, "expected an integer, got " + j.dump());
    return static_cast<long long>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

/// Inline JSON text, or the path of a JSON file.
json inline_or_file(const json& j, const std::string& field) {
    if (!j.is_string()) return j;
    const std::string s = j.get<std::string>();
    try {
        return json::parse(s);
    } catch (const json::parse_error&) {
    }
    if (std::filesystem::exists(s)) return io::read_json_file(s, field);
    throw ConfigError(field, "neither JSON nor an existing file: " + s);
}

EnsembleSpec ensemble_from(const json& raw) {
    json j = raw;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (!s.empty() && (s.front() == '{' || s.front() == '[')) {
            j = inline_or_file(j, "ensemble");
        } else if (std::filesystem::exists(s)) {
            j = io::read_json_file(s, "ensemble");
        } else {
            j = json{{"variant", s}};
        }
    }
    try {
        return j.get<EnsembleSpec>();
    } catch (const ConfigError& e) {
        throw ConfigError("ensemble." + e.field(), e.what());
    } catch (const json::exception& e) {
        throw ConfigError("ensemble", e.what());
    }
}

SpectralMeasure initial_from(const json& cfg) {
    if (!cfg.contains("initial") || cfg.at("initial").is_null()) return SpectralMeasure::point();
    return io::measure_from_json(inline_or_file(cfg.at("initial"), "initial"), "initial");
}

std::vector<double> times_from(const json& cfg) {
    if (!cfg.contains("t")) throw ConfigError("t", "missing");
    const json& j = cfg.at("t");
    std::vector<double> out;
    if (j.is_array()) {
        for (const auto& v : j) out.push_back(to_real(v, "t"));
    } else if (j.is_string()) {
        for (const auto& s : split(j.get<std::string>(), ',')) out.push_back(to_real(json(s), "t"));
    } else {
        out.push_back(to_real(j, "t"));
    }
    if (out.empty()) throw ConfigError("t", "no times given");
    for (double t : out)
        if (!(t >= 0.0)) throw ConfigError("t", "times must be >= 0");
    return out;
}

Grid1D grid_from(const json& cfg) {
    if (!cfg.contains("grid")) throw ConfigError("grid", "missing");
    const json& j = cfg.at("grid");
    Grid1D g{};
    if (j.is_string()) {
        const auto parts = split(j.get<std::string>(), ':');
        if (parts.size() != 3) throw ConfigError("grid", "expected min:max:points, got '" + j.get<std::string>() + "'");
        g = {to_real(json(parts[0]), "grid"), to_real(json(parts[1]), "grid"),
             static_cast<std::size_t>(std::max(0LL, to_int(json(parts[2]), "grid")))};
    } else if (j.is_object()) {
        for (const char* k : {"min", "max", "points"})
            if (!j.contains(k)) throw ConfigError("grid", std::string("missing '") + k + "'");
        g = {to_real(j.at("min"), "grid"), to_real(j.at("max"), "grid"),
             static_cast<std::size_t>(std::max(0LL, to_int(j.at("points"), "grid")))};
    } else {
        throw ConfigError("grid", "expected min:max:points or {min,max,points}");
    }
    if (g.points < 2) throw ConfigError("grid", "at least 2 points required");
    if (!(g.max > g.min)) throw ConfigError("grid", "max must exceed min");
    return g;
}

Box box_from(const json& cfg) {
    if (!cfg.contains("grid")) throw ConfigError("grid", "missing");
    const json& j = cfg.at("grid");
    Box b{};
    if (j.is_string()) {
        const auto parts = split(j.get<std::string>(), ':');
        if (parts.size() != 5)
            throw ConfigError("grid", "expected xmin:xmax:ymin:ymax:points, got '" + j.get<std::string>() + "'");
        b = {to_real(json(parts[0]), "grid"), to_real(json(parts[1]), "grid"), to_real(json(parts[2]), "grid"),
             to_real(json(parts[3]), "grid"), static_cast<std::size_t>(std::max(0LL, to_int(json(parts[4]), "grid")))};
    } else if (j.is_object()) {
        for (const char* k : {"xmin", "xmax", "ymin", "ymax", "points"})
            if (!j.contains(k)) throw ConfigError("grid", std::string("missing '") + k + "'");
        b = {to_real(j.at("xmin"), "grid"), to_real(j.at("xmax"), "grid"), to_real(j.at("ymin"), "grid"),
             to_real(j.at("ymax"), "grid"), static_cast<std::size_t>(std::max(0LL, to_int(j.at("points"), "grid")))};
    } else {
        throw ConfigError("grid", "expected xmin:xmax:ymin:ymax:points");
    }
    if (b.points < 3) throw ConfigError("grid", "at least 3 points per axis required");
    if (!(b.xmax > b.xmin) || !(b.ymax >= b.ymin)) throw ConfigError("grid", "empty box");
    return b;
}

double real_field(const json& cfg, const std::string& key, double fallback) {
    return cfg.contains(key) ? to_real(cfg.at(key), key) : fallback;
}

long long int_field(const json& cfg, const std::string& key, long long fallback) {
    return cfg.contains(key) ? to_int(cfg.at(key), key) : fallback;
}

std::string out_path(const json& cfg, const std::string& fallback) {
    if (!cfg.contains("out")) return fallback;
    if (!cfg.at("out").is_string() || cfg.at("out").get<std::string>().empty())
        throw ConfigError("out", "expected a path");
    return cfg.at("out").get<std::string>();
}

std::string sibling(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

AngularMeasure angular_from(const SpectralMeasure& m) {
    std::vector<std::pair<double, double>> ph;
    for (const auto& a : m.atoms()) ph.emplace_back(a.location.real(), a.weight);
    return AngularMeasure(ph);
}

struct Outcome {
    json summary = json::object();
    int code = 0;
};

Outcome cmd_density(const json& cfg) {
    const auto spec = ensemble_from(cfg.value("ensemble", json("gue")));
    const auto init = initial_from(cfg);
    const auto times = times_from(cfg);
    const auto g = grid_from(cfg);
    const double eps = real_field(cfg, "epsilon", 1e-6);
    const auto x = linspace(g.min, g.max, g.points);
    io::Table tab{{"t", "x", "rho"}, {{}, {}, {}}};
    json mass = json::array();
    for (double t : times) {
        const auto d = density_1d([&](Complex z) { return pastur_solve(init, spec, z, t); }, x, eps);
        for (std::size_t i = 0; i < x.size(); ++i) {
            tab.columns[0].push_back(t);
            tab.columns[1].push_back(x[i]);
            tab.columns[2].push_back(d.rho[i]);
        }
        mass.push_back(io::format_real(d.mass()));
    }
    const auto out = out_path(cfg, "density.csv");
    io::write_csv(out, tab);
    return {{{"outputs", {out}}, {"rows", tab.columns[0].size()}, {"mass", mass}}};
}

Outcome cmd_field(const json& cfg, bool overlap) {
    const auto spec = ensemble_from(cfg.value("ensemble", json("ginibre")));
    const auto init = initial_from(cfg);
    const auto times = times_from(cfg);
    const auto b = box_from(cfg);
    const double h = (b.xmax - b.xmin) / static_cast<double>(b.points - 1);
    const auto ny = static_cast<std::size_t>(std::llround((b.ymax - b.ymin) / h)) + 1;
    io::Table tab{{"t", "re", "im", overlap ? "overlap" : "rho"}, {{}, {}, {}, {}}};
    json mass = json::array();
    for (double t : times) {
        const auto f = sample_field([&](Complex z) { return quaternionic_field(init, spec, z, t); }, b.xmin, b.ymin, h,
                                    b.points, std::max<std::size_t>(ny, 3));
        const auto s = overlap ? overlap_correlator(f) : density_2d(f);
        for (std::size_t j = 0; j < s.im.size(); ++j)
            for (std::size_t i = 0; i < s.re.size(); ++i) {
                tab.columns[0].push_back(t);
                tab.columns[1].push_back(s.re[i]);
                tab.columns[2].push_back(s.im[j]);
                tab.columns[3].push_back(s.at(i, j));
            }
        mass.push_back(io::format_real(grid_mass(s)));
    }
    const auto out = out_path(cfg, overlap ? "overlap.csv" : "field2d.csv");
    io::write_csv(out, tab);
    return {{{"outputs", {out}}, {"rows", tab.columns[0].size()}, {overlap ? "integral" : "mass", mass}}};
}

Outcome cmd_boundary(const json& cfg) {
    const auto spec = ensemble_from(cfg.value("ensemble", json("ginibre")));
    const auto init = initial_from(cfg);
    const auto times = times_from(cfg);
    const auto rays = int_field(cfg, "rays", 256);
    if (rays < 3) throw ConfigError("rays", "at least 3 rays required");
    const Complex center = init.mean();
    double spread = 0.0;
    for (const auto& a : init.atoms()) spread = std::max(spread, std::abs(a.location - center));
    io::Table tab{{"t", "re", "im"}, {{}, {}, {}}};
    for (double t : times) {
        const double r_max = real_field(cfg, "r_max", spread + 3.0 * (1.0 + std::sqrt(t)));
        const auto pts = support_boundary([&](Complex z) { return quaternionic_field(init, spec, z, t); }, center,
                                          r_max, 1e-12, static_cast<int>(rays));
        for (const Complex z : pts) {
            tab.columns[0].push_back(t);
            tab.columns[1].push_back(z.real());
            tab.columns[2].push_back(z.imag());
        }
    }
    const auto out = out_path(cfg, "boundary.csv");
    io::write_csv(out, tab);
    return {{{"outputs", {out}}, {"rows", tab.columns[0].size()}}};
}

Outcome cmd_edges(const json& cfg) {
    const auto spec = ensemble_from(cfg.value("ensemble", json("gue")));
    const auto init = initial_from(cfg);
    const auto times = times_from(cfg);
    io::Table tab{{"t", "edge"}, {{}, {}}};
    for (double t : times) {
        const auto e = spec.is<ensemble::UnitaryZ>() ? unitary_edges(angular_from(init), t) : caustic_edges(init, spec, t);
        for (double v : e) {
            tab.columns[0].push_back(t);
            tab.columns[1].push_back(v);
        }
    }
    const auto out = out_path(cfg, "edges.csv");
    io::write_csv(out, tab);
    return {{{"outputs", {out}}, {"rows", tab.columns[0].size()}}};
}

Outcome cmd_unitary(const json& cfg) {
    const auto init = angular_from(initial_from(cfg));
    const auto times = times_from(cfg);
    json c = cfg;
    if (!c.contains("grid")) c["grid"] = json{{"min", -kPi}, {"max", kPi}, {"points", 2001}};
    const auto g = grid_from(c);
    const double eps = real_field(cfg, "epsilon", 1e-6);
    const auto theta = linspace(g.min, g.max, g.points);
    io::Table tab{{"t", "theta", "rho_angular", "rho_z"}, {{}, {}, {}, {}}};
    json edges = json::array();
    for (double t : times) {
        const auto a = unitary_density(init, theta, t, eps);
        const auto z = unitary_density_z(init, theta, t, eps);
        for (std::size_t k = 0; k < theta.size(); ++k) {
            tab.columns[0].push_back(t);
            tab.columns[1].push_back(theta[k]);
            tab.columns[2].push_back(a.rho[k]);
            tab.columns[3].push_back(z.rho[k]);
        }
        json e = json::array();
        for (double v : unitary_edges(init, t)) e.push_back(io::format_real(v));
        edges.push_back(e);
    }
    const auto out = out_path(cfg, "unitary.csv");
    io::write_csv(out, tab);
    return {{{"outputs", {out}},
             {"rows", tab.columns[0].size()},
             {"gap_closing_time", io::format_real(gap_closing_time(init))},
             {"edges", edges}}};
}

Outcome cmd_hciz(const json& cfg) {
    json pj;
    if (cfg.contains("problem")) {
        pj = inline_or_file(cfg.at("problem"), "problem");
    } else {
        pj = cfg;
    }
    const auto problem = hciz_problem_from_json(pj);
    double lo = 0.0, hi = 0.0;
    for (const auto* m : {&problem.a, &problem.b})
        for (const auto& a : m->atoms()) {
            lo = std::min(lo, a.location.real());
            hi = std::max(hi, a.location.real());
        }
    json c = cfg;
    if (!c.contains("grid")) c["grid"] = json{{"min", lo - 1.2}, {"max", hi + 1.2}, {"points", 400}};
    const auto g = grid_from(c);
    const double delta = real_field(cfg, "delta", 0.01);
    const auto nt = int_field(cfg, "t_points", 400);
    if (nt < 5) throw ConfigError("t_points", "at least 5 time points required");
    if (!(delta > 0.0 && delta < 0.5)) throw ConfigError("delta", "must lie in (0, 1/2)");
    std::vector<double> deltas;
    if (cfg.contains("deltas")) {
        if (!cfg.at("deltas").is_array()) throw ConfigError("deltas", "expected an array");
        for (const auto& d : cfg.at("deltas")) deltas.push_back(to_real(d, "deltas"));
    } else {
        for (double d : {0.01, 0.02, 0.05, 0.1})
            if (d >= delta) deltas.push_back(d);
    }
    for (double d : deltas)
        if (d < delta || d >= 0.5) throw ConfigError("deltas", "each delta must lie in [delta, 1/2)");

    auto f = bridge_fluid_field(problem, linspace(g.min, g.max, g.points), logistic_grid(delta, static_cast<std::size_t>(nt)));
    euler_match_velocity(f);
    const auto res = fluid_residuals(f, interior_mask(f));
    const auto action = action_evaluate(f, deltas);
    io::Table tab{{"x", "t", "rho", "mu"}, {{}, {}, {}, {}}};
    for (std::size_t it = 0; it < f.nt(); ++it)
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            tab.columns[0].push_back(f.x[ix]);
            tab.columns[1].push_back(f.t[it]);
            tab.columns[2].push_back(f.rho[f.idx(ix, it)]);
            tab.columns[3].push_back(f.mu[f.idx(ix, it)]);
        }
    const auto out = out_path(cfg, "hciz.csv");
    const auto action_out = sibling(out, ".action.json");
    io::write_csv(out, tab);
    json aj = to_json(action);
    aj["schema"] = "1";
    aj["beta"] = problem.beta;
    io::write_json(action_out, aj);
    return {{{"outputs", {out, action_out}},
             {"log_coefficient", aj["log_coefficient"]},
             {"euler_residual", io::format_real(res.euler)},
             {"burgers_residual", io::format_real(res.burgers)},
             {"residual_points", res.points}}};
}

Outcome cmd_mc(const json& cfg) {
    const auto spec = ensemble_from(cfg.value("ensemble", json("gue")));
    const auto times = times_from(cfg);
    if (times.size() != 1) throw ConfigError("t", "mc takes a single time");
    const double t = times[0];
    if (!(t > 0.0)) throw ConfigError("t", "must be positive");
    const auto n = int_field(cfg, "n", 256);
    const auto seeds = int_field(cfg, "seeds", 1);
    const auto seed = static_cast<std::uint64_t>(int_field(cfg, "seed", 1));
    const auto bins = int_field(cfg, "bins", 64);
    if (n < 2) throw ConfigError("n", "must be at least 2");
    if (seeds < 1) throw ConfigError("seeds", "must be at least 1");
    if (bins < 1) throw ConfigError("bins", "must be at least 1");
    const bool walk = spec.is<ensemble::UnitaryZ>() || spec.is<ensemble::SingularValue>();
    const auto steps = int_field(cfg, "steps", walk ? static_cast<long long>(std::ceil(t / 0.05)) : 1);
    if (steps < 1) throw ConfigError("steps", "must be at least 1");

    std::vector<std::vector<Complex>> eig(static_cast<std::size_t>(seeds));
    std::vector<std::vector<double>> ov(static_cast<std::size_t>(seeds));
    for (long long k = 0; k < seeds; ++k) {
        const auto s = replica_seed(seed, static_cast<std::uint64_t>(k));
        const auto m = (walk || steps > 1) ? matrix_walk(spec, static_cast<int>(n), static_cast<int>(steps), t / steps, s)
                                           : sample_ensemble(spec, static_cast<int>(n), t, s);
        if (m.kind == MatrixKind::General) {
            auto rec = overlap_stats(m);
            eig[k] = std::move(rec.eigenvalues);
            ov[k] = std::move(rec.o_diag);
        } else {
            eig[k] = eigenvalues(m);
        }
    }
    const bool with_o = !ov[0].empty();
    io::Table tab{{"replica", "re", "im"}, {{}, {}, {}}};
    if (with_o) {
        tab.header.push_back("o_ii");
        tab.columns.emplace_back();
    }
    std::vector<Complex> pooled;
    for (long long k = 0; k < seeds; ++k)
        for (std::size_t i = 0; i < eig[k].size(); ++i) {
            tab.columns[0].push_back(static_cast<double>(k));
            tab.columns[1].push_back(eig[k][i].real());
            tab.columns[2].push_back(eig[k][i].imag());
            if (with_o) tab.columns[3].push_back(ov[k][i]);
            pooled.push_back(eig[k][i]);
        }
    json ks = nullptr, l1 = nullptr;
    if (spec.is<ensemble::Gue>() && steps == 1) {
        std::vector<double> x;
        for (const auto& z : pooled) x.push_back(z.real());
        const auto cdf = [t](double v) { return semicircle_cdf(v, t); };
        ks = io::format_real(ks_distance(x, cdf));
        const double r = 2.0 * std::sqrt(t);
        const auto h = histogram_1d(x, static_cast<int>(bins), -r, r);
        double acc = 0.0;
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            acc += std::abs(h.counts[b] * h.normalization - (cdf(h.edges_x[b + 1]) - cdf(h.edges_x[b])));
        l1 = io::format_real(acc);
    } else if (spec.is<ensemble::Ginibre>() && steps == 1) {
        ks = io::format_real(radial_ks(pooled, t));
        std::vector<double> r2;
        for (const auto& z : pooled) r2.push_back(std::norm(z));
        const auto h = histogram_1d(r2, static_cast<int>(bins), 0.0, t);
        double acc = 0.0;
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            acc += std::abs(h.counts[b] * h.normalization - (h.edges_x[b + 1] - h.edges_x[b]) / t);
        l1 = io::format_real(acc);
    }
    const auto out = out_path(cfg, "mc.csv");
    const auto summary_out = sibling(out, ".json");
    io::write_csv(out, tab);
    json file{{"schema", "1"}, {"ensemble", spec}, {"t", io::format_real(t)}, {"n", n},
              {"seeds", seeds},  {"seed", seed},     {"steps", steps},          {"ks", ks}, {"l1", l1}};
    io::write_json(summary_out, file);
    return {{{"outputs", {out, summary_out}}, {"n", n}, {"seeds", seeds}, {"ks", ks}, {"l1", l1}}};
}

Outcome cmd_validate(const json& cfg) {
    const std::string which = cfg.contains("case") ? cfg.at("case").get<std::string>() : "all";
    CaseOptions opt;
    opt.n = static_cast<int>(int_field(cfg, "n", 0));
    opt.seeds = static_cast<int>(int_field(cfg, "seeds", 0));
    opt.seed = static_cast<std::uint64_t>(int_field(cfg, "seed", 1));
    if (opt.n < 0) throw ConfigError("n", "must be positive");
    if (opt.seeds < 0) throw ConfigError("seeds", "must be positive");
    const std::vector<std::string> names = which == "all" ? case_names() : split(which, ',');
    const auto dir = out_path(cfg, "validate_out");
    Outcome o;
    json cases = json::array();
    bool all = true;
    for (const auto& name : names) {
        const auto r = run_case(name, opt);
        write_case(r, dir);
        all = all && r.pass();
        json c = r.to_json();
        c.erase("schema");
        c["runtime_ms"] = std::llround(r.runtime_ms);
        cases.push_back(c);
    }
    o.summary = {{"outputs", {dir}}, {"pass", all}, {"cases", cases}};
    o.code = all ? 0 : 2;
    return o;
}

void apply_threads() {
    const char* env = std::getenv("RMT_THREADS");
    if (!env || !*env) return;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("RMT_THREADS", std::string("expected a positive integer, got '") + env + "'");
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(v));
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamilton-Jacobi solver for large-N random matrix flows"};
    app.require_subcommand(1);
    struct Flags {
        std::string ensemble, initial, t, grid, epsilon, seed, out, config, kase, n, seeds, problem, bins, steps;
    } f;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"density", "spectral density on a real grid"},
        {"field2d", "complex-plane density from the quaternionic field"},
        {"overlap", "eigenvector overlap correlator O(z, t)"},
        {"boundary", "spectral support boundary"},
        {"edges", "real support edges"},
        {"unitary", "unitary diffusion density in both charts"},
        {"hciz", "bridge hydrodynamics and action"},
        {"mc", "Monte-Carlo sampling"},
        {"validate", "acceptance cases"}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--ensemble", f.ensemble, "ensemble name or JSON");
        s->add_option("--initial", f.initial, "initial measure JSON or file");
        s->add_option("--t", f.t, "time or comma-separated list");
        s->add_option("--grid", f.grid, "min:max:points (2D: xmin:xmax:ymin:ymax:points)");
        s->add_option("--epsilon", f.epsilon, "distance from the real axis");
        s->add_option("--seed", f.seed, "master seed");
        s->add_option("--out", f.out, "output path");
        s->add_option("--config", f.config, "JSON config file");
        s->add_option("--case", f.kase, "validation case or 'all'");
        s->add_option("--n", f.n, "matrix size");
        s->add_option("--seeds", f.seeds, "number of replicas");
        s->add_option("--problem", f.problem, "HCIZ problem JSON or file");
        s->add_option("--bins", f.bins, "histogram bins");
        s->add_option("--steps", f.steps, "matrix walk steps");
        subs.push_back(s);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    std::string command;
    CLI::App* sub = nullptr;
    for (auto* s : subs)
        if (s->parsed()) {
            command = s->get_name();
            sub = s;
        }
    const auto start = std::chrono::steady_clock::now();
    try {
        apply_threads();
        json cfg = json::object();
        if (command == "density" || command == "edges" || command == "unitary") cfg["t"] = 1.0;
        if (command == "field2d" || command == "overlap" || command == "boundary" || command == "mc") cfg["t"] = 1.0;
        if (sub->count("--config")) {
            const json file = io::read_json_file(f.config, "config");
            if (!file.is_object()) throw ConfigError("config", "must be a JSON object");
            cfg.merge_patch(file);
        }
        const std::vector<std::pair<const char*, std::string*>> keyed{
            {"ensemble", &f.ensemble}, {"initial", &f.initial}, {"t", &f.t},         {"grid", &f.grid},
            {"epsilon", &f.epsilon},   {"seed", &f.seed},       {"out", &f.out},     {"case", &f.kase},
            {"n", &f.n},               {"seeds", &f.seeds},     {"problem", &f.problem}, {"bins", &f.bins},
            {"steps", &f.steps}};
        for (const auto& [key, val] : keyed)
            if (sub->count(std::string("--") + key)) cfg[key] = *val;

        Outcome o;
        if (command == "density") o = cmd_density(cfg);
        else if (command == "field2d") o = cmd_field(cfg, false);
        else if (command == "overlap") o = cmd_field(cfg, true);
        else if (command == "boundary") o = cmd_boundary(cfg);
        else if (command == "edges") o = cmd_edges(cfg);
        else if (command == "unitary") o = cmd_unitary(cfg);
        else if (command == "hciz") o = cmd_hciz(cfg);
        else if (command == "mc") o = cmd_mc(cfg);
        else o = cmd_validate(cfg);

        json s{{"schema", "1"}, {"command", command}, {"status", o.code == 0 ? "ok" : "validation_failed"}};
        s.update(o.summary);
        s["runtime_ms"] = std::llround(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
        s["timestamp"] = timestamp();
        std::cout << s.dump() << std::endl;
        return o.code;
    } catch (const Error& e) {
        json s{{"schema", "1"}, {"command", command}, {"status", "error"}, {"error", std::string(to_string(e.kind()))},
               {"message", e.what()}, {"timestamp", timestamp()}};
        if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) s["field"] = ce->field();
        std::cerr << "error: " << e.what() << std::endl;
        std::cout << s.dump() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        std::cout << json{{"schema", "1"}, {"command", command}, {"status", "error"}, {"message", e.what()}}.dump()
                  << std::endl;
        return 1;
    }
}
