#include "eikonal/hciz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "eikonal/characteristics.hpp"
#include "eikonal/io.hpp"
#include "parallel.hpp"

namespace eikonal {

namespace {

constexpr double kPi = std::numbers::pi;

void require_time(double t) {
    if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::InvalidParameter, "bridge time must lie in (0, 1)");
}

}  // namespace

HCIZProblem::HCIZProblem(SpectralMeasure a_, SpectralMeasure b_, double beta_)
    : a(std::move(a_)), b(std::move(b_)), beta(beta_) {
    if (!a.is_real() || !b.is_real()) fail(ErrorKind::NonHermitianSpec, "HCIZ end measures must be real");
    if (beta != 1.0 && beta != 2.0) fail(ErrorKind::InvalidParameter, "beta must be 1 or 2");
}

HCIZProblem hciz_problem_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("hciz", "problem must be a JSON object");
    if (!j.contains("atoms_a")) throw ConfigError("atoms_a", "missing");
    if (!j.contains("atoms_b")) throw ConfigError("atoms_b", "missing");
    const SpectralMeasure a = io::measure_from_json(j.at("atoms_a"), "atoms_a");
    const SpectralMeasure b = io::measure_from_json(j.at("atoms_b"), "atoms_b");
    double beta = 2.0;
    if (j.contains("beta")) {
        if (!j.at("beta").is_number()) throw ConfigError("beta", "must be a number");
        beta = j.at("beta").get<double>();
    }
    try {
        return HCIZProblem(a, b, beta);
    } catch (const Error& e) {
        throw ConfigError(e.kind() == ErrorKind::InvalidParameter ? "beta" : "atoms_a", e.what());
    }
}

std::vector<CoupledAtom> quantile_coupling(const SpectralMeasure& a, const SpectralMeasure& b) {
    auto sorted = [](const SpectralMeasure& m) {
        std::vector<std::pair<double, double>> v;
        for (const auto& x : m.atoms()) v.emplace_back(x.location.real(), x.weight);
        std::sort(v.begin(), v.end());
        return v;
    };
    const auto va = sorted(a), vb = sorted(b);
    std::vector<CoupledAtom> out;
    std::size_t i = 0, j = 0;
    double ra = va[0].second, rb = vb[0].second;
    while (i < va.size() && j < vb.size()) {
        const double w = std::min(ra, rb);
        if (w > 0.0) out.push_back({va[i].first, vb[j].first, w});
        ra -= w;
        rb -= w;
        if (ra <= 1e-15 && i < va.size()) {
            if (++i < va.size()) ra = va[i].second;
        }
        if (rb <= 1e-15 && j < vb.size()) {
            if (++j < vb.size()) rb = vb[j].second;
        }
    }
    return out;
}

SpectralMeasure bridge_base_measure(const HCIZProblem& problem, double t) {
    std::map<double, double> merged;
    for (const auto& c : quantile_coupling(problem.a, problem.b)) merged[(1.0 - t) * c.a + t * c.b] += c.weight;
    std::vector<Atom> atoms;
    double total = 0.0;
    for (const auto& [x, w] : merged) total += w;
    for (const auto& [x, w] : merged) atoms.push_back({Complex{x, 0.0}, w / total});
    return SpectralMeasure(std::move(atoms));
}

Complex bridge_resolvent(const HCIZProblem& problem, Complex z, double t) {
    require_time(t);
    if (!(z.imag() > 0.0)) fail(ErrorKind::InvalidParameter, "bridge_resolvent requires Im z > 0");
    return pastur_solve(bridge_base_measure(problem, t), ensemble::Gue{}, z, t * (1.0 - t));
}

std::vector<double> bridge_edges(const HCIZProblem& problem, double t) {
    require_time(t);
    return caustic_edges(bridge_base_measure(problem, t), ensemble::Gue{}, t * (1.0 - t));
}

PhasePoint bridge_initial_state(const HCIZProblem& problem, Complex z0, Complex alpha0) {
    PhasePoint x;
    x.q = {z0, alpha0};
    for (const auto& c : quantile_coupling(problem.a, problem.b)) {
        const Complex d = z0 - c.a + alpha0 * c.b;
        if (d == Complex{}) fail(ErrorKind::AtomCollision, "z0 - a + alpha0 b vanishes");
        x.p[0] += c.weight / d;
        x.p[1] += c.weight * c.b / d;
    }
    return x;
}

PhasePoint bridge_characteristic_map(const HCIZProblem& problem, Complex z0, Complex alpha0, double t) {
    if (t >= 1.0) fail(ErrorKind::BridgeTimeOverflow, "bridge flow evaluated at t >= 1");
    return characteristic_map(ensemble::Bridge{1.0}, bridge_initial_state(problem, z0, alpha0), t);
}

std::vector<double> logistic_grid(double delta, std::size_t n) {
    if (!(delta > 0.0 && delta < 0.5)) fail(ErrorKind::InvalidParameter, "delta must lie in (0, 1/2)");
    if (n < 2) fail(ErrorKind::GridTooSmall, "time grid needs at least two points");
    const double L = std::log((1.0 - delta) / delta);
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = -L + 2.0 * L * static_cast<double>(k) / static_cast<double>(n - 1);
        t[k] = 1.0 / (1.0 + std::exp(-u));
    }
    t[0] = delta;
    // exact mirror symmetry about 1/2
    for (std::size_t k = 0; k < n / 2; ++k) t[n - 1 - k] = 1.0 - t[k];
    if (n % 2 == 1) t[n / 2] = 0.5;
    return t;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m) {
    // Fornberg (1988), weights for derivatives 0..m; returns order m.
    const int n = static_cast<int>(nodes.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

namespace {

/// First index of the 5-point stencil around k on a grid of n points.
std::size_t stencil_start(std::size_t k, std::size_t n) {
    if (k < 2) return 0;
    if (k + 2 >= n) return n - 5;
    return k - 2;
}

struct Stencil {
    std::size_t start;
    std::vector<double> w;
};

std::vector<Stencil> first_derivative_stencils(const std::vector<double>& grid) {
    if (grid.size() < 5) fail(ErrorKind::GridTooSmall, "finite differences need at least 5 grid points");
    std::vector<Stencil> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::size_t s = stencil_start(k, grid.size());
        out[k] = {s, fd_weights(grid[k], {grid.begin() + s, grid.begin() + s + 5}, 1)};
    }
    return out;
}

bool in_support(const std::vector<std::pair<double, double>>& intervals, double lo, double hi) {
    for (const auto& [a, b] : intervals)
        if (lo > a && hi < b) return true;
    return false;
}

double phase_arg(Complex v) { return std::atan2(v.imag() > 0.0 ? v.imag() : 0.0, v.real()); }

}  // namespace

FluidField bridge_fluid_field(const HCIZProblem& problem, const std::vector<double>& x, const std::vector<double>& t) {
    if (x.size() < 5 || t.size() < 5) fail(ErrorKind::GridTooSmall, "fluid field needs at least 5x5 points");
    for (double tk : t) require_time(tk);
    for (std::size_t k = 1; k < t.size(); ++k)
        if (!(t[k] > t[k - 1])) fail(ErrorKind::InvalidParameter, "time grid must be strictly increasing");
    FluidField f;
    f.x = x;
    f.t = t;
    f.rho.assign(x.size() * t.size(), 0.0);
    f.mu.assign(x.size() * t.size(), 0.0);
    f.cdf.assign(x.size() * t.size(), 0.0);
    f.support.resize(t.size());
    std::vector<SpectralMeasure> base(t.size());
    for (std::size_t it = 0; it < t.size(); ++it) {
        base[it] = bridge_base_measure(problem, t[it]);
        const auto e = caustic_edges(base[it], ensemble::Gue{}, t[it] * (1.0 - t[it]));
        for (std::size_t k = 0; k + 1 < e.size(); k += 2) f.support[it].emplace_back(e[k], e[k + 1]);
    }
    detail::parallel_for(x.size() * t.size(), [&](std::size_t k) {
        const std::size_t it = k / x.size(), ix = k % x.size();
        const double s = t[it] * (1.0 - t[it]);
        const auto sol = pastur_solve_detailed(base[it], ensemble::Gue{}, Complex{x[ix], 0.0}, s);
        f.rho[k] = std::max(0.0, -sol.g.imag() / kPi);
        double im_phi = 0.5 * s * (sol.g * sol.g).imag();
        for (const auto& a : base[it].atoms()) im_phi += a.weight * phase_arg(sol.z0 - a.location);
        f.cdf[k] = 1.0 - im_phi / kPi;
    });
    return f;
}

void euler_match_velocity(FluidField& field) {
    const std::size_t nx = field.nx(), nt = field.nt();
    const auto st = first_derivative_stencils(field.t);
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = field.x[ix];
            const double hx_lo = ix > 0 ? field.x[ix] - field.x[ix - 1] : 0.0;
            const double hx_hi = ix + 1 < nx ? field.x[ix + 1] - field.x[ix] : 0.0;
            const bool claimed = in_support(field.support[it], x - hx_lo, x + hx_hi);
            const double rho = field.rho[field.idx(ix, it)];
            if (claimed && rho < 1e-10)
                fail(ErrorKind::DegenerateDensity, "density vanishes inside the claimed support at x = " +
                                                       std::to_string(x) + ", t = " + std::to_string(field.t[it]));
            if (!(rho > 0.0) || !in_support(field.support[it], x, x)) {
                field.mu[field.idx(ix, it)] = 0.0;
                continue;
            }
            double dF = 0.0;
            for (std::size_t k = 0; k < 5; ++k) dF += st[it].w[k] * field.cdf[field.idx(ix, st[it].start + k)];
            field.mu[field.idx(ix, it)] = -dF / rho;
        }
    }
}

std::vector<char> interior_mask(const FluidField& field, int margin_x, int margin_t) {
    const std::size_t nx = field.nx(), nt = field.nt();
    std::vector<char> mask(nx * nt, 0);
    const auto mx = static_cast<std::size_t>(margin_x), mt = static_cast<std::size_t>(std::max(margin_t, 2));
    for (std::size_t it = mt; it + mt < nt; ++it)
        for (std::size_t ix = mx; ix + mx < nx; ++ix) {
            bool ok = true;
            for (std::size_t r = it - 2; r <= it + 2 && ok; ++r)
                ok = in_support(field.support[r], field.x[ix - mx], field.x[ix + mx]);
            mask[field.idx(ix, it)] = ok;
        }
    return mask;
}

FluidResiduals fluid_residuals(const FluidField& field, const std::vector<char>& mask) {
    const auto st = first_derivative_stencils(field.t);
    const auto sx = first_derivative_stencils(field.x);
    const std::size_t nx = field.nx();
    FluidResiduals r;
    for (std::size_t k = 0; k < mask.size(); ++k) {
        if (!mask[k]) continue;
        const std::size_t it = k / nx, ix = k % nx;
        auto h = [&](std::size_t jx, std::size_t jt) {
            const std::size_t q = field.idx(jx, jt);
            return Complex{field.mu[q], kPi * field.rho[q]};
        };
        Complex dt_h{}, dx_h{};
        double dx_rho2 = 0.0;
        for (std::size_t m = 0; m < 5; ++m) {
            dt_h += st[it].w[m] * h(ix, st[it].start + m);
            dx_h += sx[ix].w[m] * h(sx[ix].start + m, it);
            const double rho = field.rho[field.idx(sx[ix].start + m, it)];
            dx_rho2 += sx[ix].w[m] * rho * rho;
        }
        const Complex hh = h(ix, it);
        const double mu = hh.real();
        const double euler = dt_h.real() + mu * dx_h.real() - 0.5 * kPi * kPi * dx_rho2;
        r.euler = std::max(r.euler, std::abs(euler));
        r.burgers = std::max(r.burgers, std::abs(dt_h + hh * dx_h));
        ++r.points;
    }
    return r;
}

std::vector<double> slice_integrand(const FluidField& field) {
    std::vector<double> out(field.nt(), 0.0);
    const double c = kPi * kPi / 3.0;
    for (std::size_t it = 0; it < field.nt(); ++it) {
        std::vector<double> y(field.nx());
        for (std::size_t ix = 0; ix < field.nx(); ++ix) {
            const double rho = field.rho[field.idx(ix, it)], mu = field.mu[field.idx(ix, it)];
            y[ix] = rho * (mu * mu + c * rho * rho);
        }
        double acc = 0.0;
        for (std::size_t ix = 1; ix < field.nx(); ++ix) acc += 0.5 * (field.x[ix] - field.x[ix - 1]) * (y[ix] + y[ix - 1]);
        out[it] = acc;
    }
    return out;
}

namespace {

double interp(const std::vector<double>& x, const std::vector<double>& y, double at) {
    const auto hi = std::upper_bound(x.begin(), x.end(), at);
    if (hi == x.begin()) return y.front();
    if (hi == x.end()) return y.back();
    const std::size_t k = static_cast<std::size_t>(hi - x.begin());
    const double f = (at - x[k - 1]) / (x[k] - x[k - 1]);
    return y[k - 1] + f * (y[k] - y[k - 1]);
}

}  // namespace

ActionResult action_evaluate(const FluidField& field, const std::vector<double>& deltas) {
    const auto I = slice_integrand(field);
    const auto& t = field.t;
    ActionResult res;
    for (double d : deltas) {
        if (!(d > 0.0 && d < 0.5)) fail(ErrorKind::InvalidParameter, "deltas must lie in (0, 1/2)");
        if (d < t.front() || 1.0 - d > t.back())
            fail(ErrorKind::InvalidParameter, "delta " + std::to_string(d) + " lies outside the time grid");
        std::vector<double> tt{d}, yy{interp(t, I, d)};
        for (std::size_t k = 0; k < t.size(); ++k)
            if (t[k] > d && t[k] < 1.0 - d) {
                tt.push_back(t[k]);
                yy.push_back(I[k]);
            }
        tt.push_back(1.0 - d);
        yy.push_back(interp(t, I, 1.0 - d));
        double s = 0.0;
        for (std::size_t k = 1; k < tt.size(); ++k) s += 0.5 * (tt[k] - tt[k - 1]) * (yy[k] + yy[k - 1]);
        res.s_of_delta.emplace_back(d, 0.5 * s);
    }
    if (res.s_of_delta.size() >= 2) {
        // S = c X + const with X = -ln(delta)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(res.s_of_delta.size());
        for (const auto& [d, s] : res.s_of_delta) {
            const double X = -std::log(d);
            sx += X;
            sy += s;
            sxx += X * X;
            sxy += X * s;
        }
        const double den = n * sxx - sx * sx;
        if (den != 0.0) {
            res.log_coefficient = (n * sxy - sx * sy) / den;
            res.bulk_constant = (sy - res.log_coefficient * sx) / n;
        }
    }
    return res;
}

nlohmann::json to_json(const ActionResult& r) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& [d, v] : r.s_of_delta) s.push_back({{"delta", io::format_real(d)}, {"S", io::format_real(v)}});
    return {{"s_of_delta", s},
            {"log_coefficient", io::format_real(r.log_coefficient)},
            {"bulk_constant", io::format_real(r.bulk_constant)}};
}

}  // namespace eikonal
