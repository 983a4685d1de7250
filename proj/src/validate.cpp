#include "eikonal/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "eikonal/characteristics.hpp"
#include "eikonal/error.hpp"
#include "eikonal/hciz.hpp"
#include "eikonal/mc.hpp"
#include "eikonal/spectra.hpp"
#include "eikonal/unitary_flow.hpp"
#include "parallel.hpp"

namespace eikonal {

namespace {

constexpr double kPi = std::numbers::pi;

Check below(std::string name, double value, double limit) { return {std::move(name), value, limit, value < limit}; }

void add_column(io::Table& t, std::string name, std::vector<double> col) {
    t.header.push_back(std::move(name));
    t.columns.push_back(std::move(col));
}

int pick(int override_value, int fallback) { return override_value > 0 ? override_value : fallback; }

SpectralMeasure random_measure(std::mt19937_64& rng, int atoms) {
    std::uniform_real_distribution<double> loc(-2.0, 2.0), wt(0.2, 1.0);
    std::vector<Atom> a;
    double total = 0.0;
    for (int k = 0; k < atoms; ++k) {
        a.push_back({Complex{loc(rng)}, wt(rng)});
        total += a.back().weight;
    }
    for (auto& x : a) x.weight /= total;
    return SpectralMeasure(a);
}

FieldSampler ginibre_sampler(double t) {
    return [t](Complex z) { return quaternionic_field(SpectralMeasure::point(), ensemble::Ginibre{}, z, t); };
}

// criterion 1
CaseResult semicircle_case(const CaseOptions&) {
    CaseResult r;
    std::vector<double> tc, xc, rc, ec;
    double worst = 0.0, edge_err = 0.0, mass_err = 0.0;
    for (double t : {0.25, 1.0, 4.0}) {
        const double rad = 2.0 * std::sqrt(t);
        const auto d = density_1d(
            [t](Complex z) { return pastur_solve(SpectralMeasure::point(), ensemble::Gue{}, z, t); },
            linspace(-1.5 * rad, 1.5 * rad, 601), 1e-6);
        for (std::size_t i = 0; i < d.x.size(); ++i) {
            const double x = d.x[i];
            const double exact = x * x < 4.0 * t ? std::sqrt(4.0 * t - x * x) / (2.0 * kPi * t) : 0.0;
            if (std::abs(x) < rad - 0.01) worst = std::max(worst, std::abs(d.rho[i] - exact));
            tc.push_back(t);
            xc.push_back(x);
            rc.push_back(d.rho[i]);
            ec.push_back(exact);
        }
        mass_err = std::max(mass_err, std::abs(d.mass() - 1.0));
        const auto e = caustic_edges(SpectralMeasure::point(), ensemble::Gue{}, t);
        if (e.size() != 2) {
            edge_err = 1.0;
        } else {
            edge_err = std::max({edge_err, std::abs(e[0] + rad), std::abs(e[1] - rad)});
        }
    }
    r.checks = {below("density_linf_interior", worst, 1e-6), below("edge_error", edge_err, 1e-8),
                below("mass_error", mass_err, 5e-3)};
    add_column(r.data, "t", tc);
    add_column(r.data, "x", xc);
    add_column(r.data, "rho", rc);
    add_column(r.data, "rho_exact", ec);
    return r;
}

// criterion 2
CaseResult pastur_case(const CaseOptions& opt) {
    CaseResult r;
    const std::vector<std::pair<std::string, EnsembleSpec>> specs{{"gue", ensemble::Gue{}},
                                                                  {"wishart_0.5", ensemble::Wishart{0.5}},
                                                                  {"wishart_1", ensemble::Wishart{1.0}},
                                                                  {"wishart_2", ensemble::Wishart{2.0}}};
    std::vector<double> which, resid;
    std::mt19937_64 rng(replica_seed(opt.seed, 0));
    std::uniform_real_distribution<double> ux(-4.0, 4.0), uy(0.01, 3.0), ut(0.05, 3.0), sign(-1.0, 1.0);
    for (std::size_t s = 0; s < specs.size(); ++s) {
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const auto mu = random_measure(rng, 2 + k % 7);
            Complex z{ux(rng), uy(rng)};
            if (sign(rng) < 0.0) z = std::conj(z);
            const double t = ut(rng);
            const Complex g = pastur_solve(mu, specs[s].second, z, t);
            double res = pastur_residual(mu, specs[s].second, z, t, g);
            if (!(g.imag() * z.imag() < 0.0)) res = 1.0;
            worst = std::max(worst, res);
            which.push_back(static_cast<double>(s));
            resid.push_back(res);
        }
        r.checks.push_back(below("residual_" + specs[s].first, worst, 1e-12));
    }
    add_column(r.data, "spec", which);
    add_column(r.data, "residual", resid);
    return r;
}

// criterion 3, closed-form part
CaseResult ginibre_field_case(const CaseOptions&) {
    CaseResult r;
    double rho_err = 0.0, o_err = 0.0, refine = 0.0, radius_err = 0.0;
    std::vector<double> tc, xc, oc;
    for (double t : {0.5, 1.0}) {
        const double half = 0.8 * std::sqrt(t);
        std::vector<ScalarGrid2D> rhos, ovs;
        for (double h : {0.04, 0.02}) {
            const auto n = static_cast<std::size_t>(std::llround(2.0 * half / h)) + 1;
            const auto f = sample_field(ginibre_sampler(t), -half, -half, h, n, n);
            rhos.push_back(density_2d(f));
            ovs.push_back(overlap_correlator(f));
        }
        for (std::size_t g = 0; g < 2; ++g) {
            const auto& rho = rhos[g];
            for (std::size_t j = 0; j < rho.im.size(); ++j)
                for (std::size_t i = 0; i < rho.re.size(); ++i) {
                    const double z2 = rho.re[i] * rho.re[i] + rho.im[j] * rho.im[j];
                    if (std::abs(std::sqrt(z2) - std::sqrt(t)) < 0.1) continue;
                    const double want = z2 < t ? 1.0 / (kPi * t) : 0.0;
                    rho_err = std::max(rho_err, std::abs(rho.at(i, j) - want));
                }
            const auto& ov = ovs[g];
            for (std::size_t j = 0; j < ov.im.size(); ++j)
                for (std::size_t i = 0; i < ov.re.size(); ++i) {
                    const double z2 = ov.re[i] * ov.re[i] + ov.im[j] * ov.im[j];
                    const double want = z2 < t ? (t - z2) / (kPi * t * t) : 0.0;
                    o_err = std::max(o_err, std::abs(ov.at(i, j) - want));
                }
        }
        for (std::size_t j = 0; j < ovs[0].im.size(); ++j)
            for (std::size_t i = 0; i < ovs[0].re.size(); ++i) {
                refine = std::max(refine, std::abs(ovs[0].at(i, j) - ovs[1].at(2 * i, 2 * j)));
                if (j == ovs[0].im.size() / 2) {
                    tc.push_back(t);
                    xc.push_back(ovs[0].re[i]);
                    oc.push_back(ovs[0].at(i, j));
                }
            }
        for (std::size_t j = 1; j + 1 < rhos[0].im.size(); ++j)
            for (std::size_t i = 1; i + 1 < rhos[0].re.size(); ++i) {
                const double z2 = rhos[0].re[i] * rhos[0].re[i] + rhos[0].im[j] * rhos[0].im[j];
                if (std::abs(std::sqrt(z2) - std::sqrt(t)) < 0.1) continue;
                refine = std::max(refine, std::abs(rhos[0].at(i, j) - rhos[1].at(2 * i + 1, 2 * j + 1)));
            }
        for (const Complex z : support_boundary(ginibre_sampler(t), {}, 3.0 * std::sqrt(t)))
            radius_err = std::max(radius_err, std::abs(std::abs(z) - std::sqrt(t)));
    }
    r.checks = {below("rho_error", rho_err, 1e-6), below("overlap_error", o_err, 1e-6),
                below("refinement_error", refine, 1e-6), below("boundary_radius_error", radius_err, 1e-6)};
    add_column(r.data, "t", tc);
    add_column(r.data, "x", xc);
    add_column(r.data, "overlap", oc);
    return r;
}

template <class T>
std::vector<T> replicas(int seeds, std::uint64_t master, const std::function<T(std::uint64_t)>& fn) {
    std::vector<T> out(static_cast<std::size_t>(seeds));
    detail::parallel_for(out.size(), [&](std::size_t k) { out[k] = fn(replica_seed(master, k)); });
    return out;
}

// criterion 3, Monte-Carlo radial law
CaseResult ginibre_radial_case(const CaseOptions& opt) {
    CaseResult r;
    r.n = pick(opt.n, 512);
    r.seeds = pick(opt.seeds, 5);
    const double t = 1.0;
    const int n = r.n;
    const auto ks = replicas<double>(r.seeds, opt.seed, [&](std::uint64_t s) {
        return radial_ks(eigenvalues(sample_ensemble(ensemble::Ginibre{}, n, t, s)), t);
    });
    std::vector<double> idx;
    for (int k = 0; k < r.seeds; ++k) idx.push_back(k);
    r.checks = {below("radial_ks_max", *std::max_element(ks.begin(), ks.end()), 0.04)};
    add_column(r.data, "replica", idx);
    add_column(r.data, "radial_ks", ks);
    return r;
}

// criterion 3, Monte-Carlo overlaps
CaseResult ginibre_overlap_case(const CaseOptions& opt) {
    CaseResult r;
    r.n = pick(opt.n, 256);
    r.seeds = pick(opt.seeds, 20);
    const double t = 1.0, radius = 0.5 * std::sqrt(t);
    const int n = r.n;
    // annuli inside |z| <= radius
    const int bins = 4;
    struct Sums {
        std::vector<double> o, count;
    };
    const auto per = replicas<Sums>(r.seeds, opt.seed, [&](std::uint64_t s) {
        const auto rec = overlap_stats(sample_ensemble(ensemble::Ginibre{}, n, t, s));
        Sums out{std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0)};
        for (std::size_t i = 0; i < rec.eigenvalues.size(); ++i) {
            const double a = std::abs(rec.eigenvalues[i]);
            if (a > radius) continue;
            const int b = std::min(bins - 1, static_cast<int>(bins * a * a / (radius * radius)));
            out.o[b] += rec.o_diag[i];
            out.count[b] += 1.0;
        }
        return out;
    });
    std::vector<double> emp(bins, 0.0), theory(bins), counts(bins, 0.0), lo(bins), hi(bins);
    for (const auto& p : per)
        for (int b = 0; b < bins; ++b) {
            emp[b] += p.o[b];
            counts[b] += p.count[b];
        }
    // integral of (t - |z|^2) / (pi t^2) over r in [r0, r1]
    auto integral = [t](double r0, double r1) {
        auto F = [t](double x) { return (t * x * x / 2.0 - x * x * x * x / 4.0) * 2.0 / (t * t); };
        return F(r1) - F(r0);
    };
    double emp_total = 0.0, theory_total = 0.0;
    std::vector<double> ratio(bins);
    for (int b = 0; b < bins; ++b) {
        lo[b] = radius * std::sqrt(static_cast<double>(b) / bins);
        hi[b] = radius * std::sqrt(static_cast<double>(b + 1) / bins);
        emp[b] /= static_cast<double>(n) * n * r.seeds;
        theory[b] = integral(lo[b], hi[b]);
        ratio[b] = emp[b] / theory[b];
        emp_total += emp[b];
        theory_total += theory[b];
    }
    r.checks = {below("overlap_ratio_deviation", std::abs(emp_total / theory_total - 1.0), 0.1)};
    add_column(r.data, "r_lo", lo);
    add_column(r.data, "r_hi", hi);
    add_column(r.data, "count", counts);
    add_column(r.data, "overlap_mc", emp);
    add_column(r.data, "overlap_theory", theory);
    add_column(r.data, "ratio", ratio);
    return r;
}

// criterion 4
CaseResult elliptic_case(const CaseOptions& opt) {
    CaseResult r;
    r.n = pick(opt.n, 1024);
    r.seeds = pick(opt.seeds, 5);
    const double tau = 0.5, t = 1.0;
    const int n = r.n;
    const auto eig = replicas<std::vector<Complex>>(r.seeds, opt.seed, [&](std::uint64_t s) {
        return eigenvalues(sample_ensemble(ensemble::Elliptic{tau}, n, t, s));
    });
    std::vector<Complex> pooled;
    std::vector<double> ac, bc, idx;
    for (std::size_t k = 0; k < eig.size(); ++k) {
        pooled.insert(pooled.end(), eig[k].begin(), eig[k].end());
        const auto [a, b] = ellipse_fit(eig[k]);
        idx.push_back(static_cast<double>(k));
        ac.push_back(a);
        bc.push_back(b);
    }
    const auto [a, b] = ellipse_fit(pooled);
    const double a_th = std::sqrt(t) * (1.0 + tau), b_th = std::sqrt(t) * (1.0 - tau);

    PhasePoint x0;
    x0.q = {Complex{0.2, 0.1}, Complex{0.5, -0.3}};
    x0.p = {Complex{0.3, 0.4}, Complex{-0.6, 0.2}};
    const EnsembleSpec spec{ensemble::Elliptic{tau}};
    const auto traj = integrate_hamilton(spec, x0, {0.0, 1.0}, 1e-3);
    const Complex h0 = hamiltonian_eval(spec, x0).value;
    double d_pw = 0.0, d_pz = 0.0, d_h = 0.0;
    for (const auto& s : traj.states) {
        d_pw = std::max(d_pw, std::abs(std::norm(s.p[1]) - std::norm(x0.p[1])));
        d_pz = std::max(d_pz, std::abs(0.5 * tau * (s.p[0] * s.p[0] - x0.p[0] * x0.p[0])));
        d_h = std::max(d_h, std::abs(hamiltonian_eval(spec, s).value - h0));
    }
    r.checks = {below("semi_axis_a_rel_error", std::abs(a / a_th - 1.0), 0.02),
                below("semi_axis_b_rel_error", std::abs(b / b_th - 1.0), 0.02), below("drift_pw_sq", d_pw, 1e-8),
                below("drift_tau_pz_sq_half", d_pz, 1e-8), below("drift_hamiltonian", d_h, 1e-8)};
    add_column(r.data, "replica", idx);
    add_column(r.data, "a", ac);
    add_column(r.data, "b", bc);
    return r;
}

// criterion 5
CaseResult unitary_case(const CaseOptions& opt) {
    CaseResult r;
    r.n = pick(opt.n, 256);
    r.seeds = pick(opt.seeds, 5);
    const auto one = AngularMeasure::point(0.0);
    const auto grid = linspace(-kPi, kPi, 2001);
    double mass_err = 0.0, chart = 0.0;
    std::vector<double> tc, thc, ra, rz;
    for (double t : {1.0, 2.0, 3.0, 5.0}) {
        const auto a = unitary_density(one, grid, t, 1e-6);
        const auto z = unitary_density_z(one, grid, t, 1e-6);
        mass_err = std::max({mass_err, std::abs(a.mass() - 1.0), std::abs(z.mass() - 1.0)});
        const auto edges = unitary_edges(one, t);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            bool near_edge = false;
            for (double e : edges) near_edge |= std::abs(wrap_angle(grid[k] - e)) < 0.02;
            if (!near_edge) chart = std::max(chart, std::abs(a.rho[k] - z.rho[k]));
            tc.push_back(t);
            thc.push_back(grid[k]);
            ra.push_back(a.rho[k]);
            rz.push_back(z.rho[k]);
        }
    }
    const double tc_gap = gap_closing_time(one);

    // eigenphases excluded from |theta - pi| < half the predicted gap half-width at t = 3
    const auto e3 = unitary_edges(one, 3.0);
    const double half = e3.empty() ? 0.0 : 0.5 * (kPi - std::abs(e3.back()));
    const double dt = 0.05;
    const int n = r.n;
    struct Gap {
        double at3 = 0.0, at5 = 0.0;
    };
    const auto per = replicas<Gap>(r.seeds, opt.seed, [&](std::uint64_t s) {
        auto count = [&](double t) {
            const auto u = matrix_walk(ensemble::UnitaryZ{}, n, static_cast<int>(std::lround(t / dt)), dt, s);
            double c = 0.0;
            for (const auto& z : eigenvalues(u)) c += std::abs(wrap_angle(std::arg(z) - kPi)) < half;
            return c;
        };
        return Gap{count(3.0), count(5.0)};
    });
    double present = 0.0, absent = 0.0;
    for (const auto& g : per) {
        present += g.at3 == 0.0;
        absent += g.at5 > 0.0;
    }
    r.checks = {below("mass_error", mass_err, 5e-3), below("chart_agreement", chart, 1e-6),
                below("gap_closing_time_error", std::abs(tc_gap - 4.0), 0.01),
                below("seeds_without_gap_at_t3", r.seeds - present, 0.5),
                below("seeds_with_gap_at_t5", r.seeds - absent, 0.5)};
    add_column(r.data, "t", tc);
    add_column(r.data, "theta", thc);
    add_column(r.data, "rho_angular", ra);
    add_column(r.data, "rho_z", rz);
    return r;
}

// criterion 6
CaseResult duality_case(const CaseOptions& opt) {
    CaseResult r;
    std::mt19937_64 rng(replica_seed(opt.seed, 0));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    std::vector<double> tc, dc;
    for (int k = 0; k < 100; ++k) {
        PhasePoint x0;
        x0.q[0] = Complex{1.0 + 0.5 * u(rng), 0.5 * u(rng)};
        x0.p[0] = Complex{u(rng), u(rng)};
        const double t = 0.5 + 0.5 * u(rng);
        const auto sv = characteristic_map(ensemble::SingularValue{}, x0, t);
        const auto un = characteristic_map(ensemble::UnitaryZ{}, x0, -2.0 * t);
        const double d = std::abs(sv.q[0] - un.q[0]) / std::max(1.0, std::abs(un.q[0]));
        worst = std::max(worst, d);
        tc.push_back(t);
        dc.push_back(d);
    }
    r.checks = {below("z_sv_minus_z_unit", worst, 1e-8)};
    add_column(r.data, "t", tc);
    add_column(r.data, "deviation", dc);
    return r;
}

double rho_sem(double x, double t) {
    const double s = t * (1.0 - t);
    return x * x >= 4.0 * s ? 0.0 : std::sqrt(4.0 * s - x * x) / (2.0 * kPi * s);
}

// criterion 7
CaseResult hciz_zero_case(const CaseOptions&) {
    CaseResult r;
    const HCIZProblem p{SpectralMeasure::point(), SpectralMeasure::point(), 2.0};
    auto f = bridge_fluid_field(p, linspace(-1.05, 1.05, 400), logistic_grid(0.01, 400));
    euler_match_velocity(f);
    const auto mask = interior_mask(f);
    double rho_err = 0.0, coef_err = 0.0;
    for (std::size_t it = 0; it < f.nt(); ++it)
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            const double t = f.t[it], x = f.x[ix];
            rho_err = std::max(rho_err, std::abs(f.rho[f.idx(ix, it)] - rho_sem(x, t)));
            if (!mask[f.idx(ix, it)]) continue;
            const double want = std::abs(1.0 - 2.0 * t) * std::abs(x) / (2.0 * t * (1.0 - t));
            coef_err = std::max(coef_err, std::abs(std::abs(f.mu[f.idx(ix, it)]) - want));
        }
    const auto res = fluid_residuals(f, mask);

    auto mid = bridge_fluid_field(p, linspace(-1.02, 1.02, 2001), logistic_grid(0.01, 201));
    euler_match_velocity(mid);
    double mu_half = 0.0;
    for (std::size_t ix = 0; ix < mid.nx(); ++ix) mu_half = std::max(mu_half, std::abs(mid.mu[mid.idx(ix, 100)]));
    const double slice = 0.5 * slice_integrand(mid)[100];

    auto wide = bridge_fluid_field(p, linspace(-1.02, 1.02, 4001), logistic_grid(5e-4, 201));
    euler_match_velocity(wide);
    const auto action = action_evaluate(wide, {1e-3, 2e-3, 5e-3, 1e-2, 2e-2});

    r.checks = {below("rho_sem_error", rho_err, 1e-6),
                below("mu_at_half", mu_half, 1e-10),
                below("mu_coefficient_error", coef_err, 1e-3),
                below("burgers_residual", res.burgers, 1e-2),
                below("euler_residual", res.euler, 1e-2),
                below("slice_action_error", std::abs(slice - 0.5), 1e-3),
                below("log_coefficient_error", std::abs(action.log_coefficient - 0.5), 0.02)};
    std::vector<double> xc, tc, rc, mc;
    for (std::size_t it = 0; it < f.nt(); it += 4)
        for (std::size_t ix = 0; ix < f.nx(); ix += 4) {
            xc.push_back(f.x[ix]);
            tc.push_back(f.t[it]);
            rc.push_back(f.rho[f.idx(ix, it)]);
            mc.push_back(f.mu[f.idx(ix, it)]);
        }
    add_column(r.data, "x", xc);
    add_column(r.data, "t", tc);
    add_column(r.data, "rho", rc);
    add_column(r.data, "mu", mc);
    return r;
}

// criterion 8
CaseResult bridge_endpoint_case(const CaseOptions&) {
    CaseResult r;
    const HCIZProblem p{SpectralMeasure({{Complex{-1.0}, 0.5}, {Complex{1.0}, 0.5}}), SpectralMeasure::point(), 2.0};
    std::vector<Complex> contour;
    for (int k = 1; k < 200; ++k) contour.push_back(2.0 * std::exp(Complex{0.0, kPi * k / 200.0}));
    for (int k = 0; k <= 200; ++k) contour.emplace_back(-2.0 + 4.0 * k / 200.0, 0.5);
    double err0 = 0.0, err1 = 0.0;
    for (const Complex z : contour) {
        err0 = std::max(err0, std::abs(bridge_resolvent(p, z, 1e-6) - p.a.resolvent(z)));
        err1 = std::max(err1, std::abs(bridge_resolvent(p, z, 1.0 - 1e-6) - p.b.resolvent(z)));
    }
    const auto x = linspace(-1.5, 1.5, 121);
    const auto t = logistic_grid(0.02, 41);
    std::vector<double> tr(t.rbegin(), t.rend());
    for (auto& v : tr) v = 1.0 - v;
    const auto f = bridge_fluid_field(p, x, t);
    const auto g = bridge_fluid_field(p.swapped(), x, tr);
    double drho = 0.0;
    for (std::size_t it = 0; it < t.size(); ++it)
        for (std::size_t ix = 0; ix < x.size(); ++ix)
            drho = std::max(drho, std::abs(f.rho[f.idx(ix, it)] - g.rho[g.idx(ix, t.size() - 1 - it)]));
    r.checks = {below("endpoint_error_t0", err0, 1e-4), below("endpoint_error_t1", err1, 1e-4),
                below("time_reversal_rho", drho, 1e-10)};
    std::vector<double> xc, tc, rc;
    for (std::size_t it = 0; it < f.nt(); ++it)
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            xc.push_back(f.x[ix]);
            tc.push_back(f.t[it]);
            rc.push_back(f.rho[f.idx(ix, it)]);
        }
    add_column(r.data, "x", xc);
    add_column(r.data, "t", tc);
    add_column(r.data, "rho", rc);
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// criterion 9
CaseResult determinism_case(const CaseOptions& opt) {
    CaseResult r;
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / ("eikonal-determinism-" + std::to_string(opt.seed));
    const std::vector<std::string> names{"pastur-residual", "ginibre-radial", "ginibre-overlap", "elliptic", "unitary",
                                         "duality"};
    CaseOptions small = opt;
    small.n = pick(opt.n, 64);
    small.seeds = pick(opt.seeds, 3);
    r.n = small.n;
    r.seeds = small.seeds;
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& n : names) write_case(run_case(n, small), (base / std::to_string(pass)).string());
    double mismatched = 0.0;
    std::vector<double> same;
    for (const auto& n : names)
        for (const char* ext : {".csv", ".json"}) {
            const bool eq = slurp(base / "0" / (n + ext)) == slurp(base / "1" / (n + ext)) &&
                            !slurp(base / "0" / (n + ext)).empty();
            same.push_back(eq ? 1.0 : 0.0);
            mismatched += !eq;
        }
    fs::remove_all(base);
    r.checks = {below("mismatched_files", mismatched, 0.5)};
    add_column(r.data, "identical", same);
    return r;
}

using CaseFn = std::function<CaseResult(const CaseOptions&)>;

const std::map<std::string, CaseFn>& registry() {
    static const std::map<std::string, CaseFn> m{
        {"semicircle", semicircle_case},         {"pastur-residual", pastur_case},
        {"ginibre-field", ginibre_field_case},   {"ginibre-radial", ginibre_radial_case},
        {"ginibre-overlap", ginibre_overlap_case}, {"elliptic", elliptic_case},
        {"unitary", unitary_case},               {"duality", duality_case},
        {"hciz-zero", hciz_zero_case},           {"bridge-endpoints", bridge_endpoint_case},
        {"determinism", determinism_case},
    };
    return m;
}

}  // namespace

bool CaseResult::pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json CaseResult::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks)
        cs.push_back({{"name", c.name},
                      {"value", io::format_real(c.value)},
                      {"limit", io::format_real(c.limit)},
                      {"pass", c.pass}});
    return {{"schema", "1"}, {"case", name}, {"pass", pass()}, {"n", n},
            {"seeds", seeds}, {"seed", seed}, {"checks", cs}};
}

const std::vector<std::string>& case_names() {
    static const std::vector<std::string> names{"semicircle",      "pastur-residual", "ginibre-field", "ginibre-radial",
                                                "ginibre-overlap", "elliptic",        "unitary",       "duality",
                                                "hciz-zero",       "bridge-endpoints", "determinism"};
    return names;
}

CaseResult run_case(const std::string& name, const CaseOptions& options) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw ConfigError("case", "unknown validation case '" + name + "'");
    const auto start = std::chrono::steady_clock::now();
    CaseResult r = it->second(options);
    r.name = name;
    r.seed = options.seed;
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

void write_case(const CaseResult& result, const std::string& dir) {
    const auto base = std::filesystem::path(dir) / result.name;
    io::write_csv(base.string() + ".csv", result.data);
    io::write_json(base.string() + ".json", result.to_json());
}

}  // namespace eikonal
