#include "eikonal/characteristics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "eikonal/polynomial.hpp"

namespace eikonal {

namespace {

constexpr double kAxisOffset = 1e-9;   // tie-break offset for real z
constexpr int kMaxPolynomialAtoms = 32;  // beyond this, continuation only

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// D(x) = prod (x - x_i), N(x) = sum w_i prod_{j != i} (x - x_j), so G0 = N / D.
struct MeasurePolys {
    Polynomial d;
    Polynomial n;
    Polynomial m;  // N D' - N' D, so that G0' = -M / D^2

    explicit MeasurePolys(const SpectralMeasure& mu) {
        d = Polynomial::constant(1.0);
        for (const auto& a : mu.atoms()) d = d * Polynomial::linear_factor(a.location);
        n = Polynomial::constant(0.0);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            Polynomial term = Polynomial::constant(mu.atoms()[i].weight);
            for (std::size_t j = 0; j < mu.size(); ++j)
                if (j != i) term = term * Polynomial::linear_factor(mu.atoms()[j].location);
            n = n + term;
        }
        m = n * d.derivative() - n.derivative() * d;
    }
};

/// Closed-form characteristic map of a real-spectrum scalar flow.
///   GUE      z = z0 + t p0,                        G = p0
///   OU       z = (z0 + s p0) / e,  e = exp(a t),   G = e p0,  s = (e^2 - 1) / (2a)
///   Wishart  z = z0 u^2 + (1 - r) t u,  u = 1 + r t p0,   G = p0 / u
class ScalarFlow {
public:
    enum class Kind { Gue, Ou, Wishart };

    ScalarFlow(const EnsembleSpec& spec, double t) : t_(t) {
        if (spec.is<ensemble::Gue>()) {
            kind_ = Kind::Gue;
        } else if (spec.is<ensemble::OrnsteinUhlenbeck>()) {
            kind_ = Kind::Ou;
            const double a = spec.as<ensemble::OrnsteinUhlenbeck>().a;
            e_ = std::exp(a * t);
            s_ = (a == 0.0) ? t : std::expm1(2.0 * a * t) / (2.0 * a);
        } else if (spec.is<ensemble::Wishart>()) {
            kind_ = Kind::Wishart;
            r_ = spec.as<ensemble::Wishart>().r;
        } else if (spec.phase_space() == PhaseSpace::Quaternionic) {
            fail(ErrorKind::NonHermitianSpec, spec.name() + " has a complex spectrum; use quaternionic_field");
        } else {
            fail(ErrorKind::UnsupportedVariant, spec.name() + " has no closed-form resolvent map");
        }
    }

    bool uses_subordination() const { return kind_ != Kind::Wishart; }

    std::pair<Complex, Complex> forward(const SpectralMeasure& mu, Complex z0) const {
        const Complex p0 = mu.resolvent(z0);
        switch (kind_) {
            case Kind::Gue: return {z0 + t_ * p0, p0};
            case Kind::Ou: return {(z0 + s_ * p0) / e_, e_ * p0};
            case Kind::Wishart: {
                const Complex u = 1.0 + r_ * t_ * p0;
                return {z0 * u * u + (1.0 - r_) * t_ * u, p0 / u};
            }
        }
        return {};
    }

    Complex initial_point(Complex z, Complex g) const {
        switch (kind_) {
            case Kind::Gue: return z - t_ * g;
            case Kind::Ou: return z * e_ - s_ * g / e_;
            case Kind::Wishart: {
                const Complex v = 1.0 - r_ * t_ * g;
                return z * v * v - (1.0 - r_) * t_ * v;
            }
        }
        return {};
    }

    /// Momentum predicted at (z, G) by transporting G0 from the inverted initial point.
    Complex predicted(const SpectralMeasure& mu, Complex z, Complex g) const {
        const Complex z0 = initial_point(z, g);
        switch (kind_) {
            case Kind::Gue: return mu.resolvent(z0);
            case Kind::Ou: return e_ * mu.resolvent(z0);
            case Kind::Wishart: return (1.0 - r_ * t_ * g) * mu.resolvent(z0);
        }
        return {};
    }

    Complex d_predicted(const SpectralMeasure& mu, Complex z, Complex g) const {
        const Complex z0 = initial_point(z, g);
        switch (kind_) {
            case Kind::Gue: return -t_ * mu.resolvent_derivative(z0);
            case Kind::Ou: return -s_ * mu.resolvent_derivative(z0);
            case Kind::Wishart: {
                const Complex v = 1.0 - r_ * t_ * g;
                const Complex dz0 = (2.0 * z * v - (1.0 - r_) * t_) * (-r_ * t_);
                return -r_ * t_ * mu.resolvent(z0) + v * mu.resolvent_derivative(z0) * dz0;
            }
        }
        return {};
    }

    /// Polynomial in z0 whose roots are the initial points mapped onto z.
    Polynomial root_polynomial(const MeasurePolys& mp, Complex z) const {
        const Polynomial x = Polynomial::x();
        switch (kind_) {
            case Kind::Gue: return (x - Polynomial::constant(z)) * mp.d + Complex{t_} * mp.n;
            case Kind::Ou: return (x - Polynomial::constant(z * e_)) * mp.d + Complex{s_} * mp.n;
            case Kind::Wishart: {
                const Polynomial du = mp.d + Complex{r_ * t_} * mp.n;  // D u
                return x * du * du + Complex{(1.0 - r_) * t_} * mp.d * du - z * mp.d * mp.d;
            }
        }
        return {};
    }

    /// Polynomial in z0 whose roots are the critical points dz/dz0 = 0.
    Polynomial critical_polynomial(const MeasurePolys& mp) const {
        switch (kind_) {
            case Kind::Gue: return mp.d * mp.d - Complex{t_} * mp.m;
            case Kind::Ou: return mp.d * mp.d - Complex{s_} * mp.m;
            case Kind::Wishart: {
                const Polynomial du = mp.d + Complex{r_ * t_} * mp.n;
                const Polynomial x = Polynomial::x();
                return mp.d * du * du -
                       Complex{r_ * t_} * mp.m * (Complex{2.0} * x * du + Complex{(1.0 - r_) * t_} * mp.d);
            }
        }
        return {};
    }

    Complex wishart_u(const SpectralMeasure& mu, Complex z0) const {
        return kind_ == Kind::Wishart ? 1.0 + r_ * t_ * mu.resolvent(z0) : Complex{1.0};
    }

private:
    Kind kind_ = Kind::Gue;
    double t_ = 0.0;
    double e_ = 1.0;
    double s_ = 0.0;
    double r_ = 1.0;
};

double atom_scale(const SpectralMeasure& mu) {
    double s = 1.0;
    for (const auto& a : mu.atoms()) s = std::max(s, std::abs(a.location));
    return s;
}

bool near_atom(const SpectralMeasure& mu, Complex x, double tol) {
    for (const auto& a : mu.atoms())
        if (std::abs(x - a.location) <= tol) return true;
    return false;
}

/// Newton on F(G) = G - predicted(z, G); keeps the best iterate.
Complex polish_g(const ScalarFlow& flow, const SpectralMeasure& mu, Complex z, Complex g, int max_iter = 40) {
    Complex best = g;
    double best_res = std::abs(g - flow.predicted(mu, z, g));
    for (int it = 0; it < max_iter && best_res > 0.0; ++it) {
        const Complex f = g - flow.predicted(mu, z, g);
        const Complex df = 1.0 - flow.d_predicted(mu, z, g);
        if (df == Complex{}) break;
        const Complex step = f / df;
        if (!is_finite(step)) break;
        g -= step;
        const double res = std::abs(g - flow.predicted(mu, z, g));
        if (res < best_res) {
            best = g;
            best_res = res;
        }
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(g))) break;
    }
    return best;
}

struct Candidate {
    Complex z0;
    Complex g;
};

std::vector<Candidate> polynomial_candidates(const ScalarFlow& flow, const SpectralMeasure& mu,
                                             const MeasurePolys& mp, Complex z) {
    const double atom_tol = 1e-10 * atom_scale(mu);
    std::vector<Candidate> out;
    for (Complex z0 : flow.root_polynomial(mp, z).roots()) {
        if (near_atom(mu, z0, atom_tol)) continue;
        if (std::abs(flow.wishart_u(mu, z0)) < 1e-14) continue;
        const auto [zz, g] = flow.forward(mu, z0);
        if (!is_finite(g)) continue;
        out.push_back({z0, g});
    }
    return out;
}

bool herglotz(const ScalarFlow& flow, Complex z, const Candidate& c) {
    const double s = sign_of(z.imag());
    if (!(c.g.imag() * s < 0.0)) return false;
    if (flow.uses_subordination() && !(c.z0.imag() * s > 0.0)) return false;
    return true;
}

/// Tracks the branch that behaves as 1/z at large Im z down to the target,
/// using Newton in G at every rung of a geometric ladder in Im z.
Complex continuation_solve(const ScalarFlow& flow, const SpectralMeasure& mu, Complex z) {
    const double y_target = z.imag();
    const double y_top = std::max(10.0 * (atom_scale(mu) + std::abs(z.real()) + 1.0), 2.0 * y_target);
    constexpr int kRungs = 120;
    Complex g = 1.0 / Complex{z.real(), y_top};
    for (int k = 0; k <= kRungs; ++k) {
        const double frac = static_cast<double>(k) / kRungs;
        const double y = y_top * std::pow(y_target / y_top, frac);
        const Complex zk{z.real(), y};
        g = polish_g(flow, mu, zk, g);
    }
    return g;
}

ResolventSolution solve_upper(const ScalarFlow& flow, const SpectralMeasure& mu, Complex z) {
    std::optional<Complex> chosen;
    if (mu.size() <= kMaxPolynomialAtoms) {
        const MeasurePolys mp(mu);
        std::vector<Candidate> admissible;
        for (const auto& c : polynomial_candidates(flow, mu, mp, z))
            if (herglotz(flow, z, c)) admissible.push_back(c);
        if (admissible.size() == 1) chosen = admissible.front().g;
    }
    if (!chosen) chosen = continuation_solve(flow, mu, z);
    const Complex g = polish_g(flow, mu, z, *chosen);
    const double res = std::abs(g - flow.predicted(mu, z, g));
    if (!(g.imag() * sign_of(z.imag()) < 0.0) || !is_finite(g) || res > 1e-8 * std::max(1.0, std::abs(g)))
        fail(ErrorKind::BranchAmbiguity, "no root satisfies the Herglotz condition");
    return {g, flow.initial_point(z, g), res};
}

ResolventSolution solve_on_axis(const ScalarFlow& flow, const SpectralMeasure& mu, Complex z) {
    const ResolventSolution above = solve_upper(flow, mu, z + Complex{0.0, kAxisOffset});
    Complex best = above.g;
    if (mu.size() <= kMaxPolynomialAtoms) {
        const MeasurePolys mp(mu);
        double best_dist = std::numeric_limits<double>::infinity();
        for (const auto& c : polynomial_candidates(flow, mu, mp, z)) {
            const double d = std::abs(c.g - above.g);
            if (d < best_dist) {
                best_dist = d;
                best = c.g;
            }
        }
    }
    Complex g = polish_g(flow, mu, z, best);
    // Keep the lower half-plane limit when the polish lands on the conjugate root.
    if (g.imag() > 0.0) g = std::conj(g);
    return {g, flow.initial_point(z, g), std::abs(g - flow.predicted(mu, z, g))};
}

}  // namespace

ResolventSolution pastur_solve_detailed(const SpectralMeasure& initial, const EnsembleSpec& spec, Complex z, double t) {
    checked(z, "z");
    if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorKind::InvalidParameter, "t must be finite and non-negative");
    const ScalarFlow flow(spec, t);
    if (!initial.is_real()) fail(ErrorKind::NonHermitianSpec, "initial measure has non-real atoms");
    if (t == 0.0) {
        const Complex g = initial.resolvent(z);
        return {g, z, 0.0};
    }
    if (z.imag() < 0.0) {
        ResolventSolution s = solve_upper(flow, initial, std::conj(z));
        return {std::conj(s.g), std::conj(s.z0), s.residual};
    }
    if (z.imag() == 0.0) return solve_on_axis(flow, initial, z);
    return solve_upper(flow, initial, z);
}

Complex pastur_solve(const SpectralMeasure& initial, const EnsembleSpec& spec, Complex z, double t) {
    return pastur_solve_detailed(initial, spec, z, t).g;
}

double pastur_residual(const SpectralMeasure& initial, const EnsembleSpec& spec, Complex z, double t, Complex g) {
    const ScalarFlow flow(spec, t);
    return std::abs(g - flow.predicted(initial, z, g));
}

std::vector<double> caustic_edges(const SpectralMeasure& initial, const EnsembleSpec& spec, double t) {
    if (!(t > 0.0)) fail(ErrorKind::InvalidParameter, "caustic_edges requires t > 0");
    if (!initial.is_real()) fail(ErrorKind::NonHermitianSpec, "initial measure has non-real atoms");
    const ScalarFlow flow(spec, t);
    const MeasurePolys mp(initial);
    const double scale = atom_scale(initial);
    std::vector<double> edges;
    for (Complex c : flow.critical_polynomial(mp).roots()) {
        if (std::abs(c.imag()) > 1e-7 * std::max(1.0, std::abs(c))) continue;
        const double x0 = c.real();
        if (near_atom(initial, x0, 1e-10 * scale)) continue;
        const double x = flow.forward(initial, x0).first.real();
        if (std::isfinite(x)) edges.push_back(x);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [&](double a, double b) { return std::abs(a - b) <= 1e-10 * scale; }),
                edges.end());
    return edges;
}

// ---------------------------------------------------------------------------
// Quaternionic fields

namespace {

struct QuaternionicInitial {
    Complex pz;  // p_z(z0, s)
    double S;    // sum w_i / (|z0 - x_i|^2 + s)
};

QuaternionicInitial initial_momenta(const SpectralMeasure& mu, Complex z0, double s) {
    QuaternionicInitial out{Complex{}, 0.0};
    for (const auto& a : mu.atoms()) {
        const Complex u = z0 - a.location;
        const double den = std::norm(u) + s;
        out.pz += a.weight * std::conj(u) / den;
        out.S += a.weight / den;
    }
    return out;
}

/// Roots s > 1e-12 of t S(s) A(-s S^2) = 1 at fixed z0 (tau = 0 flows).
std::vector<double> radial_branches(const SpectralMeasure& mu, const ensemble::BiUnitary& gen, Complex z0, double t) {
    auto f = [&](double s) {
        const double S = initial_momenta(mu, z0, s).S;
        return t * S * generating_sequence(gen, -s * S * S) - 1.0;
    };
    double coeff_sum = 0.0;
    for (double a : gen.a_coeffs) coeff_sum += std::abs(a);
    const double s_lo = 1e-12;
    if (gen.a_coeffs.size() == 1 && gen.a_coeffs[0] > 0.0) {
        // A constant: f decreases monotonically in s, one root at most.
        if (!(f(s_lo) > 0.0)) return {};
        double a = s_lo, b = 2.0 * s_lo + 1.0;
        while (f(b) > 0.0) {
            a = b;
            b *= 2.0;
            if (b > 1e300) fail(ErrorKind::NoConvergence, "radial constraint does not bracket");
        }
        for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
            const double mid = 0.5 * (a + b);
            (f(mid) > 0.0 ? a : b) = mid;
        }
        return {0.5 * (a + b)};
    }
    const double s_hi = 1e3 * (1.0 + t * coeff_sum);
    constexpr int kScan = 4000;
    std::vector<double> roots;
    double prev_s = s_lo;
    double prev_f = f(prev_s);
    for (int k = 1; k <= kScan; ++k) {
        const double s = s_lo * std::pow(s_hi / s_lo, static_cast<double>(k) / kScan);
        const double fs = f(s);
        if (prev_f == 0.0) {
            roots.push_back(prev_s);
        } else if (sign_of(prev_f) != sign_of(fs) && fs != 0.0) {
            double a = prev_s, b = s, fa = prev_f;
            for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = f(mid);
                if (sign_of(fm) == sign_of(fa)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_s = s;
        prev_f = fs;
    }
    return roots;
}

struct EllipticSolve {
    Complex z0;
    double s;
    double residual;
};

Eigen::Vector3d elliptic_residual(const SpectralMeasure& mu, double tau, double t, Complex z, const Eigen::Vector3d& v) {
    const Complex z0{v(0), v(1)};
    const auto m = initial_momenta(mu, z0, v(2));
    const Complex r = z0 + t * tau * m.pz - z;
    return {r.real(), r.imag(), t * m.S - 1.0};
}

std::optional<EllipticSolve> elliptic_newton(const SpectralMeasure& mu, double tau, double t, Complex z,
                                             Complex z0_seed, double s_seed) {
    Eigen::Vector3d v(z0_seed.real(), z0_seed.imag(), s_seed);
    Eigen::Vector3d f = elliptic_residual(mu, tau, t, z, v);
    const double scale = 1.0 + std::abs(z) + t;
    for (int it = 0; it < 100; ++it) {
        if (f.norm() < 1e-14 * scale) break;
        Eigen::Matrix3d jac;
        for (int k = 0; k < 3; ++k) {
            const double h = 1e-7 * (1.0 + std::abs(v(k)));
            Eigen::Vector3d vp = v, vm = v;
            vp(k) += h;
            vm(k) -= h;
            if (k == 2 && vm(2) < 0.0) {
                vm(2) = v(2);
                jac.col(k) = (elliptic_residual(mu, tau, t, z, vp) - f) / h;
                continue;
            }
            jac.col(k) = (elliptic_residual(mu, tau, t, z, vp) - elliptic_residual(mu, tau, t, z, vm)) / (2.0 * h);
        }
        const Eigen::Vector3d step = jac.fullPivLu().solve(-f);
        if (!step.allFinite()) return std::nullopt;
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 40; ++ls) {
            Eigen::Vector3d trial = v + lambda * step;
            if (trial(2) < 0.0) trial(2) = 0.5 * v(2);
            const Eigen::Vector3d ft = elliptic_residual(mu, tau, t, z, trial);
            if (ft.allFinite() && ft.norm() < f.norm()) {
                v = trial;
                f = ft;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
    }
    if (!f.allFinite() || f.norm() > 1e-11 * scale) return std::nullopt;
    return EllipticSolve{{v(0), v(1)}, v(2), f.norm()};
}

FieldSample outside_sample(const SpectralMeasure& mu, Complex z, Complex z0) {
    FieldSample out;
    out.z = z;
    out.z0 = z0;
    out.g = mu.resolvent(z0);
    out.pw_sq = 0.0;
    out.inside_support = false;
    out.branches = 0;
    return out;
}

}  // namespace

FieldSample quaternionic_field(const SpectralMeasure& initial, const EnsembleSpec& spec, Complex z, double t) {
    checked(z, "z");
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorKind::InvalidParameter, "quaternionic_field requires t > 0");
    double tau = 0.0;
    ensemble::BiUnitary gen{{1.0}};
    if (spec.is<ensemble::Elliptic>()) tau = spec.as<ensemble::Elliptic>().tau;
    else if (spec.is<ensemble::BiUnitary>()) gen = spec.as<ensemble::BiUnitary>();
    else if (!spec.is<ensemble::Ginibre>())
        fail(ErrorKind::UnsupportedVariant, spec.name() + " is not a Ginibre/Elliptic/BiUnitary flow");

    if (tau == 0.0) {
        // Eigenvalue coordinate is frozen: z0 = z, only |w0|^2 is unknown.
        const auto roots = radial_branches(initial, gen, z, t);
        if (roots.empty()) return outside_sample(initial, z, z);
        const double s = roots.front();
        const auto m = initial_momenta(initial, z, s);
        FieldSample out;
        out.z = z;
        out.z0 = z;
        out.w0_sq = s;
        out.g = m.pz;
        out.pw_sq = s * m.S * m.S;
        out.inside_support = true;
        out.branches = static_cast<int>(roots.size());
        out.ambiguous = roots.size() > 1;
        return out;
    }

    const Complex mean = initial.mean();
    const Complex zc = z - mean;
    const double denom = 1.0 - tau * tau;
    std::vector<Complex> z0_seeds{z};
    if (denom > 1e-12) z0_seeds.push_back(mean + (zc - tau * std::conj(zc)) / denom);
    std::optional<EllipticSolve> inside;
    for (Complex z0s : z0_seeds) {
        for (double s_seed : {0.0, 0.5 * t, t}) {
            auto sol = elliptic_newton(initial, tau, t, z, z0s, s_seed);
            if (sol && sol->s > 1e-12) {
                inside = sol;
                break;
            }
        }
        if (inside) break;
    }
    if (inside) {
        const auto m = initial_momenta(initial, inside->z0, inside->s);
        FieldSample out;
        out.z = z;
        out.z0 = inside->z0;
        out.w0_sq = inside->s;
        out.g = m.pz;
        out.pw_sq = inside->s * m.S * m.S;
        out.inside_support = true;
        return out;
    }

    // Holomorphic branch: z0 + t tau G0(z0) = z with a stable w0 = 0 fixed point.
    const MeasurePolys mp(initial);
    const Polynomial eq = (Polynomial::x() - Polynomial::constant(z)) * mp.d + Complex{t * tau} * mp.n;
    std::optional<Complex> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Complex z0 : eq.roots()) {
        if (near_atom(initial, z0, 1e-10 * atom_scale(initial))) continue;
        if (t * initial_momenta(initial, z0, 0.0).S > 1.0 + 1e-9) continue;
        const double d = std::abs(z0 - z);
        if (d < best_dist) {
            best_dist = d;
            best = z0;
        }
    }
    if (!best) fail(ErrorKind::NoConvergence, "characteristic constraint system has no admissible solution");
    return outside_sample(initial, z, *best);
}

// ---------------------------------------------------------------------------
// Hamilton flow

namespace {

PhasePoint axpy(const PhasePoint& x, double a, const PhasePoint& k) {
    PhasePoint out = x;
    for (int i = 0; i < 2; ++i) {
        out.q[i] += a * k.q[i];
        out.p[i] += a * k.p[i];
    }
    return out;
}

PhasePoint velocity(const EnsembleSpec& spec, double t, const PhasePoint& x) {
    const HamiltonianValue h = hamiltonian_eval(spec, x, t);
    PhasePoint v;
    for (int i = 0; i < 2; ++i) {
        v.q[i] = h.dp[i];
        v.p[i] = -h.dq[i];
    }
    return v;
}

PhasePoint rk4_step(const EnsembleSpec& spec, double t, const PhasePoint& x, double h) {
    const PhasePoint k1 = velocity(spec, t, x);
    const PhasePoint k2 = velocity(spec, t + 0.5 * h, axpy(x, 0.5 * h, k1));
    const PhasePoint k3 = velocity(spec, t + 0.5 * h, axpy(x, 0.5 * h, k2));
    const PhasePoint k4 = velocity(spec, t + h, axpy(x, h, k3));
    PhasePoint out = x;
    for (int i = 0; i < 2; ++i) {
        out.q[i] += h / 6.0 * (k1.q[i] + 2.0 * k2.q[i] + 2.0 * k3.q[i] + k4.q[i]);
        out.p[i] += h / 6.0 * (k1.p[i] + 2.0 * k2.p[i] + 2.0 * k3.p[i] + k4.p[i]);
    }
    return out;
}

double max_diff(const PhasePoint& a, const PhasePoint& b) {
    double d = 0.0;
    for (int i = 0; i < 2; ++i) {
        d = std::max(d, std::abs(a.q[i] - b.q[i]));
        d = std::max(d, std::abs(a.p[i] - b.p[i]));
    }
    return d;
}

}  // namespace

PhaseTrajectory integrate_hamilton(const EnsembleSpec& spec, const PhasePoint& state0, std::pair<double, double> t_span,
                                   double step) {
    const auto [t0, t1] = t_span;
    if (!std::isfinite(t0) || !std::isfinite(t1)) fail(ErrorKind::InvalidParameter, "time span must be finite");
    if (!(step > 0.0) || !std::isfinite(step)) fail(ErrorKind::StepUnderflow, "step must be positive");
    const double span = t1 - t0;
    const double n_real = std::ceil(std::abs(span) / step - 1e-9);
    if (n_real > 1e7 || (span != 0.0 && step < 1e-14 * std::abs(span)))
        fail(ErrorKind::StepUnderflow, "step too small for the requested span");
    const long n = std::max(1L, static_cast<long>(n_real));
    const double h = span / static_cast<double>(n);

    PhaseTrajectory traj;
    traj.times.reserve(static_cast<std::size_t>(n) + 1);
    traj.states.reserve(static_cast<std::size_t>(n) + 1);
    traj.times.push_back(t0);
    traj.states.push_back(state0);
    PhasePoint x = state0;
    for (long k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) * h;
        x = rk4_step(spec, t, x, h);
        traj.times.push_back(k + 1 == n ? t1 : t0 + static_cast<double>(k + 1) * h);
        traj.states.push_back(x);
    }

    // Richardson estimate from one half-step pass.
    PhasePoint y = state0;
    for (long k = 0; k < 2 * n; ++k) y = rk4_step(spec, t0 + static_cast<double>(k) * 0.5 * h, y, 0.5 * h);
    traj.error_estimate = max_diff(x, y) / 15.0;
    return traj;
}

PhasePoint characteristic_map(const EnsembleSpec& spec, const PhasePoint& x0, double t) {
    PhasePoint x = x0;
    const Complex z0 = x0.q[0], p0 = x0.p[0];
    if (spec.is<ensemble::Gue>() || spec.is<ensemble::FreeRotor>()) {
        x.q[0] = z0 + p0 * t;
    } else if (spec.phase_space() == PhaseSpace::Quaternionic && spec.is_additive()) {
        // H depends on momenta only: momenta frozen, coordinates drift linearly.
        const HamiltonianValue h = hamiltonian_eval(spec, x0, 0.0);
        x.q[0] = x0.q[0] + t * h.dp[0];
        x.q[1] = x0.q[1] + t * h.dp[1];
    } else if (spec.is<ensemble::OrnsteinUhlenbeck>()) {
        const double a = spec.as<ensemble::OrnsteinUhlenbeck>().a;
        const double e = std::exp(a * t);
        const double s = (a == 0.0) ? t : std::expm1(2.0 * a * t) / (2.0 * a);
        x.p[0] = p0 * e;
        x.q[0] = (z0 + s * p0) / e;
    } else if (spec.is<ensemble::Wishart>()) {
        const double r = spec.as<ensemble::Wishart>().r;
        const Complex u = 1.0 + r * t * p0;
        x.p[0] = p0 / u;
        x.q[0] = z0 * u * u + (1.0 - r) * t * u;
    } else if (spec.is<ensemble::UnitaryZ>()) {
        const Complex c = z0 * p0;  // conserved
        const Complex f = std::exp(t * (0.5 - c));
        x.q[0] = z0 * f;
        x.p[0] = p0 / f;
    } else if (spec.is<ensemble::SingularValue>()) {
        const Complex c = z0 * p0;
        const Complex f = std::exp(t * (2.0 * c - 1.0));
        x.q[0] = z0 * f;
        x.p[0] = p0 / f;
    } else if (spec.is<ensemble::Bridge>()) {
        const double tf = spec.as<ensemble::Bridge>().t_f;
        if (t >= tf) fail(ErrorKind::BridgeTimeOverflow, "bridge flow evaluated at t >= t_f");
        const double k = tf / (tf - t);
        x.p[0] = k * p0;
        x.p[1] = k * x0.p[1];
        x.q[0] = p0 * t + z0 * (tf - t) / tf;
        x.q[1] = t / tf + x0.q[1] * (tf - t) / tf;
    } else {
        fail(ErrorKind::UnsupportedVariant, spec.name() + " has no closed-form characteristic map");
    }
    return x;
}

}  // namespace eikonal
