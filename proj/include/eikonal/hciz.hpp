#pragma once

#include <utility>
#include <vector>

#include "eikonal/ensembles.hpp"
#include "eikonal/measure.hpp"
#include "json.hpp"

namespace eikonal {

struct HCIZProblem {
    SpectralMeasure a;
    SpectralMeasure b;
    double beta = 2.0;

    HCIZProblem() = default;
    /// Both measures must be real; beta in {1, 2}.
    HCIZProblem(SpectralMeasure a_, SpectralMeasure b_, double beta_ = 2.0);

    HCIZProblem swapped() const { return {b, a, beta}; }
};

HCIZProblem hciz_problem_from_json(const nlohmann::json& j);

/// A and B taken co-diagonal, eigenvalues paired by quantile (both sorted ascending).
struct CoupledAtom {
    double a;
    double b;
    double weight;
};
std::vector<CoupledAtom> quantile_coupling(const SpectralMeasure& a, const SpectralMeasure& b);

/// Spectrum of (1 - t) A + t B.
SpectralMeasure bridge_base_measure(const HCIZProblem& problem, double t);

/// G = G_br(z - t (1 - t) G), G_br the resolvent of (1 - t) A + t B.
/// Requires Im z > 0 and 0 < t < 1.
Complex bridge_resolvent(const HCIZProblem& problem, Complex z, double t);

/// Real support edges at time t.
std::vector<double> bridge_edges(const HCIZProblem& problem, double t);

/// Closed-form flow of the bridge Hamiltonian from (z0, alpha0) with
/// p0 = tr (z0 - A + alpha0 B)^{-1}, p_alpha0 = tr B (z0 - A + alpha0 B)^{-1}.
/// Returns q = (z, alpha), p = (p, p_alpha).
PhasePoint bridge_characteristic_map(const HCIZProblem& problem, Complex z0, Complex alpha0, double t);
PhasePoint bridge_initial_state(const HCIZProblem& problem, Complex z0, Complex alpha0);

/// (rho, mu) on an (x, t) grid. Arrays are row-major in t: index = it * nx + ix.
struct FluidField {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> rho;
    std::vector<double> mu;
    std::vector<double> cdf;
    /// Support intervals per time row.
    std::vector<std::vector<std::pair<double, double>>> support;

    std::size_t nx() const noexcept { return x.size(); }
    std::size_t nt() const noexcept { return t.size(); }
    std::size_t idx(std::size_t ix, std::size_t it) const noexcept { return it * x.size() + ix; }
};

/// Logistic time grid t = 1 / (1 + e^{-u}), u uniform on [-L, L], L = ln((1 - delta) / delta).
std::vector<double> logistic_grid(double delta, std::size_t n);

/// Fills rho = -Im G(x + i0) / pi and the cumulative distribution
/// F = 1 - Im phi / pi with phi = sum_k w_k log(z0 - c_k) + s G^2 / 2.
FluidField bridge_fluid_field(const HCIZProblem& problem, const std::vector<double>& x, const std::vector<double>& t);

/// mu = -(d_t F) / rho from continuity, d_t by 5-point finite differences on the
/// t grid; mu = 0 outside the support. DegenerateDensity if rho < 1e-10 at a
/// cell at least one cell inside a claimed support interval.
void euler_match_velocity(FluidField& field);

/// Cells at least `margin_x` cells from every support edge on all rows of the
/// 5-point time stencil, and at least `margin_t` rows from the ends of the t grid.
std::vector<char> interior_mask(const FluidField& field, int margin_x = 12, int margin_t = 4);

struct FluidResiduals {
    double euler = 0.0;    // sup |d_t mu + mu d_x mu - (pi^2 / 2) d_x rho^2|
    double burgers = 0.0;  // sup |d_t h + h d_x h|, h = mu + i pi rho
    std::size_t points = 0;
};
FluidResiduals fluid_residuals(const FluidField& field, const std::vector<char>& mask);

/// Per time row: int dx rho (mu^2 + pi^2 rho^2 / 3).
std::vector<double> slice_integrand(const FluidField& field);

struct ActionResult {
    std::vector<std::pair<double, double>> s_of_delta;
    double log_coefficient = 0.0;  // c in S = -c ln(delta) + const
    double bulk_constant = 0.0;
};

/// S(delta) = 1/2 int_delta^{1 - delta} dt int dx rho (mu^2 + pi^2 rho^2 / 3) by
/// trapezoid, with a least-squares fit of S = -c ln(delta) + const.
ActionResult action_evaluate(const FluidField& field, const std::vector<double>& deltas);

nlohmann::json to_json(const ActionResult& r);

/// Weights of the m-th derivative at x0 from values at `nodes` (Fornberg).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m);

}  // namespace eikonal
