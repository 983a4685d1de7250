#pragma once

#include <utility>
#include <vector>

#include "eikonal/ensembles.hpp"
#include "eikonal/measure.hpp"

namespace eikonal {

/// Resolvent G(z, t) of a real-spectrum scalar flow started from `initial`,
/// together with the initial point of the characteristic that reaches z.
struct ResolventSolution {
    Complex g;
    Complex z0;
    double residual;
};

/// Solves the implicit characteristic equation for G(z, t) and returns the
/// Herglotz branch (sign Im G = -sign Im z). GUE: G = G0(z - tG); OU and Wishart
/// use their own closed-form characteristic maps. All roots are captured from a
/// polynomial in z0 (companion matrix), filtered, then Newton-polished in G.
/// On the real axis the root continuous with z + 1e-9 i is returned.
ResolventSolution pastur_solve_detailed(const SpectralMeasure& initial, const EnsembleSpec& spec, Complex z, double t);
Complex pastur_solve(const SpectralMeasure& initial, const EnsembleSpec& spec, Complex z, double t);

/// |G - p(t)| where p(t) is the momentum carried from the initial point that the
/// inverted characteristic map assigns to (z, G). For GUE this is |G - G0(z - tG)|.
double pastur_residual(const SpectralMeasure& initial, const EnsembleSpec& spec, Complex z, double t, Complex g);

/// Real support edges: critical values of the characteristic map z(z0) on the
/// real axis, sorted ascending.
std::vector<double> caustic_edges(const SpectralMeasure& initial, const EnsembleSpec& spec, double t);

/// Quaternionic field at w -> 0 for Ginibre / Elliptic / BiUnitary flows.
struct FieldSample {
    Complex z;
    Complex g;            // p_z, the electric field
    double pw_sq = 0.0;   // |p_w|^2
    bool inside_support = false;
    Complex z0;           // initial point of the characteristic
    double w0_sq = 0.0;   // |w0|^2 (gauge: w0 real, non-negative)
    int branches = 1;     // number of converged inside branches
    bool ambiguous = false;
};

FieldSample quaternionic_field(const SpectralMeasure& initial, const EnsembleSpec& spec, Complex z, double t);

struct PhaseTrajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;
    /// max-norm difference between the step-h and step-h/2 endpoints, divided by 15.
    double error_estimate = 0.0;
};

/// Classical RK4 with a fixed step. `t_span` may run backwards.
PhaseTrajectory integrate_hamilton(const EnsembleSpec& spec, const PhasePoint& state0,
                                   std::pair<double, double> t_span, double step);

/// Closed-form Hamilton flow from time 0 to t (GUE, Elliptic, Ginibre,
/// BiUnitary, OU, Wishart, UnitaryZ, SingularValue, FreeRotor, Bridge).
PhasePoint characteristic_map(const EnsembleSpec& spec, const PhasePoint& state0, double t);

}  // namespace eikonal
