#pragma once

#include <utility>
#include <vector>

#include "eikonal/quaternion.hpp"

namespace eikonal {

/// Eigenphase distribution on the unit circle; phases are wrapped into (-pi, pi].
class AngularMeasure {
public:
    AngularMeasure() = default;
    /// Validates positive weights summing to 1 within 1e-12.
    explicit AngularMeasure(std::vector<std::pair<double, double>> phases);

    static AngularMeasure point(double theta = 0.0) { return AngularMeasure({{theta, 1.0}}); }
    static AngularMeasure uniform(const std::vector<double>& thetas);

    const std::vector<std::pair<double, double>>& phases() const noexcept { return phases_; }
    std::size_t size() const noexcept { return phases_.size(); }

private:
    std::vector<std::pair<double, double>> phases_;
};

double wrap_angle(double theta) noexcept;

/// J(theta) = 1/2 sum_i w_i cot((theta - theta_i) / 2). AtomCollision on a real atom.
Complex cot_resolvent(const AngularMeasure& m, Complex theta);
Complex cot_resolvent_derivative(const AngularMeasure& m, Complex theta);

struct AngularField {
    std::vector<double> theta;
    std::vector<Complex> J;
    std::vector<double> rho;
    /// |d theta / d theta0| < 1e-6 at the characteristic through this point.
    std::vector<char> caustic;
    double t = 0.0;
    double epsilon = 0.0;

    double mass() const;
};

/// Angular chart: theta = theta0 + t J0(theta0), continued to theta + i eps from
/// large Im theta, rho = -Im J / pi.
AngularField unitary_density(const AngularMeasure& initial, const std::vector<double>& theta_grid, double t,
                             double epsilon);

/// z chart: c = z G(z) solves c = psi0(z e^{t (c - 1/2)}), continued radially
/// from |z| = 1e3 to |z| = 1 + eps; rho = (2 Re c - 1) / (2 pi). J = i (c - 1/2).
AngularField unitary_density_z(const AngularMeasure& initial, const std::vector<double>& theta_grid, double t,
                               double epsilon);

/// Real support edges at time t: theta0 + t J0(theta0) at the real solutions
/// of 1 + t J0'(theta0) = 0, wrapped and sorted.
std::vector<double> unitary_edges(const AngularMeasure& initial, double t);

/// Time at which the last spectral gap closes: max over gaps of 1 / min(-J0').
double gap_closing_time(const AngularMeasure& initial);

}  // namespace eikonal
