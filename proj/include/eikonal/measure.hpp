#pragma once

#include <vector>

#include "eikonal/quaternion.hpp"

namespace eikonal {

struct Atom {
    Complex location;
    double weight;
};

/// Normalized atomic eigenvalue distribution used as initial/boundary data.
class SpectralMeasure {
public:
    SpectralMeasure() = default;
    /// Validates positivity and finiteness; weights must sum to 1 within 1e-12.
    explicit SpectralMeasure(std::vector<Atom> atoms);

    static SpectralMeasure point(Complex location = {}) { return SpectralMeasure({{location, 1.0}}); }
    /// Equal-weight atoms.
    static SpectralMeasure uniform(const std::vector<double>& locations);
    static SpectralMeasure uniform(const std::vector<Complex>& locations);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    bool is_real(double tol = 0.0) const noexcept;

    /// G0(z) = sum_i w_i / (z - x_i).
    Complex resolvent(Complex z) const noexcept;
    /// dG0/dz.
    Complex resolvent_derivative(Complex z) const noexcept;
    Complex mean() const noexcept;

private:
    std::vector<Atom> atoms_;
};

}  // namespace eikonal
