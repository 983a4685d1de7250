#include "eikonal/measure.hpp"

#include <cmath>
#include <string>

namespace eikonal {

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) fail(ErrorKind::InvalidParameter, "spectral measure has no atoms");
    double total = 0.0;
    for (const auto& a : atoms_) {
        checked(a.location, "atom location");
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            fail(ErrorKind::InvalidParameter, "atom weight must be positive and finite");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        fail(ErrorKind::InvalidParameter, "atom weights sum to " + std::to_string(total) + ", expected 1");
}

SpectralMeasure SpectralMeasure::uniform(const std::vector<double>& locations) {
    std::vector<Complex> c(locations.begin(), locations.end());
    return uniform(c);
}

SpectralMeasure SpectralMeasure::uniform(const std::vector<Complex>& locations) {
    if (locations.empty()) fail(ErrorKind::InvalidParameter, "spectral measure has no atoms");
    std::vector<Atom> atoms;
    atoms.reserve(locations.size());
    const double w = 1.0 / static_cast<double>(locations.size());
    for (Complex x : locations) atoms.push_back({x, w});
    // Renormalize against rounding in 1/n.
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    for (auto& a : atoms) a.weight /= total;
    return SpectralMeasure(std::move(atoms));
}

bool SpectralMeasure::is_real(double tol) const noexcept {
    for (const auto& a : atoms_)
        if (std::abs(a.location.imag()) > tol) return false;
    return true;
}

Complex SpectralMeasure::resolvent(Complex z) const noexcept {
    Complex g{};
    for (const auto& a : atoms_) g += a.weight / (z - a.location);
    return g;
}

Complex SpectralMeasure::resolvent_derivative(Complex z) const noexcept {
    Complex d{};
    for (const auto& a : atoms_) {
        const Complex u = z - a.location;
        d -= a.weight / (u * u);
    }
    return d;
}

Complex SpectralMeasure::mean() const noexcept {
    Complex m{};
    for (const auto& a : atoms_) m += a.weight * a.location;
    return m;
}

}  // namespace eikonal
