#pragma once

#include <functional>
#include <string>
#include <vector>

#include "eikonal/characteristics.hpp"

namespace eikonal {

using ResolventFn = std::function<Complex(Complex)>;
using FieldSampler = std::function<FieldSample(Complex)>;

std::vector<double> linspace(double a, double b, std::size_t n);
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

struct DensityGrid1D {
    std::vector<double> x;
    std::vector<double> rho;
    double epsilon = 0.0;

    double mass() const { return trapezoid(x, rho); }
};

/// rho[i] = max(0, -Im G(x[i] + i eps) / pi).
DensityGrid1D density_1d(const ResolventFn& resolvent, const std::vector<double>& x, double epsilon);

/// Uniform rectangular grid of field samples, row-major with re varying fastest.
struct FieldGrid2D {
    std::vector<double> re;
    std::vector<double> im;
    double h = 0.0;
    std::vector<FieldSample> samples;

    std::size_t nx() const noexcept { return re.size(); }
    std::size_t ny() const noexcept { return im.size(); }
    const FieldSample& at(std::size_t i, std::size_t j) const { return samples[j * re.size() + i]; }
};

/// Samples `sampler` on re = x0 + i h (i < nx), im = y0 + j h (j < ny).
FieldGrid2D sample_field(const FieldSampler& sampler, double x0, double y0, double h, std::size_t nx, std::size_t ny);

/// Real-valued grid with the same layout as FieldGrid2D.
struct ScalarGrid2D {
    std::vector<double> re;
    std::vector<double> im;
    std::vector<double> value;

    double at(std::size_t i, std::size_t j) const { return value[j * re.size() + i]; }
};

/// rho = Re[d_zbar g] / pi by centered second-order differences on the 3x3
/// neighbourhood (axis and diagonal pairs). Boundary rows and
/// columns are dropped; values in (-1e-8, 0) are clamped to 0, anything more
/// negative raises NegativeDensity.
ScalarGrid2D density_2d(const FieldGrid2D& field);

/// O = |p_w|^2 / pi on every grid point (0 outside the support).
ScalarGrid2D overlap_correlator(const FieldGrid2D& field);

/// Sum of value * h^2.
double grid_mass(const ScalarGrid2D& grid);

/// Outer support boundary: along `rays` directions from `center`, the last
/// radius where the sample is inside with pw_sq > tol, refined by bisection.
/// Each ray is marched in `march` steps up to r_max.
std::vector<Complex> support_boundary(const FieldSampler& sampler, Complex center, double r_max, double tol = 1e-12,
                                      int rays = 256, int march = 128);

}  // namespace eikonal
