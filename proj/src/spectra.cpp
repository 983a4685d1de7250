#include "eikonal/spectra.hpp"

#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace eikonal {

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n < 2) fail(ErrorKind::GridTooSmall, "a grid needs at least two points");
    std::vector<double> out(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + h * static_cast<double>(i);
    out.back() = b;
    return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size() && i < y.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return acc;
}

DensityGrid1D density_1d(const ResolventFn& resolvent, const std::vector<double>& x, double epsilon) {
    if (!(epsilon > 0.0)) fail(ErrorKind::InvalidParameter, "epsilon must be positive");
    DensityGrid1D out;
    out.x = x;
    out.epsilon = epsilon;
    out.rho.assign(x.size(), 0.0);
    detail::parallel_for(x.size(), [&](std::size_t i) {
        const Complex g = resolvent(Complex{x[i], epsilon});
        out.rho[i] = std::max(0.0, -g.imag() / std::numbers::pi);
    });
    return out;
}

FieldGrid2D sample_field(const FieldSampler& sampler, double x0, double y0, double h, std::size_t nx, std::size_t ny) {
    if (!(h > 0.0)) fail(ErrorKind::InvalidParameter, "grid spacing must be positive");
    if (nx < 1 || ny < 1) fail(ErrorKind::GridTooSmall, "empty field grid");
    FieldGrid2D f;
    f.h = h;
    f.re.resize(nx);
    f.im.resize(ny);
    for (std::size_t i = 0; i < nx; ++i) f.re[i] = x0 + h * static_cast<double>(i);
    for (std::size_t j = 0; j < ny; ++j) f.im[j] = y0 + h * static_cast<double>(j);
    f.samples.resize(nx * ny);
    detail::parallel_for(nx * ny, [&](std::size_t k) {
        f.samples[k] = sampler(Complex{f.re[k % nx], f.im[k / nx]});
    });
    return f;
}

ScalarGrid2D density_2d(const FieldGrid2D& field) {
    const std::size_t nx = field.nx(), ny = field.ny();
    if (nx < 3 || ny < 3) fail(ErrorKind::GridTooSmall, "density_2d needs at least 3x3 points");
    ScalarGrid2D out;
    out.re.assign(field.re.begin() + 1, field.re.end() - 1);
    out.im.assign(field.im.begin() + 1, field.im.end() - 1);
    out.value.resize((nx - 2) * (ny - 2));
    const double h = field.h;
    for (std::size_t j = 1; j + 1 < ny; ++j)
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            // d/dzbar = u (D_u + i D_{iu}) / 2 along the axes (u = 1, step h) and the
            // diagonals (u = e^{i pi/4}, step h sqrt 2); weights 2/3, 1/3 cancel the
            // h^2 error on holomorphic g.
            const Complex dx = (field.at(i + 1, j).g - field.at(i - 1, j).g) / (2.0 * h);
            const Complex dy = (field.at(i, j + 1).g - field.at(i, j - 1).g) / (2.0 * h);
            const double hd = std::sqrt(2.0) * h;
            const Complex u = std::polar(1.0, 0.25 * std::numbers::pi);
            const Complex du = (field.at(i + 1, j + 1).g - field.at(i - 1, j - 1).g) / (2.0 * hd);
            const Complex dv = (field.at(i - 1, j + 1).g - field.at(i + 1, j - 1).g) / (2.0 * hd);
            const Complex axis = 0.5 * (dx + Complex{0.0, 1.0} * dy);
            const Complex diag = 0.5 * u * (du + Complex{0.0, 1.0} * dv);
            double rho = ((2.0 * axis + diag) / 3.0).real() / std::numbers::pi;
            if (rho < 0.0) {
                if (rho < -1e-8)
                    fail(ErrorKind::NegativeDensity,
                         "density " + std::to_string(rho) + " at z = (" + std::to_string(field.re[i]) + ", " +
                             std::to_string(field.im[j]) + ")");
                rho = 0.0;
            }
            out.value[(j - 1) * (nx - 2) + (i - 1)] = rho;
        }
    return out;
}

ScalarGrid2D overlap_correlator(const FieldGrid2D& field) {
    ScalarGrid2D out;
    out.re = field.re;
    out.im = field.im;
    out.value.resize(field.samples.size());
    for (std::size_t k = 0; k < field.samples.size(); ++k) {
        const auto& s = field.samples[k];
        out.value[k] = s.inside_support ? std::max(0.0, s.pw_sq) / std::numbers::pi : 0.0;
    }
    return out;
}

double grid_mass(const ScalarGrid2D& grid) {
    if (grid.re.size() < 2 || grid.im.size() < 2) return 0.0;
    const double hx = grid.re[1] - grid.re[0];
    const double hy = grid.im[1] - grid.im[0];
    double acc = 0.0;
    for (double v : grid.value) acc += v;
    return acc * hx * hy;
}

std::vector<Complex> support_boundary(const FieldSampler& sampler, Complex center, double r_max, double tol, int rays,
                                      int march) {
    if (rays < 3 || march < 2) fail(ErrorKind::GridTooSmall, "support_boundary needs >= 3 rays and >= 2 steps");
    if (!(r_max > 0.0)) fail(ErrorKind::InvalidParameter, "r_max must be positive");
    auto inside = [&](Complex z) {
        const FieldSample s = sampler(z);
        return s.inside_support && s.pw_sq > tol;
    };
    std::vector<Complex> contour(static_cast<std::size_t>(rays));
    std::vector<char> found(static_cast<std::size_t>(rays), 0);
    detail::parallel_for(static_cast<std::size_t>(rays), [&](std::size_t k) {
        const Complex dir = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / rays);
        const double dr = r_max / march;
        int last = -1;
        for (int m = 0; m <= march; ++m)
            if (inside(center + dir * (dr * m))) last = m;
        if (last < 0) return;
        if (last == march) fail(ErrorKind::InvalidParameter, "support reaches r_max; enlarge the search radius");
        double a = dr * last, b = dr * (last + 1);
        for (int it = 0; it < 100 && b - a > 1e-15 * b; ++it) {
            const double mid = 0.5 * (a + b);
            (inside(center + dir * mid) ? a : b) = mid;
        }
        contour[k] = center + dir * (0.5 * (a + b));
        found[k] = 1;
    });
    for (char f : found)
        if (!f) fail(ErrorKind::EmptySupport, "no support found along a ray");
    return contour;
}

}  // namespace eikonal
