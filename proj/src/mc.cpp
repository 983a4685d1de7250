#include "eikonal/mc.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "eikonal/error.hpp"

namespace eikonal {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Eigen::MatrixXcd gaussian(int rows, int cols, double var, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5 * var));
    Eigen::MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = Complex{nd(rng), nd(rng)};
    return m;
}

Eigen::MatrixXcd gue(int n, double var, std::mt19937_64& rng) {
    const Eigen::MatrixXcd g = gaussian(n, n, var / n, rng);
    // off-diagonal E|h|^2 = var/n, diagonal real with variance var/n
    return (g + g.adjoint()) / std::sqrt(2.0);
}

void check_lapack(lapack_int info, const char* what) {
    if (info != 0) fail(ErrorKind::EigFailure, std::string(what) + " returned info = " + std::to_string(info));
}

lapack_complex_double* lp(Complex* p) { return reinterpret_cast<lapack_complex_double*>(p); }

/// Eigenvalues and eigenvectors of a Hermitian matrix, ascending.
std::pair<Eigen::VectorXd, Eigen::MatrixXcd> heev(Eigen::MatrixXcd a, bool vectors) {
    const int n = static_cast<int>(a.rows());
    Eigen::VectorXd w(n);
    check_lapack(LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', n, lp(a.data()), n, w.data()), "zheevd");
    return {w, a};
}

Eigen::MatrixXcd unitary_step(int n, double dt, std::mt19937_64& rng) {
    const auto [w, v] = heev(gue(n, 1.0, rng), true);
    Eigen::VectorXcd phase(n);
    for (int k = 0; k < n; ++k) phase(k) = std::exp(Complex{0.0, std::sqrt(dt) * w(k)});
    return v * phase.asDiagonal() * v.adjoint();
}

}  // namespace

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) noexcept {
    return splitmix64(splitmix64(master) + replica);
}

MatrixSample sample_ensemble(const EnsembleSpec& spec, int n, double variance, std::uint64_t seed) {
    if (n < 2) fail(ErrorKind::BadDimension, "matrix dimension must be at least 2");
    if (!(variance > 0.0) || !std::isfinite(variance)) fail(ErrorKind::InvalidParameter, "variance must be positive");
    std::mt19937_64 rng(seed);
    MatrixSample m;
    m.n = n;
    if (spec.is<ensemble::Gue>()) {
        m.kind = MatrixKind::Hermitian;
        m.entries = gue(n, variance, rng);
    } else if (spec.is<ensemble::Ginibre>()) {
        m.kind = MatrixKind::General;
        m.entries = gaussian(n, n, variance / n, rng);
    } else if (spec.is<ensemble::Elliptic>()) {
        const double tau = spec.as<ensemble::Elliptic>().tau;
        const Eigen::MatrixXcd h1 = gue(n, variance, rng);
        const Eigen::MatrixXcd h2 = gue(n, variance, rng);
        m.entries = std::sqrt(0.5 * (1.0 + tau)) * h1 + Complex{0.0, std::sqrt(0.5 * (1.0 - tau))} * h2;
        m.kind = tau == 1.0 ? MatrixKind::Hermitian : MatrixKind::General;
    } else if (spec.is<ensemble::Wishart>()) {
        const double r = spec.as<ensemble::Wishart>().r;
        const int cols = std::max(1, static_cast<int>(std::lround(n / r)));
        const Eigen::MatrixXcd x = gaussian(n, cols, 1.0, rng);
        m.entries = (variance / cols) * (x * x.adjoint());
        m.entries = 0.5 * (m.entries + m.entries.adjoint()).eval();
        m.kind = MatrixKind::Hermitian;
    } else {
        fail(ErrorKind::UnsupportedVariant, spec.name() + " cannot be sampled");
    }
    check_sample(m);
    return m;
}

MatrixSample matrix_walk(const EnsembleSpec& spec, int n, int steps, double dt, std::uint64_t seed) {
    if (n < 2) fail(ErrorKind::BadDimension, "matrix dimension must be at least 2");
    if (steps < 1 || !(dt > 0.0)) fail(ErrorKind::InvalidParameter, "matrix_walk needs steps >= 1 and dt > 0");
    MatrixSample m;
    m.n = n;
    if (spec.is_additive() && !spec.is<ensemble::BiUnitary>()) {
        m.entries = Eigen::MatrixXcd::Zero(n, n);
        for (int k = 0; k < steps; ++k) {
            const auto inc = sample_ensemble(spec, n, dt, replica_seed(seed, static_cast<std::uint64_t>(k)));
            m.entries += inc.entries;
            m.kind = inc.kind;
        }
        if (m.kind == MatrixKind::Hermitian) m.entries = 0.5 * (m.entries + m.entries.adjoint()).eval();
    } else if (spec.is<ensemble::UnitaryZ>()) {
        m.kind = MatrixKind::Unitary;
        m.entries = Eigen::MatrixXcd::Identity(n, n);
        for (int k = 0; k < steps; ++k) {
            std::mt19937_64 rng(replica_seed(seed, static_cast<std::uint64_t>(k)));
            m.entries = (m.entries * unitary_step(n, dt, rng)).eval();
        }
    } else if (spec.is<ensemble::SingularValue>()) {
        m.kind = MatrixKind::General;
        m.entries = Eigen::MatrixXcd::Identity(n, n);
        for (int k = 0; k < steps; ++k) {
            std::mt19937_64 rng(replica_seed(seed, static_cast<std::uint64_t>(k)));
            const Eigen::MatrixXcd x = std::sqrt(dt) * gaussian(n, n, 1.0 / n, rng);
            m.entries = (m.entries * x.exp()).eval();
        }
    } else {
        fail(ErrorKind::UnsupportedVariant, spec.name() + " has no matrix walk");
    }
    check_sample(m);
    return m;
}

void check_sample(const MatrixSample& m) {
    if (m.entries.rows() != m.n || m.entries.cols() != m.n) fail(ErrorKind::BadDimension, "entries are not n x n");
    if (!m.entries.allFinite()) fail(ErrorKind::NonFinite, "sample has non-finite entries");
    const double scale = std::max(1.0, m.entries.cwiseAbs().maxCoeff());
    if (m.kind == MatrixKind::Hermitian && (m.entries - m.entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        fail(ErrorKind::NonHermitianSpec, "hermitian sample is not hermitian");
    if (m.kind == MatrixKind::Unitary &&
        (m.entries.adjoint() * m.entries - Eigen::MatrixXcd::Identity(m.n, m.n)).cwiseAbs().maxCoeff() > 1e-10)
        fail(ErrorKind::InvalidParameter, "unitary sample is not unitary");
}

double EmpiricalDensity::density(std::size_t bin) const {
    double area = 0.0;
    if (edges_y.empty()) {
        area = edges_x[bin + 1] - edges_x[bin];
    } else {
        const std::size_t nx = edges_x.size() - 1;
        const std::size_t i = bin % nx, j = bin / nx;
        area = (edges_x[i + 1] - edges_x[i]) * (edges_y[j + 1] - edges_y[j]);
    }
    return counts[bin] * normalization / area;
}

double EmpiricalDensity::total_mass() const {
    double acc = 0.0;
    for (double c : counts) acc += c;
    return acc * normalization;
}

EmpiricalDensity histogram_1d(const std::vector<double>& samples, int bins, double lo, double hi) {
    if (samples.empty()) fail(ErrorKind::InvalidParameter, "histogram needs samples");
    if (bins < 1) fail(ErrorKind::GridTooSmall, "histogram needs at least one bin");
    EmpiricalDensity h;
    if (!(hi > lo)) {
        // all samples coincide: one unit bin centred on them
        h.edges_x = {lo - 0.5, lo + 0.5};
        h.counts = {static_cast<double>(samples.size())};
    } else {
        h.edges_x.resize(static_cast<std::size_t>(bins) + 1);
        for (int k = 0; k <= bins; ++k) h.edges_x[k] = lo + (hi - lo) * k / bins;
        h.counts.assign(static_cast<std::size_t>(bins), 0.0);
        for (double s : samples) {
            const double u = (std::clamp(s, lo, hi) - lo) / (hi - lo);
            h.counts[std::min<std::size_t>(static_cast<std::size_t>(u * bins), bins - 1)] += 1.0;
        }
    }
    h.normalization = 1.0 / static_cast<double>(samples.size());
    return h;
}

EmpiricalDensity histogram_1d(const std::vector<double>& samples, int bins) {
    if (samples.empty()) fail(ErrorKind::InvalidParameter, "histogram needs samples");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    return histogram_1d(samples, bins, *lo, *hi);
}

EmpiricalDensity histogram_2d(const std::vector<Complex>& samples, int bins) {
    if (samples.empty()) fail(ErrorKind::InvalidParameter, "histogram needs samples");
    if (bins < 1) fail(ErrorKind::GridTooSmall, "histogram needs at least one bin");
    std::vector<double> re, im;
    for (const auto& z : samples) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    const auto hx = histogram_1d(re, bins), hy = histogram_1d(im, bins);
    EmpiricalDensity h;
    h.edges_x = hx.edges_x;
    h.edges_y = hy.edges_x;
    const std::size_t nx = h.edges_x.size() - 1, ny = h.edges_y.size() - 1;
    h.counts.assign(nx * ny, 0.0);
    auto locate = [](const std::vector<double>& e, double v) {
        const auto it = std::upper_bound(e.begin(), e.end(), v);
        const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - e.begin() - 1));
        return std::min(k, e.size() - 2);
    };
    for (const auto& z : samples) h.counts[locate(h.edges_y, z.imag()) * nx + locate(h.edges_x, z.real())] += 1.0;
    h.normalization = 1.0 / static_cast<double>(samples.size());
    return h;
}

std::vector<Complex> eigenvalues(const MatrixSample& m) {
    std::vector<Complex> out;
    if (m.kind == MatrixKind::Hermitian) {
        const auto [w, v] = heev(m.entries, false);
        for (int k = 0; k < w.size(); ++k) out.emplace_back(w(k), 0.0);
    } else {
        Eigen::MatrixXcd a = m.entries;
        const int n = m.n;
        out.resize(static_cast<std::size_t>(n));
        check_lapack(LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(a.data()), n, lp(out.data()), nullptr, 1,
                                   nullptr, 1),
                     "zgeev");
    }
    for (const auto& z : out)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail(ErrorKind::EigFailure, "non-finite eigenvalue");
    return out;
}

SpectralStats spectral_stats(const MatrixSample& m, int bins) {
    SpectralStats s;
    s.eigenvalues = eigenvalues(m);
    if (m.kind == MatrixKind::General) {
        s.density = histogram_2d(s.eigenvalues, bins);
    } else if (m.kind == MatrixKind::Unitary) {
        std::vector<double> ph;
        for (const auto& z : s.eigenvalues) ph.push_back(std::arg(z));
        s.density = histogram_1d(ph, bins, -kPi, kPi);
    } else {
        std::vector<double> x;
        for (const auto& z : s.eigenvalues) x.push_back(z.real());
        s.density = histogram_1d(x, bins);
    }
    return s;
}

OverlapRecord overlap_stats(const MatrixSample& m) {
    const int n = m.n;
    Eigen::MatrixXcd a = m.entries;
    Eigen::MatrixXcd r(n, n);
    OverlapRecord rec;
    rec.eigenvalues.resize(static_cast<std::size_t>(n));
    check_lapack(LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, lp(a.data()), n, lp(rec.eigenvalues.data()), nullptr, 1,
                               lp(r.data()), n),
                 "zgeev");
    if (!r.allFinite()) fail(ErrorKind::EigFailure, "non-finite eigenvectors");
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(r);
    const Eigen::MatrixXcd l = lu.inverse();
    auto norm1 = [](const Eigen::MatrixXcd& x) { return x.cwiseAbs().colwise().sum().maxCoeff(); };
    rec.condition = norm1(r) * norm1(l);
    if (!std::isfinite(rec.condition) || rec.condition > 1e12)
        fail(ErrorKind::DefectiveMatrix, "eigenvector condition number " + std::to_string(rec.condition));
    rec.o_diag.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rec.o_diag[i] = l.row(i).squaredNorm() * r.col(i).squaredNorm();
    return rec;
}

double ks_distance(std::vector<double> samples, const Cdf& cdf) {
    if (samples.empty()) fail(ErrorKind::InvalidParameter, "ks_distance needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = cdf(samples[k]);
        d = std::max({d, std::abs(f - k / n), std::abs((k + 1) / n - f)});
    }
    return d;
}

double ks_distance(const EmpiricalDensity& emp, const Cdf& cdf) {
    if (!emp.edges_y.empty()) fail(ErrorKind::InvalidParameter, "ks_distance needs a 1D histogram");
    double acc = 0.0, d = std::abs(cdf(emp.edges_x.front()));
    for (std::size_t k = 0; k < emp.counts.size(); ++k) {
        acc += emp.counts[k] * emp.normalization;
        d = std::max(d, std::abs(acc - cdf(emp.edges_x[k + 1])));
    }
    return d;
}

double semicircle_cdf(double x, double t) {
    const double r = 2.0 * std::sqrt(t);
    if (x <= -r) return 0.0;
    if (x >= r) return 1.0;
    const double u = x / r;
    return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / kPi;
}

double radial_ks(const std::vector<Complex>& eigs, double t) {
    std::vector<double> r;
    for (const auto& z : eigs) r.push_back(std::abs(z));
    return ks_distance(r, [t](double x) { return std::min(1.0, x * x / t); });
}

std::pair<double, double> ellipse_fit(const std::vector<Complex>& eigs) {
    if (eigs.empty()) fail(ErrorKind::InvalidParameter, "ellipse_fit needs samples");
    Complex mean{};
    for (const auto& z : eigs) mean += z;
    mean /= static_cast<double>(eigs.size());
    double xx = 0.0, yy = 0.0;
    for (const auto& z : eigs) {
        xx += std::norm((z - mean).real());
        yy += std::norm((z - mean).imag());
    }
    xx /= static_cast<double>(eigs.size());
    yy /= static_cast<double>(eigs.size());
    return {2.0 * std::sqrt(xx), 2.0 * std::sqrt(yy)};
}

}  // namespace eikonal
