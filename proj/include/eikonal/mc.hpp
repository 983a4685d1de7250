#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "eikonal/ensembles.hpp"

namespace eikonal {

enum class MatrixKind { Hermitian, General, Unitary };

struct MatrixSample {
    int n = 0;
    Eigen::MatrixXcd entries;
    MatrixKind kind = MatrixKind::General;
};

/// Per-replica seed from a master seed (splitmix64 of master + counter).
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) noexcept;

/// GUE, Ginibre and Elliptic: entry variance `variance / n`, so that the
/// spectrum has the t = variance law. Wishart: (variance / M) X X^dagger with
/// M = round(n / r).
MatrixSample sample_ensemble(const EnsembleSpec& spec, int n, double variance, std::uint64_t seed);

/// Additive (GUE, Ginibre, Elliptic): sum of `steps` increments of variance dt.
/// UnitaryZ: ordered product of exp(i sqrt(dt) H_j), H_j GUE.
/// SingularValue: ordered product of exp(sqrt(dt) X_j), X_j Ginibre.
MatrixSample matrix_walk(const EnsembleSpec& spec, int n, int steps, double dt, std::uint64_t seed);

/// Throws if a Hermitian sample is not Hermitian to 1e-12 or a unitary one is
/// not unitary to 1e-10.
void check_sample(const MatrixSample& m);

/// Histogram. `edges_y` is empty for one-dimensional data; counts are stored
/// row-major in y for 2D. density = counts * normalization / bin area.
struct EmpiricalDensity {
    std::vector<double> edges_x;
    std::vector<double> edges_y;
    std::vector<double> counts;
    double normalization = 0.0;

    double density(std::size_t bin) const;
    /// sum counts * bin area * density-normalization, equal to 1.
    double total_mass() const;
};

EmpiricalDensity histogram_1d(const std::vector<double>& samples, int bins);
EmpiricalDensity histogram_1d(const std::vector<double>& samples, int bins, double lo, double hi);
EmpiricalDensity histogram_2d(const std::vector<Complex>& samples, int bins);

/// Eigenvalues of any sample (LAPACK zheevd for Hermitian, zgeev otherwise).
std::vector<Complex> eigenvalues(const MatrixSample& m);

struct SpectralStats {
    std::vector<Complex> eigenvalues;
    EmpiricalDensity density;  // 1D over Re (Hermitian) or phase (Unitary), 2D otherwise
};
SpectralStats spectral_stats(const MatrixSample& m, int bins = 64);

struct OverlapRecord {
    std::vector<Complex> eigenvalues;
    std::vector<double> o_diag;
    double condition = 0.0;
};
/// O_ii = <L_i|L_i><R_i|R_i> with L = R^{-1} (bi-orthonormal by construction).
OverlapRecord overlap_stats(const MatrixSample& m);

using Cdf = std::function<double(double)>;
/// Sup-norm distance between the empirical CDF of `samples` and `cdf`.
double ks_distance(std::vector<double> samples, const Cdf& cdf);
/// Same, for the CDF implied by a 1D histogram (evaluated at bin edges).
double ks_distance(const EmpiricalDensity& emp, const Cdf& cdf);

double semicircle_cdf(double x, double t);
/// Radial KS of complex eigenvalues against the uniform disk of radius sqrt(t).
double radial_ks(const std::vector<Complex>& eigs, double t);

/// Semi-axes (a, b) of a uniform elliptic droplet from second moments:
/// a = 2 sqrt(<Re^2>), b = 2 sqrt(<Im^2>), centered at the sample mean.
std::pair<double, double> ellipse_fit(const std::vector<Complex>& eigs);

}  // namespace eikonal
