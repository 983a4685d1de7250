#pragma once

#include <array>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "eikonal/quaternion.hpp"
#include "json.hpp"

namespace eikonal {

namespace ensemble {
struct Gue {};
struct Elliptic { double tau = 0.0; };
struct Ginibre {};
/// Cumulants alpha_k of the generating sequence A(x) = sum_k alpha_k x^(k-1).
struct BiUnitary { std::vector<double> a_coeffs{1.0}; };
struct OrnsteinUhlenbeck { double a = 0.0; };
struct Wishart { double r = 1.0; };
/// theta and lambda are treated as opaque reals; only the Hamiltonian algebra is validated.
struct Jacobi { double theta = 1.0; double lambda = 0.5; };
struct UnitaryZ {};
struct SingularValue {};
struct FreeRotor {};
struct KempHall {};
struct Bridge { double t_f = 1.0; };
}  // namespace ensemble

using EnsembleVariant =
    std::variant<ensemble::Gue, ensemble::Elliptic, ensemble::Ginibre, ensemble::BiUnitary,
                 ensemble::OrnsteinUhlenbeck, ensemble::Wishart, ensemble::Jacobi, ensemble::UnitaryZ,
                 ensemble::SingularValue, ensemble::FreeRotor, ensemble::KempHall, ensemble::Bridge>;

/// Shape of the phase space a variant evolves in.
///   Scalar        q = (z),     p = (p)
///   Quaternionic  q = (z, w),  p = (p_z, p_w)   [KempHall: q = (z, r), p = (p, p_r)]
///   Angular       q = (theta), p = (J)
///   Bridge        q = (z, alpha), p = (p, p_alpha)
enum class PhaseSpace { Scalar, Quaternionic, Angular, Bridge };

class EnsembleSpec {
public:
    EnsembleSpec() : v_(ensemble::Gue{}) {}
    /// Validates parameter ranges (|tau| <= 1, r > 0, t_f > 0, a_coeffs non-empty).
    EnsembleSpec(EnsembleVariant v);  // NOLINT(google-explicit-constructor)
    template <class T>
        requires(!std::is_same_v<T, EnsembleVariant> && std::is_constructible_v<EnsembleVariant, T>)
    EnsembleSpec(T v) : EnsembleSpec(EnsembleVariant(std::move(v))) {}  // NOLINT(google-explicit-constructor)

    const EnsembleVariant& variant() const noexcept { return v_; }
    template <class T>
    bool is() const noexcept { return std::holds_alternative<T>(v_); }
    template <class T>
    const T& as() const { return std::get<T>(v_); }

    std::string name() const;
    PhaseSpace phase_space() const noexcept;
    /// Variants given by an R-transform (GUE, Elliptic, Ginibre, BiUnitary).
    bool is_additive() const noexcept;
    /// Real-spectrum scalar variants whose resolvent obeys a closed-form
    /// characteristic map from atomic initial data (GUE, OU, Wishart).
    bool has_closed_resolvent_map() const noexcept;
    bool is_autonomous() const noexcept { return !is<ensemble::Bridge>(); }

    friend bool operator==(const EnsembleSpec& a, const EnsembleSpec& b);

private:
    EnsembleVariant v_;
};

/// Generating sequence A(x) and its primitive for BiUnitary specs.
double generating_sequence(const ensemble::BiUnitary& b, double x) noexcept;
double generating_sequence_primitive(const ensemble::BiUnitary& b, double x) noexcept;

/// Scalar R-transform on the Hermitian (w = 0) projection.
Complex r_transform(const EnsembleSpec& spec, Complex z);
/// Quaternionic R-transform, returned in (z, w) form.
Quaternion r_transform(const EnsembleSpec& spec, const Quaternion& q);
inline Complex r_transform_eval(const EnsembleSpec& spec, Complex z) { return r_transform(spec, z); }
inline Quaternion r_transform_eval(const EnsembleSpec& spec, const Quaternion& q) { return r_transform(spec, q); }

struct PhasePoint {
    std::array<Complex, 2> q{};
    std::array<Complex, 2> p{};
};

/// H together with its holomorphic (Wirtinger) derivatives in every phase
/// coordinate. Hamilton's equations read dq_k/dt = dp[k], dp_k/dt = -dq[k].
struct HamiltonianValue {
    Complex value{};
    std::array<Complex, 2> dq{};
    std::array<Complex, 2> dp{};
};

HamiltonianValue hamiltonian_eval(const EnsembleSpec& spec, const PhasePoint& x, double t = 0.0);

/// Quadrature of H = int_0^P Tr[R(Q) dQ] along the segment 0 -> P, contracting
/// R_11 dQ_11 + R_21 dQ_12 + R_12 dQ_21 + R_22 dQ_22 (composite Simpson).
/// Additive variants only; the scalar overload integrates int_0^p R(z) dz.
Complex additive_hamiltonian_quadrature(const EnsembleSpec& spec, const Quaternion& p, int steps = 10000);
Complex additive_hamiltonian_quadrature(const EnsembleSpec& spec, Complex p, int steps = 10000);

/// Chart change for KempHall: (z, w, p_z, p_w) <-> (z, r = |w|, p, p_r), with
/// p_r = p_w e^{i arg w} + conj(p_w e^{i arg w}). The inverse assumes the
/// potential depends on w through |w| only and restores the phase of `w_phase`.
PhasePoint kemp_hall_to_radial(const PhasePoint& zw);
PhasePoint kemp_hall_from_radial(const PhasePoint& radial, double w_phase);

void to_json(nlohmann::json& j, const EnsembleSpec& spec);
void from_json(const nlohmann::json& j, EnsembleSpec& spec);

}  // namespace eikonal
