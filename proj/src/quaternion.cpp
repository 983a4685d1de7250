#include "eikonal/quaternion.hpp"

#include <string>

namespace eikonal {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::SingularQuaternion: return "SingularQuaternion";
        case ErrorKind::UnsupportedVariant: return "UnsupportedVariant";
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::BridgeTimeOverflow: return "BridgeTimeOverflow";
        case ErrorKind::KempHallAxis: return "KempHallAxis";
        case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
        case ErrorKind::NonHermitianSpec: return "NonHermitianSpec";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::StepUnderflow: return "StepUnderflow";
        case ErrorKind::GridTooSmall: return "GridTooSmall";
        case ErrorKind::NegativeDensity: return "NegativeDensity";
        case ErrorKind::EmptySupport: return "EmptySupport";
        case ErrorKind::AtomCollision: return "AtomCollision";
        case ErrorKind::DegenerateDensity: return "DegenerateDensity";
        case ErrorKind::BadDimension: return "BadDimension";
        case ErrorKind::EigFailure: return "EigFailure";
        case ErrorKind::DefectiveMatrix: return "DefectiveMatrix";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Complex checked(Complex c, const char* what) {
    if (!is_finite(c)) fail(ErrorKind::NonFinite, std::string(what) + " is not finite");
    return c;
}

Quaternion::Quaternion(Complex z, Complex w) : z_(checked(z, "quaternion z")), w_(checked(w, "quaternion w")) {}

Mat2c Quaternion::matrix() const noexcept {
    return {{{z_, -std::conj(w_)}, {w_, std::conj(z_)}}};
}

Quaternion Quaternion::from_matrix(const Mat2c& m) {
    // The representation is fixed by the first column.
    return {m[0][0], m[1][0]};
}

Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
    // First column of [[z1,-w1*],[w1,z1*]] . [[z2,-w2*],[w2,z2*]]
    return {a.z() * b.z() - std::conj(a.w()) * b.w(), a.w() * b.z() + std::conj(a.z()) * b.w()};
}

Quaternion quat_inverse(const Quaternion& a) {
    const double det = a.norm_sq();
    if (det == 0.0) fail(ErrorKind::SingularQuaternion, "|z|^2 + |w|^2 = 0");
    return {std::conj(a.z()) / det, -a.w() / det};
}

Mat2c QuaternionPair::resolvent() const noexcept {
    const Mat2c pm = p.matrix();
    return {{{pm[0][0], pm[1][0]}, {pm[0][1], pm[1][1]}}};
}

}  // namespace eikonal
