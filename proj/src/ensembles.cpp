#include "eikonal/ensembles.hpp"

#include <cmath>
#include <functional>

namespace eikonal {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidParameter, std::string(name) + " must be finite");
}

}  // namespace

EnsembleSpec::EnsembleSpec(EnsembleVariant v) : v_(std::move(v)) {
    std::visit(overloaded{
                   [](const ensemble::Elliptic& e) {
                       require_finite(e.tau, "tau");
                       if (std::abs(e.tau) > 1.0) fail(ErrorKind::InvalidParameter, "tau must lie in [-1, 1]");
                   },
                   [](const ensemble::BiUnitary& b) {
                       if (b.a_coeffs.empty()) fail(ErrorKind::InvalidParameter, "a_coeffs must be non-empty");
                       for (double a : b.a_coeffs) require_finite(a, "a_coeffs");
                   },
                   [](const ensemble::OrnsteinUhlenbeck& o) { require_finite(o.a, "a"); },
                   [](const ensemble::Wishart& w) {
                       require_finite(w.r, "r");
                       if (!(w.r > 0.0)) fail(ErrorKind::InvalidParameter, "r must be positive");
                   },
                   [](const ensemble::Jacobi& j) {
                       require_finite(j.theta, "theta");
                       require_finite(j.lambda, "lambda");
                   },
                   [](const ensemble::Bridge& b) {
                       require_finite(b.t_f, "t_f");
                       if (!(b.t_f > 0.0)) fail(ErrorKind::InvalidParameter, "t_f must be positive");
                   },
                   [](const auto&) {},
               },
               v_);
}

std::string EnsembleSpec::name() const {
    return std::visit(overloaded{
                          [](const ensemble::Gue&) { return "gue"; },
                          [](const ensemble::Elliptic&) { return "elliptic"; },
                          [](const ensemble::Ginibre&) { return "ginibre"; },
                          [](const ensemble::BiUnitary&) { return "biunitary"; },
                          [](const ensemble::OrnsteinUhlenbeck&) { return "ornstein_uhlenbeck"; },
                          [](const ensemble::Wishart&) { return "wishart"; },
                          [](const ensemble::Jacobi&) { return "jacobi"; },
                          [](const ensemble::UnitaryZ&) { return "unitary_z"; },
                          [](const ensemble::SingularValue&) { return "singular_value"; },
                          [](const ensemble::FreeRotor&) { return "free_rotor"; },
                          [](const ensemble::KempHall&) { return "kemp_hall"; },
                          [](const ensemble::Bridge&) { return "bridge"; },
                      },
                      v_);
}

PhaseSpace EnsembleSpec::phase_space() const noexcept {
    if (is<ensemble::Elliptic>() || is<ensemble::Ginibre>() || is<ensemble::BiUnitary>() || is<ensemble::KempHall>())
        return PhaseSpace::Quaternionic;
    if (is<ensemble::FreeRotor>()) return PhaseSpace::Angular;
    if (is<ensemble::Bridge>()) return PhaseSpace::Bridge;
    return PhaseSpace::Scalar;
}

bool EnsembleSpec::is_additive() const noexcept {
    return is<ensemble::Gue>() || is<ensemble::Elliptic>() || is<ensemble::Ginibre>() || is<ensemble::BiUnitary>();
}

bool EnsembleSpec::has_closed_resolvent_map() const noexcept {
    return is<ensemble::Gue>() || is<ensemble::OrnsteinUhlenbeck>() || is<ensemble::Wishart>();
}

bool operator==(const EnsembleSpec& a, const EnsembleSpec& b) {
    if (a.v_.index() != b.v_.index()) return false;
    return std::visit(overloaded{
                          [&](const ensemble::Elliptic& e) { return e.tau == b.as<ensemble::Elliptic>().tau; },
                          [&](const ensemble::BiUnitary& e) {
                              return e.a_coeffs == b.as<ensemble::BiUnitary>().a_coeffs;
                          },
                          [&](const ensemble::OrnsteinUhlenbeck& e) {
                              return e.a == b.as<ensemble::OrnsteinUhlenbeck>().a;
                          },
                          [&](const ensemble::Wishart& e) { return e.r == b.as<ensemble::Wishart>().r; },
                          [&](const ensemble::Jacobi& e) {
                              const auto& o = b.as<ensemble::Jacobi>();
                              return e.theta == o.theta && e.lambda == o.lambda;
                          },
                          [&](const ensemble::Bridge& e) { return e.t_f == b.as<ensemble::Bridge>().t_f; },
                          [](const auto&) { return true; },
                      },
                      a.v_);
}

double generating_sequence(const ensemble::BiUnitary& b, double x) noexcept {
    double acc = 0.0;
    for (auto it = b.a_coeffs.rbegin(); it != b.a_coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double generating_sequence_primitive(const ensemble::BiUnitary& b, double x) noexcept {
    // sum_k alpha_k x^k / k
    double acc = 0.0;
    for (std::size_t k = b.a_coeffs.size(); k-- > 0;) acc = acc * x + b.a_coeffs[k] / static_cast<double>(k + 1);
    return acc * x;
}

Complex r_transform(const EnsembleSpec& spec, Complex z) {
    if (spec.is<ensemble::Gue>()) return z;
    if (spec.is<ensemble::Elliptic>()) return spec.as<ensemble::Elliptic>().tau * z;
    if (spec.is<ensemble::Ginibre>() || spec.is<ensemble::BiUnitary>()) return Complex{};
    fail(ErrorKind::UnsupportedVariant, spec.name() + " is specified by its Hamiltonian, not an R-transform");
}

Quaternion r_transform(const EnsembleSpec& spec, const Quaternion& q) {
    if (spec.is<ensemble::Gue>()) return q;
    if (spec.is<ensemble::Elliptic>()) return {spec.as<ensemble::Elliptic>().tau * q.z(), q.w()};
    if (spec.is<ensemble::Ginibre>()) return {Complex{}, q.w()};
    if (spec.is<ensemble::BiUnitary>()) {
        const double a = generating_sequence(spec.as<ensemble::BiUnitary>(), -std::norm(q.w()));
        return {Complex{}, a * q.w()};
    }
    fail(ErrorKind::UnsupportedVariant, spec.name() + " is specified by its Hamiltonian, not an R-transform");
}

namespace {

HamiltonianValue eval_kemp_hall(const PhasePoint& x) {
    const Complex z = x.q[0], r = x.q[1], p = x.p[0], pr = x.p[1];
    if (std::abs(r) == 0.0) fail(ErrorKind::KempHallAxis, "r = |w| = 0: the radial chart is singular");
    const Complex zb = std::conj(z), pb = std::conj(p);
    const Complex zz = z * zb;
    const Complex s = z * p + zb * pb;
    HamiltonianValue h;
    h.value = 0.5 * r * pr + 0.25 * (zz - r * r) * pr * pr - 0.5 * r * pr * s;
    h.dq[0] = 0.25 * zb * pr * pr - 0.5 * r * pr * p;
    h.dq[1] = 0.5 * pr - 0.5 * r * pr * pr - 0.5 * pr * s;
    h.dp[0] = -0.5 * r * pr * z;
    h.dp[1] = 0.5 * r + 0.5 * (zz - r * r) * pr - 0.5 * r * s;
    return h;
}

}  // namespace

HamiltonianValue hamiltonian_eval(const EnsembleSpec& spec, const PhasePoint& x, double t) {
    for (const auto& c : x.q) checked(c, "phase coordinate");
    for (const auto& c : x.p) checked(c, "phase momentum");
    HamiltonianValue h;
    const Complex z = x.q[0];
    const Complex p = x.p[0];
    std::visit(
        overloaded{
            [&](const ensemble::Gue&) {
                h.value = 0.5 * p * p;
                h.dp[0] = p;
            },
            [&](const ensemble::Elliptic& e) {
                const Complex pz = x.p[0], pw = x.p[1];
                h.value = 0.5 * e.tau * (pz * pz + std::conj(pz) * std::conj(pz)) - std::norm(pw);
                h.dp[0] = e.tau * pz;
                h.dp[1] = -std::conj(pw);
            },
            [&](const ensemble::Ginibre&) {
                const Complex pw = x.p[1];
                h.value = -std::norm(pw);
                h.dp[1] = -std::conj(pw);
            },
            [&](const ensemble::BiUnitary& b) {
                const Complex pw = x.p[1];
                const double xx = -std::norm(pw);
                h.value = generating_sequence_primitive(b, xx);
                h.dp[1] = -generating_sequence(b, xx) * std::conj(pw);
            },
            [&](const ensemble::OrnsteinUhlenbeck& o) {
                h.value = 0.5 * p * p + o.a * (1.0 - z * p);
                h.dp[0] = p - o.a * z;
                h.dq[0] = -o.a * p;
            },
            [&](const ensemble::Wishart& w) {
                h.value = (1.0 - w.r) * p + w.r * z * p * p;
                h.dp[0] = (1.0 - w.r) + 2.0 * w.r * z * p;
                h.dq[0] = w.r * p * p;
            },
            [&](const ensemble::Jacobi& j) {
                const double lt = j.lambda * j.theta;
                const double c0 = j.theta * (1.0 - j.lambda);
                const double c1 = 1.0 - 2.0 * lt;
                h.value = lt * z * (1.0 - z) * p * p + p * (c0 - c1 * z);
                h.dp[0] = 2.0 * lt * z * (1.0 - z) * p + c0 - c1 * z;
                h.dq[0] = lt * (1.0 - 2.0 * z) * p * p - c1 * p;
            },
            [&](const ensemble::UnitaryZ&) {
                h.value = -0.5 * z * z * p * p + 0.5 * z * p;
                h.dp[0] = -z * z * p + 0.5 * z;
                h.dq[0] = -z * p * p + 0.5 * p;
            },
            [&](const ensemble::SingularValue&) {
                h.value = z * z * p * p - z * p;
                h.dp[0] = 2.0 * z * z * p - z;
                h.dq[0] = 2.0 * z * p * p - p;
            },
            [&](const ensemble::FreeRotor&) {
                h.value = 0.5 * p * p;
                h.dp[0] = p;
            },
            [&](const ensemble::KempHall&) { h = eval_kemp_hall(x); },
            [&](const ensemble::Bridge& b) {
                if (t >= b.t_f) fail(ErrorKind::BridgeTimeOverflow, "bridge Hamiltonian evaluated at t >= t_f");
                const double k = 1.0 / (b.t_f - t);
                const Complex alpha = x.q[1], palpha = x.p[1];
                h.value = 0.5 * p * p + k * (1.0 - z * p - (alpha - 1.0) * palpha);
                h.dp[0] = p - k * z;
                h.dp[1] = -k * (alpha - 1.0);
                h.dq[0] = -k * p;
                h.dq[1] = -k * palpha;
            },
        },
        spec.variant());
    return h;
}

namespace {

// Tr[R dQ] with the transposed index pairing R_11 dQ_11 + R_21 dQ_12 + R_12 dQ_21 + R_22 dQ_22.
Complex trace_contraction(const Mat2c& r, const Mat2c& dq) {
    return r[0][0] * dq[0][0] + r[1][0] * dq[0][1] + r[0][1] * dq[1][0] + r[1][1] * dq[1][1];
}

Complex simpson(const std::function<Complex(double)>& f, int steps) {
    if (steps % 2 != 0) ++steps;
    const double h = 1.0 / steps;
    Complex acc = f(0.0) + f(1.0);
    for (int k = 1; k < steps; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f(k * h);
    return acc * (h / 3.0);
}

}  // namespace

Complex additive_hamiltonian_quadrature(const EnsembleSpec& spec, const Quaternion& p, int steps) {
    if (!spec.is_additive()) fail(ErrorKind::UnsupportedVariant, spec.name() + " is not additive");
    const Mat2c dq = p.matrix();
    return simpson(
        [&](double s) {
            const Quaternion q{s * p.z(), s * p.w()};
            return trace_contraction(r_transform(spec, q).matrix(), dq);
        },
        steps);
}

Complex additive_hamiltonian_quadrature(const EnsembleSpec& spec, Complex p, int steps) {
    if (!spec.is_additive()) fail(ErrorKind::UnsupportedVariant, spec.name() + " is not additive");
    return simpson([&](double s) { return r_transform(spec, s * p) * p; }, steps);
}

PhasePoint kemp_hall_to_radial(const PhasePoint& zw) {
    const Complex w = zw.q[1];
    const double r = std::abs(w);
    if (r == 0.0) fail(ErrorKind::KempHallAxis, "w = 0 has no radial chart");
    const Complex phase = w / r;
    const Complex rot = zw.p[1] * phase;
    PhasePoint out;
    out.q = {zw.q[0], Complex{r, 0.0}};
    out.p = {zw.p[0], rot + std::conj(rot)};
    return out;
}

PhasePoint kemp_hall_from_radial(const PhasePoint& radial, double w_phase) {
    const Complex r = radial.q[1];
    if (std::abs(r) == 0.0) fail(ErrorKind::KempHallAxis, "r = 0 has no radial chart");
    const Complex e = std::polar(1.0, w_phase);
    PhasePoint out;
    out.q = {radial.q[0], r * e};
    out.p = {radial.p[0], 0.5 * radial.p[1] * std::conj(e)};
    return out;
}

void to_json(nlohmann::json& j, const EnsembleSpec& spec) {
    nlohmann::json params = nlohmann::json::object();
    std::visit(overloaded{
                   [&](const ensemble::Elliptic& e) { params["tau"] = e.tau; },
                   [&](const ensemble::BiUnitary& b) { params["a_coeffs"] = b.a_coeffs; },
                   [&](const ensemble::OrnsteinUhlenbeck& o) { params["a"] = o.a; },
                   [&](const ensemble::Wishart& w) { params["r"] = w.r; },
                   [&](const ensemble::Jacobi& jc) {
                       params["theta"] = jc.theta;
                       params["lambda"] = jc.lambda;
                   },
                   [&](const ensemble::Bridge& b) { params["t_f"] = b.t_f; },
                   [](const auto&) {},
               },
               spec.variant());
    j = nlohmann::json{{"variant", spec.name()}, {"params", params}};
}

namespace {

double required_param(const nlohmann::json& params, const char* key) {
    if (!params.contains(key) || !params.at(key).is_number())
        throw ConfigError(std::string("params.") + key, "missing or not a number");
    return params.at(key).get<double>();
}

}  // namespace

void from_json(const nlohmann::json& j, EnsembleSpec& spec) {
    if (!j.is_object() || !j.contains("variant") || !j.at("variant").is_string())
        throw ConfigError("variant", "ensemble must be an object with a string 'variant'");
    const std::string v = j.at("variant").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    if (!params.is_object()) throw ConfigError("params", "must be an object");
    auto make = [](EnsembleVariant variant) {
        try {
            return EnsembleSpec(std::move(variant));
        } catch (const Error& e) {
            throw ConfigError("params", e.what());
        }
    };
    if (v == "gue") spec = make(ensemble::Gue{});
    else if (v == "elliptic") spec = make(ensemble::Elliptic{required_param(params, "tau")});
    else if (v == "ginibre") spec = make(ensemble::Ginibre{});
    else if (v == "biunitary") {
        if (!params.contains("a_coeffs") || !params.at("a_coeffs").is_array())
            throw ConfigError("params.a_coeffs", "missing or not an array");
        spec = make(ensemble::BiUnitary{params.at("a_coeffs").get<std::vector<double>>()});
    } else if (v == "ornstein_uhlenbeck") spec = make(ensemble::OrnsteinUhlenbeck{required_param(params, "a")});
    else if (v == "wishart") spec = make(ensemble::Wishart{required_param(params, "r")});
    else if (v == "jacobi") spec = make(ensemble::Jacobi{required_param(params, "theta"), required_param(params, "lambda")});
    else if (v == "unitary_z") spec = make(ensemble::UnitaryZ{});
    else if (v == "singular_value") spec = make(ensemble::SingularValue{});
    else if (v == "free_rotor") spec = make(ensemble::FreeRotor{});
    else if (v == "kemp_hall") spec = make(ensemble::KempHall{});
    else if (v == "bridge") spec = make(ensemble::Bridge{required_param(params, "t_f")});
    else throw ConfigError("variant", "unknown ensemble variant '" + v + "'");
}

}  // namespace eikonal
