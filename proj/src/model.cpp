#include "pbundle/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pbundle {

void ModelParams::validate() const {
    if (!(omega > 0.0)) throw std::invalid_argument("ModelParams: omega must be > 0, got " + std::to_string(omega));
    if (!(g_x > 0.0)) throw std::invalid_argument("ModelParams: g_x must be > 0, got " + std::to_string(g_x));
    if (!std::isfinite(Omega) || !std::isfinite(delta) || !std::isfinite(g_k)) {
        throw std::invalid_argument("ModelParams: non-finite coupling");
    }
}

double PhysicalParams::zero_point_length() const {
    if (!(omega_trap > 0.0)) throw std::invalid_argument("PhysicalParams: trap frequency must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("PhysicalParams: mass must be > 0");
    return std::sqrt(constants::hbar / (2.0 * mass * omega_trap));
}

double PhysicalParams::effective_wavevector() const { return 2.0 * constants::pi / lambda_C * std::cos(phi); }

double PhysicalParams::lamb_dicke() const { return effective_wavevector() * zero_point_length(); }

double PhysicalParams::recoil_energy() const {
    const double k = 2.0 * constants::pi / lambda_C;
    return constants::hbar * constants::hbar * k * k / (2.0 * mass);
}

ModelParams physical_to_model(const PhysicalParams& p) {
    if (!(p.omega_trap > 0.0)) throw std::invalid_argument("physical_to_model: nonpositive trap frequency");
    if (p.phi < 0.0 || p.phi > constants::pi) throw std::invalid_argument("physical_to_model: phi outside [0, pi]");
    const double x0 = p.zero_point_length();
    ModelParams m;
    m.omega = p.omega_trap;
    m.Omega = p.Omega;
    m.delta = p.delta;
    m.g_x = 2.0 * p.Omega_0 * x0;
    m.g_k = p.effective_wavevector() * p.omega_trap * x0;
    return m;
}

ModelParams in_gx_units(const ModelParams& m) {
    if (!(m.g_x > 0.0)) throw std::invalid_argument("in_gx_units: g_x must be > 0");
    const double s = 1.0 / m.g_x;
    return ModelParams{m.omega * s, m.Omega * s, m.delta * s, 1.0, m.g_k * s};
}

OperatorMatrix hamiltonian_lab_frame(const ModelParams& m, const Truncation& t) {
    m.validate();
    const cplx I(0.0, 1.0);
    const auto a = annihilation(t);
    const auto ad = a.adjoint();
    OperatorMatrix H = m.omega * number(t);
    H += (0.5 * m.Omega) * pauli(Axis::y, t);
    H += m.delta * pauli(Axis::z, t);
    H += (0.5 * m.g_x) * ((ad + a) * pauli(Axis::x, t));
    H += (0.5 * m.g_k * I) * ((ad - a) * pauli(Axis::z, t));
    return H;
}

OperatorMatrix hamiltonian_rotated(const ModelParams& m, const Truncation& t) {
    m.validate();
    const cplx I(0.0, 1.0);
    const auto a = annihilation(t);
    const auto ad = a.adjoint();
    OperatorMatrix H = m.omega * number(t);
    H += (0.5 * m.Omega) * pauli(Axis::z, t);
    H -= m.delta * pauli(Axis::y, t);
    H += (0.5 * m.g_x) * ((ad + a) * pauli(Axis::x, t));
    H -= (0.5 * m.g_k * I) * ((ad - a) * pauli(Axis::y, t));
    return H;
}

OperatorMatrix symmetry_unitary(SymmetryKind kind, const Truncation& t) {
    // exp(i theta sigma_x) = cos(theta) + i sin(theta) sigma_x
    const double theta = (kind == SymmetryKind::spin_rotation_Rx) ? constants::pi / 4.0 : -constants::pi / 2.0;
    OperatorMatrix U = std::cos(theta) * OperatorMatrix::identity(t);
    U += cplx(0.0, std::sin(theta)) * pauli(Axis::x, t);
    return U;
}

OperatorMatrix symmetry_transform(SymmetryKind kind, const OperatorMatrix& H) {
    const auto U = symmetry_unitary(kind, H.truncation());
    return U.adjoint() * H * U;
}

}  // namespace pbundle
