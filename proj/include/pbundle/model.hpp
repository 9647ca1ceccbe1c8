// model.hpp: generalized quantum Rabi Hamiltonians of a trapped clock atom
//
// Internal units: energies in units of g_x, hbar = 1. Laboratory quantities are
// only seen by physical_to_model().

#pragma once

#include "pbundle/fockspace.hpp"

namespace pbundle {

struct ModelParams {
    double omega{1.0};  // trap (phonon) frequency, > 0
    double Omega{1.0};  // uniform Rabi coupling
    double delta{0.0};  // clock detuning
    double g_x{1.0};    // real-space coupling, reference scale, > 0
    double g_k{1.0};    // momentum-space coupling, signed

    double lambda_plus() const noexcept { return 0.5 * (g_x + g_k); }
    double lambda_minus() const noexcept { return 0.5 * (g_x - g_k); }

    // Throws std::invalid_argument on omega <= 0 or g_x <= 0.
    void validate() const;
};

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double planck = 6.62607015e-34;       // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double sr87_mass = 86.9088774970 * atomic_mass_unit;
inline constexpr double clock_wavelength = 698e-9;     // m
inline constexpr double magic_wavelength = 813e-9;     // m
}  // namespace constants

// Laboratory description. Frequencies are angular (rad/s), lengths in m.
struct PhysicalParams {
    double lambda_C{constants::clock_wavelength};
    double lambda_L{constants::magic_wavelength};
    double phi{0.0};         // clock-laser tilt, radians in [0, pi]
    double omega_trap{2.0 * constants::pi * 100e3};
    double Omega_0{0.0};     // gradient Rabi strength, rad/s per m
    double Omega{0.0};
    double delta{0.0};
    double mass{constants::sr87_mass};

    double zero_point_length() const;          // sqrt(hbar / (2 M omega_trap))
    double effective_wavevector() const;       // (2 pi / lambda_C) cos(phi)
    double lamb_dicke() const;                 // kappa * x_0
    double recoil_energy() const;              // hbar^2 k_C^2 / 2M, joules
};

// Couplings in angular-frequency units (rad/s); in_gx_units() moves them to model units.
// g_x = 2 Omega_0 x_0, g_k = kappa omega x_0 with kappa = k_C cos(phi).
ModelParams physical_to_model(const PhysicalParams& p);
// Divide every energy by g_x so that g_x == 1.
ModelParams in_gx_units(const ModelParams& m);

// omega a^dag a + (Omega/2) sigma_y + delta sigma_z + (g_x/2)(a^dag + a) sigma_x
//   + (i g_k/2)(a^dag - a) sigma_z
OperatorMatrix hamiltonian_lab_frame(const ModelParams& m, const Truncation& t);

// omega a^dag a + (Omega/2) sigma_z - delta sigma_y + (g_x/2)(a^dag + a) sigma_x
//   - (i g_k/2)(a^dag - a) sigma_y
// Canonical form used by the dynamics.
OperatorMatrix hamiltonian_rotated(const ModelParams& m, const Truncation& t);

enum class SymmetryKind {
    spin_rotation_Rx,  // U = exp(i pi sigma_x / 4): lab frame -> rotated frame
    antiJCM_to_JCM,    // U = exp(-i pi sigma_x / 2)
};

OperatorMatrix symmetry_unitary(SymmetryKind kind, const Truncation& t);
// U^dagger H U
OperatorMatrix symmetry_transform(SymmetryKind kind, const OperatorMatrix& H);

}  // namespace pbundle
