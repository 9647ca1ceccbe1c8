// reference.hpp: straight-line reference implementations
//
// Independent of the operator algebra, Kronecker assembly and solvers used by
// the production path. The verification suite and the unit tests compare the
// production code against these.

#pragma once

#include "pbundle/dynamics.hpp"

namespace pbundle::reference {

// Ladder and spin matrices filled entry by entry, index 2n + s.
DenseMatrix lowering(int n_max);
DenseMatrix spin_lowering(int n_max);

// Dressed-basis block matrix: diagonal n omega on |n,g> and n omega + Omega on
// |n,e>, lambda_+ linking |n,e> <-> |n+1,g>, lambda_- linking |n,g> <-> |n+1,e>,
// and the detuning entry <n,g|H|n,e> = delta_entry. Equals H' + Omega/2 when
// delta_entry = -i delta.
DenseMatrix block_matrix(const ModelParams& m, int n_max, cplx delta_entry);
inline cplx rotated_frame_delta_entry(double delta) { return {0.0, -delta}; }
inline cplx printed_delta_entry(double delta) { return {0.0, delta}; }

// Right-hand side of the master equation evaluated with dense products.
DenseMatrix master_rhs(const DenseMatrix& H, const DissipationParams& d, int n_max, const DenseMatrix& rho);

// JCM levels at g_k = g_x, delta = 0, Omega = omega relative to the ground
// state |0,g>: 0, then n omega -/+ g_x sqrt(n) for n >= 1, ascending.
std::vector<double> jcm_levels(double omega, double g_x, int n_levels);

// |alpha><alpha| with the Fock amplitudes cut at n_max and renormalized, spin g.
DenseMatrix coherent_state(cplx alpha, int n_max);
DenseMatrix fock_state(int q, int n_max);

}  // namespace pbundle::reference
