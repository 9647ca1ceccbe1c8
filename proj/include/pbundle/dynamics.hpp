// dynamics.hpp: Lindblad generator, steady state and propagation
//
//   d rho/dt = -i[H', rho] + (kappa_e/2) D[sigma_-] rho + (kappa_d/2) D[a] rho
//              + gamma_d D[a^dag a] rho,
//   D[o] rho = 2 o rho o^dag - o^dag o rho - rho o^dag o.
//
// Vectorization is column stacking, vec(rho)[i + D j] = rho(i, j), so that
// vec(A X B) = (B^T ⊗ A) vec(X) and
//   L = -i (I ⊗ H - H^T ⊗ I) + sum_k c_k (2 conj(o_k) ⊗ o_k - I ⊗ o_k^dag o_k - (o_k^dag o_k)^T ⊗ I).

#pragma once

#include "pbundle/kernels.hpp"
#include "pbundle/krylov.hpp"
#include "pbundle/model.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace pbundle {

struct DissipationParams {
    double kappa_e{1.1e-8};   // clock-state spontaneous emission
    double kappa_d{0.005};    // phonon decay
    double gamma_d{0.0005};   // phonon dephasing

    void validate() const;
    bool any_positive() const noexcept { return kappa_e > 0.0 || kappa_d > 0.0 || gamma_d > 0.0; }
};

struct Liouvillian {
    Truncation trunc{1};
    SparseMatrix matrix;  // D^2 x D^2, row-major

    Eigen::Index dim_H() const noexcept { return trunc.dim(); }
    Eigen::Index dim() const noexcept { return matrix.rows(); }
};

Liouvillian build_liouvillian(const OperatorMatrix& H, const DissipationParams& d, Exec exec = Exec::parallel);
Liouvillian build_liouvillian(const ModelParams& m, const DissipationParams& d, const Truncation& t,
                              Exec exec = Exec::parallel);

Eigen::VectorXcd vectorize(const DenseMatrix& X);
DenseMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index D);

// L vec(X), reshaped.
DenseMatrix apply_liouvillian(const Liouvillian& L, const DenseMatrix& X, Exec exec = Exec::parallel);

// max over columns of |sum_i L(i + D i, col)|, i.e. ||vec(I)^dag L||_inf
double trace_preservation_residual(const Liouvillian& L);

struct DensityDiagnostics {
    double hermiticity{0.0};     // max |rho - rho^dag|
    double trace_error{0.0};     // |tr rho - 1|
    double min_eigenvalue{0.0};
    bool valid(double herm_tol = 1e-10, double trace_tol = 1e-10, double psd_tol = -1e-8) const {
        return hermiticity <= herm_tol && trace_error <= trace_tol && min_eigenvalue >= psd_tol;
    }
};

DensityDiagnostics check_density(const DenseMatrix& rho);

class DensityMatrix {
public:
    DensityMatrix(Truncation trunc, DenseMatrix rho);

    const Truncation& truncation() const noexcept { return trunc_; }
    const DenseMatrix& matrix() const noexcept { return rho_; }
    Eigen::Index dim() const noexcept { return trunc_.dim(); }

private:
    Truncation trunc_;
    DenseMatrix rho_;
};

// Singular steady-state problem; null_space_dim is -1 when not computed.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, int null_dim) : std::runtime_error(what), null_space_dim(null_dim) {}
    int null_space_dim;
};

struct SteadyState {
    DensityMatrix rho;
    double residual{0.0};      // ||L vec(rho)||_inf
    double tail_mass{0.0};     // p(n_max - 1) + p(n_max)
    int n_max_used{0};
    int truncation_retries{0};
    bool used_dense_fallback{false};
};

inline constexpr double kSteadyStateResidual = 1e-10;
inline constexpr double kTailThreshold = 1e-10;
// Hilbert dimensions up to this size may use the dense SVD null-space route.
inline constexpr Eigen::Index kDenseFallbackMaxDim = 64;

// Sparse LU on L with the row of the (0,0) equation replaced by the trace
// constraint; falls back to the dense null space for small D.
SteadyState steady_state(const Liouvillian& L);

// Dense null-space route (SVD). Throws SolverError unless the null space is one-dimensional.
SteadyState steady_state_dense(const Liouvillian& L);

// Singular values of L (dense; small instances only), ascending.
Eigen::VectorXd liouvillian_singular_values(const Liouvillian& L);
int null_space_dimension(const Liouvillian& L, double rel_tol = 1e-10);

struct SteadyStateOptions {
    bool adaptive{true};
    int max_retries{3};
    double tail_threshold{kTailThreshold};
    Exec exec{Exec::parallel};
};

// Builds L and solves, growing n_max by 50% while the Fock tail is too heavy.
SteadyState solve_steady_state(const ModelParams& m, const DissipationParams& d, int n_max,
                               const SteadyStateOptions& opt = {});

double fock_tail_mass(const DenseMatrix& rho, const Truncation& t);

// exp(L tau) X for each tau; X need not be a state.
std::vector<DenseMatrix> propagate(const Liouvillian& L, const DenseMatrix& X, std::span<const double> tau_grid,
                                   const KrylovOptions& opt = {}, KrylovStats* stats = nullptr);

}  // namespace pbundle
