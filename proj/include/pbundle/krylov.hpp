// krylov.hpp: action of exp(tA) on a vector by adaptive Krylov (Arnoldi) steps
//
// Step-size control and error estimate follow the Expokit expv scheme
// (Sidje, ACM TOMS 24, 1998): each step builds an m-dimensional Krylov basis,
// exponentiates the small augmented Hessenberg matrix densely, and accepts
// the step when the local error per unit time is below tolerance.

#pragma once

#include "pbundle/kernels.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace pbundle {

struct IntegratorFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KrylovOptions {
    int krylov_dim{30};
    // Local error per unit time relative to ||v|| (the Expokit convention).
    double rel_tol{1e-9};
    int max_rejections{40};
    long max_steps{2'000'000};
    Exec exec{Exec::parallel};
};

struct KrylovStats {
    long steps{0};
    long rejections{0};
    long matvecs{0};
    double error_estimate{0.0};
};

// Returns exp(t_k A) v for each t_k in `times` (ascending, t_0 >= 0).
std::vector<Eigen::VectorXcd> expv_series(const SparseMatrix& A, const Eigen::VectorXcd& v,
                                          std::span<const double> times, const KrylovOptions& opt = {},
                                          KrylovStats* stats = nullptr);

}  // namespace pbundle
