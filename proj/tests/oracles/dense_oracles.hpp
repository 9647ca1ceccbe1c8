// Dense, brute-force counterparts of the production propagators. Only used on
// tiny truncations where D^2 x D^2 dense algebra is cheap.
#pragma once

#include "pbundle/reference.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using pbundle::DenseMatrix;

// Column j of the superoperator is the master-equation RHS applied to the
// j-th column-stacked basis matrix.
inline DenseMatrix dense_generator(const DenseMatrix& H, const pbundle::DissipationParams& d, int n_max) {
    const Eigen::Index D = H.rows();
    DenseMatrix L(D * D, D * D);
    for (Eigen::Index j = 0; j < D * D; ++j) {
        DenseMatrix E = DenseMatrix::Zero(D, D);
        E(j % D, j / D) = 1.0;
        const DenseMatrix R = pbundle::reference::master_rhs(H, d, n_max, E);
        L.col(j) = Eigen::Map<const Eigen::VectorXcd>(R.data(), D * D);
    }
    return L;
}

inline DenseMatrix evolve(const DenseMatrix& L, const DenseMatrix& X, double t) {
    const Eigen::Index D = X.rows();
    const DenseMatrix U = (L * t).exp();
    const Eigen::VectorXcd v = U * Eigen::Map<const Eigen::VectorXcd>(X.data(), D * D);
    return Eigen::Map<const DenseMatrix>(v.data(), D, D);
}

// Null vector of the dense generator by full-pivoting LU kernel, trace-normalized.
inline DenseMatrix dense_steady_state(const DenseMatrix& L) {
    const Eigen::Index D = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(L.rows()))));
    Eigen::JacobiSVD<DenseMatrix> svd(L, Eigen::ComputeFullV);
    const Eigen::VectorXcd v = svd.matrixV().col(L.cols() - 1);
    DenseMatrix rho = Eigen::Map<const DenseMatrix>(v.data(), D, D);
    rho /= rho.trace();
    return 0.5 * (rho + rho.adjoint());
}

inline double n_photon_moment(const DenseMatrix& X, int n_max, int n) {
    const DenseMatrix a = pbundle::reference::lowering(n_max);
    DenseMatrix an = DenseMatrix::Identity(a.rows(), a.cols());
    for (int i = 0; i < n; ++i) an = an * a;
    return (an.adjoint() * an * X).trace().real();
}

}  // namespace oracle
