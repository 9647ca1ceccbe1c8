#include "pbundle/dynamics.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <string>

namespace pbundle {

void DissipationParams::validate() const {
    if (!(kappa_e >= 0.0) || !(kappa_d >= 0.0) || !(gamma_d >= 0.0)) {
        throw std::invalid_argument("DissipationParams: rates must be >= 0");
    }
}

namespace {

SparseMatrix sparse_identity(Eigen::Index n) {
    SparseMatrix I(n, n);
    I.setIdentity();
    I.makeCompressed();
    return I;
}

SparseMatrix to_sparse(const DenseMatrix& m) {
    SparseMatrix s = m.sparseView();
    s.makeCompressed();
    return s;
}

SparseMatrix kron(const SparseMatrix& P, const SparseMatrix& Q, Exec exec) {
    return exec == Exec::parallel ? kron_parallel(P, Q) : kron_serial(P, Q);
}

// c (2 conj(o) ⊗ o - I ⊗ o^dag o - (o^dag o)^T ⊗ I)
SparseMatrix dissipator(const OperatorMatrix& o, double c, Exec exec) {
    const Eigen::Index D = o.dim();
    const SparseMatrix I = sparse_identity(D);
    const DenseMatrix n = o.dense().adjoint() * o.dense();
    SparseMatrix out = 2.0 * kron(to_sparse(o.dense().conjugate()), to_sparse(o.dense()), exec);
    out -= kron(I, to_sparse(n), exec);
    out -= kron(to_sparse(n.transpose()), I, exec);
    out *= cplx(c, 0.0);
    return out;
}

double residual_inf(const Liouvillian& L, const Eigen::VectorXcd& x) {
    Eigen::VectorXcd y(L.dim());
    spmv(L.matrix, {x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())},
         Exec::serial);
    return y.cwiseAbs().maxCoeff();
}

DenseMatrix hermitize_normalize(const DenseMatrix& r) {
    DenseMatrix h = 0.5 * (r + r.adjoint());
    const cplx tr = h.trace();
    return h / tr.real();
}

SteadyState finish(const Liouvillian& L, const DenseMatrix& raw, bool dense) {
    const DenseMatrix rho = hermitize_normalize(raw);
    const DensityDiagnostics diag = check_density(rho);
    if (diag.min_eigenvalue < -1e-8) {
        throw SolverError("steady_state: solution is not positive semidefinite (min eigenvalue " +
                              std::to_string(diag.min_eigenvalue) + ")",
                          -1);
    }
    SteadyState s{DensityMatrix(L.trunc, rho), 0.0, 0.0, L.trunc.n_max(), 0, dense};
    s.residual = residual_inf(L, vectorize(rho));
    s.tail_mass = fock_tail_mass(rho, L.trunc);
    return s;
}

}  // namespace

Liouvillian build_liouvillian(const OperatorMatrix& H, const DissipationParams& d, Exec exec) {
    d.validate();
    const Truncation& t = H.truncation();
    const Eigen::Index D = t.dim();
    const SparseMatrix I = sparse_identity(D);
    const SparseMatrix Hs = to_sparse(H.dense());
    const SparseMatrix HsT = to_sparse(H.dense().transpose());

    SparseMatrix L = kron(I, Hs, exec);
    L -= kron(HsT, I, exec);
    L *= cplx(0.0, -1.0);
    if (d.kappa_e > 0.0) L += dissipator(sigma_minus(t), 0.5 * d.kappa_e, exec);
    if (d.kappa_d > 0.0) L += dissipator(annihilation(t), 0.5 * d.kappa_d, exec);
    if (d.gamma_d > 0.0) L += dissipator(number(t), d.gamma_d, exec);
    L.prune(cplx(0.0, 0.0));
    L.makeCompressed();
    return Liouvillian{t, std::move(L)};
}

Liouvillian build_liouvillian(const ModelParams& m, const DissipationParams& d, const Truncation& t, Exec exec) {
    return build_liouvillian(hamiltonian_rotated(m, t), d, exec);
}

Eigen::VectorXcd vectorize(const DenseMatrix& X) {
    return Eigen::Map<const Eigen::VectorXcd>(X.data(), X.size());
}

DenseMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index D) {
    if (v.size() != D * D) throw DimensionMismatch("unvectorize: length is not D^2");
    return Eigen::Map<const DenseMatrix>(v.data(), D, D);
}

DenseMatrix apply_liouvillian(const Liouvillian& L, const DenseMatrix& X, Exec exec) {
    const Eigen::VectorXcd x = vectorize(X);
    Eigen::VectorXcd y(L.dim());
    spmv(L.matrix, {x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())}, exec);
    return unvectorize(y, L.dim_H());
}

double trace_preservation_residual(const Liouvillian& L) {
    const Eigen::Index D = L.dim_H();
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(L.dim());
    for (Eigen::Index i = 0; i < D; ++i) {
        const Eigen::Index row = i + D * i;
        for (SparseMatrix::InnerIterator it(L.matrix, row); it; ++it) acc(it.col()) += it.value();
    }
    return acc.cwiseAbs().maxCoeff();
}

DensityDiagnostics check_density(const DenseMatrix& rho) {
    DensityDiagnostics d;
    d.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
    const DenseMatrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues()(0);
    return d;
}

DensityMatrix::DensityMatrix(Truncation trunc, DenseMatrix rho) : trunc_(trunc), rho_(std::move(rho)) {
    if (rho_.rows() != trunc_.dim() || rho_.cols() != trunc_.dim()) {
        throw DimensionMismatch("DensityMatrix: entries do not match the truncation");
    }
}

double fock_tail_mass(const DenseMatrix& rho, const Truncation& t) {
    double tail = 0.0;
    for (int q = t.n_max() - 1; q <= t.n_max(); ++q) {
        for (int s = 0; s < 2; ++s) tail += rho(Truncation::index(q, s), Truncation::index(q, s)).real();
    }
    return tail;
}

Eigen::VectorXd liouvillian_singular_values(const Liouvillian& L) {
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(L.matrix);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense);
    Eigen::VectorXd s = svd.singularValues();  // descending
    return s.reverse();
}

int null_space_dimension(const Liouvillian& L, double rel_tol) {
    const Eigen::VectorXd s = liouvillian_singular_values(L);
    const double cut = rel_tol * s(s.size() - 1);
    int count = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) count += (s(i) <= cut) ? 1 : 0;
    return count;
}

SteadyState steady_state_dense(const Liouvillian& L) {
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(L.matrix);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cut = 1e-10 * s(0);
    int null_dim = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) null_dim += (s(i) <= cut) ? 1 : 0;
    if (null_dim != 1) {
        throw SolverError("steady_state: Liouvillian null space has dimension " + std::to_string(null_dim) +
                              " (unique steady state requires 1)",
                          null_dim);
    }
    const Eigen::VectorXcd v = svd.matrixV().col(s.size() - 1);
    return finish(L, unvectorize(v, L.dim_H()), true);
}

SteadyState steady_state(const Liouvillian& L) {
    const Eigen::Index D = L.dim_H();
    const Eigen::Index N = L.dim();
    constexpr Eigen::Index replaced_row = 0;

    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(static_cast<std::size_t>(L.matrix.nonZeros() + D));
    for (Eigen::Index r = 0; r < N; ++r) {
        if (r == replaced_row) continue;
        for (SparseMatrix::InnerIterator it(L.matrix, r); it; ++it) trips.emplace_back(r, it.col(), it.value());
    }
    for (Eigen::Index i = 0; i < D; ++i) trips.emplace_back(replaced_row, i + D * i, cplx(1.0, 0.0));
    Eigen::SparseMatrix<cplx, Eigen::ColMajor> A(N, N);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(N);
    b(replaced_row) = 1.0;

    auto singular = [&](const std::string& why) -> SteadyState {
        if (D <= kDenseFallbackMaxDim) return steady_state_dense(L);
        throw SolverError("steady_state: " + why + " (null-space dimension not computed above D = " +
                              std::to_string(kDenseFallbackMaxDim) + ")",
                          -1);
    };

    Eigen::SparseLU<Eigen::SparseMatrix<cplx, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) return singular("sparse LU factorization failed: " + lu.lastErrorMessage());

    Eigen::VectorXcd x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite()) return singular("sparse LU solve failed");
    for (int sweep = 0; sweep < 2; ++sweep) {
        const Eigen::VectorXcd r = b - A * x;
        const Eigen::VectorXcd dx = lu.solve(r);
        if (!dx.allFinite()) break;
        x += dx;
    }
    if ((A * x - b).cwiseAbs().maxCoeff() > 1e-6) return singular("trace-augmented system is singular");

    SteadyState s = finish(L, unvectorize(x, D), false);
    if (s.residual > kSteadyStateResidual && D <= kDenseFallbackMaxDim) {
        SteadyState alt = steady_state_dense(L);
        if (alt.residual < s.residual) s = std::move(alt);
    }
    return s;
}

SteadyState solve_steady_state(const ModelParams& m, const DissipationParams& d, int n_max,
                               const SteadyStateOptions& opt) {
    int nm = n_max;
    int retries = 0;
    for (;;) {
        const Truncation t(nm);
        const Liouvillian L = build_liouvillian(m, d, t, opt.exec);
        SteadyState s = steady_state(L);
        s.truncation_retries = retries;
        if (!opt.adaptive || s.tail_mass < opt.tail_threshold || retries >= opt.max_retries) return s;
        nm = static_cast<int>(std::ceil(1.5 * nm));
        ++retries;
    }
}

std::vector<DenseMatrix> propagate(const Liouvillian& L, const DenseMatrix& X, std::span<const double> tau_grid,
                                   const KrylovOptions& opt, KrylovStats* stats) {
    if (X.rows() != L.dim_H() || X.cols() != L.dim_H()) throw DimensionMismatch("propagate: X does not match L");
    if (!tau_grid.empty() && tau_grid[0] < 0.0) throw std::invalid_argument("propagate: tau_grid[0] must be >= 0");
    const auto series = expv_series(L.matrix, vectorize(X), tau_grid, opt, stats);
    std::vector<DenseMatrix> out;
    out.reserve(series.size());
    for (const auto& v : series) out.push_back(unvectorize(v, L.dim_H()));
    return out;
}

}  // namespace pbundle
