#include "pbundle/kernels.hpp"

#include <omp.h>

#include <stdexcept>
#include <vector>

namespace pbundle {

namespace {

int g_workers = 0;

void check_shapes(const SparseMatrix& A, std::span<const cplx> x, std::span<cplx> y) {
    if (static_cast<Eigen::Index>(x.size()) != A.cols() || static_cast<Eigen::Index>(y.size()) != A.rows()) {
        throw DimensionMismatch("spmv: vector sizes do not match the matrix");
    }
}

inline cplx row_dot(const SparseMatrix& A, Eigen::Index r, const cplx* x) {
    cplx acc{0.0, 0.0};
    const auto* outer = A.outerIndexPtr();
    const auto* inner = A.innerIndexPtr();
    const cplx* val = A.valuePtr();
    for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += val[k] * x[inner[k]];
    return acc;
}

}  // namespace

void set_worker_count(int workers) {
    g_workers = workers;
    if (workers > 0) omp_set_num_threads(workers);
}

int worker_count() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

void spmv_serial(const SparseMatrix& A, std::span<const cplx> x, std::span<cplx> y) {
    check_shapes(A, x, y);
    if (!A.isCompressed()) throw std::invalid_argument("spmv: matrix must be compressed");
    for (Eigen::Index r = 0; r < A.rows(); ++r) y[static_cast<std::size_t>(r)] = row_dot(A, r, x.data());
}

void spmv_parallel(const SparseMatrix& A, std::span<const cplx> x, std::span<cplx> y) {
    check_shapes(A, x, y);
    if (!A.isCompressed()) throw std::invalid_argument("spmv: matrix must be compressed");
    const Eigen::Index rows = A.rows();
    const cplx* xp = x.data();
    cplx* yp = y.data();
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < rows; ++r) yp[r] = row_dot(A, r, xp);
}

void spmv(const SparseMatrix& A, std::span<const cplx> x, std::span<cplx> y, Exec exec) {
    if (exec == Exec::parallel) {
        spmv_parallel(A, x, y);
    } else {
        spmv_serial(A, x, y);
    }
}

namespace {

SparseMatrix kron_impl(const SparseMatrix& P, const SparseMatrix& Q, bool parallel) {
    const Eigen::Index qr = Q.rows(), qc = Q.cols();
    const Eigen::Index rows = P.rows() * qr;
    // Row (p, q) of the product has nnz(P row p) * nnz(Q row q) entries.
    std::vector<Eigen::Index> row_nnz(static_cast<std::size_t>(rows));
    for (Eigen::Index p = 0; p < P.rows(); ++p) {
        for (Eigen::Index q = 0; q < qr; ++q) {
            row_nnz[static_cast<std::size_t>(p * qr + q)] =
                (P.outerIndexPtr()[p + 1] - P.outerIndexPtr()[p]) * (Q.outerIndexPtr()[q + 1] - Q.outerIndexPtr()[q]);
        }
    }
    SparseMatrix K(rows, P.cols() * qc);
    K.reserve(row_nnz);
    std::vector<Eigen::Index> offset(static_cast<std::size_t>(rows) + 1, 0);
    for (Eigen::Index r = 0; r < rows; ++r) offset[static_cast<std::size_t>(r) + 1] = offset[static_cast<std::size_t>(r)] + row_nnz[static_cast<std::size_t>(r)];

    std::vector<int> cols(static_cast<std::size_t>(offset.back()));
    std::vector<cplx> vals(static_cast<std::size_t>(offset.back()));
    auto fill_row = [&](Eigen::Index r) {
        const Eigen::Index p = r / qr, q = r % qr;
        auto pos = offset[static_cast<std::size_t>(r)];
        for (SparseMatrix::InnerIterator ip(P, p); ip; ++ip) {
            for (SparseMatrix::InnerIterator iq(Q, q); iq; ++iq) {
                cols[static_cast<std::size_t>(pos)] = static_cast<int>(ip.col() * qc + iq.col());
                vals[static_cast<std::size_t>(pos)] = ip.value() * iq.value();
                ++pos;
            }
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index r = 0; r < rows; ++r) fill_row(r);
    } else {
        for (Eigen::Index r = 0; r < rows; ++r) fill_row(r);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (auto k = offset[static_cast<std::size_t>(r)]; k < offset[static_cast<std::size_t>(r) + 1]; ++k) {
            K.insert(r, cols[static_cast<std::size_t>(k)]) = vals[static_cast<std::size_t>(k)];
        }
    }
    K.makeCompressed();
    return K;
}

}  // namespace

SparseMatrix kron_serial(const SparseMatrix& P, const SparseMatrix& Q) { return kron_impl(P, Q, false); }
SparseMatrix kron_parallel(const SparseMatrix& P, const SparseMatrix& Q) { return kron_impl(P, Q, true); }

}  // namespace pbundle
