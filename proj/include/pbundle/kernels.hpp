// kernels.hpp: data-parallel inner loops with serial reference versions
//
// Every parallel kernel here has a serial twin that is kept for testing and
// benchmarking. Parallel and serial variants produce bit-identical results:
// work is split over independent output rows/points, never over reductions.

#pragma once

#include "pbundle/fockspace.hpp"

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>

namespace pbundle {

enum class Exec { serial, parallel };

// OpenMP thread count used by parallel kernels (0 leaves the runtime default).
void set_worker_count(int workers);
int worker_count();

// y = A x for a row-major sparse A.
void spmv_serial(const SparseMatrix& A, std::span<const cplx> x, std::span<cplx> y);
void spmv_parallel(const SparseMatrix& A, std::span<const cplx> x, std::span<cplx> y);
void spmv(const SparseMatrix& A, std::span<const cplx> x, std::span<cplx> y, Exec exec);

// Row-parallel sparse Kronecker product (P ⊗ Q), both row-major.
SparseMatrix kron_serial(const SparseMatrix& P, const SparseMatrix& Q);
SparseMatrix kron_parallel(const SparseMatrix& P, const SparseMatrix& Q);

// Runs f(i) for i in [0, n). The first exception thrown by any worker is
// rethrown on the calling thread after the loop.
template <class F>
void for_each_index(std::ptrdiff_t n, Exec exec, F&& f) {
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr first;
    std::mutex guard;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace pbundle
