// fockspace.hpp: operators on the truncated space Fock(n_max) ⊗ spin-1/2
//
// Basis ordering is |n, s> with the spin index fastest: index = 2n + s,
// s = 0 for |g> and s = 1 for |e>. sigma_z|g> = -|g>, sigma_+ = |e><g|.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbundle {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr Eigen::Index kSparseThreshold = 256;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Truncation {
public:
    explicit Truncation(int n_max);

    int n_max() const noexcept { return n_max_; }
    Eigen::Index dim() const noexcept { return 2 * (static_cast<Eigen::Index>(n_max_) + 1); }
    static Eigen::Index index(int n, int spin) noexcept { return 2 * static_cast<Eigen::Index>(n) + spin; }

    friend bool operator==(const Truncation&, const Truncation&) = default;

private:
    int n_max_;
};

enum class Axis { x, y, z };

class OperatorMatrix {
public:
    OperatorMatrix(Truncation trunc, DenseMatrix entries);

    static OperatorMatrix zero(Truncation trunc);
    static OperatorMatrix identity(Truncation trunc);

    const Truncation& truncation() const noexcept { return trunc_; }
    Eigen::Index dim() const noexcept { return trunc_.dim(); }
    const DenseMatrix& dense() const noexcept { return m_; }
    cplx operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

    // Coordinate-sparse copy; preferred above kSparseThreshold.
    SparseMatrix sparse(double drop_below = 0.0) const;
    bool prefers_sparse() const noexcept { return dim() > kSparseThreshold; }

    OperatorMatrix adjoint() const;
    // max |A - A^dagger| elementwise
    double hermiticity_residual() const;
    bool is_hermitian(double tol = kHermitianTolerance) const { return hermiticity_residual() <= tol; }
    double max_abs() const;

    OperatorMatrix& operator+=(const OperatorMatrix& rhs);
    OperatorMatrix& operator-=(const OperatorMatrix& rhs);
    OperatorMatrix& operator*=(cplx s);

private:
    Truncation trunc_;
    DenseMatrix m_;
};

OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs);
OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs);
OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix operator*(cplx s, OperatorMatrix op);
OperatorMatrix operator*(OperatorMatrix op, cplx s);
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix anticommutator(const OperatorMatrix& a, const OperatorMatrix& b);
// a^k, k >= 0
OperatorMatrix power(const OperatorMatrix& a, int k);

// Single-factor constructors. Each acts as identity on the other factor.
OperatorMatrix annihilation(const Truncation& trunc);
OperatorMatrix creation(const Truncation& trunc);
OperatorMatrix number(const Truncation& trunc);
OperatorMatrix pauli(Axis axis, const Truncation& trunc);
OperatorMatrix sigma_plus(const Truncation& trunc);
OperatorMatrix sigma_minus(const Truncation& trunc);
// |q><q| on the Fock factor
OperatorMatrix fock_projector(int q, const Truncation& trunc);
// a^dagger a + (1 + sigma_z)/2
OperatorMatrix excitation_number(const Truncation& trunc);
// exp[i pi (a^dagger a + (1 + sigma_z)/2)], diagonal +-1
OperatorMatrix parity(const Truncation& trunc);

std::string to_string(Axis axis);

}  // namespace pbundle
