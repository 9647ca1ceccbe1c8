#include "pbundle/fockspace.hpp"

#include <cmath>
#include <vector>

namespace pbundle {

namespace {

void require_same(const OperatorMatrix& a, const OperatorMatrix& b, const char* what) {
    if (!(a.truncation() == b.truncation())) {
        throw DimensionMismatch(std::string(what) + ": operands live on different truncations (n_max " +
                                std::to_string(a.truncation().n_max()) + " vs " +
                                std::to_string(b.truncation().n_max()) + ")");
    }
}

// Embed a 2x2 spin matrix as I_Fock ⊗ s.
OperatorMatrix spin_embed(const Truncation& trunc, const Eigen::Matrix2cd& s) {
    DenseMatrix m = DenseMatrix::Zero(trunc.dim(), trunc.dim());
    for (int n = 0; n <= trunc.n_max(); ++n) {
        m.block<2, 2>(Truncation::index(n, 0), Truncation::index(n, 0)) = s;
    }
    return OperatorMatrix(trunc, std::move(m));
}

}  // namespace

Truncation::Truncation(int n_max) : n_max_(n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("Truncation: n_max must be >= 1, got " + std::to_string(n_max));
    }
}

OperatorMatrix::OperatorMatrix(Truncation trunc, DenseMatrix entries) : trunc_(trunc), m_(std::move(entries)) {
    if (m_.rows() != trunc_.dim() || m_.cols() != trunc_.dim()) {
        throw DimensionMismatch("OperatorMatrix: entries are " + std::to_string(m_.rows()) + "x" +
                                std::to_string(m_.cols()) + ", truncation requires " +
                                std::to_string(trunc_.dim()) + "x" + std::to_string(trunc_.dim()));
    }
}

OperatorMatrix OperatorMatrix::zero(Truncation trunc) {
    return OperatorMatrix(trunc, DenseMatrix::Zero(trunc.dim(), trunc.dim()));
}

OperatorMatrix OperatorMatrix::identity(Truncation trunc) {
    return OperatorMatrix(trunc, DenseMatrix::Identity(trunc.dim(), trunc.dim()));
}

SparseMatrix OperatorMatrix::sparse(double drop_below) const {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (Eigen::Index c = 0; c < m_.cols(); ++c) {
        for (Eigen::Index r = 0; r < m_.rows(); ++r) {
            const cplx v = m_(r, c);
            if (std::abs(v) > drop_below) trips.emplace_back(r, c, v);
        }
    }
    SparseMatrix s(m_.rows(), m_.cols());
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(trunc_, m_.adjoint()); }

double OperatorMatrix::hermiticity_residual() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

double OperatorMatrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
    require_same(*this, rhs, "operator+");
    m_ += rhs.m_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
    require_same(*this, rhs, "operator-");
    m_ -= rhs.m_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
    m_ *= s;
    return *this;
}

OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    require_same(lhs, rhs, "operator*");
    return OperatorMatrix(lhs.truncation(), lhs.dense() * rhs.dense());
}

OperatorMatrix operator*(cplx s, OperatorMatrix op) { return op *= s; }
OperatorMatrix operator*(OperatorMatrix op, cplx s) { return op *= s; }

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) { return a * b - b * a; }
OperatorMatrix anticommutator(const OperatorMatrix& a, const OperatorMatrix& b) { return a * b + b * a; }

OperatorMatrix power(const OperatorMatrix& a, int k) {
    if (k < 0) throw std::invalid_argument("power: exponent must be >= 0");
    OperatorMatrix out = OperatorMatrix::identity(a.truncation());
    for (int i = 0; i < k; ++i) out = out * a;
    return out;
}

OperatorMatrix annihilation(const Truncation& trunc) {
    DenseMatrix m = DenseMatrix::Zero(trunc.dim(), trunc.dim());
    for (int n = 1; n <= trunc.n_max(); ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        for (int s = 0; s < 2; ++s) m(Truncation::index(n - 1, s), Truncation::index(n, s)) = amp;
    }
    return OperatorMatrix(trunc, std::move(m));
}

OperatorMatrix creation(const Truncation& trunc) { return annihilation(trunc).adjoint(); }

OperatorMatrix number(const Truncation& trunc) {
    DenseMatrix m = DenseMatrix::Zero(trunc.dim(), trunc.dim());
    for (int n = 0; n <= trunc.n_max(); ++n) {
        for (int s = 0; s < 2; ++s) m(Truncation::index(n, s), Truncation::index(n, s)) = static_cast<double>(n);
    }
    return OperatorMatrix(trunc, std::move(m));
}

OperatorMatrix pauli(Axis axis, const Truncation& trunc) {
    // spin ordering (g, e); sigma_z = diag(-1, +1)
    const cplx I(0.0, 1.0);
    Eigen::Matrix2cd s;
    switch (axis) {
        case Axis::x: s << 0.0, 1.0, 1.0, 0.0; break;
        case Axis::y: s << 0.0, I, -I, 0.0; break;
        case Axis::z: s << -1.0, 0.0, 0.0, 1.0; break;
    }
    return spin_embed(trunc, s);
}

OperatorMatrix sigma_plus(const Truncation& trunc) {
    Eigen::Matrix2cd s;
    s << 0.0, 0.0, 1.0, 0.0;  // |e><g|
    return spin_embed(trunc, s);
}

OperatorMatrix sigma_minus(const Truncation& trunc) { return sigma_plus(trunc).adjoint(); }

OperatorMatrix fock_projector(int q, const Truncation& trunc) {
    if (q < 0 || q > trunc.n_max()) throw std::out_of_range("fock_projector: q outside [0, n_max]");
    DenseMatrix m = DenseMatrix::Zero(trunc.dim(), trunc.dim());
    m(Truncation::index(q, 0), Truncation::index(q, 0)) = 1.0;
    m(Truncation::index(q, 1), Truncation::index(q, 1)) = 1.0;
    return OperatorMatrix(trunc, std::move(m));
}

OperatorMatrix excitation_number(const Truncation& trunc) {
    DenseMatrix m = DenseMatrix::Zero(trunc.dim(), trunc.dim());
    for (int n = 0; n <= trunc.n_max(); ++n) {
        for (int s = 0; s < 2; ++s) m(Truncation::index(n, s), Truncation::index(n, s)) = static_cast<double>(n + s);
    }
    return OperatorMatrix(trunc, std::move(m));
}

OperatorMatrix parity(const Truncation& trunc) {
    DenseMatrix m = DenseMatrix::Zero(trunc.dim(), trunc.dim());
    for (int n = 0; n <= trunc.n_max(); ++n) {
        for (int s = 0; s < 2; ++s) {
            m(Truncation::index(n, s), Truncation::index(n, s)) = ((n + s) % 2 == 0) ? 1.0 : -1.0;
        }
    }
    return OperatorMatrix(trunc, std::move(m));
}

std::string to_string(Axis axis) {
    switch (axis) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::z: return "z";
    }
    return "?";
}

}  // namespace pbundle
