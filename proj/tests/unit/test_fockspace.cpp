#include <doctest.h>

#include "pbundle/fockspace.hpp"
#include "pbundle/reference.hpp"

#include <cmath>

using namespace pbundle;

TEST_CASE("truncation rejects n_max below one") {
    CHECK_THROWS_AS(Truncation(0), std::invalid_argument);
    CHECK(Truncation(3).dim() == 8);
    CHECK(Truncation::index(2, 1) == 5);
}

TEST_CASE("ladder operators match elementwise construction") {
    const Truncation t(7);
    CHECK((annihilation(t).dense() - reference::lowering(7)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sigma_minus(t).dense() - reference::spin_lowering(7)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((creation(t).dense() - annihilation(t).adjoint().dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("[a, a^dag] is identity except on the top Fock level") {
    const Truncation t(10);
    const OperatorMatrix c = commutator(annihilation(t), creation(t));
    for (int n = 0; n <= t.n_max(); ++n) {
        for (int s = 0; s < 2; ++s) {
            const auto i = Truncation::index(n, s);
            const double expect = n < t.n_max() ? 1.0 : -static_cast<double>(t.n_max());
            CHECK(c(i, i).real() == doctest::Approx(expect).epsilon(1e-14));
        }
    }
}

TEST_CASE("Pauli algebra") {
    const Truncation t(3);
    const OperatorMatrix x = pauli(Axis::x, t), y = pauli(Axis::y, t), z = pauli(Axis::z, t);
    const OperatorMatrix lhs = commutator(x, y);
    const OperatorMatrix rhs = cplx(0, 2) * z;
    CHECK((lhs - rhs).max_abs() < 1e-14);
    CHECK((x * x - OperatorMatrix::identity(t)).max_abs() < 1e-14);
    CHECK(z(Truncation::index(0, 0), Truncation::index(0, 0)).real() == -1.0);
    CHECK(z(Truncation::index(0, 1), Truncation::index(0, 1)).real() == 1.0);
    CHECK(sigma_plus(t)(Truncation::index(2, 1), Truncation::index(2, 0)).real() == 1.0);
}

TEST_CASE("number, excitation number and parity are consistent") {
    const Truncation t(5);
    CHECK((number(t) - creation(t) * annihilation(t)).max_abs() < 1e-14);
    const OperatorMatrix P = parity(t);
    CHECK((P * P - OperatorMatrix::identity(t)).max_abs() < 1e-14);
    for (int n = 0; n <= t.n_max(); ++n) {
        CHECK(P(Truncation::index(n, 0), Truncation::index(n, 0)).real() == (n % 2 ? -1.0 : 1.0));
        CHECK(P(Truncation::index(n, 1), Truncation::index(n, 1)).real() == (n % 2 ? 1.0 : -1.0));
    }
}

TEST_CASE("mixed truncations are rejected") {
    CHECK_THROWS_AS(annihilation(Truncation(2)) + annihilation(Truncation(3)), DimensionMismatch);
    CHECK_THROWS_AS(fock_projector(4, Truncation(3)), std::out_of_range);
    CHECK_THROWS_AS(power(annihilation(Truncation(2)), -1), std::invalid_argument);
}

TEST_CASE("sparse copy preserves entries") {
    const Truncation t(6);
    const OperatorMatrix a = annihilation(t) + creation(t) * cplx(0, 0.5);
    const DenseMatrix back(a.sparse());
    CHECK((back - a.dense()).cwiseAbs().maxCoeff() == 0.0);
}
