#include <doctest.h>

#include "../oracles/dense_oracles.hpp"
#include "pbundle/dynamics.hpp"
#include "pbundle/reference.hpp"

#include <cmath>
#include <random>

using namespace pbundle;

namespace {

const ModelParams kDriven{0.8, 0.6, 0.05, 1.0, 0.4};
const DissipationParams kLossy{0.02, 0.3, 0.05};

DenseMatrix random_density(Eigen::Index D, std::uint64_t seed) {
    std::srand(static_cast<unsigned>(seed));
    const DenseMatrix A = DenseMatrix::Random(D, D);
    DenseMatrix rho = A * A.adjoint();
    return rho / rho.trace();
}

}  // namespace

TEST_CASE("vectorization is column stacking") {
    DenseMatrix X(2, 2);
    X << 1.0, 2.0, 3.0, 4.0;
    const Eigen::VectorXcd v = vectorize(X);
    CHECK(v(1).real() == 3.0);
    CHECK(v(2).real() == 2.0);
    CHECK((unvectorize(v, 2) - X).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(unvectorize(v, 3), DimensionMismatch);
}

TEST_CASE("generator matches termwise master equation") {
    const int n_max = 4;
    const Truncation t(n_max);
    const OperatorMatrix H = hamiltonian_rotated(kDriven, t);
    const Liouvillian L = build_liouvillian(H, kLossy);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const DenseMatrix rho = random_density(t.dim(), seed);
        const DenseMatrix diff = apply_liouvillian(L, rho) - reference::master_rhs(H.dense(), kLossy, n_max, rho);
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-13);
    }
    CHECK(trace_preservation_residual(L) < 1e-13);
}

TEST_CASE("each dissipator is traceless") {
    const Truncation t(5);
    for (const DissipationParams& d : {DissipationParams{0.4, 0.0, 0.0}, DissipationParams{0.0, 0.4, 0.0},
                                       DissipationParams{0.0, 0.0, 0.4}}) {
        CHECK(trace_preservation_residual(build_liouvillian(kDriven, d, t)) < 1e-13);
    }
}

TEST_CASE("steady state agrees with the dense null vector") {
    const int n_max = 4;
    const Truncation t(n_max);
    const Liouvillian L = build_liouvillian(kDriven, kLossy, t);
    const SteadyState ss = steady_state(L);
    const DenseMatrix Ld = oracle::dense_generator(hamiltonian_rotated(kDriven, t).dense(), kLossy, n_max);
    const DenseMatrix rho_ref = oracle::dense_steady_state(Ld);
    CHECK((ss.rho.matrix() - rho_ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(ss.residual < kSteadyStateResidual);
    CHECK(check_density(ss.rho.matrix()).valid());

    const SteadyState dense = steady_state_dense(L);
    CHECK((dense.rho.matrix() - rho_ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(null_space_dimension(L) == 1);
}

TEST_CASE("undamped generator has a degenerate null space") {
    const Liouvillian L = build_liouvillian(kDriven, DissipationParams{0.0, 0.0, 0.0}, Truncation(3));
    CHECK(null_space_dimension(L) > 1);
    CHECK_THROWS_AS(steady_state(L), SolverError);
}

TEST_CASE("Krylov propagation matches the dense exponential") {
    const int n_max = 3;
    const Truncation t(n_max);
    const Liouvillian L = build_liouvillian(kDriven, kLossy, t);
    const DenseMatrix Ld = oracle::dense_generator(hamiltonian_rotated(kDriven, t).dense(), kLossy, n_max);
    const DenseMatrix rho0 = reference::fock_state(2, n_max);
    const std::vector<double> taus{0.0, 0.3, 2.0, 11.0, 40.0};
    const auto out = propagate(L, rho0, taus);
    REQUIRE(out.size() == taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) CHECK((out[i] - oracle::evolve(Ld, rho0, taus[i])).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("phonon number decays at kappa_d and coherence at kappa_d/2 + gamma_d") {
    const int n_max = 16;
    const Truncation t(n_max);
    const double omega = 0.7;
    const DissipationParams d{0.0, 0.2, 0.03};
    const Liouvillian L = build_liouvillian(omega * number(t), d);
    const DenseMatrix rho0 = reference::coherent_state(cplx(1.0, 0.0), n_max);
    const DenseMatrix a = annihilation(t).dense();
    const double n0 = (number(t).dense() * rho0).trace().real();
    const double a0 = std::abs((a * rho0).trace());
    const std::vector<double> taus{0.5, 3.0, 10.0};
    const auto out = propagate(L, rho0, taus);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double n = (number(t).dense() * out[i]).trace().real();
        const double coh = std::abs((a * out[i]).trace());
        CHECK(n == doctest::Approx(n0 * std::exp(-d.kappa_d * taus[i])).epsilon(1e-7));
        CHECK(coh == doctest::Approx(a0 * std::exp(-(0.5 * d.kappa_d + d.gamma_d) * taus[i])).epsilon(1e-7));
    }
}

TEST_CASE("excited clock state decays at kappa_e") {
    const int n_max = 2;
    const Truncation t(n_max);
    const DissipationParams d{0.15, 0.0, 0.0};
    const Liouvillian L = build_liouvillian(OperatorMatrix::zero(t), d);
    DenseMatrix rho0 = DenseMatrix::Zero(t.dim(), t.dim());
    rho0(Truncation::index(0, 1), Truncation::index(0, 1)) = 1.0;
    const auto out = propagate(L, rho0, std::vector<double>{4.0});
    CHECK(out[0](Truncation::index(0, 1), Truncation::index(0, 1)).real() == doctest::Approx(std::exp(-0.6)).epsilon(1e-9));
}

TEST_CASE("adaptive truncation grows n_max while the tail is heavy") {
    const ModelParams m{1.0, 1.0, 0.005, 1.0, 1.0};
    const DissipationParams d{};
    SteadyStateOptions fixed;
    fixed.adaptive = false;
    const SteadyState a = solve_steady_state(m, d, 3, fixed);
    CHECK(a.n_max_used == 3);
    CHECK(a.truncation_retries == 0);
    CHECK(a.tail_mass > kTailThreshold);

    const SteadyState b = solve_steady_state(m, d, 3);
    CHECK(b.n_max_used > 3);
    CHECK(b.truncation_retries >= 1);
    CHECK(b.residual < kSteadyStateResidual);
}

TEST_CASE("density diagnostics flag invalid matrices") {
    DenseMatrix rho = DenseMatrix::Zero(2, 2);
    rho(0, 0) = 1.2;
    rho(1, 1) = -0.2;
    const DensityDiagnostics diag = check_density(rho);
    CHECK(diag.min_eigenvalue == doctest::Approx(-0.2));
    CHECK_FALSE(diag.valid());
    CHECK_THROWS_AS(DensityMatrix(Truncation(2), rho), DimensionMismatch);
}

TEST_CASE("dissipation rates must be nonnegative") {
    CHECK_THROWS_AS((DissipationParams{-1.0, 0.1, 0.1}.validate()), std::invalid_argument);
}
