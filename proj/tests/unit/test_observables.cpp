#include <doctest.h>

#include "../oracles/dense_oracles.hpp"
#include "pbundle/observables.hpp"
#include "pbundle/reference.hpp"

#include <algorithm>
#include <cmath>

using namespace pbundle;

namespace {

DensityMatrix wrap(const DenseMatrix& rho, int n_max) { return DensityMatrix(Truncation(n_max), rho); }

CorrelationSeries series(std::vector<double> tau, std::vector<double> values) {
    CorrelationSeries s;
    s.tau = std::move(tau);
    s.values = std::move(values);
    s.equal_time = s.values.front();
    return s;
}

}  // namespace

TEST_CASE("coherent state is second- and third-order coherent") {
    const int n_max = 40;
    const DensityMatrix rho = wrap(reference::coherent_state(cplx(1.2, 0.4), n_max), n_max);
    CHECK(equal_time_correlation(rho, 1, 2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(equal_time_correlation(rho, 1, 3) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(equal_time_correlation(rho, 2, 2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(phonon_statistics(rho).n_s == doctest::Approx(1.6).epsilon(1e-9));
}

TEST_CASE("Fock states have sub-Poissonian correlations") {
    const int n_max = 8;
    CHECK(equal_time_correlation(wrap(reference::fock_state(1, n_max), n_max), 1, 2) == 0.0);
    CHECK(equal_time_correlation(wrap(reference::fock_state(2, n_max), n_max), 1, 2) == doctest::Approx(0.5));
    CHECK(equal_time_correlation(wrap(reference::fock_state(3, n_max), n_max), 1, 3) == doctest::Approx(6.0 / 27.0));
    // bundle operator a^2 on |4>: <a^dag^4 a^4> / <a^dag^2 a^2>^2 = 24 / 144
    CHECK(equal_time_correlation(wrap(reference::fock_state(4, n_max), n_max), 2, 2) == doctest::Approx(24.0 / 144.0));
}

TEST_CASE("factorial moments match operator expectations") {
    const int n_max = 12;
    const DenseMatrix rho = reference::coherent_state(cplx(0.8, -0.3), n_max);
    const auto p = fock_distribution(rho, Truncation(n_max));
    for (int m = 0; m <= 4; ++m) CHECK(factorial_moment(p, m) == doctest::Approx(oracle::n_photon_moment(rho, n_max, m)).epsilon(1e-12));
    CHECK_THROWS_AS(factorial_moment(p, -1), std::invalid_argument);
}

TEST_CASE("conditional distribution sums to one") {
    const int n_max = 20;
    const PhononStatistics s = phonon_statistics(wrap(reference::coherent_state(cplx(1.5, 0.0), n_max), n_max));
    REQUIRE(s.p_tilde.has_value());
    double sum = 0.0;
    for (double v : *s.p_tilde) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((*s.p_tilde)[0] == 0.0);
    CHECK_FALSE(phonon_statistics(wrap(reference::fock_state(0, n_max), n_max)).p_tilde.has_value());
}

TEST_CASE("undefined and oversized correlations are rejected") {
    const int n_max = 5;
    CHECK_THROWS_AS(equal_time_correlation(wrap(reference::fock_state(0, n_max), n_max), 1, 2), UndefinedCorrelation);
    CHECK_THROWS_AS(equal_time_correlation(wrap(reference::fock_state(1, n_max), n_max), 2, 3), TruncationTooSmall);
    CHECK_THROWS_AS(equal_time_correlation(wrap(reference::fock_state(1, n_max), n_max), 1, 1), std::invalid_argument);
}

TEST_CASE("default tau grid layout") {
    const double kd = 0.005;
    const auto tau = default_tau_grid(kd);
    REQUIRE(tau.size() == 101);
    CHECK(tau.front() == 0.0);
    CHECK(tau[1] == doctest::Approx(1e-3 / kd));
    CHECK(tau.back() == doctest::Approx(10.0 / kd));
    CHECK(std::is_sorted(tau.begin(), tau.end()));
    CHECK(std::adjacent_find(tau.begin(), tau.end()) == tau.end());
    CHECK_THROWS_AS(default_tau_grid(0.0), std::invalid_argument);
}

TEST_CASE("two-time correlation agrees with dense regression") {
    const int n_max = 4;
    const Truncation t(n_max);
    const ModelParams m{0.8, 0.6, 0.05, 1.0, 0.4};
    const DissipationParams d{0.02, 0.3, 0.05};
    const Liouvillian L = build_liouvillian(m, d, t);
    const SteadyState ss = steady_state(L);
    const DenseMatrix Ld = oracle::dense_generator(hamiltonian_rotated(m, t).dense(), d, n_max);
    const DenseMatrix a = reference::lowering(n_max);
    const std::vector<double> tau{0.0, 0.2, 1.5, 6.0, 25.0};
    for (int n : {1, 2}) {
        DenseMatrix an = DenseMatrix::Identity(t.dim(), t.dim());
        for (int i = 0; i < n; ++i) an = an * a;
        const DenseMatrix X0 = an * ss.rho.matrix() * an.adjoint();
        const double norm = oracle::n_photon_moment(ss.rho.matrix(), n_max, n);
        const CorrelationSeries s = two_time_correlation(L, ss.rho, n, tau);
        REQUIRE(s.values.size() == tau.size());
        CHECK(s.values[0] == doctest::Approx(equal_time_correlation(ss.rho, n, 2)).epsilon(1e-10));
        for (std::size_t i = 0; i < tau.size(); ++i) {
            const double expect = oracle::n_photon_moment(oracle::evolve(Ld, X0, tau[i]), n_max, n) / (norm * norm);
            CHECK(s.values[i] == doctest::Approx(expect).epsilon(1e-7));
        }
        CHECK(s.values.back() == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("two-time correlation requires a steady state and room for a^n") {
    const int n_max = 3;
    const Truncation t(n_max);
    const Liouvillian L = build_liouvillian(ModelParams{}, DissipationParams{0.1, 0.3, 0.0}, t);
    const DensityMatrix not_ss(t, reference::fock_state(1, n_max));
    const std::vector<double> tau{0.0, 1.0};
    CHECK_THROWS_AS(two_time_correlation(L, not_ss, 1, tau), std::invalid_argument);
    const SteadyState ss = steady_state(L);
    CHECK_THROWS_AS(two_time_correlation(L, ss.rho, 2, tau), TruncationTooSmall);
}

TEST_CASE("bundle verdict classification") {
    const std::vector<double> tau{0.0, 1.0, 2.0, 3.0};
    const double window = 2.0;
    const CorrelationSeries bunched = series(tau, {3.0, 2.0, 1.5, 0.1});
    const CorrelationSeries antibunched = series(tau, {0.1, 0.5, 0.9, 0.0});
    CHECK(bundle_verdict(bunched, antibunched, window) == Verdict::bundle);
    CHECK(bundle_verdict(antibunched, antibunched, window) == Verdict::blockade_only);
    CHECK(bundle_verdict(bunched, bunched, window) == Verdict::neither);
    // equality inside the window is not strict ordering
    CHECK(bundle_verdict(series(tau, {0.5, 0.5, 0.9, 1.0}), antibunched, window) == Verdict::neither);
    // points beyond the window are ignored
    CHECK(bundle_verdict(series(tau, {0.5, 0.6, 0.9, 0.0}), antibunched, window) == Verdict::blockade_only);
    CHECK(to_string(Verdict::blockade_only) == "blockade_only");
    CHECK_THROWS_AS(bundle_verdict(bunched, series({0.0, 1.0}, {1.0, 1.0}), window), std::invalid_argument);
}
