#include "pbundle/observables.hpp"

#include <cmath>

namespace pbundle {

namespace {

// q (q-1) ... (q-m+1)
double falling_factorial(int q, int m) {
    double f = 1.0;
    for (int j = 0; j < m; ++j) f *= static_cast<double>(q - j);
    return f;
}

double normally_ordered(const DenseMatrix& X, const Truncation& t, int m) {
    double acc = 0.0;
    for (int q = m; q <= t.n_max(); ++q) {
        const cplx diag = X(Truncation::index(q, 0), Truncation::index(q, 0)) + X(Truncation::index(q, 1), Truncation::index(q, 1));
        acc += falling_factorial(q, m) * diag.real();
    }
    return acc;
}

void require_fits(int order, const Truncation& t, const char* who) {
    if (order > t.n_max()) {
        throw TruncationTooSmall(std::string(who) + ": moment order " + std::to_string(order) + " exceeds n_max = " +
                                 std::to_string(t.n_max()) + "; raise n_max");
    }
}

}  // namespace

std::vector<double> fock_distribution(const DenseMatrix& rho, const Truncation& t) {
    std::vector<double> p(static_cast<std::size_t>(t.n_max() + 1));
    for (int q = 0; q <= t.n_max(); ++q) {
        p[static_cast<std::size_t>(q)] =
            (rho(Truncation::index(q, 0), Truncation::index(q, 0)) + rho(Truncation::index(q, 1), Truncation::index(q, 1))).real();
    }
    return p;
}

PhononStatistics phonon_statistics(const DensityMatrix& rho) {
    PhononStatistics s;
    s.p = fock_distribution(rho.matrix(), rho.truncation());
    s.n_s = factorial_moment(s.p, 1);
    if (s.n_s > kPhononFloor) {
        std::vector<double> pt(s.p.size());
        for (std::size_t q = 0; q < s.p.size(); ++q) pt[q] = static_cast<double>(q) * s.p[q] / s.n_s;
        s.p_tilde = std::move(pt);
    }
    return s;
}

double factorial_moment(std::span<const double> p, int m) {
    if (m < 0) throw std::invalid_argument("factorial_moment: m must be >= 0");
    double acc = 0.0;
    for (std::size_t q = static_cast<std::size_t>(m); q < p.size(); ++q) acc += falling_factorial(static_cast<int>(q), m) * p[q];
    return acc;
}

double equal_time_correlation(const DensityMatrix& rho, int n, int k) {
    if (n < 1 || k < 2) throw std::invalid_argument("equal_time_correlation: need n >= 1 and k >= 2");
    require_fits(n * k, rho.truncation(), "equal_time_correlation");
    const std::vector<double> p = fock_distribution(rho.matrix(), rho.truncation());
    const double den = factorial_moment(p, n);
    if (!(den > kCorrelationFloor)) {
        throw UndefinedCorrelation("equal_time_correlation: <a^dag^n a^n> vanishes for n = " + std::to_string(n));
    }
    return factorial_moment(p, n * k) / std::pow(den, k);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::bundle: return "bundle";
        case Verdict::blockade_only: return "blockade_only";
        case Verdict::neither: break;
    }
    return "neither";
}

std::vector<double> default_tau_grid(double kappa_d) {
    if (!(kappa_d > 0.0)) throw std::invalid_argument("default_tau_grid: kappa_d must be > 0");
    std::vector<double> tau{0.0};
    constexpr int n_log = 20, n_lin = 80;
    for (int i = 0; i < n_log; ++i) {
        const double e = -3.0 + 3.0 * static_cast<double>(i) / (n_log - 1);
        tau.push_back(std::pow(10.0, e) / kappa_d);
    }
    // Linear part starts one spacing above 1/kappa_d and ends exactly at 10/kappa_d.
    const double step = 9.0 / n_lin;
    for (int i = 1; i <= n_lin; ++i) tau.push_back((1.0 + step * static_cast<double>(i)) / kappa_d);
    return tau;
}

CorrelationSeries two_time_correlation(const Liouvillian& L, const DensityMatrix& rho_ss, int n,
                                       std::span<const double> tau_grid, const KrylovOptions& opt) {
    if (n < 1) throw std::invalid_argument("two_time_correlation: n must be >= 1");
    if (rho_ss.truncation() != L.trunc) throw DimensionMismatch("two_time_correlation: state and generator differ");
    const Truncation& t = L.trunc;
    require_fits(2 * n, t, "two_time_correlation");

    const double residual = apply_liouvillian(L, rho_ss.matrix(), opt.exec).cwiseAbs().maxCoeff();
    if (residual > 1e-9) {
        throw std::invalid_argument("two_time_correlation: input is not a steady state (residual " +
                                    std::to_string(residual) + ")");
    }

    const std::vector<double> p = fock_distribution(rho_ss.matrix(), t);
    const double den = factorial_moment(p, n);
    if (!(den > kCorrelationFloor)) {
        throw UndefinedCorrelation("two_time_correlation: <a^dag^n a^n> vanishes for n = " + std::to_string(n));
    }

    const DenseMatrix A = power(annihilation(t), n).dense();
    const DenseMatrix X0 = A * rho_ss.matrix() * A.adjoint();

    CorrelationSeries s;
    s.n = n;
    s.k = 2;
    s.tau.assign(tau_grid.begin(), tau_grid.end());
    s.equal_time = factorial_moment(p, 2 * n) / (den * den);
    const std::vector<DenseMatrix> X = propagate(L, X0, tau_grid, opt, &s.stats);
    s.values.reserve(X.size());
    for (const auto& x : X) s.values.push_back(normally_ordered(x, t, n) / (den * den));
    return s;
}

Verdict bundle_verdict(const CorrelationSeries& s1, const CorrelationSeries& sn, double tau_window) {
    if (s1.tau != sn.tau || s1.values.size() != s1.tau.size() || sn.values.size() != sn.tau.size()) {
        throw std::invalid_argument("bundle_verdict: series must share one tau grid");
    }
    if (s1.tau.empty() || s1.tau.front() != 0.0) throw std::invalid_argument("bundle_verdict: grid must start at tau = 0");

    bool single_bunched = true, bundle_antibunched = true, single_antibunched = true;
    bool any = false;
    for (std::size_t i = 1; i < s1.tau.size(); ++i) {
        if (!(s1.tau[i] > 0.0) || s1.tau[i] > tau_window) continue;
        any = true;
        single_bunched = single_bunched && s1.values[0] > s1.values[i];
        bundle_antibunched = bundle_antibunched && sn.values[0] < sn.values[i];
        single_antibunched = single_antibunched && s1.values[0] < s1.values[i];
    }
    if (!any) return Verdict::neither;
    if (single_bunched && bundle_antibunched) return Verdict::bundle;
    if (single_antibunched) return Verdict::blockade_only;
    return Verdict::neither;
}

}  // namespace pbundle
