// observables.hpp: phonon statistics and generalized correlation functions
//
// Equal time:  g_n^(k)(0) = <a^dag^{nk} a^{nk}> / <a^dag^n a^n>^k
// Two time:    g_n^(2)(tau) = tr[a^dag^n a^n e^{L tau}(a^n rho a^dag^n)] / <a^dag^n a^n>^2
//
// Normally ordered moments come from factorial sums over p(q), which is
// exact on the truncated space and never forms a^{nk}.

#pragma once

#include "pbundle/dynamics.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbundle {

struct UndefinedCorrelation : std::domain_error {
    using std::domain_error::domain_error;
};

// Requested correlation order does not fit in the retained Fock levels.
struct TruncationTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kCorrelationFloor = 1e-300;
inline constexpr double kPhononFloor = 1e-12;

struct PhononStatistics {
    double n_s{0.0};
    std::vector<double> p;                       // p(q), q = 0..n_max
    std::optional<std::vector<double>> p_tilde;  // q p(q) / n_s, absent when n_s <= 1e-12
};

std::vector<double> fock_distribution(const DenseMatrix& rho, const Truncation& t);
PhononStatistics phonon_statistics(const DensityMatrix& rho);

// sum_q q!/(q-m)! p(q) = tr(a^dag^m a^m rho)
double factorial_moment(std::span<const double> p, int m);

double equal_time_correlation(const DensityMatrix& rho, int n, int k);

enum class Verdict { bundle, blockade_only, neither };
std::string to_string(Verdict v);

struct CorrelationSeries {
    int n{1};
    int k{2};
    std::vector<double> tau;
    std::vector<double> values;
    double equal_time{0.0};
    Verdict verdict{Verdict::neither};
    KrylovStats stats;
};

// tau = 0, 20 log-spaced points on [1e-3, 1]/kappa_d, then 80 linear points up to 10/kappa_d.
std::vector<double> default_tau_grid(double kappa_d);

CorrelationSeries two_time_correlation(const Liouvillian& L, const DensityMatrix& rho_ss, int n,
                                       std::span<const double> tau_grid, const KrylovOptions& opt = {});

inline double default_bundle_window(double kappa_d) { return 2.0 / kappa_d; }

// Compares every grid point with 0 < tau <= tau_window against tau = 0.
// bundle:        g_1(0) > g_1(tau) and g_n(0) < g_n(tau) throughout
// blockade_only: otherwise, if g_1(0) < g_1(tau) throughout
Verdict bundle_verdict(const CorrelationSeries& series_1, const CorrelationSeries& series_n, double tau_window);

}  // namespace pbundle
