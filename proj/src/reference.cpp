#include "pbundle/reference.hpp"

#include <algorithm>
#include <cmath>

namespace pbundle::reference {

namespace {
int dim_of(int n_max) { return 2 * (n_max + 1); }
}  // namespace

DenseMatrix lowering(int n_max) {
    const int D = dim_of(n_max);
    DenseMatrix a = DenseMatrix::Zero(D, D);
    for (int n = 1; n <= n_max; ++n) {
        for (int s = 0; s < 2; ++s) a(2 * (n - 1) + s, 2 * n + s) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

DenseMatrix spin_lowering(int n_max) {
    const int D = dim_of(n_max);
    DenseMatrix sm = DenseMatrix::Zero(D, D);
    for (int n = 0; n <= n_max; ++n) sm(2 * n, 2 * n + 1) = 1.0;  // |n,g><n,e|
    return sm;
}

DenseMatrix block_matrix(const ModelParams& m, int n_max, cplx delta_entry) {
    const int D = dim_of(n_max);
    const double lp = 0.5 * (m.g_x + m.g_k), lm = 0.5 * (m.g_x - m.g_k);
    DenseMatrix H = DenseMatrix::Zero(D, D);
    for (int n = 0; n <= n_max; ++n) {
        const int g = 2 * n, e = 2 * n + 1;
        H(g, g) = n * m.omega;
        H(e, e) = n * m.omega + m.Omega;
        H(g, e) = delta_entry;
        H(e, g) = std::conj(delta_entry);
        if (n < n_max) {
            const double r = std::sqrt(n + 1.0);
            H(e, 2 * (n + 1)) = r * lp;
            H(2 * (n + 1), e) = r * lp;
            H(g, 2 * (n + 1) + 1) = r * lm;
            H(2 * (n + 1) + 1, g) = r * lm;
        }
    }
    return H;
}

DenseMatrix master_rhs(const DenseMatrix& H, const DissipationParams& d, int n_max, const DenseMatrix& rho) {
    const cplx I(0.0, 1.0);
    DenseMatrix out = -I * (H * rho - rho * H);
    auto add = [&](const DenseMatrix& o, double c) {
        const DenseMatrix od = o.adjoint();
        out += c * (2.0 * o * rho * od - od * o * rho - rho * od * o);
    };
    const DenseMatrix a = lowering(n_max);
    add(spin_lowering(n_max), 0.5 * d.kappa_e);
    add(a, 0.5 * d.kappa_d);
    add(a.adjoint() * a, d.gamma_d);
    return out;
}

std::vector<double> jcm_levels(double omega, double g_x, int n_levels) {
    std::vector<double> e{0.0};
    for (int n = 1; n <= n_levels; ++n) {
        e.push_back(n * omega - g_x * std::sqrt(static_cast<double>(n)));
        e.push_back(n * omega + g_x * std::sqrt(static_cast<double>(n)));
    }
    const double ground = *std::min_element(e.begin(), e.end());
    for (double& x : e) x -= ground;
    std::sort(e.begin(), e.end());
    return e;
}

DenseMatrix coherent_state(cplx alpha, int n_max) {
    const int D = dim_of(n_max);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(D);
    cplx amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) amp *= alpha / std::sqrt(static_cast<double>(n));
        psi(2 * n) = amp;
    }
    psi.normalize();
    return psi * psi.adjoint();
}

DenseMatrix fock_state(int q, int n_max) {
    const int D = dim_of(n_max);
    DenseMatrix rho = DenseMatrix::Zero(D, D);
    rho(2 * q, 2 * q) = 1.0;
    return rho;
}

}  // namespace pbundle::reference
