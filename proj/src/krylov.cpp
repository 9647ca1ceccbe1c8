#include "pbundle/krylov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pbundle {

namespace {

// Round up to two significant digits, as Expokit does for step sizes.
double round_step(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) return t;
    const double s = std::pow(10.0, std::floor(std::log10(t)) - 1.0);
    return std::ceil(t / s) * s;
}

double inf_norm(const SparseMatrix& A) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < A.outerSize(); ++r) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(A, r); it; ++it) row += std::abs(it.value());
        best = std::max(best, row);
    }
    return best;
}

}  // namespace

std::vector<Eigen::VectorXcd> expv_series(const SparseMatrix& A, const Eigen::VectorXcd& v,
                                          std::span<const double> times, const KrylovOptions& opt,
                                          KrylovStats* stats) {
    if (A.rows() != A.cols() || A.rows() != v.size()) throw DimensionMismatch("expv_series: shape mismatch");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || times[k] < 0.0 || (k > 0 && times[k] < times[k - 1])) {
            throw std::invalid_argument("expv_series: times must be finite, >= 0 and ascending");
        }
    }
    std::vector<Eigen::VectorXcd> out;
    out.reserve(times.size());
    if (times.empty()) return out;

    const Eigen::Index n = A.rows();
    const double anorm = inf_norm(A);
    const double beta0 = v.norm();
    KrylovStats local;
    if (anorm == 0.0 || beta0 == 0.0 || n < 2) {
        for (std::size_t k = 0; k < times.size(); ++k) out.push_back(v);
        if (stats) *stats = local;
        return out;
    }

    const int m = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, n - 1));
    // Error per unit time, relative to ||v||. Normalizing by the horizon instead
    // drives long runs into the roundoff floor.
    const double tol = opt.rel_tol * beta0;
    const double btol = 1e-12 * anorm;                  // happy-breakdown threshold
    const double gamma = 0.9, delta = 1.2;
    const double eps = std::numeric_limits<double>::epsilon();

    const double fact = std::pow((m + 1) / std::exp(1.0), m + 1) * std::sqrt(2.0 * std::numbers::pi * (m + 1));
    double t_new = (1.0 / anorm) * std::pow((fact * tol) / (4.0 * beta0 * anorm), 1.0 / m);
    t_new = round_step(t_new);

    Eigen::VectorXcd w = v;
    Eigen::MatrixXcd V(n, m + 1);
    Eigen::MatrixXcd H(m + 2, m + 2);
    Eigen::VectorXcd p(n);
    double t_now = 0.0;

    for (double t_out : times) {
        while (t_out - t_now > 1e-14 * std::max(1.0, t_out)) {
            if (++local.steps > opt.max_steps) throw IntegratorFailure("expv_series: step budget exhausted");
            double t_step = std::min(t_out - t_now, t_new);
            const bool clipped = t_step < t_new;
            const double beta = w.norm();
            if (beta == 0.0) {
                t_now = t_out;
                break;
            }
            const double rndoff = anorm * eps * beta;

            V.col(0) = w / beta;
            H.setZero();
            int k1 = 2, mb = m;
            double avnorm = 0.0;
            for (int j = 0; j < m; ++j) {
                spmv(A, {V.col(j).data(), static_cast<std::size_t>(n)}, {p.data(), static_cast<std::size_t>(n)}, opt.exec);
                ++local.matvecs;
                // Classical Gram-Schmidt as two matrix-vector products, repeated
                // once when the pass cancels most of p (DGKS criterion).
                auto Vj = V.leftCols(j + 1);
                double before = p.norm(), s = 0.0;
                for (int pass = 0; pass < 2; ++pass) {
                    const Eigen::VectorXcd h = Vj.adjoint() * p;
                    p.noalias() -= Vj * h;
                    H.col(j).head(j + 1) += h;
                    s = p.norm();
                    if (s > 0.7071 * before) break;
                    before = s;
                }
                if (s < btol) {
                    k1 = 0;
                    mb = j + 1;
                    t_step = t_out - t_now;
                    break;
                }
                H(j + 1, j) = s;
                V.col(j + 1) = p / s;
            }
            if (k1 != 0) {
                H(m + 1, m) = 1.0;
                spmv(A, {V.col(m).data(), static_cast<std::size_t>(n)}, {p.data(), static_cast<std::size_t>(n)}, opt.exec);
                ++local.matvecs;
                avnorm = p.norm();
            }

            Eigen::MatrixXcd F;
            double err_loc = 0.0, xm = 1.0 / m;
            int rejections = 0;
            for (;;) {
                const int mx = mb + k1;
                F = (t_step * H.topLeftCorner(mx, mx)).exp();
                if (k1 == 0) {
                    err_loc = btol;
                    break;
                }
                const double phi1 = std::abs(beta * F(m, 0));
                const double phi2 = std::abs(beta * F(m + 1, 0) * avnorm);
                if (phi1 > 10.0 * phi2) {
                    err_loc = phi2;
                    xm = 1.0 / m;
                } else if (phi1 > phi2) {
                    err_loc = (phi1 * phi2) / (phi1 - phi2);
                    xm = 1.0 / m;
                } else {
                    err_loc = phi1;
                    xm = 1.0 / (m - 1);
                }
                if (err_loc <= delta * t_step * tol) break;
                t_step = round_step(gamma * t_step * std::pow(t_step * tol / err_loc, xm));
                ++local.rejections;
                if (++rejections > opt.max_rejections) {
                    throw IntegratorFailure("expv_series: tolerance " + std::to_string(opt.rel_tol) +
                                            " not reachable (local error " + std::to_string(err_loc) + ")");
                }
            }

            const int mx = mb + std::max(0, k1 - 1);
            w = V.leftCols(mx) * (beta * F.col(0).head(mx));
            t_now += t_step;
            local.error_estimate += std::max(err_loc, rndoff);

            const double proposal = round_step(gamma * t_step * std::pow(t_step * tol / std::max(err_loc, rndoff), xm));
            t_new = (clipped && rejections == 0) ? std::max(t_new, proposal) : proposal;
        }
        t_now = t_out;
        out.push_back(w);
    }
    if (stats) *stats = local;
    return out;
}

}  // namespace pbundle
