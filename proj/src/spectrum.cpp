#include "pbundle/spectrum.hpp"

#include "pbundle/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace pbundle {

SpectrumResult diagonalize(const OperatorMatrix& H, const ModelParams& m) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(H.dense());
    if (solver.info() != Eigen::Success) {
        throw SpectrumError("diagonalize: Hermitian eigensolver did not converge (dim " + std::to_string(H.dim()) + ")");
    }
    SpectrumResult r;
    r.params = m;
    r.trunc = H.truncation();
    r.ground_energy = solver.eigenvalues()(0);
    r.energies = solver.eigenvalues().array() - r.ground_energy;
    r.states = solver.eigenvectors();
    return r;
}

SpectrumResult diagonalize(const ModelParams& m, const Truncation& t) { return diagonalize(hamiltonian_rotated(m, t), m); }

BranchMap track_branch(const SpectrumResult& reference, const SpectrumResult& target,
                       const std::vector<Eigen::Index>& subset) {
    if (!(reference.trunc == target.trunc)) throw DimensionMismatch("track_branch: results on different truncations");
    const Eigen::Index dim = reference.size();
    std::vector<Eigen::Index> ids = subset;
    if (ids.empty()) {
        ids.resize(static_cast<std::size_t>(dim));
        std::iota(ids.begin(), ids.end(), Eigen::Index{0});
    }

    std::vector<std::tuple<double, std::size_t, Eigen::Index>> cand;
    cand.reserve(ids.size() * static_cast<std::size_t>(dim));
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const Eigen::Index i = ids[k];
        if (i < 0 || i >= dim) throw std::out_of_range("track_branch: reference index out of range");
        const Eigen::VectorXcd ov = target.states.adjoint() * reference.states.col(i);
        for (Eigen::Index j = 0; j < dim; ++j) cand.emplace_back(std::abs(ov(j)), k, j);
    }
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });

    BranchMap map;
    map.ids = ids;
    map.target_of.assign(ids.size(), -1);
    map.overlap.assign(ids.size(), 0.0);
    std::vector<char> taken(static_cast<std::size_t>(dim), 0);
    std::size_t assigned = 0;
    for (const auto& [ov, k, j] : cand) {
        if (assigned == ids.size()) break;
        if (map.target_of[k] >= 0 || taken[static_cast<std::size_t>(j)]) continue;
        map.target_of[k] = j;
        map.overlap[k] = ov;
        taken[static_cast<std::size_t>(j)] = 1;
        ++assigned;
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (map.overlap[k] < 0.5) {
            throw BranchAmbiguity("track_branch: best overlap " + std::to_string(map.overlap[k]) +
                                  " for reference state " + std::to_string(ids[k]) + " is below 0.5; reduce the step");
        }
    }
    return map;
}

namespace {

ModelParams resonance_point(const ModelParams& tmpl, double omega, double delta) {
    ModelParams m = tmpl;
    m.omega = omega;
    m.Omega = omega;
    m.delta = delta;
    return m;
}

// Indices of the vacuum-like and |n,->-like eigenstates of a delta = 0 spectrum.
std::pair<Eigen::Index, Eigen::Index> label_dressed_pair(const SpectrumResult& s, int n) {
    const Eigen::Index vac_idx = Truncation::index(0, 0);
    const Eigen::Index ng = Truncation::index(n, 0);
    const Eigen::Index ne = Truncation::index(n - 1, 1);

    Eigen::Index vac = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
        const double w = std::norm(s.states(vac_idx, j));
        if (w > best) {
            best = w;
            vac = j;
        }
    }
    // The two states with the largest weight on {|n,g>, |n-1,e>} form the nth
    // dressed pair; the lower of them is |n,->.
    Eigen::Index first = -1, second = -1;
    double w1 = -1.0, w2 = -1.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
        if (j == vac) continue;
        const double w = std::norm(s.states(ng, j)) + std::norm(s.states(ne, j));
        if (w > w1) {
            second = first;
            w2 = w1;
            first = j;
            w1 = w;
        } else if (w > w2) {
            second = j;
            w2 = w;
        }
    }
    const Eigen::Index lower = (s.energies(first) <= s.energies(second)) ? first : second;
    return {vac, lower};
}

}  // namespace

double dressed_splitting(int n, double omega, double delta, const ModelParams& tmpl, const Truncation& t,
                         int continuation_steps) {
    if (n < 1) throw std::invalid_argument("dressed_splitting: n must be >= 1");
    if (n > t.n_max()) throw std::invalid_argument("dressed_splitting: n exceeds n_max");
    if (continuation_steps < 1) continuation_steps = 1;

    SpectrumResult prev = diagonalize(resonance_point(tmpl, omega, 0.0), t);
    auto [vac, lower] = label_dressed_pair(prev, n);
    if (delta == 0.0) return std::abs(prev.energies(vac) - prev.energies(lower));

    for (int k = 1; k <= continuation_steps; ++k) {
        const double d = delta * static_cast<double>(k) / continuation_steps;
        SpectrumResult cur = diagonalize(resonance_point(tmpl, omega, d), t);
        const BranchMap map = track_branch(prev, cur, {vac, lower});
        vac = map.target_of[0];
        lower = map.target_of[1];
        prev = std::move(cur);
    }
    return std::abs(prev.energies(vac) - prev.energies(lower));
}

ResonanceResult find_resonance(int n, double delta, const ModelParams& tmpl, const Truncation& t,
                               const ResonanceOptions& opt) {
    if (n < 1) throw std::invalid_argument("find_resonance: n must be >= 1");
    if (opt.scan_points < 3 || !(opt.scan_max > opt.scan_min) || !(opt.scan_min > 0.0)) {
        throw std::invalid_argument("find_resonance: invalid scan window");
    }
    const int npts = opt.scan_points;
    const double h = (opt.scan_max - opt.scan_min) / (npts - 1);
    std::vector<double> split(static_cast<std::size_t>(npts), std::numeric_limits<double>::quiet_NaN());

    for_each_index(npts, Exec::parallel, [&](std::ptrdiff_t i) {
        try {
            split[static_cast<std::size_t>(i)] =
                dressed_splitting(n, opt.scan_min + static_cast<double>(i) * h, delta, tmpl, t, opt.continuation_steps);
        } catch (const BranchAmbiguity&) {
            // left as NaN; the point is excluded from bracketing
        }
    });

    int best = -1;
    for (int i = 0; i < npts; ++i) {
        const double s = split[static_cast<std::size_t>(i)];
        if (std::isnan(s)) continue;
        if (best < 0 || s < split[static_cast<std::size_t>(best)]) best = i;
    }
    if (best <= 0 || best >= npts - 1) {
        throw SpectrumError("find_resonance: no bracket for n = " + std::to_string(n) + " in omega window [" +
                            std::to_string(opt.scan_min) + ", " + std::to_string(opt.scan_max) + "]");
    }

    auto f = [&](double w) { return dressed_splitting(n, w, delta, tmpl, t, opt.continuation_steps); };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = opt.scan_min + (best - 1) * h;
    double b = opt.scan_min + (best + 1) * h;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > opt.omega_tolerance) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    ResonanceResult r;
    r.n = n;
    r.delta = delta;
    r.omega_n = 0.5 * (a + b);
    r.gap_n = f(r.omega_n);
    r.method = ResonanceMethod::spectral;
    return r;
}

std::vector<SpectrumScanRow> spectrum_scan(ScanAxis axis, double lo, double hi, int count, const ModelParams& tmpl,
                                           const Truncation& t, bool bind_Omega_to_omega, int levels) {
    if (count < 2 || !(hi > lo)) throw std::invalid_argument("spectrum_scan: empty scan range");
    if (axis == ScanAxis::omega && !(lo > 0.0)) throw std::invalid_argument("spectrum_scan: omega must stay > 0");
    if (levels < 1 || levels > t.dim()) levels = static_cast<int>(t.dim());
    std::vector<SpectrumScanRow> rows(static_cast<std::size_t>(count));
    const double h = (hi - lo) / (count - 1);

    for_each_index(count, Exec::parallel, [&](std::ptrdiff_t i) {
        ModelParams m = tmpl;
        const double x = lo + i * h;
        if (axis == ScanAxis::omega) {
            m.omega = x;
            if (bind_Omega_to_omega) m.Omega = x;
        } else {
            m.delta = x;
        }
        const SpectrumResult s = diagonalize(m, t);
        auto& row = rows[static_cast<std::size_t>(i)];
        row.x = x;
        row.energies.assign(s.energies.data(), s.energies.data() + levels);
    });
    return rows;
}

std::string to_string(ResonanceMethod m) {
    return m == ResonanceMethod::spectral ? "spectral" : "steady_state_peak";
}

}  // namespace pbundle
