#include "pbundle/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

namespace pbundle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kParamNames{"omega", "Omega", "delta", "g_x", "g_k", "kappa_e", "kappa_d", "gamma_d"};

bool is_param(const std::string& s) { return std::find(kParamNames.begin(), kParamNames.end(), s) != kParamNames.end(); }

std::pair<std::string, std::string> split_binding(const std::string& b) {
    const auto eq = b.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("binding '" + b + "' is not of the form target=source");
    return {b.substr(0, eq), b.substr(eq + 1)};
}

// Equal-time correlation, NaN when undefined or beyond the truncation.
double safe_g(const DensityMatrix& rho, int n, int k) {
    try {
        return equal_time_correlation(rho, n, k);
    } catch (const TruncationTooSmall&) {
    } catch (const UndefinedCorrelation&) {
    }
    return kNaN;
}

std::string clean_cell(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

std::vector<double> axis_values(const AxisSpec& a) {
    if (a.count < 2) throw std::invalid_argument("axis " + a.name + ": count must be >= 2");
    std::vector<double> v(static_cast<std::size_t>(a.count));
    if (a.log_scale) {
        if (!(a.min > 0.0) || !(a.max > 0.0)) throw std::invalid_argument("axis " + a.name + ": log scale needs positive bounds");
        const double l0 = std::log10(a.min), l1 = std::log10(a.max);
        for (int i = 0; i < a.count; ++i) v[static_cast<std::size_t>(i)] = std::pow(10.0, l0 + (l1 - l0) * i / (a.count - 1));
    } else {
        for (int i = 0; i < a.count; ++i) v[static_cast<std::size_t>(i)] = a.min + (a.max - a.min) * i / (a.count - 1);
    }
    v.front() = a.min;
    v.back() = a.max;
    return v;
}

double get_param(const ModelParams& m, const DissipationParams& d, const std::string& name) {
    if (name == "omega") return m.omega;
    if (name == "Omega") return m.Omega;
    if (name == "delta") return m.delta;
    if (name == "g_x") return m.g_x;
    if (name == "g_k") return m.g_k;
    if (name == "kappa_e") return d.kappa_e;
    if (name == "kappa_d") return d.kappa_d;
    if (name == "gamma_d") return d.gamma_d;
    throw std::invalid_argument("unknown parameter '" + name + "'");
}

void set_param(ModelParams& m, DissipationParams& d, const std::string& name, double value) {
    if (name == "omega") m.omega = value;
    else if (name == "Omega") m.Omega = value;
    else if (name == "delta") m.delta = value;
    else if (name == "g_x") m.g_x = value;
    else if (name == "g_k") m.g_k = value;
    else if (name == "kappa_e") d.kappa_e = value;
    else if (name == "kappa_d") d.kappa_d = value;
    else if (name == "gamma_d") d.gamma_d = value;
    else throw std::invalid_argument("unknown parameter '" + name + "'");
}

void SweepSpec::validate() const {
    if (axes.empty() || axes.size() > 2) throw std::invalid_argument("sweep: need one or two axes");
    std::set<std::string> swept;
    for (const auto& a : axes) {
        if (!is_param(a.name)) throw std::invalid_argument("sweep: unknown axis '" + a.name + "'");
        if (!swept.insert(a.name).second) throw std::invalid_argument("sweep: axis '" + a.name + "' repeated");
        axis_values(a);
    }
    for (const auto& b : bindings) {
        const auto [target, source] = split_binding(b);
        if (!is_param(target) || !is_param(source)) throw std::invalid_argument("sweep: binding '" + b + "' names an unknown parameter");
        if (target == source) throw std::invalid_argument("sweep: binding '" + b + "' is circular");
        if (swept.count(target)) throw std::invalid_argument("sweep: '" + target + "' is both swept and bound");
    }
    if (point.n_max < 1) throw std::invalid_argument("sweep: n_max must be >= 1");
}

std::size_t SweepSpec::point_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
    return n;
}

SweepSpec sweep_spec_from_config(const RunConfig& c) {
    SweepSpec s;
    s.axes = c.axes;
    s.model = c.model;
    s.dissipation = c.dissipation;
    s.bindings = c.bindings;
    s.point.n_max = c.n_max;
    s.point.adaptive = c.adaptive;
    s.point.bundle_n = c.bundle_n;
    return s;
}

SweepPoint evaluate_point(const ModelParams& m, const DissipationParams& d, const PointOptions& opt) {
    SweepPoint p;
    p.model = m;
    p.dissipation = d;
    p.p_tilde.assign(kPtildeColumns, kNaN);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        SteadyStateOptions so;
        so.adaptive = opt.adaptive;
        so.exec = opt.exec;
        const SteadyState ss = solve_steady_state(m, d, opt.n_max, so);
        p.n_max_used = ss.n_max_used;
        p.truncation_retries = ss.truncation_retries;
        p.residual = ss.residual;
        const PhononStatistics st = phonon_statistics(ss.rho);
        p.n_s = st.n_s;
        p.distribution = st.p;
        if (st.p_tilde) {
            for (int q = 1; q <= kPtildeColumns && q < static_cast<int>(st.p_tilde->size()); ++q) {
                p.p_tilde[static_cast<std::size_t>(q - 1)] = (*st.p_tilde)[static_cast<std::size_t>(q)];
            }
        }
        p.g1_2 = safe_g(ss.rho, 1, 2);
        p.g1_3 = safe_g(ss.rho, 1, 3);
        p.g1_4 = safe_g(ss.rho, 1, 4);
        if (opt.bundle_n > 0) {
            const Liouvillian L = build_liouvillian(m, d, ss.rho.truncation(), opt.exec);
            const auto tau = default_tau_grid(d.kappa_d);
            KrylovOptions ko;
            ko.exec = opt.exec;
            const CorrelationSeries s1 = two_time_correlation(L, ss.rho, 1, tau, ko);
            const CorrelationSeries sn = opt.bundle_n == 1 ? s1 : two_time_correlation(L, ss.rho, opt.bundle_n, tau, ko);
            p.verdict = bundle_verdict(s1, sn, default_bundle_window(d.kappa_d));
        }
        p.ok = p.residual <= kSteadyStateResidual;
        if (!p.ok) p.error = "steady-state residual " + format_double(p.residual) + " above tolerance";
    } catch (const std::exception& e) {
        p.ok = false;
        p.error = e.what();
    }
    if (!p.ok) {
        p.n_s = p.g1_2 = p.g1_3 = p.g1_4 = kNaN;
        p.p_tilde.assign(kPtildeColumns, kNaN);
        p.distribution.clear();
        p.verdict.reset();
    }
    p.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return p;
}

SweepResult run_sweep(const SweepSpec& spec, Exec exec) {
    spec.validate();
    std::vector<std::vector<double>> values;
    for (const auto& a : spec.axes) values.push_back(axis_values(a));
    const std::size_t total = spec.point_count();

    SweepResult r;
    r.spec = spec;
    r.points.resize(total);
    PointOptions inner = spec.point;
    if (exec == Exec::parallel) inner.exec = Exec::serial;  // one thread per point

    for_each_index(static_cast<std::ptrdiff_t>(total), exec, [&](std::ptrdiff_t flat) {
        ModelParams m = spec.model;
        DissipationParams d = spec.dissipation;
        std::vector<double> coords(spec.axes.size());
        std::size_t rem = static_cast<std::size_t>(flat);
        for (std::size_t k = spec.axes.size(); k-- > 0;) {
            const std::size_t cnt = values[k].size();
            coords[k] = values[k][rem % cnt];
            rem /= cnt;
        }
        for (std::size_t k = 0; k < coords.size(); ++k) set_param(m, d, spec.axes[k].name, coords[k]);
        for (const auto& b : spec.bindings) {
            const auto [target, source] = split_binding(b);
            set_param(m, d, target, get_param(m, d, source));
        }
        SweepPoint p = evaluate_point(m, d, inner);
        p.coords = std::move(coords);
        r.points[static_cast<std::size_t>(flat)] = std::move(p);
    });
    return r;
}

CsvTable sweep_table(const SweepResult& r) {
    std::vector<std::string> header;
    for (const auto& a : r.spec.axes) header.push_back("axis_" + a.name);
    for (const auto& n : kParamNames) header.push_back(n);
    for (const char* h : {"status", "n_s", "g1_2", "g1_3", "g1_4"}) header.emplace_back(h);
    for (int q = 1; q <= kPtildeColumns; ++q) header.push_back("p_tilde_" + std::to_string(q));
    const bool with_verdict = r.spec.point.bundle_n > 0;
    if (with_verdict) header.push_back("verdict_n" + std::to_string(r.spec.point.bundle_n));
    for (const char* h : {"n_max_used", "truncation_retries", "residual", "error"}) header.emplace_back(h);

    CsvTable t(header);
    for (const auto& p : r.points) {
        std::vector<std::string> row;
        for (double c : p.coords) row.push_back(format_double(c));
        for (const auto& n : kParamNames) row.push_back(format_double(get_param(p.model, p.dissipation, n)));
        row.push_back(p.ok ? "ok" : "failed");
        for (double v : {p.n_s, p.g1_2, p.g1_3, p.g1_4}) row.push_back(format_double(v));
        for (double v : p.p_tilde) row.push_back(format_double(v));
        if (with_verdict) row.push_back(p.verdict ? to_string(*p.verdict) : "nan");
        row.push_back(std::to_string(p.n_max_used));
        row.push_back(std::to_string(p.truncation_retries));
        row.push_back(p.ok || p.residual > 0.0 ? format_double(p.residual) : "nan");
        row.push_back(clean_cell(p.error));
        t.add_row(std::move(row));
    }
    return t;
}

double steady_state_peak(double lo, double hi, double delta, const ModelParams& tmpl, const DissipationParams& d,
                         int n_max, int points) {
    if (!(hi > lo) || !(lo > 0.0) || points < 3) throw std::invalid_argument("steady_state_peak: invalid window");
    auto n_s = [&](double w) {
        ModelParams m = tmpl;
        m.omega = m.Omega = w;
        m.delta = delta;
        SteadyStateOptions so;
        so.exec = Exec::serial;
        return phonon_statistics(solve_steady_state(m, d, n_max, so).rho).n_s;
    };
    const double h = (hi - lo) / (points - 1);
    std::vector<double> f(static_cast<std::size_t>(points));
    for_each_index(points, Exec::parallel, [&](std::ptrdiff_t i) { f[static_cast<std::size_t>(i)] = n_s(lo + static_cast<double>(i) * h); });
    const auto best = static_cast<int>(std::max_element(f.begin(), f.end()) - f.begin());
    if (f[static_cast<std::size_t>(best)] <= kPhononFloor) return kNaN;
    if (best == 0 || best == points - 1) return kNaN;  // no interior maximum

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo + (best - 1) * h, b = lo + (best + 1) * h;
    double c = b - invphi * (b - a), e = a + invphi * (b - a);
    double fc = n_s(c), fe = n_s(e);
    while (b - a > 1e-7) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - invphi * (b - a);
            fc = n_s(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + invphi * (b - a);
            fe = n_s(e);
        }
    }
    return 0.5 * (a + b);
}

std::vector<OverlayRow> resonance_overlay(const std::vector<double>& delta_grid, const std::vector<int>& n_list,
                                          const ModelParams& tmpl, const Truncation& t, const OverlayOptions& opt) {
    for (double d : delta_grid) {
        if (d < 0.0) throw std::invalid_argument("resonance_overlay: delta values must be >= 0");
    }
    std::vector<OverlayRow> rows;
    for (int n : n_list) {
        for (double delta : delta_grid) {
            OverlayRow row;
            row.n = n;
            row.delta = delta;
            row.omega_peak = row.disagreement = kNaN;
            const ResonanceResult r = find_resonance(n, delta, tmpl, t, opt.resonance);
            row.omega_n = r.omega_n;
            row.gap_n = r.gap_n;
            if (opt.peak_check) {
                try {
                    row.omega_peak = steady_state_peak(r.omega_n - opt.peak_halfwidth, r.omega_n + opt.peak_halfwidth, delta,
                                                       tmpl, opt.dissipation, opt.n_max_peak, opt.peak_points);
                    row.disagreement = std::abs(row.omega_peak - row.omega_n);
                    if (std::isnan(row.omega_peak)) row.error = "no interior n_s maximum";
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
            rows.push_back(row);
        }
    }
    return rows;
}

CsvTable overlay_table(const std::vector<OverlayRow>& rows) {
    CsvTable t({"n", "delta", "omega_n", "gap_n", "omega_peak", "disagreement", "error"});
    for (const auto& r : rows) {
        t.add_row({std::to_string(r.n), format_double(r.delta), format_double(r.omega_n), format_double(r.gap_n),
                   format_double(r.omega_peak), format_double(r.disagreement), clean_cell(r.error)});
    }
    return t;
}

}  // namespace pbundle
