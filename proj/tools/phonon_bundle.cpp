// phonon-bundle: command-line front end
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure,
// 4 verification failure.

#include "output.hpp"

#include "pbundle/config.hpp"
#include "pbundle/observables.hpp"
#include "pbundle/spectrum.hpp"
#include "pbundle/sweeps.hpp"
#include "pbundle/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iostream>
#include <map>

namespace {

using namespace pbundle;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;
constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string config;
    std::string out;
    int workers{-1};
    int nmax{-1};
    std::string adaptive;
    std::vector<std::string> set;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "key = value configuration file");
    sub->add_option("--out", c.out, "output path; writes CSV, a JSON mirror and <stem>.meta.json");
    sub->add_option("--workers", c.workers, "worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--nmax", c.nmax, "initial Fock truncation")->check(CLI::PositiveNumber);
    sub->add_option("--adaptive-truncation", c.adaptive, "grow n_max while the Fock tail is heavy (true/false)");
    sub->add_option("--set", c.set, "override a config key, key=value (repeatable)");
}

RunConfig load(const Common& c) {
    std::map<std::string, std::string> file;
    if (!c.config.empty()) file = read_config_file(c.config);
    std::map<std::string, std::string> over;
    for (const auto& kv : c.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        over[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (c.nmax > 0) over["n_max"] = std::to_string(c.nmax);
    if (!c.adaptive.empty()) over["adaptive_truncation"] = c.adaptive;
    if (c.workers >= 0) over["workers"] = std::to_string(c.workers);
    if (!c.out.empty()) over["out"] = c.out;
    RunConfig rc = resolve_config(file, over);
    set_worker_count(rc.workers);
    return rc;
}

json meta_base(const std::string& command, const RunConfig& rc, const std::string& started) {
    json m;
    m["tool"] = "phonon-bundle";
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = rc.echo;
    m["started_utc"] = started;
    m["workers"] = worker_count();
    return m;
}

void emit(const RunConfig& rc, const CsvTable& table, const json& extra, json meta) {
    meta["finished_utc"] = cli::utc_now();
    if (rc.out.empty()) {
        table.write(std::cout);
        return;
    }
    cli::write_outputs(rc.out, table, extra, meta);
    std::cerr << "wrote " << cli::output_paths(rc.out).csv << '\n';
}

std::string fmt(double x) { return format_double(x); }

int cmd_point(const RunConfig& rc) {
    const std::string started = cli::utc_now();
    PointOptions po;
    po.n_max = rc.n_max;
    po.adaptive = rc.adaptive;
    po.bundle_n = rc.bundle_n;
    const SweepPoint p = evaluate_point(rc.model, rc.dissipation, po);
    if (!p.ok) throw SolverError(p.error, -1);

    std::cout << "n_s        " << fmt(p.n_s) << '\n'
              << "g1_2(0)    " << fmt(p.g1_2) << '\n'
              << "g1_3(0)    " << fmt(p.g1_3) << '\n'
              << "g1_4(0)    " << fmt(p.g1_4) << '\n';
    if (p.verdict) std::cout << "verdict_n" << rc.bundle_n << " " << to_string(*p.verdict) << '\n';
    std::cout << "n_max_used " << p.n_max_used << "\nresidual   " << fmt(p.residual) << '\n';
    json pq = json::array();
    std::cout << "q p(q) p_tilde(q)\n";
    const auto& dist = p.distribution;
    const bool has_tilde = p.n_s > kPhononFloor;
    for (std::size_t q = 0; q < dist.size(); ++q) {
        if (q > 0 && dist[q] < kTailThreshold) break;
        const double pt = has_tilde ? static_cast<double>(q) * dist[q] / p.n_s : std::numeric_limits<double>::quiet_NaN();
        std::cout << q << ' ' << fmt(dist[q]) << ' ' << fmt(pt) << '\n';
        pq.push_back({{"q", q}, {"p", dist[q]}, {"p_tilde", has_tilde ? json(pt) : json(nullptr)}});
    }
    if (!rc.out.empty()) {
        SweepResult r;
        r.spec.model = rc.model;
        r.spec.dissipation = rc.dissipation;
        r.spec.point = po;
        r.points.push_back(p);
        json meta = meta_base("point", rc, started);
        meta["solve_seconds"] = p.solve_seconds;
        emit(rc, sweep_table(r), json{{"distribution", pq}}, meta);
    }
    return 0;
}

int cmd_spectrum(const RunConfig& rc) {
    const std::string started = cli::utc_now();
    const ScanAxis axis = rc.scan_axis == "delta" ? ScanAxis::delta : ScanAxis::omega;
    const auto rows = spectrum_scan(axis, rc.scan_min, rc.scan_max, rc.scan_count, rc.model, Truncation(rc.n_max),
                                    rc.bind_Omega_to_omega, rc.levels);
    std::vector<std::string> header{rc.scan_axis};
    const std::size_t levels = rows.empty() ? 0 : rows.front().energies.size();
    for (std::size_t k = 0; k < levels; ++k) header.push_back("E" + std::to_string(k));
    CsvTable t(header);
    for (const auto& r : rows) {
        std::vector<double> v{r.x};
        v.insert(v.end(), r.energies.begin(), r.energies.end());
        t.add_numeric_row(v);
    }
    emit(rc, t, json::object(), meta_base("spectrum", rc, started));
    return 0;
}

int cmd_correlation(const RunConfig& rc) {
    const std::string started = cli::utc_now();
    std::vector<int> orders = rc.n_list;
    if (std::find(orders.begin(), orders.end(), 1) == orders.end()) orders.insert(orders.begin(), 1);
    const int n_top = *std::max_element(orders.begin(), orders.end());
    int n_max = rc.n_max;
    if (2 * n_top > n_max) {
        if (!rc.adaptive) {
            throw TruncationTooSmall("correlation order " + std::to_string(n_top) + " needs n_max >= " +
                                     std::to_string(2 * n_top) + " (got " + std::to_string(n_max) +
                                     "); raise --nmax or enable --adaptive-truncation");
        }
        n_max = 2 * n_top;
    }
    SteadyStateOptions so;
    so.adaptive = rc.adaptive;
    const auto t0 = std::chrono::steady_clock::now();
    const SteadyState ss = solve_steady_state(rc.model, rc.dissipation, n_max, so);
    const Liouvillian L = build_liouvillian(rc.model, rc.dissipation, ss.rho.truncation());
    const auto tau = default_tau_grid(rc.dissipation.kappa_d);
    std::map<int, CorrelationSeries> series;
    for (int n : orders) series.emplace(n, two_time_correlation(L, ss.rho, n, tau));
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<std::string> header{"tau"};
    for (const auto& [n, s] : series) header.push_back("g" + std::to_string(n) + "_2");
    CsvTable t(header);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        std::vector<double> row{tau[i]};
        for (const auto& [n, s] : series) row.push_back(s.values[i]);
        t.add_numeric_row(row);
    }
    json verdicts = json::object();
    const double window = default_bundle_window(rc.dissipation.kappa_d);
    for (const auto& [n, s] : series) {
        if (n == 1 && orders.size() > 1) continue;
        const Verdict v = bundle_verdict(series.at(1), s, window);
        verdicts["n" + std::to_string(n)] = to_string(v);
        std::cerr << "verdict n=" << n << ": " << to_string(v) << '\n';
    }
    json extra{{"verdicts", verdicts}, {"n_max_used", ss.n_max_used}, {"tau_window", window}};
    json meta = meta_base("correlation", rc, started);
    meta["solve_seconds"] = elapsed;
    emit(rc, t, extra, meta);
    return 0;
}

int cmd_sweep(const RunConfig& rc) {
    const std::string started = cli::utc_now();
    const SweepSpec spec = sweep_spec_from_config(rc);
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const SweepResult r = run_sweep(spec);
    json meta = meta_base("sweep", rc, started);
    json diag = json::array();
    std::size_t failed = 0;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& p = r.points[i];
        failed += p.ok ? 0 : 1;
        diag.push_back({{"index", i}, {"solve_seconds", p.solve_seconds}, {"n_max_used", p.n_max_used}, {"ok", p.ok}});
    }
    meta["points"] = diag;
    meta["failed_points"] = failed;
    emit(rc, sweep_table(r), json::object(), meta);
    if (failed) std::cerr << failed << " of " << r.points.size() << " points failed (NaN rows)\n";
    return 0;
}

int cmd_resonances(const RunConfig& rc) {
    const std::string started = cli::utc_now();
    OverlayOptions opt;
    opt.peak_check = rc.peak_check;
    opt.dissipation = rc.dissipation;
    opt.n_max_peak = rc.n_max;
    const auto rows = resonance_overlay(rc.delta_list, rc.n_list, rc.model, Truncation(rc.n_max), opt);
    emit(rc, overlay_table(rows), json::object(), meta_base("resonances", rc, started));
    return 0;
}

int cmd_verify(const RunConfig& rc) {
    const std::string started = cli::utc_now();
    VerifyOptions vo;
    vo.n_max = rc.n_max;
    const auto results = run_verification(vo);
    CsvTable t({"check", "passed", "value", "tolerance", "detail"});
    for (const auto& c : results) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << fmt(c.value) << " tol=" << fmt(c.tolerance);
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << '\n';
        std::string detail = c.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        t.add_row({c.name, c.passed ? "true" : "false", fmt(c.value), fmt(c.tolerance), detail});
    }
    const bool ok = all_passed(results);
    if (!rc.out.empty()) {
        json meta = meta_base("verify", rc, started);
        meta["finished_utc"] = cli::utc_now();
        cli::write_outputs(rc.out, t, json{{"all_passed", ok}}, meta);
    }
    return ok ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady states and phonon correlation functions of the dissipative generalized quantum Rabi model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common common;
    struct Entry {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&);
    };
    const Entry entries[] = {
        {"point", "steady state, n_s, p(q) and equal-time correlations at one parameter point", cmd_point},
        {"spectrum", "relative dressed energies along omega or delta", cmd_spectrum},
        {"correlation", "two-time correlations g_n^(2)(tau) and bundle verdicts", cmd_correlation},
        {"sweep", "one- or two-axis parameter grid of steady-state observables", cmd_sweep},
        {"resonances", "n-phonon resonance frequencies and gaps with n_s-peak cross-check", cmd_resonances},
        {"verify", "built-in invariant checks", cmd_verify},
    };
    std::map<CLI::App*, int (*)(const RunConfig&)> dispatch;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, common);
        dispatch[sub] = e.run;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        for (const auto& [sub, run] : dispatch) {
            if (sub->parsed()) return run(load(common));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const TruncationTooSmall& e) {
        std::cerr << "truncation error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitConfig;
}
