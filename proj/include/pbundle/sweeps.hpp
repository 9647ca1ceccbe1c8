// sweeps.hpp: parameter grids over steady-state observables
#pragma once

#include "pbundle/config.hpp"
#include "pbundle/csv.hpp"
#include "pbundle/observables.hpp"
#include "pbundle/spectrum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pbundle {

std::vector<double> axis_values(const AxisSpec& axis);

// Named access to the sweepable fields of ModelParams and DissipationParams.
double get_param(const ModelParams& m, const DissipationParams& d, const std::string& name);
void set_param(ModelParams& m, DissipationParams& d, const std::string& name, double value);

struct PointOptions {
    int n_max{20};
    bool adaptive{true};
    int bundle_n{0};  // > 1 adds two-time series for n = 1 and bundle_n and a verdict
    Exec exec{Exec::parallel};
};

struct SweepSpec {
    std::vector<AxisSpec> axes;
    ModelParams model;
    DissipationParams dissipation;
    std::vector<std::string> bindings;  // "target=source", applied in order after the axes
    PointOptions point;

    // Throws std::invalid_argument.
    void validate() const;
    std::size_t point_count() const;
};

SweepSpec sweep_spec_from_config(const RunConfig& c);

inline constexpr int kPtildeColumns = 4;  // p~(1) .. p~(4)

struct SweepPoint {
    std::vector<double> coords;
    ModelParams model;
    DissipationParams dissipation;
    bool ok{false};
    std::string error;

    double n_s{0.0};
    double g1_2{0.0}, g1_3{0.0}, g1_4{0.0};
    std::vector<double> p_tilde;       // q = 1..kPtildeColumns
    std::vector<double> distribution;  // p(q), q = 0..n_max_used
    std::optional<Verdict> verdict;
    int n_max_used{0};
    int truncation_retries{0};
    double residual{0.0};
    double solve_seconds{0.0};  // wall clock, metadata only
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepPoint> points;  // row-major over the axes, last axis fastest
};

// One grid point. Failures are recorded in the returned point, never thrown.
SweepPoint evaluate_point(const ModelParams& m, const DissipationParams& d, const PointOptions& opt);

// Grid points run concurrently under Exec::parallel; output order is canonical.
SweepResult run_sweep(const SweepSpec& spec, Exec exec = Exec::parallel);

CsvTable sweep_table(const SweepResult& r);

struct OverlayOptions {
    ResonanceOptions resonance;
    bool peak_check{true};
    DissipationParams dissipation;
    int n_max_peak{20};
    double peak_halfwidth{0.03};
    int peak_points{31};
};

struct OverlayRow {
    int n{1};
    double delta{0.0};
    double omega_n{0.0};
    double gap_n{0.0};
    double omega_peak{0.0};    // n_s maximum near omega_n, NaN when not computed
    double disagreement{0.0};  // |omega_peak - omega_n|
    std::string error;
};

// Location of the maximum of n_s(omega) with Omega = omega in [lo, hi].
double steady_state_peak(double lo, double hi, double delta, const ModelParams& tmpl, const DissipationParams& d,
                         int n_max, int points);

std::vector<OverlayRow> resonance_overlay(const std::vector<double>& delta_grid, const std::vector<int>& n_list,
                                          const ModelParams& tmpl, const Truncation& t, const OverlayOptions& opt = {});

CsvTable overlay_table(const std::vector<OverlayRow>& rows);

}  // namespace pbundle
