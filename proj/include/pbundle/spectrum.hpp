// spectrum.hpp: dressed-state spectrum, branch tracking and n-phonon resonances

#pragma once

#include "pbundle/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbundle {

struct SpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when the best overlap of a tracked state drops below 0.5.
struct BranchAmbiguity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectrumResult {
    ModelParams params;
    Truncation trunc{1};
    double ground_energy{0.0};    // absolute lowest eigenvalue
    Eigen::VectorXd energies;     // ascending, relative to ground_energy
    DenseMatrix states;           // orthonormal eigenvectors as columns
    std::vector<int> labels;      // optional branch tags, empty when unassigned

    Eigen::Index size() const noexcept { return energies.size(); }
    Eigen::VectorXd absolute_energies() const { return energies.array() + ground_energy; }
};

SpectrumResult diagonalize(const ModelParams& m, const Truncation& t);
SpectrumResult diagonalize(const OperatorMatrix& H, const ModelParams& m);

struct BranchMap {
    std::vector<Eigen::Index> target_of;  // target_of[k] is the target index of reference state ids[k]
    std::vector<Eigen::Index> ids;        // reference indices that were tracked
    std::vector<double> overlap;          // |<v_ref|v_target>| of each assignment
};

// Greedy bijective matching on descending |<v_ref|v_target>|. With an empty
// subset every reference state is tracked.
BranchMap track_branch(const SpectrumResult& reference, const SpectrumResult& target,
                       const std::vector<Eigen::Index>& subset = {});

enum class ResonanceMethod { spectral, steady_state_peak };

struct ResonanceResult {
    int n{1};
    double delta{0.0};
    double omega_n{0.0};
    double gap_n{0.0};
    ResonanceMethod method{ResonanceMethod::spectral};
};

struct ResonanceOptions {
    double scan_min{0.3};
    double scan_max{1.3};
    int scan_points{400};
    int continuation_steps{20};
    double omega_tolerance{1e-10};
};

// Splitting between the tracked vacuum branch and the tracked |n,-> branch at
// trap frequency omega, with Omega = omega imposed. Branch identity comes from
// the delta = 0 dressed states and is continued to the requested delta.
double dressed_splitting(int n, double omega, double delta, const ModelParams& tmpl, const Truncation& t,
                         int continuation_steps = 20);

// Anticrossing between the vacuum and |n,-> along omega (Omega = omega):
// omega_n is the location of the minimum splitting, gap_n its value.
ResonanceResult find_resonance(int n, double delta, const ModelParams& tmpl, const Truncation& t,
                               const ResonanceOptions& opt = {});

// Rows of the first `levels` relative energies over a parameter scan.
enum class ScanAxis { omega, delta };
struct SpectrumScanRow {
    double x{0.0};
    std::vector<double> energies;
};
std::vector<SpectrumScanRow> spectrum_scan(ScanAxis axis, double lo, double hi, int count, const ModelParams& tmpl,
                                           const Truncation& t, bool bind_Omega_to_omega, int levels);

std::string to_string(ResonanceMethod m);

}  // namespace pbundle
