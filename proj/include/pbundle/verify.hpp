// verify.hpp: built-in invariant checks at small scale
#pragma once

#include "pbundle/dynamics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pbundle {

struct CheckResult {
    std::string name;
    bool passed{false};
    double value{0.0};      // measured quantity
    double tolerance{0.0};  // bound it was compared against
    std::string detail;
};

using HamiltonianBuilder = std::function<OperatorMatrix(const ModelParams&, const Truncation&)>;

struct VerifyOptions {
    int n_max{20};  // truncation for the steady-state and correlation checks
    // Hamiltonian under test; replaced by fixtures to confirm the checks bite.
    HamiltonianBuilder hamiltonian{hamiltonian_rotated};
    bool include_dynamics{true};
};

std::vector<CheckResult> run_verification(const VerifyOptions& opt = {});

// Individual checks, exposed for tests.
CheckResult check_block_matrix_elements(const HamiltonianBuilder& h, int n_max = 6);
CheckResult check_liouvillian_oracle(int trials = 5);

bool all_passed(const std::vector<CheckResult>& r);

}  // namespace pbundle
