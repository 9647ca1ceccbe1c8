#include <doctest.h>

#include "pbundle/verify.hpp"

#include <algorithm>

using namespace pbundle;

TEST_CASE("static invariants pass for the production Hamiltonian") {
    VerifyOptions opt;
    opt.include_dynamics = false;
    const auto r = run_verification(opt);
    CHECK(r.size() >= 9);
    for (const auto& c : r) {
        INFO(c.name << " value " << c.value << " tol " << c.tolerance);
        CHECK(c.passed);
    }
}

TEST_CASE("generator oracle on random 8-dimensional instances") {
    const CheckResult c = check_liouvillian_oracle(5);
    CHECK(c.passed);
    CHECK(c.value < 1e-12);
}

TEST_CASE("a corrupted Hamiltonian is caught by the suite") {
    VerifyOptions opt;
    opt.include_dynamics = false;
    opt.hamiltonian = [](const ModelParams& m, const Truncation& t) {
        ModelParams f = m;
        f.delta = -m.delta;
        return hamiltonian_rotated(f, t);
    };
    const auto r = run_verification(opt);
    CHECK_FALSE(all_passed(r));
    const auto it = std::find_if(r.begin(), r.end(), [](const CheckResult& c) { return c.name == "model.block_matrix_elements"; });
    REQUIRE(it != r.end());
    CHECK_FALSE(it->passed);
}
